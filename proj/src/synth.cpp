#include "sshstat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "sshstat/errors.hpp"
#include "sshstat/parallel.hpp"
#include "sshstat/qstat.hpp"
#include "sshstat/rng.hpp"
#include "sshstat/specfn.hpp"

namespace sshstat {

namespace {

void validate_config(const SynthConfig& cfg) {
    if (cfg.l < 2) throw ValidationError("generator requires l >= 2");
    if (cfg.sizes.size() != cfg.l)
        throw ValidationError("sizes must list one population count per stratum");
    for (std::size_t nh : cfg.sizes)
        if (nh == 0) throw ValidationError("every stratum size must be >= 1");
    if (!std::isfinite(cfg.grand_mean))
        throw ValidationError("grand mean must be finite");
    if (cfg.u_mode == UMode::fixed) {
        if (cfg.u.size() != cfg.l)
            throw ValidationError("fixed u must list one effect per stratum");
        for (double v : cfg.u)
            if (!std::isfinite(v)) throw ValidationError("non-finite stratum effect");
    } else if (!(cfg.sigma_b >= 0.0) || !std::isfinite(cfg.sigma_b)) {
        throw ValidationError("sigma_b must be a finite value >= 0");
    }
    if (cfg.sigma_h.empty()) {
        if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma))
            throw ValidationError("sigma must be a finite value > 0");
    } else {
        if (cfg.sigma_h.size() != cfg.l)
            throw ValidationError("sigma_h must list one sd per stratum");
        for (double v : cfg.sigma_h)
            if (!(v > 0.0) || !std::isfinite(v))
                throw ValidationError("every sigma_h must be a finite value > 0");
    }
}

std::vector<double> run_f_replicates(const SynthConfig& cfg, std::size_t replicates,
                                     std::vector<double>* pvals) {
    std::vector<double> fs(replicates);
    if (pvals) pvals->resize(replicates);
    parallel_for_index(replicates, [&](std::size_t i) {
        SynthConfig c = cfg;
        c.seed = Rng::derive_seed(cfg.seed, i);
        const SynthData d = generate(c);
        const QResult t = q_test(d.data.y(), d.partition, TestMode::central_null);
        fs[i] = t.f_stat;
        if (pvals) (*pvals)[i] = t.p_value;
    });
    return fs;
}

void fill_moments(McReport& rep, const std::vector<double>& fs) {
    double sum = 0.0;
    for (double f : fs) sum += f;
    rep.empirical_mean = sum / static_cast<double>(fs.size());
    double ss = 0.0;
    for (double f : fs) {
        const double d = f - rep.empirical_mean;
        ss += d * d;
    }
    rep.empirical_var = ss / static_cast<double>(fs.size() - 1);
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

} // namespace

SynthData generate(const SynthConfig& cfg) {
    validate_config(cfg);
    Rng rng(cfg.seed);

    std::vector<double> u(cfg.l);
    if (cfg.u_mode == UMode::fixed)
        u = cfg.u;
    else
        for (std::size_t h = 0; h < cfg.l; ++h) u[h] = cfg.sigma_b * rng.normal();

    std::vector<double> means(cfg.l);
    for (std::size_t h = 0; h < cfg.l; ++h) means[h] = cfg.grand_mean + u[h];

    const std::size_t n = std::accumulate(cfg.sizes.begin(), cfg.sizes.end(),
                                          static_cast<std::size_t>(0));
    std::vector<std::string> ids;
    std::vector<double> y;
    std::vector<std::uint32_t> stratum_of;
    ids.reserve(n);
    y.reserve(n);
    stratum_of.reserve(n);
    std::vector<std::string> labels(cfg.l);
    std::size_t unit = 0;
    for (std::size_t h = 0; h < cfg.l; ++h) {
        labels[h] = "h" + std::to_string(h + 1);
        const double sd = cfg.sigma_h.empty() ? cfg.sigma : cfg.sigma_h[h];
        for (std::size_t i = 0; i < cfg.sizes[h]; ++i) {
            ids.push_back("u" + std::to_string(++unit));
            y.push_back(means[h] + sd * rng.normal());
            stratum_of.push_back(static_cast<std::uint32_t>(h));
        }
    }
    Dataset data(ids, std::move(y));
    Partition part = Partition::from_parts(std::move(ids), std::move(stratum_of),
                                           std::move(labels));
    return SynthData{std::move(data), std::move(part), std::move(means), std::move(u)};
}

double lambda_from_u(std::span<const double> u, std::span<const std::size_t> sizes,
                     double sigma2, LambdaForm form) {
    if (u.size() != sizes.size() || u.empty())
        throw ValidationError("u and sizes must have matching non-zero length");
    if (!(sigma2 > 0.0)) throw ValidationError("sigma2 must be > 0");
    double n = 0.0;
    double sum_nu2 = 0.0;
    double second = 0.0; // sum N_h u_h (derived) or sum N_h (printed)
    for (std::size_t h = 0; h < u.size(); ++h) {
        const double nh = static_cast<double>(sizes[h]);
        n += nh;
        sum_nu2 += nh * u[h] * u[h];
        second += form == LambdaForm::derived ? nh * u[h] : nh;
    }
    return (sum_nu2 - second * second / n) / sigma2;
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw ValidationError("ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double c = cdf(sample[i]);
        d = std::max(d, c - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - c);
    }
    return d;
}

McReport mc_null_calibration(const SynthConfig& cfg, std::size_t replicates) {
    validate_config(cfg);
    if (replicates < 100) throw ValidationError("calibration requires >= 100 replicates");
    if (cfg.u_mode != UMode::fixed ||
        std::any_of(cfg.u.begin(), cfg.u.end(), [](double v) { return v != 0.0; }))
        throw ValidationError("null calibration requires fixed u = 0");
    const std::size_t n = std::accumulate(cfg.sizes.begin(), cfg.sizes.end(),
                                          static_cast<std::size_t>(0));
    if (n <= cfg.l) throw DegenerateDataError("insufficient degrees of freedom: N <= L");

    std::vector<double> ps;
    const std::vector<double> fs = run_f_replicates(cfg, replicates, &ps);

    McReport rep;
    rep.replicates = replicates;
    rep.lambda = 0.0;
    fill_moments(rep, fs);
    const unsigned d1 = static_cast<unsigned>(cfg.l - 1);
    const unsigned d2 = static_cast<unsigned>(n - cfg.l);
    rep.ks_distance =
        ks_distance(fs, [&](double f) { return central_f_cdf(f, d1, d2); });
    rep.ks_threshold = 1.5 * 1.36 / std::sqrt(static_cast<double>(replicates));
    rep.ks_pass = rep.ks_distance < rep.ks_threshold;
    rep.theoretical_mean = d2 > 2 ? noncentral_f_mean(d1, d2, 0.0) : kNan;
    rep.theoretical_var = d2 > 4 ? noncentral_f_variance(d1, d2, 0.0) : kNan;
    std::size_t below = 0;
    for (double p : ps)
        if (p < 0.05) ++below;
    rep.frac_p_below_005 = static_cast<double>(below) / static_cast<double>(replicates);
    return rep;
}

McReport mc_noncentral_check(const SynthConfig& cfg, std::size_t replicates,
                             LambdaForm form) {
    validate_config(cfg);
    if (replicates < 100) throw ValidationError("calibration requires >= 100 replicates");
    if (cfg.u_mode != UMode::fixed)
        throw ValidationError("noncentral check conditions on fixed u");
    if (!cfg.sigma_h.empty())
        throw ValidationError("noncentral check requires a common sigma");
    const std::size_t n = std::accumulate(cfg.sizes.begin(), cfg.sizes.end(),
                                          static_cast<std::size_t>(0));
    if (n <= cfg.l) throw DegenerateDataError("insufficient degrees of freedom: N <= L");

    const double lambda =
        lambda_from_u(cfg.u, cfg.sizes, cfg.sigma * cfg.sigma, form);
    const std::vector<double> fs = run_f_replicates(cfg, replicates, nullptr);

    McReport rep;
    rep.replicates = replicates;
    rep.lambda = lambda;
    fill_moments(rep, fs);
    const unsigned d1 = static_cast<unsigned>(cfg.l - 1);
    const unsigned d2 = static_cast<unsigned>(n - cfg.l);
    rep.ks_distance = ks_distance(
        fs, [&](double f) { return noncentral_f_cdf(f, d1, d2, lambda); });
    rep.ks_threshold = 1.5 * 1.36 / std::sqrt(static_cast<double>(replicates));
    rep.ks_pass = rep.ks_distance < rep.ks_threshold;
    rep.theoretical_mean = d2 > 2 ? noncentral_f_mean(d1, d2, lambda) : kNan;
    rep.theoretical_var = d2 > 4 ? noncentral_f_variance(d1, d2, lambda) : kNan;
    rep.frac_p_below_005 = kNan;
    return rep;
}

SandwichBenchReport sandwich_benchmark(const SandwichBenchConfig& cfg) {
    validate_config(cfg.population);
    if (!(cfg.sampling_fraction > 0.0) || cfg.sampling_fraction > 1.0)
        throw ValidationError("sampling fraction must lie in (0,1]");
    if (cfg.replicates < 1) throw ValidationError("replicates must be >= 1");
    if (cfg.overlaps.empty()) throw ValidationError("empty overlap specification");

    const std::size_t n = std::accumulate(cfg.population.sizes.begin(),
                                          cfg.population.sizes.end(),
                                          static_cast<std::size_t>(0));
    const std::size_t m = static_cast<std::size_t>(
        std::llround(cfg.sampling_fraction * static_cast<double>(n)));
    if (m < 2 * cfg.population.l)
        throw DegenerateDataError(
            "infeasible sampling: fraction too small to place 2 samples per stratum");

    struct Slot {
        double sq_sandwich = 0.0;
        double sq_global = 0.0;
        double sq_dominant = 0.0;
        std::size_t covered = 0;
        std::size_t rejected = 0;
        std::size_t r_count = 0;
    };
    std::vector<Slot> slots(cfg.replicates);

    parallel_for_index(cfg.replicates, [&](std::size_t rep) {
        SynthConfig pop_cfg = cfg.population;
        pop_cfg.seed = Rng::derive_seed(cfg.seed, 2 * rep);
        const SynthData pop = generate(pop_cfg);
        Rng srng(Rng::derive_seed(cfg.seed, 2 * rep + 1));

        StratumFrame frame;
        for (std::size_t h = 0; h < pop.partition.l(); ++h)
            frame.strata.push_back(
                {pop.partition.strata()[h], pop.partition.sizes()[h]});

        Slot& slot = slots[rep];
        std::vector<std::uint32_t> idx(n);
        std::vector<std::pair<std::string, double>> samples;
        std::vector<std::size_t> per_stratum(pop.partition.l());
        for (;;) {
            std::iota(idx.begin(), idx.end(), 0u);
            for (std::size_t k = 0; k < m; ++k) {
                const std::size_t j =
                    k + static_cast<std::size_t>(srng.below(n - k));
                std::swap(idx[k], idx[j]);
            }
            std::fill(per_stratum.begin(), per_stratum.end(), 0);
            for (std::size_t k = 0; k < m; ++k)
                ++per_stratum[pop.partition.stratum_of(idx[k])];
            if (std::all_of(per_stratum.begin(), per_stratum.end(),
                            [](std::size_t c) { return c >= 2; }))
                break;
            if (++slot.rejected > 10000)
                throw DegenerateDataError(
                    "infeasible sampling: a stratum keeps falling below 2 samples");
        }
        samples.reserve(m);
        double sample_sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t i = idx[k];
            samples.emplace_back(pop.partition.label_of(i), pop.data.y()[i]);
            sample_sum += pop.data.y()[i];
        }
        const double global_mean = sample_sum / static_cast<double>(m);

        const std::vector<StratumEstimate> est = stratum_estimates(samples, frame, false);
        const std::vector<SandwichEstimate> sw = sandwich_map(est, cfg.overlaps);

        std::map<std::string, double> truth_mean;
        for (std::size_t h = 0; h < pop.partition.l(); ++h)
            truth_mean[pop.partition.strata()[h]] = pop.stratum_means[h];

        for (const SandwichEstimate& e : sw) {
            double truth = 0.0;
            double best_w = -1.0;
            double dominant = 0.0;
            for (const Contributor& c : e.contributors) {
                truth += c.weight * truth_mean.at(c.h);
                if (c.weight > best_w) { // ties keep the smallest h label
                    best_w = c.weight;
                    dominant = c.mean;
                }
            }
            const double err = e.mean - truth;
            slot.sq_sandwich += err * err;
            slot.sq_global += (global_mean - truth) * (global_mean - truth);
            slot.sq_dominant += (dominant - truth) * (dominant - truth);
            if (std::fabs(err) <= 1.959963984540054 * std::sqrt(e.variance))
                ++slot.covered;
            ++slot.r_count;
        }
    });

    SandwichBenchReport rep;
    rep.replicates = cfg.replicates;
    rep.sample_size = m;
    double sq_sw = 0.0, sq_g = 0.0, sq_d = 0.0;
    std::size_t covered = 0, total = 0;
    for (const Slot& s : slots) {
        sq_sw += s.sq_sandwich;
        sq_g += s.sq_global;
        sq_d += s.sq_dominant;
        covered += s.covered;
        total += s.r_count;
        rep.rejected_draws += s.rejected;
    }
    if (total == 0) throw DegenerateDataError("benchmark produced no estimates");
    rep.rmse_sandwich = std::sqrt(sq_sw / static_cast<double>(total));
    rep.rmse_global = std::sqrt(sq_g / static_cast<double>(total));
    rep.rmse_dominant = std::sqrt(sq_d / static_cast<double>(total));
    rep.ratio_vs_global =
        rep.rmse_global > 0.0 ? rep.rmse_sandwich / rep.rmse_global : kNan;
    rep.coverage_95 = static_cast<double>(covered) / static_cast<double>(total);
    return rep;
}

SynthConfig preset_null(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.l = 4;
    cfg.sizes = {25, 25, 25, 25};
    cfg.grand_mean = 0.0;
    cfg.u_mode = UMode::fixed;
    cfg.u = {0.0, 0.0, 0.0, 0.0};
    cfg.sigma = 1.0;
    cfg.seed = seed;
    return cfg;
}

SynthConfig preset_noncentral(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.l = 2;
    cfg.sizes = {50, 50};
    cfg.grand_mean = 0.0;
    cfg.u_mode = UMode::fixed;
    cfg.u = {1.0, -1.0};
    cfg.sigma = 1.0;
    cfg.seed = seed;
    return cfg;
}

SandwichBenchConfig preset_sandwich(bool strong_ssh, std::uint64_t seed,
                                    std::size_t replicates) {
    SandwichBenchConfig cfg;
    cfg.population.l = 4;
    cfg.population.sizes = {250, 250, 250, 250};
    cfg.population.grand_mean = 0.0;
    cfg.population.u_mode = UMode::fixed;
    cfg.population.u = strong_ssh ? std::vector<double>{3.0, -3.0, 6.0, -6.0}
                                  : std::vector<double>{0.0, 0.0, 0.0, 0.0};
    cfg.population.sigma = 1.0;
    cfg.population.seed = seed;
    cfg.sampling_fraction = 0.1;
    cfg.replicates = replicates;
    cfg.seed = seed;

    // eight reporting units on rotated overlap shares (0.5, 0.3, 0.2)
    const double w[3] = {0.5, 0.3, 0.2};
    for (std::size_t r = 0; r < 8; ++r) {
        const std::size_t base = r % 4;
        for (std::size_t k = 0; k < 3; ++k)
            cfg.overlaps.push_back({"r" + std::to_string(r + 1),
                                    "h" + std::to_string((base + k) % 4 + 1), w[k]});
    }
    return cfg;
}

} // namespace sshstat
