#include "sshstat/detect.hpp"

#include <algorithm>
#include <cmath>

#include "sshstat/errors.hpp"
#include "sshstat/parallel.hpp"

namespace sshstat {

namespace {

Partition covariate_partition(const Dataset& data, const Covariate& cov,
                              const FactorOptions& opts,
                              std::optional<BreaksResult>& breaks) {
    if (cov.kind == CovariateKind::categorical) {
        Partition p = partition_from_labels(data.ids(), cov.labels);
        if (p.l() < 2)
            throw DegenerateDataError("covariate '" + cov.name +
                                      "' has a single category; L must be >= 2");
        return p;
    }
    if (opts.l < 2) throw ValidationError("factor_q: l must be >= 2 for continuous x");
    switch (opts.method) {
    case BreakMethod::equal_interval:
        breaks = discretize_equal_interval(data.ids(), cov.values, opts.l);
        break;
    case BreakMethod::quantile:
        breaks = discretize_quantile(data.ids(), cov.values, opts.l);
        break;
    case BreakMethod::optimal_dp:
        breaks = optimal_breaks(data.ids(), data.y(), cov.values, opts.l);
        break;
    }
    return breaks->partition;
}

} // namespace

Partition factor_partition(const Dataset& data, const std::string& covariate,
                           const FactorOptions& opts) {
    std::optional<BreaksResult> breaks;
    return covariate_partition(data, data.covariate(covariate), opts, breaks);
}

FactorResult factor_q(const Dataset& data, const std::string& covariate,
                      const FactorOptions& opts) {
    const Covariate& cov = data.covariate(covariate);
    std::optional<BreaksResult> breaks;
    Partition p = covariate_partition(data, cov, opts, breaks);

    FactorResult r{covariate, std::move(p), 0.0, std::nullopt, std::nullopt,
                   std::move(breaks)};
    if (opts.descriptive_only) {
        r.q = q_statistic(data.y(), r.partition);
    } else {
        r.test = q_test(data.y(), r.partition, TestMode::central_null);
        r.q = r.test->q;
    }
    if (opts.with_qx && cov.kind == CovariateKind::continuous)
        r.q_x = q_statistic(cov.values, r.partition);
    return r;
}

std::vector<FactorResult> factor_screen(const Dataset& data,
                                        const std::vector<std::string>& covariates,
                                        const FactorOptions& opts) {
    std::vector<std::string> names = covariates;
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    std::vector<std::optional<FactorResult>> slots(names.size());
    parallel_for_index(names.size(),
                       [&](std::size_t i) { slots[i] = factor_q(data, names[i], opts); });

    std::vector<FactorResult> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

InteractionResult interaction(std::span<const double> y, const Partition& p1,
                              const Partition& p2, double tolerance) {
    if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be >= 0");
    const Partition po = overlay(p1, p2); // in p1's unit order

    const Decomposition d1 = decompose(y, p1);
    if (d1.sst <= 0.0) throw DegenerateDataError("zero total variance; q undefined");

    const std::vector<std::uint32_t> p2_of = align_to(p1, p2);
    std::vector<double> sums2(p2.l(), 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) sums2[p2_of[i]] += y[i];
    double ssb2 = 0.0;
    for (std::size_t k = 0; k < p2.l(); ++k) {
        const double mk = static_cast<double>(p2.sizes()[k]);
        const double dev = sums2[k] / mk - d1.grand_mean;
        ssb2 += mk * dev * dev;
    }

    InteractionResult r;
    r.tolerance = tolerance;
    r.q_x1 = q_from(d1);
    r.q_x2 = std::clamp(ssb2 / d1.sst, 0.0, 1.0);
    r.q_overlay = q_statistic(y, po);
    r.l_overlay = po.l();
    r.overlay_saturated = po.l() == po.n();

    const double q1 = r.q_x1;
    const double q2 = r.q_x2;
    const double q12 = r.q_overlay;
    const double lo = std::min(q1, q2);
    const double hi = std::max(q1, q2);
    // equality bands win over the open intervals; q12 == hi (the identity
    // overlay) lands in weaken_univariate
    if (std::fabs(q12 - (q1 + q2)) <= tolerance)
        r.category = InteractionCategory::independent;
    else if (q12 > q1 + q2)
        r.category = InteractionCategory::enhance_nonlinear;
    else if (q12 > hi + tolerance)
        r.category = InteractionCategory::enhance_bivariate;
    else if (q12 >= lo - tolerance)
        r.category = InteractionCategory::weaken_univariate;
    else
        r.category = InteractionCategory::weaken_nonlinear;
    return r;
}

std::vector<ScatterDatum> scatter_data(std::span<const double> y,
                                       std::span<const double> x, const Partition& p) {
    if (x.size() != p.n()) throw ValidationError("x length does not match partition");
    const std::vector<StratumStats> prof = stratum_profile(y, p);

    std::vector<double> x_sums(p.l(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) x_sums[p.stratum_of(i)] += x[i];

    std::vector<ScatterDatum> out(p.l());
    for (std::size_t h = 0; h < p.l(); ++h) {
        out[h].label = prof[h].label;
        out[h].mean_x = x_sums[h] / static_cast<double>(prof[h].n_h);
        out[h].mean_y = prof[h].mean;
        out[h].size = prof[h].n_h;
        out[h].q_h = prof[h].q_h;
    }
    std::sort(out.begin(), out.end(), [](const ScatterDatum& a, const ScatterDatum& b) {
        return a.mean_x != b.mean_x ? a.mean_x < b.mean_x : a.label < b.label;
    });
    return out;
}

} // namespace sshstat
