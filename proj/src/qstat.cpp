#include "sshstat/qstat.hpp"

#include <cmath>
#include <string>

#include "sshstat/errors.hpp"
#include "sshstat/specfn.hpp"

namespace sshstat {

namespace {

void check_aligned(std::span<const double> y, const Partition& p) {
    if (y.size() != p.n())
        throw ValidationError("unit mismatch: " + std::to_string(y.size()) + " values for " +
                              std::to_string(p.n()) + " partitioned units");
}

} // namespace

Decomposition decompose(std::span<const double> y, const Partition& p) {
    check_aligned(y, p);
    const std::size_t n = p.n();
    const std::size_t l = p.l();
    if (n < 2) throw ValidationError("decompose requires N >= 2");

    Decomposition d;
    d.n = n;
    d.l = l;

    std::vector<double> sums(l, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sums[p.stratum_of(i)] += y[i];
        total += y[i];
    }
    d.grand_mean = total / static_cast<double>(n);
    d.stratum_means.resize(l);
    for (std::size_t h = 0; h < l; ++h)
        d.stratum_means[h] = sums[h] / static_cast<double>(p.sizes()[h]);

    double sst = 0.0;
    double ssw = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = y[i] - d.grand_mean;
        const double dw = y[i] - d.stratum_means[p.stratum_of(i)];
        sst += dt * dt;
        ssw += dw * dw;
    }
    double ssb = 0.0;
    for (std::size_t h = 0; h < l; ++h) {
        const double db = d.stratum_means[h] - d.grand_mean;
        ssb += static_cast<double>(p.sizes()[h]) * db * db;
    }
    d.sst = sst;
    d.ssb = ssb;
    d.ssw = ssw;
    if (n > l) d.sigma2_hat = ssw / static_cast<double>(n - l);
    return d;
}

double q_from(const Decomposition& d) {
    if (d.sst <= 0.0)
        throw DegenerateDataError("zero total variance; q undefined");
    double q = 1.0 - d.ssw / d.sst;
    if (q < 0.0) q = 0.0;
    if (q > 1.0) q = 1.0;
    return q;
}

double q_statistic(std::span<const double> y, const Partition& p) {
    return q_from(decompose(y, p));
}

double f_transform(double q, std::size_t n, std::size_t l) {
    if (l < 2) throw ValidationError("f_transform requires L >= 2");
    if (n <= l) throw DegenerateDataError("insufficient degrees of freedom: N <= L");
    if (!(q >= 0.0) || q > 1.0) throw ValidationError("f_transform: q must lie in [0,1]");
    if (q == 1.0)
        throw DegenerateDataError("F unbounded; all within-stratum variance zero");
    return (static_cast<double>(n - l) / static_cast<double>(l - 1)) * q / (1.0 - q);
}

double lambda_plugin(std::span<const double> y, const Partition& p) {
    const Decomposition d = decompose(y, p);
    if (d.n <= d.l) throw DegenerateDataError("insufficient degrees of freedom: N <= L");
    if (!d.sigma2_hat || *d.sigma2_hat <= 0.0)
        throw DegenerateDataError("lambda undefined under zero within-stratum variance");

    double sum_nu2 = 0.0;
    double sum_nu = 0.0;
    for (std::size_t h = 0; h < d.l; ++h) {
        const double u = d.stratum_means[h] - d.grand_mean;
        const double nh = static_cast<double>(p.sizes()[h]);
        sum_nu2 += nh * u * u;
        sum_nu += nh * u;
    }
    const double lambda =
        (sum_nu2 - sum_nu * sum_nu / static_cast<double>(d.n)) / *d.sigma2_hat;
    const double shortcut = d.ssb / *d.sigma2_hat;
    // sum N_h u_h = 0 by construction, so both routes coincide
    if (std::fabs(lambda - shortcut) > 1e-9 * std::max(1.0, std::fabs(shortcut)))
        throw DegenerateDataError("lambda_plugin: general and simplified routes disagree");
    return lambda;
}

QResult q_test(std::span<const double> y, const Partition& p, TestMode mode) {
    const Decomposition d = decompose(y, p);
    const double q = q_from(d);
    QResult r;
    r.q = q;
    r.mode = mode;
    r.f_stat = f_transform(q, d.n, d.l);
    r.df1 = d.l - 1;
    r.df2 = d.n - d.l;
    double cdf;
    if (mode == TestMode::central_null) {
        r.lambda = 0.0;
        cdf = central_f_cdf(r.f_stat, static_cast<unsigned>(r.df1),
                            static_cast<unsigned>(r.df2));
    } else {
        r.lambda = lambda_plugin(y, p);
        cdf = noncentral_f_cdf(r.f_stat, static_cast<unsigned>(r.df1),
                               static_cast<unsigned>(r.df2), r.lambda);
    }
    double pv = 1.0 - cdf;
    if (pv < 0.0) pv = 0.0;
    if (pv > 1.0) pv = 1.0;
    r.p_value = pv;
    return r;
}

std::vector<StratumStats> stratum_profile(std::span<const double> y, const Partition& p) {
    const Decomposition d = decompose(y, p);
    if (d.sst <= 0.0) throw DegenerateDataError("zero total variance; q undefined");
    const double sigma2 = d.sst / static_cast<double>(d.n); // population denominator

    std::vector<double> ss_within(d.l, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dev = y[i] - d.stratum_means[p.stratum_of(i)];
        ss_within[p.stratum_of(i)] += dev * dev;
    }

    std::vector<StratumStats> out(d.l);
    for (std::size_t h = 0; h < d.l; ++h) {
        StratumStats& s = out[h];
        s.label = p.strata()[h];
        s.n_h = p.sizes()[h];
        s.weight = static_cast<double>(s.n_h) / static_cast<double>(d.n);
        s.mean = d.stratum_means[h];
        s.var_within = ss_within[h] / static_cast<double>(s.n_h);
        s.q_h = 1.0 - s.var_within / sigma2;
    }
    return out;
}

} // namespace sshstat
