#include "sshstat/compare.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sshstat/errors.hpp"
#include "sshstat/qstat.hpp"
#include "sshstat/specfn.hpp"

namespace sshstat {

namespace {

// Identical set partitions (up to stratum relabeling) have A1 == A2, so
// every comparison term is exactly zero. Detected from the cross-tab: each
// p1 stratum maps into a single p2 stratum and the counts match.
bool same_grouping(const CrossTab& ct) {
    if (ct.row_sizes.size() != ct.col_sizes.size()) return false;
    for (std::size_t h = 0; h < ct.counts.size(); ++h) {
        std::size_t nonzero = 0;
        for (std::size_t k = 0; k < ct.counts[h].size(); ++k)
            if (ct.counts[h][k] != 0) ++nonzero;
        if (nonzero != 1) return false;
    }
    return true;
}

struct SecondPartition {
    std::size_t l2 = 0;
    double ssb2 = 0.0;
    std::vector<double> sums; // per-p2-stratum y totals, in p1 unit order
};

SecondPartition accumulate_p2(std::span<const double> y, const Partition& p2,
                              const std::vector<std::uint32_t>& p2_of,
                              double grand_mean) {
    SecondPartition s;
    s.l2 = p2.l();
    s.sums.assign(s.l2, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) s.sums[p2_of[i]] += y[i];
    for (std::size_t k = 0; k < s.l2; ++k) {
        const double mk = static_cast<double>(p2.sizes()[k]);
        const double dev = s.sums[k] / mk - grand_mean;
        s.ssb2 += mk * dev * dev;
    }
    return s;
}

} // namespace

double compare_q(std::span<const double> y, const Partition& p1, const Partition& p2) {
    const Decomposition d1 = decompose(y, p1);
    if (d1.sst <= 0.0) throw DegenerateDataError("zero total variance; q undefined");
    const std::vector<std::uint32_t> p2_of = align_to(p1, p2);
    const SecondPartition s2 = accumulate_p2(y, p2, p2_of, d1.grand_mean);
    return d1.ssb / d1.sst - s2.ssb2 / d1.sst;
}

TraceTerms trace_terms(std::span<const double> y, const Partition& p1, const Partition& p2) {
    const Decomposition d1 = decompose(y, p1);
    const CrossTab ct = cross_tabulate(p1, p2);

    TraceTerms t;
    t.tr_diff = static_cast<double>(p1.l()) - static_cast<double>(p2.l());
    if (same_grouping(ct)) {
        t.tr_a1a2 = static_cast<double>(p1.l());
        return t; // difference of equal projections: all remaining terms 0
    }

    for (std::size_t h = 0; h < p1.l(); ++h)
        for (std::size_t k = 0; k < p2.l(); ++k) {
            const double nhk = static_cast<double>(ct.counts[h][k]);
            if (nhk == 0.0) continue;
            t.tr_a1a2 += nhk * nhk /
                         (static_cast<double>(ct.row_sizes[h]) *
                          static_cast<double>(ct.col_sizes[k]));
        }
    t.tr_diff_sq = static_cast<double>(p1.l() + p2.l()) - 2.0 * t.tr_a1a2;
    if (t.tr_diff_sq < 0.0) t.tr_diff_sq = 0.0;

    // m'm = sum_h N_h ybar_h^2; m'A2m = sum_k t_k^2 / M_k with
    // t_k = sum_h n_hk ybar_h. A1 m = m collapses both quadratic forms to
    // the same expression under the plug-in m.
    double m_dot_m = 0.0;
    for (std::size_t h = 0; h < p1.l(); ++h)
        m_dot_m += static_cast<double>(p1.sizes()[h]) * d1.stratum_means[h] *
                   d1.stratum_means[h];
    double m_a2_m = 0.0;
    for (std::size_t k = 0; k < p2.l(); ++k) {
        double tk = 0.0;
        for (std::size_t h = 0; h < p1.l(); ++h)
            tk += static_cast<double>(ct.counts[h][k]) * d1.stratum_means[h];
        m_a2_m += tk * tk / static_cast<double>(ct.col_sizes[k]);
    }
    t.quad_mean_diff = m_dot_m - m_a2_m;
    t.quad_mean_diff_sq = m_dot_m - m_a2_m;
    if (t.quad_mean_diff_sq < 0.0) t.quad_mean_diff_sq = 0.0;
    return t;
}

CompareResult compare_test(std::span<const double> y, const Partition& p1,
                           const Partition& p2, Alternative alternative) {
    const Decomposition d1 = decompose(y, p1);
    if (d1.sst <= 0.0) throw DegenerateDataError("zero total variance; q undefined");
    if (d1.n <= d1.l)
        throw DegenerateDataError("insufficient degrees of freedom: N <= L1");

    CompareResult r;
    r.alternative = alternative;
    r.sigma2_hat = d1.ssw / static_cast<double>(d1.n - d1.l);
    r.traces = trace_terms(y, p1, p2);
    r.q1 = d1.ssb / d1.sst;

    const CrossTab ct = cross_tabulate(p1, p2);
    if (same_grouping(ct)) {
        r.q2 = r.q1;
        return r; // big_q = d = e_d = v_d = z = 0, p = 1
    }

    const std::vector<std::uint32_t> p2_of = align_to(p1, p2);
    const SecondPartition s2 = accumulate_p2(y, p2, p2_of, d1.grand_mean);
    r.q2 = s2.ssb2 / d1.sst;
    r.big_q = r.q1 - r.q2;
    r.d_stat = d1.ssb - s2.ssb2;

    r.e_d = r.sigma2_hat * r.traces.tr_diff + r.traces.quad_mean_diff;
    r.v_d = 2.0 * r.sigma2_hat * r.sigma2_hat * r.traces.tr_diff_sq +
            4.0 * r.sigma2_hat * r.traces.quad_mean_diff_sq;
    if (r.v_d <= 0.0) {
        if (r.d_stat == r.e_d) {
            r.v_d = 0.0;
            r.z = 0.0;
            r.p_value = 1.0;
            return r;
        }
        throw DegenerateDataError("degenerate variance: V(D) = 0 with D != E(D)");
    }
    r.z = (r.d_stat - r.e_d) / std::sqrt(r.v_d);
    switch (alternative) {
    case Alternative::two_sided:
        r.p_value = 2.0 * normal_cdf(-std::fabs(r.z));
        break;
    case Alternative::greater:
        r.p_value = 1.0 - normal_cdf(r.z);
        break;
    case Alternative::less:
        r.p_value = normal_cdf(r.z);
        break;
    }
    if (r.p_value > 1.0) r.p_value = 1.0;
    if (r.p_value < 0.0) r.p_value = 0.0;
    return r;
}

} // namespace sshstat
