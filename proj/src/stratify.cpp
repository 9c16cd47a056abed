#include "sshstat/stratify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <optional>

#include "sshstat/errors.hpp"
#include "sshstat/parallel.hpp"
#include "sshstat/qstat.hpp"

namespace sshstat {

namespace {

std::string fmt_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void check_x(const std::vector<std::string>& ids, std::span<const double> x,
             std::size_t l) {
    if (ids.size() != x.size())
        throw ValidationError("id/value length mismatch");
    if (x.empty()) throw ValidationError("empty covariate");
    if (l < 2) throw ValidationError("stratum count must be >= 2");
    for (double v : x)
        if (!std::isfinite(v)) throw ValidationError("non-finite covariate value");
}

std::size_t distinct_count(std::vector<double> sorted_x) {
    return static_cast<std::size_t>(
        std::unique(sorted_x.begin(), sorted_x.end()) - sorted_x.begin());
}

/// Partition by cut membership: stratum of v = #{cuts <= v}. Cuts must be
/// strictly ascending and every resulting stratum non-empty.
Partition interval_partition(const std::vector<std::string>& ids,
                             std::span<const double> x,
                             const std::vector<double>& cuts) {
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const std::size_t l = cuts.size() + 1;
    std::vector<std::string> labels(l);
    for (std::size_t k = 0; k < l; ++k) {
        const std::string lo = k == 0 ? fmt_value(*lo_it) : fmt_value(cuts[k - 1]);
        const bool last = k + 1 == l;
        const std::string hi = last ? fmt_value(*hi_it) : fmt_value(cuts[k]);
        labels[k] = "[" + lo + "," + hi + (last ? "]" : ")");
        if (k > 0 && labels[k] == labels[k - 1]) labels[k] += "#" + std::to_string(k + 1);
    }
    std::vector<std::uint32_t> stratum_of(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        stratum_of[i] = static_cast<std::uint32_t>(
            std::upper_bound(cuts.begin(), cuts.end(), x[i]) - cuts.begin());
    return Partition::from_parts(ids, std::move(stratum_of), std::move(labels));
}

/// Drop cuts bounding empty intervals, attaching each empty range to the
/// stratum on its right. Returns the surviving cuts; appends a warning
/// when anything was dropped.
std::vector<double> merge_empty_intervals(std::span<const double> x,
                                          std::vector<double> cuts,
                                          std::size_t requested_l,
                                          std::vector<std::string>& warnings) {
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<std::size_t> counts(cuts.size() + 1, 0);
    for (double v : x)
        ++counts[std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin()];

    std::vector<double> kept;
    std::size_t last_nonempty = 0;
    bool seen_nonempty = false;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] == 0) continue;
        // boundary between consecutive non-empty intervals a < b is
        // cuts[a]: the empty ranges in between belong to the right stratum
        if (seen_nonempty) kept.push_back(cuts[last_nonempty]);
        seen_nonempty = true;
        last_nonempty = j;
    }
    const std::size_t m = kept.size() + 1;
    if (m < 2)
        throw DegenerateDataError("discretization collapses to a single stratum");
    if (m < requested_l)
        warnings.push_back("stratum count reduced from " + std::to_string(requested_l) +
                           " to " + std::to_string(m) +
                           ": duplicate cuts or empty intervals merged rightward");
    return kept;
}

BreaksResult finish_discretize(BreakMethod method, const std::vector<std::string>& ids,
                               std::span<const double> x, std::size_t requested_l,
                               std::vector<double> raw_cuts,
                               std::vector<std::string> warnings) {
    std::vector<double> cuts =
        merge_empty_intervals(x, std::move(raw_cuts), requested_l, warnings);
    Partition part = interval_partition(ids, x, cuts);
    return BreaksResult{method, cuts.size() + 1, std::move(cuts), std::move(part),
                        std::nullopt, std::move(warnings)};
}

} // namespace

BreaksResult discretize_equal_interval(const std::vector<std::string>& ids,
                                       std::span<const double> x, std::size_t l) {
    check_x(ids, x, l);
    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    if (*lo_it == *hi_it)
        throw DegenerateDataError("x has no spread; cannot discretize");
    std::vector<double> cuts(l - 1);
    for (std::size_t k = 0; k + 1 < l; ++k)
        cuts[k] = *lo_it + static_cast<double>(k + 1) * (*hi_it - *lo_it) /
                               static_cast<double>(l);
    return finish_discretize(BreakMethod::equal_interval, ids, x, l, std::move(cuts), {});
}

BreaksResult discretize_quantile(const std::vector<std::string>& ids,
                                 std::span<const double> x, std::size_t l) {
    check_x(ids, x, l);
    std::vector<double> xs(x.begin(), x.end());
    std::sort(xs.begin(), xs.end());
    if (xs.front() == xs.back())
        throw DegenerateDataError("x has no spread; cannot discretize");
    const std::size_t n = xs.size();
    std::vector<double> cuts(l - 1);
    for (std::size_t k = 1; k < l; ++k) {
        // type-7 quantile at p = k / l
        const double h = static_cast<double>(n - 1) * static_cast<double>(k) /
                         static_cast<double>(l);
        const std::size_t i0 = static_cast<std::size_t>(h);
        const double frac = h - static_cast<double>(i0);
        cuts[k - 1] = i0 + 1 < n ? xs[i0] + frac * (xs[i0 + 1] - xs[i0]) : xs[i0];
    }
    return finish_discretize(BreakMethod::quantile, ids, x, l, std::move(cuts), {});
}

BreaksResult optimal_breaks(const std::vector<std::string>& ids,
                            std::span<const double> y, std::span<const double> x,
                            std::size_t l) {
    check_x(ids, x, l);
    if (y.size() != x.size()) throw ValidationError("y/x length mismatch");
    const std::size_t n = x.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : a < b;
    });

    // blocks of tied x; a block is never split across strata
    std::vector<double> block_x;
    std::vector<double> pre_s1{0.0}, pre_s2{0.0};
    std::vector<std::size_t> pre_n{0};
    for (std::size_t r = 0; r < n; ++r) {
        const double xv = x[order[r]];
        const double yv = y[order[r]];
        if (block_x.empty() || xv != block_x.back()) {
            block_x.push_back(xv);
            pre_s1.push_back(pre_s1.back());
            pre_s2.push_back(pre_s2.back());
            pre_n.push_back(pre_n.back());
        }
        pre_s1.back() += yv;
        pre_s2.back() += yv * yv;
        pre_n.back() += 1;
    }
    const std::size_t nb = block_x.size();
    if (nb < l)
        throw DegenerateDataError("fewer distinct x values than strata");

    double mean = pre_s1[nb] / static_cast<double>(n);
    double sst = 0.0;
    for (double v : y) sst += (v - mean) * (v - mean);
    if (sst <= 0.0) throw DegenerateDataError("zero total variance; q undefined");

    // within-stratum sum of squares for blocks [i, j)
    const auto cost = [&](std::size_t i, std::size_t j) {
        const double s = pre_s1[j] - pre_s1[i];
        const double ss = pre_s2[j] - pre_s2[i];
        const double cnt = static_cast<double>(pre_n[j] - pre_n[i]);
        return ss - s * s / cnt;
    };

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> f(l + 1, std::vector<double>(nb + 1, kInf));
    f[0][0] = 0.0;
    for (std::size_t k = 1; k <= l; ++k)
        for (std::size_t j = k; j + (l - k) <= nb; ++j) {
            double best = kInf;
            for (std::size_t s = k - 1; s < j; ++s) {
                if (f[k - 1][s] == kInf) continue;
                const double cand = f[k - 1][s] + cost(s, j);
                if (cand < best) best = cand;
            }
            f[k][j] = best;
        }

    // states on some exactly-optimal path; exact equality keeps the DP and
    // any enumeration over the same left-folded sums bitwise consistent
    std::vector<std::vector<char>> useful(l + 1, std::vector<char>(nb + 1, 0));
    useful[l][nb] = 1;
    for (std::size_t k = l; k >= 1; --k)
        for (std::size_t j = k; j <= nb; ++j) {
            if (!useful[k][j]) continue;
            for (std::size_t s = k - 1; s < j; ++s) {
                if (f[k - 1][s] == kInf) continue;
                if (f[k - 1][s] + cost(s, j) == f[k][j]) useful[k - 1][s] = 1;
            }
        }

    // forward greedy over useful states: lexicographically smallest cuts
    std::vector<std::size_t> bounds;
    std::size_t prev = 0;
    for (std::size_t k = 1; k <= l; ++k) {
        const std::size_t before = prev;
        for (std::size_t j = prev + 1; j <= nb; ++j) {
            if (!useful[k][j]) continue;
            if (f[k - 1][prev] + cost(prev, j) == f[k][j]) {
                prev = j;
                break;
            }
        }
        if (prev == before)
            throw std::logic_error("optimal path reconstruction failed");
        if (k < l) bounds.push_back(prev);
    }

    std::vector<double> cuts(bounds.size());
    for (std::size_t k = 0; k < bounds.size(); ++k) cuts[k] = block_x[bounds[k]];

    Partition part = interval_partition(ids, x, cuts);
    double q = 1.0 - f[l][nb] / sst;
    if (q < 0.0) q = 0.0;
    if (q > 1.0) q = 1.0;
    return BreaksResult{BreakMethod::optimal_dp, l,    std::move(cuts),
                        std::move(part),         q,    {}};
}

ScanResult scan_l(const std::vector<std::string>& ids, std::span<const double> y,
                  std::span<const double> x, std::size_t l_min, std::size_t l_max,
                  double alpha, bool increment_rule) {
    if (l_min < 2 || l_min > l_max)
        throw ValidationError("scan range must satisfy 2 <= l_min <= l_max");
    if (!(alpha > 0.0) || alpha >= 1.0)
        throw ValidationError("alpha must lie in (0,1)");

    const std::size_t count = l_max - l_min + 1;
    std::vector<std::optional<BreaksResult>> fits(count);
    std::vector<double> pvals(count);
    parallel_for_index(count, [&](std::size_t i) {
        const std::size_t l = l_min + i;
        BreaksResult fit = optimal_breaks(ids, y, x, l);
        const double q = *fit.q;
        if (q < 1.0) {
            pvals[i] = q_test(y, fit.partition, TestMode::central_null).p_value;
        } else if (y.size() > l) {
            pvals[i] = 0.0; // SSW exactly zero with df to spare: limiting p
        } else {
            throw DegenerateDataError("insufficient degrees of freedom: N <= L");
        }
        fits[i] = std::move(fit);
    });

    ScanResult out;
    out.alpha = alpha;
    out.increment_rule = increment_rule;
    out.note = "p-values are per-l and uncorrected for multiple comparisons "
               "across the scanned range";
    out.rows.reserve(count);
    out.fits.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        ScanRow row;
        row.l = l_min + i;
        row.q = *fits[i]->q;
        row.p_value = pvals[i];
        if (i > 0) row.delta_q = row.q - out.rows.back().q;
        out.rows.push_back(row);
        out.fits.push_back(std::move(*fits[i]));
    }

    for (std::size_t i = 0; i < count; ++i) {
        if (!(out.rows[i].p_value < alpha)) continue;
        if (increment_rule && i > 0 && i + 1 < count) {
            const double d_here = *out.rows[i].delta_q;
            const double d_next = *out.rows[i + 1].delta_q;
            if (!(d_next < d_here)) continue; // gain not diminishing: keep scanning
        }
        out.selected_l = out.rows[i].l;
        break;
    }
    return out;
}

} // namespace sshstat
