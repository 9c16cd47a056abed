#pragma once

// Exhaustive-search oracle for optimal_breaks. Replicates the library's
// block construction, prefix sums, cost expression, and left-folded
// accumulation so an agreeing dynamic program matches bitwise, not merely
// within tolerance. Feasible only for small block counts.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace dporacle {

struct SplitResult {
    std::vector<double> breakpoints; // min x of each non-first stratum
    double q = 0.0;
    double total_ssw = 0.0;
};

/// Enumerate every contiguous split of the tied-x blocks into l runs and
/// return the minimizer. Ties keep the lexicographically smallest cut
/// vector because candidates are visited in lexicographic order and
/// replaced only on strict improvement.
inline SplitResult best_split(std::span<const double> y, std::span<const double> x,
                              std::size_t l) {
    const std::size_t n = x.size();
    if (n == 0 || y.size() != n || l < 2)
        throw std::invalid_argument("oracle: bad split input");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : a < b;
    });

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
    if (nb < l) throw std::invalid_argument("oracle: fewer blocks than strata");

    const double mean = pre_s1[nb] / static_cast<double>(n);
    double sst = 0.0;
    for (double v : y) sst += (v - mean) * (v - mean);
    if (sst <= 0.0) throw std::invalid_argument("oracle: zero total variance");

    const auto cost = [&](std::size_t i, std::size_t j) {
        const double s = pre_s1[j] - pre_s1[i];
        const double ss = pre_s2[j] - pre_s2[i];
        const double cnt = static_cast<double>(pre_n[j] - pre_n[i]);
        return ss - s * s / cnt;
    };

    // cut vector c: first block index of strata 2..l, strictly increasing
    // within [1, nb-1]; visited in lexicographic order
    const std::size_t m = l - 1;
    std::vector<std::size_t> c(m);
    std::iota(c.begin(), c.end(), static_cast<std::size_t>(1));
    std::vector<std::size_t> best_c;
    double best_total = 0.0;
    bool have_best = false;
    bool more = true;
    while (more) {
        double total = 0.0;
        std::size_t prev = 0;
        for (std::size_t k = 0; k < m; ++k) {
            total = total + cost(prev, c[k]);
            prev = c[k];
        }
        total = total + cost(prev, nb);
        if (!have_best || total < best_total) {
            best_total = total;
            best_c = c;
            have_best = true;
        }
        more = false;
        for (std::size_t k = m; k-- > 0;) {
            if (c[k] + m - k <= nb - 1) {
                ++c[k];
                for (std::size_t t = k + 1; t < m; ++t) c[t] = c[t - 1] + 1;
                more = true;
                break;
            }
        }
    }

    SplitResult out;
    out.breakpoints.reserve(m);
    for (std::size_t k : best_c) out.breakpoints.push_back(block_x[k]);
    out.total_ssw = best_total;
    double q = 1.0 - best_total / sst;
    if (q < 0.0) q = 0.0;
    if (q > 1.0) q = 1.0;
    out.q = q;
    return out;
}

} // namespace dporacle
