#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sshstat/core.hpp"

namespace sshstat {

enum class BreakMethod { equal_interval, quantile, optimal_dp };

/// A stratification of a continuous covariate into l interval strata.
/// Intervals are half-open [b_k, b_{k+1}) with the last closed; a value
/// falls in stratum #{breakpoints <= value}. `l` is the stratum count
/// actually produced, which the discretizers may reduce (with a warning)
/// when cuts collapse on ties or intervals come out empty.
/// `q` is set only by optimal_breaks; the discretizers never see y.
struct BreaksResult {
    BreakMethod method = BreakMethod::equal_interval;
    std::size_t l = 0;
    std::vector<double> breakpoints; // strictly ascending, l - 1 values
    Partition partition;
    std::optional<double> q;
    std::vector<std::string> warnings;
};

/// One row of the stratum-count scan. delta_q is q(l) - q(previous row's
/// l), absent on the first row.
struct ScanRow {
    std::size_t l = 0;
    double q = 0.0;
    double p_value = 1.0;
    std::optional<double> delta_q;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    std::vector<BreaksResult> fits; // parallel to rows
    std::optional<std::size_t> selected_l;
    double alpha = 0.01;
    bool increment_rule = false;
    /// Fixed caveat: the scan tests several l values on the same data, so
    /// the per-row p-values are not corrected for multiple testing.
    std::string note;
};

/// Cut points evenly spaced over [min(x), max(x)]; empty intervals are
/// merged rightward (warning emitted, l reduced).
BreaksResult discretize_equal_interval(const std::vector<std::string>& ids,
                                       std::span<const double> x, std::size_t l);

/// Cuts at the k/l empirical quantiles (type-7 interpolation); duplicate
/// cuts collapsed and empty intervals merged rightward, reducing l.
BreaksResult discretize_quantile(const std::vector<std::string>& ids,
                                 std::span<const double> x, std::size_t l);

/// Exact search over all partitions of the x-sorted units into l
/// contiguous runs that never split tied x values, minimizing SSW(y)
/// (equivalently maximizing q at fixed SST). Dynamic program over prefix
/// sums, O(l n^2) time, O(l n) space. Ties between equal-SSW solutions
/// are broken by the lexicographically smallest breakpoint sequence.
/// Each breakpoint is the smallest x of the stratum to its right.
BreaksResult optimal_breaks(const std::vector<std::string>& ids,
                            std::span<const double> y, std::span<const double> x,
                            std::size_t l);

/// Fit optimal_breaks and the central-null q test for every l in
/// [l_min, l_max]; select the smallest l with p < alpha. With the
/// increment rule enabled, a candidate l is additionally required to show
/// a diminishing gain, delta_q(l+1) < delta_q(l), whenever both deltas
/// are available in the scanned range; candidates the rule refutes are
/// skipped. No selection leaves selected_l empty; the table is returned
/// regardless.
ScanResult scan_l(const std::vector<std::string>& ids, std::span<const double> y,
                  std::span<const double> x, std::size_t l_min, std::size_t l_max,
                  double alpha, bool increment_rule = false);

} // namespace sshstat
