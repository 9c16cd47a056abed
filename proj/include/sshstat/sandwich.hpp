#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sshstat {

/// Source stratification: every stratum of the population with its size.
struct StratumFrame {
    struct Entry {
        std::string label;
        std::size_t population = 0; // N_h
    };
    std::vector<Entry> strata;
};

struct StratumEstimate {
    std::string label;
    std::size_t n = 0;          // sample count in the stratum
    std::size_t population = 0; // N_h from the frame
    double mean = 0.0;          // ybar_h
    std::optional<double> var_of_mean; // V ybar_h; absent when n == 1
};

/// W_rh: share of reporting unit r lying in stratum h. Weights for each r
/// must sum to 1 (validated, never repaired). Duplicate (r, h) pairs are
/// rejected.
struct OverlapEntry {
    std::string r;
    std::string h;
    double weight = 0.0;
};
using OverlapSpec = std::vector<OverlapEntry>;

struct Contributor {
    std::string h;
    double weight = 0.0;
    double mean = 0.0;
    double var_of_mean = 0.0;
};

struct SandwichEstimate {
    std::string r;
    double mean = 0.0;     // ybar_r = sum_h W_rh ybar_h
    double variance = 0.0; // V ybar_r = sum_h W_rh^2 V ybar_h
    std::vector<Contributor> contributors; // ordered by h label
};

/// Per-stratum sample mean and variance of the mean, in frame order.
/// V ybar_h = s_h^2 / n_h, times (1 - n_h/N_h) when fpc is enabled.
/// Every frame stratum must be sampled.
std::vector<StratumEstimate> stratum_estimates(
    const std::vector<std::pair<std::string, double>>& samples,
    const StratumFrame& frame, bool fpc = false);

/// Transfer stratum estimates to reporting units via overlap weights,
/// treating stratum sample means as mutually independent. Results are
/// ordered by reporting-unit label.
std::vector<SandwichEstimate> sandwich_map(const std::vector<StratumEstimate>& estimates,
                                           const OverlapSpec& overlaps);

} // namespace sshstat
