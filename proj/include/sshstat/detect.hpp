#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sshstat/core.hpp"
#include "sshstat/qstat.hpp"
#include "sshstat/stratify.hpp"

namespace sshstat {

enum class InteractionCategory {
    weaken_nonlinear,  // q12 < min(q1, q2)
    weaken_univariate, // min <= q12 <= max (within tolerance at the edges)
    enhance_bivariate, // max < q12 < q1 + q2
    independent,       // q12 == q1 + q2 within tolerance
    enhance_nonlinear  // q12 > q1 + q2
};

struct InteractionResult {
    double q_x1 = 0.0;
    double q_x2 = 0.0;
    double q_overlay = 0.0;
    InteractionCategory category = InteractionCategory::independent;
    double tolerance = 1e-6;
    std::size_t l_overlay = 0;
    /// Overlay reached one stratum per unit: q = 1 by construction and no
    /// significance is available.
    bool overlay_saturated = false;
};

/// One circle of the q-scatterplot: stratum means of X and Y, stratum
/// size, and the stratum's share of explained variance on Y.
struct ScatterDatum {
    std::string label;
    double mean_x = 0.0;
    double mean_y = 0.0;
    std::size_t size = 0;
    double q_h = 0.0;
};

/// How to build the stratification for factor_q. Categorical covariates
/// are used as-is; continuous covariates are discretized with `method`
/// into `l` strata.
struct FactorOptions {
    BreakMethod method = BreakMethod::quantile;
    std::size_t l = 4;
    bool with_qx = false;           // also report q(x; Px) for continuous x
    bool descriptive_only = false;  // suppress the significance test
};

struct FactorResult {
    std::string name;
    Partition partition;
    double q = 0.0;
    std::optional<QResult> test;        // absent under descriptive_only
    std::optional<double> q_x;          // q of x itself over its partition
    std::optional<BreaksResult> breaks; // present when x was discretized
};

/// Partition for one covariate under the factor options: a categorical
/// covariate is used as-is, a continuous one is discretized.
Partition factor_partition(const Dataset& data, const std::string& covariate,
                           const FactorOptions& opts = {});

/// q of y over strata defined by the named covariate. A partition built
/// from y itself makes the test circular; callers doing that should set
/// descriptive_only.
FactorResult factor_q(const Dataset& data, const std::string& covariate,
                      const FactorOptions& opts = {});

/// factor_q over several covariates, evaluated in parallel, results
/// ordered by covariate name.
std::vector<FactorResult> factor_screen(const Dataset& data,
                                        const std::vector<std::string>& covariates,
                                        const FactorOptions& opts = {});

/// Overlay interaction: q of y over the product partition, classified
/// against q1, q2 and q1 + q2. y must be in p1's unit order.
InteractionResult interaction(std::span<const double> y, const Partition& p1,
                              const Partition& p2, double tolerance = 1e-6);

/// Per-stratum scatter data (Y explained-variance share vs stratum means),
/// sorted by mean_x. y and x must be in p's unit order.
std::vector<ScatterDatum> scatter_data(std::span<const double> y,
                                       std::span<const double> x, const Partition& p);

} // namespace sshstat
