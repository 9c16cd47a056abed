#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sshstat/core.hpp"

namespace sshstat {

/// Variance decomposition of y over a partition: SST = SSB + SSW.
struct Decomposition {
    double sst = 0.0;
    double ssb = 0.0;
    double ssw = 0.0;
    double grand_mean = 0.0;
    std::size_t n = 0;
    std::size_t l = 0;
    /// Pooled within-stratum variance estimate SSW/(N-L); empty when N == L.
    std::optional<double> sigma2_hat;
    std::vector<double> stratum_means; // ordered as p.strata()
};

/// Per-stratum descriptives. var_within uses the population denominator
/// N_h; q_h = 1 - var_within/sigma2 with sigma2 = SST/N, so a stratum as
/// heterogeneous as the whole map scores 0 and a constant stratum scores 1.
struct StratumStats {
    std::string label;
    std::size_t n_h = 0;
    double weight = 0.0;
    double mean = 0.0;
    double var_within = 0.0;
    double q_h = 0.0;
};

enum class TestMode { central_null, noncentral_plugin };

struct QResult {
    double q = 0.0;
    double f_stat = 0.0;
    std::size_t df1 = 0; // L - 1
    std::size_t df2 = 0; // N - L
    double lambda = 0.0; // 0 under the null mode
    double p_value = 1.0;
    TestMode mode = TestMode::central_null;
};

/// y must be in p's unit order (use align_y to join a Dataset by id).
/// Requires N >= 2.
Decomposition decompose(std::span<const double> y, const Partition& p);

/// q = 1 - SSW/SST = SSB/SST. Throws DegenerateDataError when SST = 0.
double q_statistic(std::span<const double> y, const Partition& p);
double q_from(const Decomposition& d);

/// F = ((n-l)/(l-1)) q/(1-q). Throws DegenerateDataError for q = 1 or
/// n <= l, ValidationError for q outside [0,1) or l < 2.
double f_transform(double q, std::size_t n, std::size_t l);

/// Significance test of the q-statistic. central_null: p from the central
/// F(L-1, N-L), the distribution of F when all stratum effects vanish.
/// noncentral_plugin: lambda estimated by lambda_plugin and p from the
/// non-central F.
QResult q_test(std::span<const double> y, const Partition& p,
               TestMode mode = TestMode::central_null);

/// Plug-in non-centrality: (1/sigma2_hat)[sum N_h u_h^2 - (sum N_h u_h)^2/N]
/// with u_h = ybar_h - ybar, which reduces to SSB/sigma2_hat because the
/// weighted u_h sum to zero. Both routes are evaluated and must agree.
double lambda_plugin(std::span<const double> y, const Partition& p);

/// Per-stratum means, within-variances and homogeneity scores q_h,
/// ordered as p.strata(). Requires SST > 0.
std::vector<StratumStats> stratum_profile(std::span<const double> y, const Partition& p);

} // namespace sshstat
