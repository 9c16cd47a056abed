#pragma once

#include <cstddef>
#include <span>

#include "sshstat/core.hpp"

namespace sshstat {

enum class Alternative { two_sided, greater, less };

/// Matrix-free ingredients of the D-test moments. A1, A2 are the stratum
/// projection matrices of the two partitions; m is the per-unit vector of
/// P1 stratum means (the plug-in for the unknown mean surface).
struct TraceTerms {
    double tr_diff = 0.0;          // tr(A1 - A2) = L1 - L2
    double tr_a1a2 = 0.0;          // tr(A1 A2) = sum n_hk^2 / (N_h M_k)
    double tr_diff_sq = 0.0;       // tr((A1 - A2)^2) >= 0
    double quad_mean_diff = 0.0;   // m'(A1 - A2)m
    double quad_mean_diff_sq = 0.0; // m'(A1 - A2)^2 m >= 0
};

/// Normal-approximation test of D = SSB1 - SSB2 treating P1 as the true
/// stratification. sigma2_hat = SSW1 / (N - L1).
struct CompareResult {
    double q1 = 0.0;
    double q2 = 0.0;
    double big_q = 0.0;  // Q = q1 - q2; positive means P1 more homogeneous
    double d_stat = 0.0; // D = SSB1 - SSB2
    double sigma2_hat = 0.0;
    TraceTerms traces;
    double e_d = 0.0;
    double v_d = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    Alternative alternative = Alternative::two_sided;
};

/// Q(P1,P2) = q(y,P1) - q(y,P2). y must be in p1's unit order; p2 may list
/// the same units in any order.
double compare_q(std::span<const double> y, const Partition& p1, const Partition& p2);

TraceTerms trace_terms(std::span<const double> y, const Partition& p1, const Partition& p2);

/// E(D) = sigma2_hat * tr_diff + quad_mean_diff;
/// V(D) = 2 * sigma2_hat^2 * tr_diff_sq + 4 * sigma2_hat * quad_mean_diff_sq.
/// V(D) = 0 with D = E(D) degenerates to z = 0, p = 1; V(D) = 0 with
/// D != E(D) is an error.
CompareResult compare_test(std::span<const double> y, const Partition& p1,
                           const Partition& p2,
                           Alternative alternative = Alternative::two_sided);

} // namespace sshstat
