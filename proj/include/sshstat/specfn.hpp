#pragma once

#include <cstddef>

namespace sshstat {

/// Truncation control for the non-central F Poisson mixture.
struct SeriesControl {
    double rel_tol = 1e-12;
    int max_terms = 10000;
};

/// Regularized incomplete beta I_x(a, b), x in [0,1], a,b > 0.
/// Continued-fraction evaluation with the symmetry switch
/// I_x(a,b) = 1 - I_{1-x}(b,a); relative error <= 1e-10.
double reg_inc_beta(double x, double a, double b);

/// CDF of the central F distribution with (d1, d2) degrees of freedom,
/// i.e. I_v(d1/2, d2/2) with v = d1 f / (d1 f + d2).
double central_f_cdf(double f, unsigned d1, unsigned d2);

/// CDF of the non-central F distribution with non-centrality lambda >= 0:
/// the Poisson(lambda/2) mixture of incomplete beta terms, accumulated from
/// the dominant term outward in both directions, in log space.
/// Throws DegenerateDataError if the series fails to converge within
/// ctl.max_terms terms.
double noncentral_f_cdf(double f, unsigned d1, unsigned d2, double lambda,
                        SeriesControl ctl = {});

/// Mean of the (non-)central F distribution; requires d2 > 2.
double noncentral_f_mean(unsigned d1, unsigned d2, double lambda);

/// Variance of the (non-)central F distribution; requires d2 > 4.
double noncentral_f_variance(unsigned d1, unsigned d2, double lambda);

/// Standard normal CDF.
double normal_cdf(double z);

} // namespace sshstat
