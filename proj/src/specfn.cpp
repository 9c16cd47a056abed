#include "sshstat/specfn.hpp"

#include <cmath>
#include <string>

#include "sshstat/errors.hpp"

namespace sshstat {

namespace {

// Lentz's algorithm for the incomplete-beta continued fraction.
// Converges fastest for x < (a+1)/(a+b+2); the caller switches regimes.
double beta_cont_frac(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        // even step
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        // odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// log of the prefactor x^a (1-x)^b / (a B(a,b))
double log_beta_prefactor(double a, double b, double x) {
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
           b * std::log1p(-x);
}

} // namespace

double reg_inc_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw ValidationError("reg_inc_beta: a and b must be positive");
    if (!(x >= 0.0) || !(x <= 1.0))
        throw ValidationError("reg_inc_beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;

    const double front = std::exp(log_beta_prefactor(a, b, x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cont_frac(a, b, x) / a;
    return 1.0 - front * beta_cont_frac(b, a, 1.0 - x) / b;
}

double central_f_cdf(double f, unsigned d1, unsigned d2) {
    if (d1 == 0 || d2 == 0) throw ValidationError("central_f_cdf: degrees of freedom must be positive");
    if (!(f >= 0.0)) throw ValidationError("central_f_cdf: f must be non-negative");
    if (f == 0.0) return 0.0;
    const double v = d1 * f / (d1 * f + d2);
    return reg_inc_beta(v, 0.5 * d1, 0.5 * d2);
}

double noncentral_f_cdf(double f, unsigned d1, unsigned d2, double lambda, SeriesControl ctl) {
    if (d1 == 0 || d2 == 0)
        throw ValidationError("noncentral_f_cdf: degrees of freedom must be positive");
    if (!(f >= 0.0)) throw ValidationError("noncentral_f_cdf: f must be non-negative");
    if (!(lambda >= 0.0)) throw ValidationError("noncentral_f_cdf: lambda must be non-negative");
    if (!(ctl.rel_tol > 0.0) || ctl.max_terms < 1)
        throw ValidationError("noncentral_f_cdf: invalid series control");
    if (lambda == 0.0) return central_f_cdf(f, d1, d2);
    if (f == 0.0) return 0.0;

    const double v = d1 * f / (d1 * f + d2);
    const double half_a = 0.5 * d1;
    const double half_b = 0.5 * d2;
    const double half_lambda = 0.5 * lambda;
    const double log_hl = std::log(half_lambda);

    // Poisson(lambda/2) weight of term j, in log space:
    //   log w_j = -lambda/2 + j log(lambda/2) - lgamma(j+1)
    auto log_weight = [&](long j) {
        return -half_lambda + j * log_hl - std::lgamma(static_cast<double>(j) + 1.0);
    };

    // Sweep outward from the dominant term j0 = floor(lambda/2), stopping
    // once the un-accumulated Poisson mass drops below rel_tol. Each beta
    // term is bounded by 1, so the truncation error is bounded by that mass.
    const long j0 = static_cast<long>(std::floor(half_lambda));
    double sum = 0.0;
    double weight_mass = 0.0;
    long lo = j0;
    long hi = j0;
    bool lo_open = true;
    bool hi_open = true;
    int terms = 0;

    auto add_term = [&](long j) {
        const double w = std::exp(log_weight(j));
        sum += w * reg_inc_beta(v, half_a + static_cast<double>(j), half_b);
        weight_mass += w;
        ++terms;
    };

    add_term(j0);
    while (1.0 - weight_mass >= ctl.rel_tol && (lo_open || hi_open)) {
        if (terms >= ctl.max_terms)
            throw DegenerateDataError("noncentral_f_cdf: series did not converge within " +
                                      std::to_string(ctl.max_terms) + " terms");
        if (lo_open && lo > 0) {
            --lo;
            add_term(lo);
        } else {
            lo_open = false;
        }
        if (hi_open) {
            ++hi;
            add_term(hi);
            // once the upper weight underflows it can only keep shrinking
            if (std::exp(log_weight(hi)) == 0.0 && hi > j0 + 2) hi_open = false;
        }
    }

    if (sum < 0.0) return 0.0;
    if (sum > 1.0) return 1.0;
    return sum;
}

double noncentral_f_mean(unsigned d1, unsigned d2, double lambda) {
    if (d1 == 0 || d2 <= 2)
        throw ValidationError("noncentral_f_mean: requires d1 > 0 and d2 > 2");
    if (!(lambda >= 0.0)) throw ValidationError("noncentral_f_mean: lambda must be non-negative");
    return static_cast<double>(d2) * (d1 + lambda) /
           (static_cast<double>(d1) * (d2 - 2.0));
}

double noncentral_f_variance(unsigned d1, unsigned d2, double lambda) {
    if (d1 == 0 || d2 <= 4)
        throw ValidationError("noncentral_f_variance: requires d1 > 0 and d2 > 4");
    if (!(lambda >= 0.0))
        throw ValidationError("noncentral_f_variance: lambda must be non-negative");
    const double dd1 = d1;
    const double dd2 = d2;
    const double num = (d1 + lambda) * (d1 + lambda) + (dd1 + 2.0 * lambda) * (dd2 - 2.0);
    return 2.0 * num * dd2 * dd2 / (dd1 * dd1 * (dd2 - 2.0) * (dd2 - 2.0) * (dd2 - 4.0));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace sshstat
