#pragma once

// Dense linear-algebra oracle. Builds stratum projection matrices
// explicitly as X (X'X)^-1 X' and evaluates every statistic by full
// matrix products, independently of the library's group-sum shortcuts.
// O(n^3) throughout; intended for n <= ~60.

#include <cstddef>
#include <span>
#include <vector>

#include "sshstat/core.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix zeros(std::size_t n) {
    return Matrix(n, std::vector<double>(n, 0.0));
}

inline Matrix identity(std::size_t n) {
    Matrix m = zeros(n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

/// J/n: projection onto the constant vector (grand-mean operator).
inline Matrix mean_projection(std::size_t n) {
    return Matrix(n, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

/// A = X (X'X)^-1 X' for the indicator design X of the partition.
/// X'X = diag(N_h), inverted elementwise.
inline Matrix projection(const sshstat::Partition& p) {
    const std::size_t n = p.n();
    const std::size_t l = p.l();
    std::vector<std::vector<double>> x(n, std::vector<double>(l, 0.0));
    for (std::size_t i = 0; i < n; ++i) x[i][p.stratum_of(i)] = 1.0;
    std::vector<double> inv(l);
    for (std::size_t h = 0; h < l; ++h)
        inv[h] = 1.0 / static_cast<double>(p.sizes()[h]);
    Matrix a = zeros(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t h = 0; h < l; ++h) s += x[i][h] * inv[h] * x[j][h];
            a[i][j] = s;
        }
    return a;
}

inline Matrix subtract(const Matrix& a, const Matrix& b) {
    Matrix out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i][j] -= b[i][j];
    return out;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size();
    Matrix out = zeros(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a[i][k];
            for (std::size_t j = 0; j < n; ++j) out[i][j] += aik * b[k][j];
        }
    return out;
}

inline double trace(const Matrix& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) t += a[i][i];
    return t;
}

inline std::vector<double> apply_matrix(const Matrix& a, std::span<const double> v) {
    std::vector<double> out(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

inline double quad_form(std::span<const double> v, const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) row += a[i][j] * v[j];
        s += v[i] * row;
    }
    return s;
}

inline double sst(std::span<const double> y) {
    return quad_form(y, subtract(identity(y.size()), mean_projection(y.size())));
}

inline double ssb(std::span<const double> y, const sshstat::Partition& p) {
    return quad_form(y, subtract(projection(p), mean_projection(y.size())));
}

inline double ssw(std::span<const double> y, const sshstat::Partition& p) {
    return quad_form(y, subtract(identity(y.size()), projection(p)));
}

/// Per-unit vector of stratum means under p: m = A y.
inline std::vector<double> mean_vector(std::span<const double> y,
                                       const sshstat::Partition& p) {
    return apply_matrix(projection(p), y);
}

struct CompareTerms {
    double tr_a1a2 = 0.0;
    double tr_diff_sq = 0.0;
    double quad_mean_diff = 0.0;
    double quad_mean_diff_sq = 0.0;
};

/// p1 and p2 must index the same units in the same order.
inline CompareTerms compare_terms(std::span<const double> y,
                                  const sshstat::Partition& p1,
                                  const sshstat::Partition& p2) {
    const Matrix a1 = projection(p1);
    const Matrix a2 = projection(p2);
    const Matrix diff = subtract(a1, a2);
    const std::vector<double> m = apply_matrix(a1, y);
    CompareTerms t;
    t.tr_a1a2 = trace(multiply(a1, a2));
    t.tr_diff_sq = trace(multiply(diff, diff));
    t.quad_mean_diff = quad_form(m, diff);
    t.quad_mean_diff_sq = quad_form(m, multiply(diff, diff));
    return t;
}

} // namespace oracle
