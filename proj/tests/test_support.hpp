#pragma once

// Random-instance helpers shared by the test suites.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sshstat/core.hpp"
#include "sshstat/rng.hpp"

namespace testsup {

inline std::vector<std::string> make_ids(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ids.push_back("u" + std::to_string(i + 1));
    return ids;
}

/// Random partition of n units into exactly l non-empty strata, labels
/// "h1".."hl". One unit is pinned to each stratum before the shuffle so
/// no stratum comes out empty.
inline sshstat::Partition random_partition(sshstat::Rng& rng, std::size_t n,
                                           std::size_t l) {
    std::vector<std::uint32_t> assign(n);
    for (std::size_t i = 0; i < n; ++i)
        assign[i] = i < l ? static_cast<std::uint32_t>(i)
                          : static_cast<std::uint32_t>(rng.below(l));
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(assign[i - 1], assign[j]);
    }
    std::vector<std::string> labels;
    labels.reserve(l);
    for (std::size_t h = 0; h < l; ++h) labels.push_back("h" + std::to_string(h + 1));
    return sshstat::Partition::from_parts(make_ids(n), std::move(assign),
                                          std::move(labels));
}

inline std::vector<double> random_y(sshstat::Rng& rng, std::size_t n,
                                    double mean = 0.0, double sd = 1.0) {
    std::vector<double> y(n);
    for (double& v : y) v = mean + sd * rng.normal();
    return y;
}

/// y drawn around per-stratum means: y_i = means[stratum(i)] + sd * eps.
inline std::vector<double> stratified_y(sshstat::Rng& rng,
                                        const sshstat::Partition& p,
                                        const std::vector<double>& means,
                                        double sd) {
    std::vector<double> y(p.n());
    for (std::size_t i = 0; i < p.n(); ++i)
        y[i] = means[p.stratum_of(i)] + sd * rng.normal();
    return y;
}

} // namespace testsup
