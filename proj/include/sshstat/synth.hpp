#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sshstat/core.hpp"
#include "sshstat/sandwich.hpp"

namespace sshstat {

enum class UMode { fixed, random };

/// Two-level Gaussian population: y_hi = M + u_h + eps_hi with
/// eps_hi iid N(0, sigma^2) (or sigma_h^2 per stratum when sigma_h is
/// non-empty). Stratum effects u_h are either given or drawn
/// N(0, sigma_b^2).
struct SynthConfig {
    std::size_t l = 2;
    std::vector<std::size_t> sizes; // N_h, length l, all >= 1
    double grand_mean = 0.0;        // M
    UMode u_mode = UMode::fixed;
    std::vector<double> u;          // length l when fixed
    double sigma_b = 0.0;           // stratum-effect sd when random
    double sigma = 1.0;             // common error sd
    std::vector<double> sigma_h;    // per-stratum override; empty = common
    std::uint64_t seed = 1;
};

struct SynthData {
    Dataset data;
    Partition partition;
    std::vector<double> stratum_means; // M_h = M + u_h
    std::vector<double> u;             // realized stratum effects
};

SynthData generate(const SynthConfig& cfg);

enum class LambdaForm {
    derived,    // (1/sigma^2)[sum N_h u_h^2 - (sum N_h u_h)^2 / N]
    printed_eq6 // (1/sigma^2)[sum N_h u_h^2 - (sum N_h)^2 / N]; fails calibration
};

double lambda_from_u(std::span<const double> u, std::span<const std::size_t> sizes,
                     double sigma2, LambdaForm form = LambdaForm::derived);

/// Kolmogorov-Smirnov distance between a sample and a reference CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

struct McReport {
    std::size_t replicates = 0;
    double ks_distance = 0.0;
    double ks_threshold = 0.0; // 1.5 * 1.36 / sqrt(replicates)
    bool ks_pass = false;
    double empirical_mean = 0.0;
    double empirical_var = 0.0;
    double theoretical_mean = 0.0; // NaN when df too small for the moment
    double theoretical_var = 0.0;
    double lambda = 0.0;              // noncentrality of the reference CDF
    double frac_p_below_005 = 0.0;    // NaN outside the null harness
};

/// Distribution of F = f_transform(q) under u = 0, checked against the
/// central F(L-1, N-L) CDF. cfg must fix u to all zeros.
McReport mc_null_calibration(const SynthConfig& cfg, std::size_t replicates);

/// Same harness with fixed non-zero u, checked against the non-central F
/// with lambda computed from the configured u and sigma by `form`.
McReport mc_noncentral_check(const SynthConfig& cfg, std::size_t replicates,
                             LambdaForm form = LambdaForm::derived);

struct SandwichBenchConfig {
    SynthConfig population;
    double sampling_fraction = 0.1;
    OverlapSpec overlaps;
    std::size_t replicates = 2000;
    std::uint64_t seed = 1; // sampling stream; population reseeded per replicate
};

/// Per-replicate: regenerate the population, draw one simple random sample
/// of the whole population (redrawn until every stratum has >= 2 units,
/// rejections counted), then estimate every reporting-unit mean three
/// ways. Truth for r is sum_h W_rh (M + u_h).
struct SandwichBenchReport {
    std::size_t replicates = 0;
    std::size_t sample_size = 0;
    std::size_t rejected_draws = 0;
    double rmse_sandwich = 0.0;
    double rmse_global = 0.0;   // global sample mean assigned to every r
    double rmse_dominant = 0.0; // mean of the stratum with the largest W_rh
    double ratio_vs_global = 0.0;
    double coverage_95 = 0.0; // nominal 95% intervals around the sandwich mean
};

SandwichBenchReport sandwich_benchmark(const SandwichBenchConfig& cfg);

/// N=100 in four strata of 25, u = 0, sigma = 1.
SynthConfig preset_null(std::uint64_t seed);

/// u = (1, -1), N_h = (50, 50), sigma = 1: lambda = 100.
SynthConfig preset_noncentral(std::uint64_t seed);

/// Four strata of 250 with eight reporting units on rotated overlap
/// weights (0.5, 0.3, 0.2); strong SSH uses u = (3, -3, 6, -6), otherwise
/// u = 0. Sampling fraction 0.1.
SandwichBenchConfig preset_sandwich(bool strong_ssh, std::uint64_t seed,
                                    std::size_t replicates);

} // namespace sshstat
