#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"

#include "sshstat/errors.hpp"
#include "sshstat/sandwich.hpp"

using namespace sshstat;

namespace {

std::vector<std::pair<std::string, double>> toy_samples() {
    return {{"A", 1.0}, {"B", 10.0}, {"A", 3.0}, {"B", 14.0}, {"B", 12.0}};
}

StratumFrame toy_frame() { return {{{"A", 100}, {"B", 200}}}; }

} // namespace

TEST_SUITE("sandwich") {

TEST_CASE("stratum estimates from hand-checked samples") {
    const auto est = stratum_estimates(toy_samples(), toy_frame());
    REQUIRE(est.size() == 2);

    CHECK(est[0].label == "A");
    CHECK(est[0].n == 2);
    CHECK(est[0].population == 100);
    CHECK(est[0].mean == 2.0);
    REQUIRE(est[0].var_of_mean.has_value());
    CHECK(*est[0].var_of_mean == 1.0); // s^2 = 2 over n = 2

    CHECK(est[1].label == "B");
    CHECK(est[1].n == 3);
    CHECK(est[1].mean == 12.0);
    REQUIRE(est[1].var_of_mean.has_value());
    CHECK(*est[1].var_of_mean == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("estimates follow frame order, not sample order") {
    const StratumFrame frame{{{"B", 200}, {"A", 100}}};
    const auto est = stratum_estimates(toy_samples(), frame);
    REQUIRE(est.size() == 2);
    CHECK(est[0].label == "B");
    CHECK(est[1].label == "A");
}

TEST_CASE("finite population correction shrinks the variance") {
    const auto est = stratum_estimates(toy_samples(), toy_frame(), true);
    CHECK(*est[0].var_of_mean == doctest::Approx(0.98).epsilon(1e-15));
    CHECK(*est[1].var_of_mean ==
          doctest::Approx((4.0 / 3.0) * (1.0 - 3.0 / 200.0)).epsilon(1e-15));
}

TEST_CASE("census strata have zero variance under fpc") {
    const StratumFrame frame{{{"A", 2}, {"B", 3}}};
    const auto est = stratum_estimates(toy_samples(), frame, true);
    CHECK(*est[0].var_of_mean == 0.0);
    CHECK(*est[1].var_of_mean == 0.0);
}

TEST_CASE("single-sample strata carry no variance estimate") {
    const std::vector<std::pair<std::string, double>> samples{{"A", 5.0}, {"B", 1.0},
                                                              {"B", 2.0}};
    const auto est = stratum_estimates(samples, toy_frame());
    CHECK(est[0].n == 1);
    CHECK(est[0].mean == 5.0);
    CHECK(!est[0].var_of_mean.has_value());

    const OverlapSpec overlaps{{"r1", "A", 1.0}};
    CHECK_THROWS_AS(sandwich_map(est, overlaps), DegenerateDataError);
}

TEST_CASE("stratum estimate validation") {
    const auto frame = toy_frame();
    const std::vector<std::pair<std::string, double>> missing_b{{"A", 1.0}, {"A", 2.0}};
    CHECK_THROWS_AS(stratum_estimates(missing_b, frame), DegenerateDataError);

    const std::vector<std::pair<std::string, double>> unknown{{"A", 1.0}, {"C", 2.0}};
    CHECK_THROWS_AS(stratum_estimates(unknown, frame), ValidationError);

    const StratumFrame dup{{{"A", 10}, {"A", 20}}};
    CHECK_THROWS_AS(stratum_estimates(toy_samples(), dup), ValidationError);

    const StratumFrame zero_pop{{{"A", 0}, {"B", 5}}};
    CHECK_THROWS_AS(stratum_estimates(toy_samples(), zero_pop), ValidationError);

    const StratumFrame tiny{{{"A", 1}, {"B", 200}}};
    CHECK_THROWS_AS(stratum_estimates(toy_samples(), tiny), ValidationError);

    const std::vector<std::pair<std::string, double>> bad_y{
        {"A", 1.0}, {"A", std::numeric_limits<double>::infinity()}, {"B", 2.0}};
    CHECK_THROWS_AS(stratum_estimates(bad_y, frame), ValidationError);

    CHECK_THROWS_AS(stratum_estimates(toy_samples(), StratumFrame{}), ValidationError);
}

TEST_CASE("sandwich map transfers means and squared-weight variances") {
    const auto est = stratum_estimates(toy_samples(), toy_frame());
    const OverlapSpec overlaps{
        {"r2", "A", 1.0}, {"r1", "B", 0.5}, {"r1", "A", 0.5}};
    const auto mapped = sandwich_map(est, overlaps);
    REQUIRE(mapped.size() == 2);

    CHECK(mapped[0].r == "r1"); // ascending reporting-unit labels
    CHECK(mapped[0].mean == doctest::Approx(7.0).epsilon(1e-15));
    CHECK(mapped[0].variance == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
    REQUIRE(mapped[0].contributors.size() == 2);
    CHECK(mapped[0].contributors[0].h == "A"); // sorted by stratum label
    CHECK(mapped[0].contributors[0].weight == 0.5);
    CHECK(mapped[0].contributors[1].h == "B");
    CHECK(mapped[0].contributors[1].mean == 12.0);

    CHECK(mapped[1].r == "r2");
    CHECK(mapped[1].mean == 2.0);
    CHECK(mapped[1].variance == 1.0);
}

TEST_CASE("equal split of identical strata halves the variance") {
    const std::vector<std::pair<std::string, double>> samples{
        {"A", 0.0}, {"A", 2.0}, {"B", 5.0}, {"B", 7.0}};
    const StratumFrame frame{{{"A", 50}, {"B", 50}}};
    const auto est = stratum_estimates(samples, frame);
    REQUIRE(*est[0].var_of_mean == *est[1].var_of_mean);
    const double v = *est[0].var_of_mean;

    const auto mapped = sandwich_map(est, {{"r", "A", 0.5}, {"r", "B", 0.5}});
    CHECK(mapped[0].variance == doctest::Approx(v / 2.0).epsilon(1e-15));
}

TEST_CASE("overlap weights must sum to one per reporting unit") {
    const auto est = stratum_estimates(toy_samples(), toy_frame());
    CHECK_THROWS_AS(sandwich_map(est, {{"r1", "A", 0.5}, {"r1", "B", 0.4}}),
                    ValidationError);

    // third-of-three roundoff stays inside the tolerance
    const StratumFrame frame{{{"A", 10}, {"B", 10}, {"C", 10}}};
    const std::vector<std::pair<std::string, double>> samples{
        {"A", 1.0}, {"A", 2.0}, {"B", 3.0}, {"B", 4.0}, {"C", 5.0}, {"C", 6.0}};
    const auto est3 = stratum_estimates(samples, frame);
    const double w = 1.0 / 3.0;
    const auto mapped =
        sandwich_map(est3, {{"r", "A", w}, {"r", "B", w}, {"r", "C", w}});
    CHECK(mapped[0].contributors.size() == 3);
}

TEST_CASE("overlap validation") {
    const auto est = stratum_estimates(toy_samples(), toy_frame());
    CHECK_THROWS_AS(sandwich_map(est, {}), ValidationError);
    CHECK_THROWS_AS(sandwich_map(est, {{"r1", "C", 1.0}}), ValidationError);
    CHECK_THROWS_AS(sandwich_map(est, {{"r1", "A", 0.5}, {"r1", "A", 0.5}}),
                    ValidationError);
    CHECK_THROWS_AS(sandwich_map(est, {{"r1", "A", -0.2}, {"r1", "B", 1.2}}),
                    ValidationError);
    CHECK_THROWS_AS(
        sandwich_map(est, {{"r1", "A", std::numeric_limits<double>::quiet_NaN()}}),
        ValidationError);

    const auto dup_est = est;
    auto both = est;
    both.insert(both.end(), dup_est.begin(), dup_est.end());
    CHECK_THROWS_AS(sandwich_map(both, {{"r1", "A", 1.0}}), ValidationError);
}

} // TEST_SUITE
