#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"

#include "dp_oracle.hpp"
#include "sshstat/errors.hpp"
#include "sshstat/qstat.hpp"
#include "sshstat/rng.hpp"
#include "sshstat/stratify.hpp"
#include "test_support.hpp"

using namespace sshstat;

namespace {

std::vector<double> iota_x(std::size_t n) {
    std::vector<double> x(n);
    std::iota(x.begin(), x.end(), 0.0);
    return x;
}

} // namespace

TEST_SUITE("stratify") {

TEST_CASE("equal interval splits the range into even bins") {
    const auto ids = testsup::make_ids(10);
    const auto x = iota_x(10);
    const BreaksResult r = discretize_equal_interval(ids, x, 5);

    CHECK(r.method == BreakMethod::equal_interval);
    CHECK(r.l == 5);
    CHECK(!r.q.has_value());
    CHECK(r.warnings.empty());
    REQUIRE(r.breakpoints.size() == 4);
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(r.breakpoints[k] == doctest::Approx(1.8 * static_cast<double>(k + 1))
                                      .epsilon(1e-12));

    REQUIRE(r.partition.l() == 5);
    for (std::size_t h = 0; h < 5; ++h) CHECK(r.partition.sizes()[h] == 2);
    CHECK(r.partition.strata()[0] == "[0,1.8)");
    CHECK(r.partition.strata()[1] == "[1.8,3.6)");
    CHECK(r.partition.strata()[4] == "[7.2,9]");
}

TEST_CASE("value equal to a cut joins the right stratum") {
    const auto ids = testsup::make_ids(3);
    const std::vector<double> x{0.0, 5.0, 10.0};
    const BreaksResult r = discretize_equal_interval(ids, x, 2);

    REQUIRE(r.breakpoints == std::vector<double>{5.0});
    CHECK(r.partition.sizes() == std::vector<std::size_t>{1, 2});
    CHECK(r.partition.label_of(1) == "[5,10]");
}

TEST_CASE("empty equal-interval bins merge rightward with a warning") {
    const auto ids = testsup::make_ids(4);
    const std::vector<double> x{0.0, 1.0, 9.0, 10.0};
    const BreaksResult r = discretize_equal_interval(ids, x, 5);

    CHECK(r.l == 2);
    REQUIRE(r.breakpoints == std::vector<double>{2.0});
    CHECK(r.partition.sizes() == std::vector<std::size_t>{2, 2});
    CHECK(r.partition.strata()[0] == "[0,2)");
    CHECK(r.partition.strata()[1] == "[2,10]");
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("reduced from 5 to 2") != std::string::npos);
}

TEST_CASE("quantile cuts deduplicate under heavy ties") {
    const auto ids = testsup::make_ids(4);
    const std::vector<double> x{1.0, 1.0, 1.0, 2.0};
    const BreaksResult r = discretize_quantile(ids, x, 4);

    CHECK(r.method == BreakMethod::quantile);
    CHECK(r.l == 2);
    REQUIRE(r.breakpoints == std::vector<double>{1.25});
    CHECK(r.partition.sizes() == std::vector<std::size_t>{3, 1});
    CHECK(r.partition.strata()[0] == "[1,1.25)");
    CHECK(r.partition.strata()[1] == "[1.25,2]");
    CHECK(!r.warnings.empty());
}

TEST_CASE("quantile spread without a usable cut throws") {
    const auto ids = testsup::make_ids(5);
    const std::vector<double> x{1.0, 1.0, 1.0, 1.0, 2.0};
    CHECK_THROWS_AS(discretize_quantile(ids, x, 2), DegenerateDataError);
}

TEST_CASE("quantile uses type-7 interpolation") {
    const auto ids = testsup::make_ids(10);
    const auto x = iota_x(10);
    const BreaksResult r = discretize_quantile(ids, x, 4);

    REQUIRE(r.breakpoints.size() == 3);
    CHECK(r.breakpoints[0] == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(r.breakpoints[1] == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(r.breakpoints[2] == doctest::Approx(6.75).epsilon(1e-12));
    CHECK(r.partition.sizes() == std::vector<std::size_t>{3, 2, 2, 3});
}

TEST_CASE("constant x cannot be discretized") {
    const auto ids = testsup::make_ids(4);
    const std::vector<double> x{3.0, 3.0, 3.0, 3.0};
    CHECK_THROWS_AS(discretize_equal_interval(ids, x, 2), DegenerateDataError);
    CHECK_THROWS_AS(discretize_quantile(ids, x, 2), DegenerateDataError);
}

TEST_CASE("discretizer input validation") {
    const auto ids = testsup::make_ids(4);
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    CHECK_THROWS_AS(discretize_equal_interval(ids, x, 1), ValidationError);
    CHECK_THROWS_AS(discretize_quantile(ids, x, 0), ValidationError);
    CHECK_THROWS_AS(discretize_equal_interval({}, {}, 2), ValidationError);
    CHECK_THROWS_AS(discretize_equal_interval(testsup::make_ids(3), x, 2),
                    ValidationError);

    std::vector<double> bad = x;
    bad[2] = std::nan("");
    CHECK_THROWS_AS(discretize_quantile(ids, bad, 2), ValidationError);
}

TEST_CASE("optimal breaks recover a noise-free staircase exactly") {
    const std::size_t n = 30;
    const auto ids = testsup::make_ids(n);
    const auto x = iota_x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = i < 10 ? 0.0 : (i < 20 ? 5.0 : 9.0);

    const BreaksResult r = optimal_breaks(ids, y, x, 3);
    CHECK(r.method == BreakMethod::optimal_dp);
    REQUIRE(r.breakpoints == std::vector<double>{10.0, 20.0});
    REQUIRE(r.q.has_value());
    CHECK(*r.q == 1.0);
    CHECK(r.partition.sizes() == std::vector<std::size_t>{10, 10, 10});
    CHECK(r.warnings.empty());
}

TEST_CASE("optimal breaks match the exhaustive oracle bitwise") {
    Rng rng(20260816);
    int done = 0;
    while (done < 40) {
        const std::size_t n = 4 + rng.below(11); // 4..14
        const std::size_t l = 2 + rng.below(3);  // 2..4
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.below(6)); // heavy ties
            y[i] = rng.normal();
        }
        const auto ids = testsup::make_ids(n);

        dporacle::SplitResult want;
        try {
            want = dporacle::best_split(y, x, l);
        } catch (const std::invalid_argument&) {
            continue; // fewer distinct blocks than strata: not a valid instance
        }
        const BreaksResult got = optimal_breaks(ids, y, x, l);

        REQUIRE(got.q.has_value());
        CHECK(*got.q == want.q);
        CHECK(got.breakpoints == want.breakpoints);
        CHECK(got.l == l);
        CHECK(got.partition.l() == l);
        ++done;
    }
}

TEST_CASE("cost ties resolve to the lexicographically smallest cuts") {
    const auto ids = testsup::make_ids(4);
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y{0.0, 1.0, 1.0, 0.0};

    // splitting after the first or before the last block costs the same
    const BreaksResult r = optimal_breaks(ids, y, x, 2);
    REQUIRE(r.breakpoints == std::vector<double>{2.0});

    const dporacle::SplitResult want = dporacle::best_split(y, x, 2);
    CHECK(*r.q == want.q);
    CHECK(r.breakpoints == want.breakpoints);
}

TEST_CASE("optimal q never decreases as l grows") {
    Rng rng(7711);
    const std::size_t n = 18;
    const auto ids = testsup::make_ids(n);
    const auto x = iota_x(n);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = 0.4 * static_cast<double>(i / 6) + rng.normal();

    double prev = -1.0;
    for (std::size_t l = 2; l <= 6; ++l) {
        const BreaksResult r = optimal_breaks(ids, y, x, l);
        CHECK(*r.q >= prev - 1e-12);
        prev = *r.q;
    }
}

TEST_CASE("optimal breaks degenerate and invalid inputs") {
    const auto ids = testsup::make_ids(4);
    const std::vector<double> x{1.0, 1.0, 2.0, 2.0};
    const std::vector<double> y{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> flat{0.5, 0.5, 0.5, 0.5};
    const std::vector<double> short_y{1.0, 2.0};
    CHECK_THROWS_AS(optimal_breaks(ids, y, x, 3), DegenerateDataError); // 2 blocks
    CHECK_THROWS_AS(optimal_breaks(ids, flat, x, 2), DegenerateDataError);
    CHECK_THROWS_AS(optimal_breaks(ids, short_y, x, 2), ValidationError);
}

TEST_CASE("scan reports per-l fits and picks the first significant l") {
    const auto ids = testsup::make_ids(6);
    const std::vector<double> y{0.0, 0.0, 1.0, 1.0, 2.0, 2.0};
    const std::vector<double> x{1.0, 1.0, 2.0, 2.0, 3.0, 3.0};

    const ScanResult s = scan_l(ids, y, x, 2, 3, 0.05, false);
    REQUIRE(s.rows.size() == 2);
    REQUIRE(s.fits.size() == 2);
    CHECK(s.alpha == 0.05);
    CHECK(!s.increment_rule);
    CHECK(s.note.find("uncorrected") != std::string::npos);

    CHECK(s.rows[0].l == 2);
    CHECK(s.rows[0].q == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(s.rows[0].p_value > 0.0);
    CHECK(s.rows[0].p_value < 0.05);
    CHECK(!s.rows[0].delta_q.has_value());

    CHECK(s.rows[1].l == 3);
    CHECK(s.rows[1].q == 1.0);
    CHECK(s.rows[1].p_value == 0.0); // zero SSW with df to spare
    CHECK(*s.rows[1].delta_q == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(s.fits[1].breakpoints == std::vector<double>{2.0, 3.0});

    REQUIRE(s.selected_l.has_value());
    CHECK(*s.selected_l == 2);

    // a stricter alpha rejects l=2 and falls through to the exact fit
    const ScanResult strict = scan_l(ids, y, x, 2, 3, 0.01, false);
    REQUIRE(strict.selected_l.has_value());
    CHECK(*strict.selected_l == 3);
}

TEST_CASE("increment rule keeps scanning while gains accelerate") {
    const auto ids = testsup::make_ids(12);
    const std::vector<double> x{1.0, 1.0, 1.0, 2.0, 2.0, 2.0,
                                3.0, 3.0, 3.0, 4.0, 4.0, 4.0};
    const std::vector<double> y{0.0, 0.0, 0.0, 5.0, 5.0, 5.0,
                                1.0, 1.0, 1.0, 6.0, 6.0, 6.0};

    const ScanResult plain = scan_l(ids, y, x, 2, 4, 0.01, false);
    REQUIRE(plain.rows.size() == 3);
    CHECK(plain.rows[0].p_value >= 0.01); // l=2 split is too weak
    CHECK(plain.rows[1].p_value < 0.01);
    REQUIRE(plain.selected_l.has_value());
    CHECK(*plain.selected_l == 3);

    // delta q grows from l=3 to l=4, so the rule rejects l=3
    CHECK(*plain.rows[2].delta_q >= *plain.rows[1].delta_q);
    const ScanResult ruled = scan_l(ids, y, x, 2, 4, 0.01, true);
    REQUIRE(ruled.selected_l.has_value());
    CHECK(*ruled.selected_l == 4);
}

TEST_CASE("scan leaves selection empty when nothing is significant") {
    const auto ids = testsup::make_ids(8);
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0};
    const std::vector<double> y{0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0};

    const ScanResult s = scan_l(ids, y, x, 2, 3, 1e-6, false);
    CHECK(!s.selected_l.has_value());
    for (const auto& row : s.rows) CHECK(row.p_value >= 1e-6);
}

TEST_CASE("scan propagates saturated fits as degenerate") {
    const auto ids = testsup::make_ids(2);
    const std::vector<double> v{0.0, 1.0};
    CHECK_THROWS_AS(scan_l(ids, v, v, 2, 2, 0.05, false), DegenerateDataError);
}

TEST_CASE("scan range and alpha validation") {
    const auto ids = testsup::make_ids(6);
    const std::vector<double> y{0.0, 0.0, 1.0, 1.0, 2.0, 2.0};
    const std::vector<double> x{1.0, 1.0, 2.0, 2.0, 3.0, 3.0};
    CHECK_THROWS_AS(scan_l(ids, y, x, 1, 3, 0.05, false), ValidationError);
    CHECK_THROWS_AS(scan_l(ids, y, x, 3, 2, 0.05, false), ValidationError);
    CHECK_THROWS_AS(scan_l(ids, y, x, 2, 3, 0.0, false), ValidationError);
    CHECK_THROWS_AS(scan_l(ids, y, x, 2, 3, 1.0, false), ValidationError);
}

} // TEST_SUITE
