#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"

#include "sshstat/core.hpp"
#include "sshstat/detect.hpp"
#include "sshstat/errors.hpp"
#include "sshstat/qstat.hpp"

using namespace sshstat;

namespace {

Dataset toy_dataset() {
    Dataset d({"u1", "u2", "u3", "u4"}, {1.0, 2.0, 5.0, 6.0});
    d.add_covariate({"region", CovariateKind::categorical, {}, {"A", "A", "B", "B"}});
    d.add_covariate({"xc", CovariateKind::continuous, {0.0, 1.0, 10.0, 11.0}, {}});
    return d;
}

Partition labels_partition(const std::vector<std::string>& labels) {
    std::vector<std::string> ids(labels.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = "u" + std::to_string(i + 1);
    return partition_from_labels(ids, labels);
}

} // namespace

TEST_SUITE("detect") {

TEST_CASE("xor pattern: both factors silent, overlay exact") {
    const std::vector<double> y{0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0};
    const Partition p1 = labels_partition({"a0", "a0", "a1", "a1",
                                           "a0", "a0", "a1", "a1"});
    const Partition p2 = labels_partition({"b0", "b1", "b0", "b1",
                                           "b0", "b1", "b0", "b1"});

    const InteractionResult r = interaction(y, p1, p2);
    CHECK(r.q_x1 == 0.0);
    CHECK(r.q_x2 == 0.0);
    CHECK(r.q_overlay == 1.0);
    CHECK(r.l_overlay == 4);
    CHECK(!r.overlay_saturated);
    CHECK(r.category == InteractionCategory::enhance_nonlinear);
}

TEST_CASE("overlay equal to the stronger factor weakens univariately") {
    const std::vector<double> y{0.0, 0.0, 0.0, 5.0, 5.0, 5.0};
    const Partition p1 = labels_partition({"A", "A", "A", "B", "B", "B"});
    const Partition p2 = labels_partition({"X", "Y", "X", "Y", "X", "Y"});

    const InteractionResult r = interaction(y, p1, p2);
    CHECK(r.q_x1 == 1.0);
    CHECK(r.q_x2 == doctest::Approx((25.0 / 6.0) / 37.5).epsilon(1e-12));
    CHECK(r.q_overlay == 1.0);
    CHECK(r.l_overlay == 4);
    CHECK(r.category == InteractionCategory::weaken_univariate);
}

TEST_CASE("self overlay reproduces the factor and weakens univariately") {
    const std::vector<double> y{1.0, 2.0, 5.0, 6.0};
    const Partition p = labels_partition({"A", "A", "B", "B"});

    const InteractionResult r = interaction(y, p, p);
    CHECK(r.q_x1 == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
    CHECK(r.q_x2 == doctest::Approx(r.q_x1).epsilon(1e-12));
    CHECK(r.q_overlay == r.q_x1); // identical decomposition arithmetic
    CHECK(r.l_overlay == 2);
    CHECK(r.category == InteractionCategory::weaken_univariate);
}

TEST_CASE("balanced additive factors classify as independent") {
    const std::vector<double> y{0.0, 1.0, 2.0, 6.0, 7.0, 8.0};
    const Partition p1 = labels_partition({"A", "A", "A", "B", "B", "B"});
    const Partition p2 = labels_partition({"X", "Y", "Z", "X", "Y", "Z"});

    const InteractionResult r = interaction(y, p1, p2);
    CHECK(r.q_x1 == doctest::Approx(54.0 / 58.0).epsilon(1e-12));
    CHECK(r.q_x2 == doctest::Approx(4.0 / 58.0).epsilon(1e-12));
    CHECK(r.q_overlay == 1.0);
    CHECK(r.category == InteractionCategory::independent);

    // each unit its own overlay stratum: q = 1 by construction
    CHECK(r.l_overlay == 6);
    CHECK(r.overlay_saturated);
}

TEST_CASE("overlay above both factors but below their sum enhances bivariately") {
    const std::vector<double> y{0.0, 0.0, 1.0, 3.0, 4.0, 4.0};
    const Partition p1 = labels_partition({"A", "A", "A", "B", "B", "B"});
    const Partition p2 = labels_partition({"X", "X", "Y", "Y", "Z", "Z"});

    const InteractionResult r = interaction(y, p1, p2);
    CHECK(r.q_x1 == doctest::Approx(50.0 / 54.0).epsilon(1e-12));
    CHECK(r.q_x2 == doctest::Approx(16.0 / 18.0).epsilon(1e-12));
    CHECK(r.q_overlay == 1.0);
    CHECK(r.l_overlay == 4);
    CHECK(!r.overlay_saturated);
    CHECK(r.category == InteractionCategory::enhance_bivariate);
}

TEST_CASE("interaction degenerate and invalid inputs") {
    const Partition p1 = labels_partition({"A", "A", "B", "B"});
    const Partition p2 = labels_partition({"X", "Y", "X", "Y"});
    const std::vector<double> y{1.0, 2.0, 5.0, 6.0};
    const std::vector<double> flat{3.0, 3.0, 3.0, 3.0};

    CHECK_THROWS_AS(interaction(flat, p1, p2), DegenerateDataError);
    CHECK_THROWS_AS(interaction(y, p1, p2, -0.1), ValidationError);

    const InteractionResult r = interaction(y, p1, p2, 0.25);
    CHECK(r.tolerance == 0.25);
}

TEST_CASE("factor_q on a categorical covariate") {
    const Dataset d = toy_dataset();
    const FactorResult r = factor_q(d, "region");

    CHECK(r.name == "region");
    CHECK(r.partition.l() == 2);
    CHECK(r.q == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
    REQUIRE(r.test.has_value());
    CHECK(r.test->p_value == doctest::Approx(0.0298574998547).epsilon(1e-9));
    CHECK(!r.q_x.has_value());
    CHECK(!r.breaks.has_value());
}

TEST_CASE("factor_q discretizes a continuous covariate") {
    const Dataset d = toy_dataset();
    FactorOptions opts;
    opts.method = BreakMethod::quantile;
    opts.l = 2;
    opts.with_qx = true;
    const FactorResult r = factor_q(d, "xc", opts);

    REQUIRE(r.breaks.has_value());
    CHECK(r.breaks->method == BreakMethod::quantile);
    CHECK(r.breaks->breakpoints == std::vector<double>{5.5});
    CHECK(r.partition.sizes() == std::vector<std::size_t>{2, 2});
    CHECK(r.q == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
    REQUIRE(r.q_x.has_value());
    CHECK(*r.q_x == doctest::Approx(100.0 / 101.0).epsilon(1e-12));

    FactorOptions no_qx = opts;
    no_qx.with_qx = false;
    CHECK(!factor_q(d, "xc", no_qx).q_x.has_value());
}

TEST_CASE("descriptive_only suppresses the significance test") {
    const Dataset d = toy_dataset();
    FactorOptions opts;
    opts.descriptive_only = true;
    const FactorResult r = factor_q(d, "region", opts);
    CHECK(!r.test.has_value());
    CHECK(r.q == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
}

TEST_CASE("factor_screen orders by name and matches single calls") {
    const Dataset d = toy_dataset();
    FactorOptions opts;
    opts.l = 2;
    const auto rows = factor_screen(d, {"xc", "region", "xc"}, opts);

    REQUIRE(rows.size() == 2); // duplicates dropped
    CHECK(rows[0].name == "region");
    CHECK(rows[1].name == "xc");
    CHECK(rows[0].q == factor_q(d, "region", opts).q);
    CHECK(rows[1].q == factor_q(d, "xc", opts).q);
}

TEST_CASE("factor_q error paths") {
    Dataset d({"u1", "u2", "u3"}, {1.0, 2.0, 3.0});
    d.add_covariate({"one", CovariateKind::categorical, {}, {"A", "A", "A"}});
    CHECK_THROWS_AS(factor_q(d, "one"), DegenerateDataError);
    CHECK_THROWS_AS(factor_q(d, "missing"), ValidationError);

    FactorOptions bad;
    bad.l = 1;
    Dataset dc({"u1", "u2", "u3"}, {1.0, 2.0, 3.0});
    dc.add_covariate({"x", CovariateKind::continuous, {0.0, 1.0, 2.0}, {}});
    CHECK_THROWS_AS(factor_q(dc, "x", bad), ValidationError);
}

TEST_CASE("factor_partition uses the covariate directly or via breaks") {
    const Dataset d = toy_dataset();
    CHECK(factor_partition(d, "region").strata() ==
          std::vector<std::string>{"A", "B"});

    FactorOptions opts;
    opts.method = BreakMethod::equal_interval;
    opts.l = 2;
    const Partition p = factor_partition(d, "xc", opts);
    CHECK(p.l() == 2);
    CHECK(p.sizes() == std::vector<std::size_t>{2, 2});
}

TEST_CASE("scatter data summarizes strata sorted by mean x") {
    const std::vector<double> y{1.0, 2.0, 5.0, 6.0};
    const std::vector<double> x{10.0, 11.0, 0.0, 1.0};
    const Partition p = labels_partition({"A", "A", "B", "B"});

    const auto pts = scatter_data(y, x, p);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].label == "B");
    CHECK(pts[0].mean_x == 0.5);
    CHECK(pts[0].mean_y == 5.5);
    CHECK(pts[0].size == 2);
    CHECK(pts[0].q_h == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
    CHECK(pts[1].label == "A");
    CHECK(pts[1].mean_x == 10.5);
    CHECK(pts[1].mean_y == 1.5);
    CHECK(pts[1].q_h == doctest::Approx(16.0 / 17.0).epsilon(1e-12));
}

TEST_CASE("scatter data validates lengths and variance") {
    const Partition p = labels_partition({"A", "A", "B", "B"});
    const std::vector<double> y{1.0, 2.0, 5.0, 6.0};
    const std::vector<double> x3{0.0, 1.0, 2.0};
    const std::vector<double> x4{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> flat{2.0, 2.0, 2.0, 2.0};
    CHECK_THROWS_AS(scatter_data(y, x3, p), ValidationError);
    CHECK_THROWS_AS(scatter_data(flat, x4, p), DegenerateDataError);
}

} // TEST_SUITE
