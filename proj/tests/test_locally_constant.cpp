#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "emr/locally_constant.hpp"

using namespace emr;

namespace {

PiecewiseMap std_map() { return PiecewiseMap::linear(MarkovPartition({0.0, 0.55}, {0.45, 1.0})); }

// branch 0 is one smoothing piece, so |Df| is not constant on any cylinder
PiecewiseMap smooth_map() {
    auto sp = SmoothingPiece::make(0.0, 0.45, 2.0, 2.6, 1 / 0.45, 0.0, 1);
    return PiecewiseMap(MarkovPartition({0.0, 0.55}, {0.45, 1.0}),
                        {Piece::smoothing(0.0, 0.45, sp), Piece::linear(0.55, 1.0, 0.0, 1 / 0.45)});
}

}  // namespace

TEST_CASE("linear map is already locally constant") {
    LcApprox a = approximate_lc(std_map(), 0.05);
    CHECK(a.report.already_lc);
    CHECK(a.report.n == 1);
    CHECK(a.report.distance == 0.0);
    CHECK(c1_distance(std_map(), a.map) == 0.0);
}

TEST_CASE("smooth map is approximated within eps") {
    PiecewiseMap f0 = smooth_map();
    CHECK(constancy_depth(f0) == -1);
    LcApprox a = approximate_lc(f0, 0.05);
    CHECK_FALSE(a.report.already_lc);
    CHECK(a.report.distance <= 0.05);
    CHECK(c1_distance(f0, a.map) == doctest::Approx(a.report.distance));
    CHECK(a.report.expanding);
    int d = constancy_depth(a.map, 16);
    CHECK(d > 0);
    CHECK(d <= a.report.constancy_depth);
    CHECK(a.map.is_c1(1e-9));
}

TEST_CASE("too many cylinders is inadmissible") {
    CHECK_THROWS(approximate_lc(smooth_map(), 1e-9, 6));
}

TEST_CASE("lipschitz precheck") {
    PiecewiseMap f0 = std_map();
    PotentialTable phi(2, 2, {0.8, 0.81, 0.79, 0.8});
    LipschitzPrecheck r = lipschitz_realization_precheck(f0, phi, 0.4, 0.05);
    CHECK(r.theta_max == doctest::Approx(1 / (1 / 0.45 + 0.05)));
    CHECK(r.theta_max == doctest::Approx(0.4401).epsilon(1e-4));
    CHECK(r.min_hole == doctest::Approx(0.1));
    CHECK(r.K == doctest::Approx(9.0));
    CHECK(r.L > 0);
    CHECK(std::isfinite(r.lipschitz_bound));
    CHECK(r.lipschitz_derivative);
    for (std::size_t n = 1; n < r.gap_lower_bound.size(); ++n)
        CHECK(r.gap_lower_bound[n] <= r.gap_lower_bound[n - 1]);

    CHECK_THROWS_AS(lipschitz_realization_precheck(f0, phi, 0.5, 0.05), DomainError);
    CHECK_THROWS_AS(lipschitz_realization_precheck(f0, phi, 0.0, 0.05), DomainError);
    CHECK_THROWS_AS(lipschitz_realization_precheck(smooth_map(), phi, 0.4, 0.05), DomainError);

    LipschitzPrecheck c = lipschitz_realization_precheck(f0, PotentialTable::constant(2, 0.8), 0.4, 0.05);
    CHECK(c.L == 0.0);
}

TEST_CASE("derivative lipschitz scan") {
    DerivativeLipschitzScan s = derivative_lipschitz_scan(std_map());
    CHECK(s.constant == 0.0);
    CHECK(s.max_jump == 0.0);
    s = derivative_lipschitz_scan(smooth_map());
    CHECK(s.constant > 0);
    CHECK(s.max_jump <= 1e-9);
}
