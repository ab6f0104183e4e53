#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "emr/interval_maps.hpp"

using namespace emr;

namespace {

MarkovPartition std_partition() { return MarkovPartition({0.0, 0.55}, {0.45, 1.0}); }

PiecewiseMap std_map() { return PiecewiseMap::linear(std_partition()); }

// branch 0 has slope 1.2 near the fixed point 0, so products over the
// cylinders 0^n first reach 2 at n = 4
PiecewiseMap slow_fixed_point_map() {
    double s = (1.0 - 0.24) / 0.25;
    return PiecewiseMap(std_partition(), {Piece::linear(0.0, 0.2, 0.0, 1.2), Piece::linear(0.2, 0.45, 0.24, s),
                                          Piece::linear(0.55, 1.0, 0.0, 1.0 / 0.45)});
}

}  // namespace

TEST_CASE("partition validation") {
    CHECK_THROWS_AS(MarkovPartition({0.0, 0.4}, {0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(MarkovPartition({0.1, 0.55}, {0.45, 1.0}), DomainError);
    CHECK_THROWS_AS(MarkovPartition({0.0}, {1.0}), DomainError);
}

TEST_CASE("map validation") {
    auto part = std_partition();
    // not onto
    CHECK_THROWS_AS(PiecewiseMap(part, {Piece::linear(0.0, 0.45, 0.0, 2.0), Piece::linear(0.55, 1.0, 0.0, 1.0 / 0.45)}),
                    DomainError);
    // discontinuous inside a branch
    CHECK_THROWS_AS(PiecewiseMap(part, {Piece::linear(0.0, 0.2, 0.0, 2.0), Piece::linear(0.2, 0.45, 0.5, 2.0),
                                        Piece::linear(0.55, 1.0, 0.0, 1.0 / 0.45)}),
                    DomainError);
}

TEST_CASE("eval and deriv") {
    PiecewiseMap f = std_map();
    CHECK(f.eval(0.45) == doctest::Approx(1.0));
    CHECK(f.deriv(0.45) == doctest::Approx(1 / 0.45));
    CHECK(f.branch_of(0.5) == -1);
    CHECK_THROWS_AS(f.eval(0.5), DomainError);

    auto flat = SmoothingPiece::make(0.0, 0.1, 2, 2, 2, 0.0, 1);
    CHECK(flat.value(0.05) == doctest::Approx(0.1));
    CHECK(flat.deriv(0.03) == doctest::Approx(2.0));
    CHECK(flat.deriv(0.08) == doctest::Approx(2.0));

    auto sp = SmoothingPiece::make(0.0, 1.0, 2, 4, 3, 0.0, 1);
    CHECK(sp.value(1.0) == doctest::Approx(3.0));
    CHECK(sp.deriv(0.5) == doctest::Approx(3.0));
    CHECK(sp.deriv(0.0) == 2.0);
    CHECK(sp.deriv(1.0) == 4.0);
    CHECK(sp.invert_integral(sp.integral(0.3)) == doctest::Approx(0.3));
}

TEST_CASE("cylinder tree of the linear map") {
    PiecewiseMap f = std_map();
    CylinderTree t = cylinder_tree(f, 2);
    CHECK(t.cylinder({0}).l == 0.0);
    CHECK(t.cylinder({0}).r == doctest::Approx(0.45));
    CHECK(t.cylinder({1}).l == doctest::Approx(0.55));
    CHECK(t.cylinder({0, 0}).r == doctest::Approx(0.2025));
    CHECK(t.gap_of({0}, 1).l == doctest::Approx(0.2025));
    CHECK(t.gap_of({0}, 1).r == doctest::Approx(0.2475));
    CHECK(t.gap_ratio({}, 1) == doctest::Approx(9.0));
    CHECK(t.gap_ratio({0}, 1) == doctest::Approx(9.0));
    CHECK(t.max_gap_ratio() == doctest::Approx(9.0));
    CHECK_FALSE(cylinder_tree_csv(t).empty());
}

TEST_CASE("certificates of the linear map") {
    PiecewiseMap f = std_map();
    ExpansionCertificate e = expansion_certificate(f, 8);
    CHECK(e.N0 == 1);
    CHECK(e.lambda0 == 2.0);
    CHECK(e.c0 == 1.0);
    CHECK(e.verified);
    DistortionCertificate d = distortion_certificate(f, 8);
    CHECK(d.M0 == doctest::Approx(1.0));
    CHECK(d.K == doctest::Approx(9.0));
}

TEST_CASE("expansion needs several steps near a slow fixed point") {
    ExpansionCertificate e = expansion_certificate(slow_fixed_point_map(), 10);
    CHECK(e.N0 == 4);
    CHECK(e.lambda0 == doctest::Approx(std::pow(2.0, 0.25)));
}

TEST_CASE("non-expanding fixed point is rejected") {
    double s = (1.0 - 0.15) / 0.15;
    PiecewiseMap f(std_partition(), {Piece::linear(0.0, 0.3, 0.0, 0.5), Piece::linear(0.3, 0.45, 0.15, s),
                                     Piece::linear(0.55, 1.0, 0.0, 1.0 / 0.45)});
    CHECK_THROWS_AS(expansion_certificate(f, 10), DomainError);
}

TEST_CASE("coding") {
    PiecewiseMap f = std_map();
    CHECK(encode(f, 0.0, 6) == Word(6, 0));
    // period-2 point of 01: x = 0.45 * (0.55 + 0.45 x)
    double x = 0.45 * 0.55 / (1 - 0.45 * 0.45);
    CHECK(periodic_point(f, {0, 1}) == doctest::Approx(x));
    CHECK(encode(f, x, 6) == Word{0, 1, 0, 1, 0, 1});
    Interval I = decode(f, {0, 1, 1});
    CHECK(encode(f, I.mid(), 3) == Word{0, 1, 1});
    CHECK(decode_to_precision(f, {0, 1, 0, 1, 0, 1, 0, 1}, 0.01).len() < 0.01);

    CodingCheck c = coding_lipschitz_check(f, 0.5, 2000);
    CHECK(c.ok);
    CHECK(c.worst_ratio <= 1.0);
    CHECK_THROWS_AS(coding_lipschitz_check(f, 0.3, 10), DomainError);
}

TEST_CASE("c1 distance") {
    PiecewiseMap f = std_map();
    CHECK(c1_distance(f, f) == 0.0);
    // same partition, branch 0 split at 0.2 with slopes s + 0.05 and s - 0.04
    double s = 1 / 0.45, a = s + 0.05, b = s - 0.04;
    PiecewiseMap g(std_partition(), {Piece::linear(0.0, 0.2, 0.0, a), Piece::linear(0.2, 0.45, 0.2 * a, b),
                                     Piece::linear(0.55, 1.0, 0.0, s)});
    C1Parts d = c1_distance_parts(f, g);
    CHECK(d.value == doctest::Approx(0.01));
    CHECK(d.deriv == doctest::Approx(0.05));
    CHECK(c1_distance(f, g) == doctest::Approx(0.06));
    CHECK_THROWS_AS(c1_distance(f, PiecewiseMap::linear(MarkovPartition({0.0, 0.5}, {0.4, 1.0}))), DomainError);
}

TEST_CASE("perturbation validation") {
    PiecewiseMap f = std_map();
    double s = 1 / 0.45, a = s + 0.05, b = s - 0.04;
    PiecewiseMap g(std_partition(), {Piece::linear(0.0, 0.2, 0.0, a), Piece::linear(0.2, 0.45, 0.2 * a, b),
                                     Piece::linear(0.55, 1.0, 0.0, s)});
    CHECK(validate_perturbation(f, g, 0.1, 8));
    CHECK_FALSE(validate_perturbation(f, g, 0.01, 8));
}

TEST_CASE("orientation reversing branch") {
    PiecewiseMap f = PiecewiseMap::linear(std_partition(), {1, -1});
    CHECK(f.eval(0.55) == doctest::Approx(1.0));
    CHECK(f.eval(1.0) == doctest::Approx(0.0));
    CylinderTree t = cylinder_tree(f, 2);
    // branch 1 reverses order: X_10 is the right end of X_1
    CHECK(t.cylinder({1, 0}).r == doctest::Approx(1.0));
    CHECK(expansion_certificate(f, 6).N0 == 1);
}
