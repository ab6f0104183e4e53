#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "emr/symbolic.hpp"

using namespace emr;

namespace {

PotentialTable random_table(std::mt19937_64& rng, int p, int k) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(ipow(p, k));
    for (double& x : v) x = U(rng);
    return PotentialTable(p, k, v);
}

}  // namespace

TEST_CASE("word helpers") {
    CHECK(word_index({1, 0, 1}, 2) == 5);
    CHECK(word_from_index(5, 2, 3) == Word{1, 0, 1});
    CHECK(word_string({0, 1, 2}) == "012");
    CHECK(parse_word("0110", 2) == Word{0, 1, 1, 0});
    CHECK_THROWS_AS(parse_word("012", 2), DomainError);
    CHECK(all_words(3, 2).size() == 9);
    CHECK(all_words(2, 2)[2] == Word{1, 0});
}

TEST_CASE("potential table validation") {
    CHECK_THROWS_AS(PotentialTable(2, 2, {0.0, 1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(PotentialTable(2, 1, {0.0, NAN}), DomainError);
    PotentialTable phi(2, 2, {0, 1, 2, 3});
    CHECK(phi({1, 0, 1, 1}) == 2);  // prefix 10
    PotentialTable r = phi.refine(3);
    CHECK(r.depth() == 3);
    CHECK(r({1, 1, 0}) == 3);
}

TEST_CASE("cylinder_stats examples") {
    PotentialTable phi(2, 1, {std::log(2.0), std::log(3.0)});
    CylinderStats s = cylinder_stats(phi, {0});
    CHECK(s.E == doctest::Approx(2.0));
    CHECK(s.F == doctest::Approx(2.0));
    CHECK(s.V == 0.0);
    s = cylinder_stats(phi, {1});
    CHECK(s.E == doctest::Approx(3.0));
    CHECK(s.V == 0.0);
    CHECK_THROWS_AS(cylinder_stats(phi, {}), DomainError);
    CHECK_THROWS_AS(cylinder_stats(phi, {2}), DomainError);

    PotentialTable psi(2, 2, {0, 1, 1, 0});
    s = cylinder_stats(psi, {0});
    CHECK(s.E == doctest::Approx(1.0));
    CHECK(s.F == doctest::Approx(std::exp(1.0)));
    CHECK(s.V == doctest::Approx(std::exp(1.0) - 1));
}

TEST_CASE("cylinder_stats monotone under extension, V = 0 past the depth") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        PotentialTable phi = random_table(rng, 2 + trial % 2, 3);
        for (const Word& w : all_words(phi.p(), 2))
            for (int c = 0; c < phi.p(); ++c) {
                Word x = w;
                x.push_back(c);
                CylinderStats a = cylinder_stats(phi, w), b = cylinder_stats(phi, x);
                CHECK(b.E >= a.E);
                CHECK(b.F <= a.F);
                CHECK(b.V <= a.V);
                CHECK(b.V == 0.0);
            }
    }
}

TEST_CASE("sup_abs examples") {
    PotentialTable phi(2, 1, {std::log(2.0), std::log(3.0)});
    CHECK(sup_abs(phi) == doctest::Approx(std::log(3.0)));
    CHECK(sup_abs(PotentialTable::constant(2, 0.0)) == 0.0);
    PotentialTable psi(2, 1, {std::log(2.0), std::log(2.0)});
    CHECK(sup_abs_exp_diff(phi, psi) == doctest::Approx(1.0));
}

TEST_CASE("variation inequality holds for random pairs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        int p = 2 + trial % 2;
        PotentialTable a = random_table(rng, p, 1 + trial % 3), b = random_table(rng, p, 1 + (trial / 3) % 3);
        for (int n = 1; n <= 3; ++n)
            for (const Word& w : all_words(p, n)) CHECK(variation_inequality_check(a, b, w));
        CHECK(variation_inequality_check(a, a, {0}));
    }
    CHECK_THROWS_AS(variation_inequality_check(PotentialTable::constant(2, 0), PotentialTable::constant(3, 0), {0}),
                    DomainError);
}

TEST_CASE("theta distance") {
    ThetaMetric m(0.5);
    CHECK(theta_distance(m, {0, 1, 1}, {0, 1, 1}) == 0.0);
    CHECK(theta_distance(m, {0, 1, 1, 0}, {0, 1, 0, 0}) == doctest::Approx(0.25));
    CHECK(theta_distance(m, {0, 1}, {1, 1}) == 1.0);
    CHECK_THROWS_AS(ThetaMetric(1.0), DomainError);
    // ultrametric
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> bit(0, 1);
    for (int t = 0; t < 500; ++t) {
        Word a(8), b(8), c(8);
        for (int i = 0; i < 8; ++i) a[i] = bit(rng), b[i] = bit(rng), c[i] = bit(rng);
        CHECK(theta_distance(m, a, c) <= std::max(theta_distance(m, a, b), theta_distance(m, b, c)));
    }
}

TEST_CASE("lipschitz constant examples") {
    ThetaMetric m(0.5);
    CHECK(lipschitz_constant(PotentialTable::constant(2, 3.0), m) == 0.0);
    CHECK(lipschitz_constant(PotentialTable(2, 1, {0, 1}), m) == doctest::Approx(1.0));
    CHECK(lipschitz_constant(PotentialTable(2, 2, {0, 1, 0, 0}), m) == doctest::Approx(2.0));
}

TEST_CASE("snapshot of a general potential") {
    // phi(x) = sum_j 2^{-j} x_j, modulus 2^{1-k}
    auto rep = [](const Word& w) {
        double s = 0;
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * std::ldexp(1.0, -int(j));
        return s;
    };
    Snapshot s = snapshot(2, 4, rep, [](int k) { return std::ldexp(1.0, 1 - k); });
    CHECK(s.table.depth() == 4);
    CHECK(s.table({1, 1, 1, 1}) == doctest::Approx(1.875));
    CHECK(s.tail_variation > 0);
}
