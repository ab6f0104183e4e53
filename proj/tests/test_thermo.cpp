#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "emr/thermo.hpp"

using namespace emr;

namespace {

const PotentialTable kBern(2, 1, {std::log(2.0), std::log(3.0)});
const PotentialTable kXor(2, 2, {1, 0, 0, 1});

PotentialTable random_table(std::uint64_t seed, int p, int k) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::vector<double> v(ipow(p, k));
    for (double& x : v) x = U(rng);
    return PotentialTable(p, k, v);
}

}  // namespace

TEST_CASE("pressure closed forms") {
    CHECK(pressure(kBern, 0) == doctest::Approx(std::log(2.0)));
    CHECK(pressure(random_table(1, 3, 2), 0) == doctest::Approx(std::log(3.0)));
    CHECK(pressure(kBern, 1) == doctest::Approx(std::log(5.0 / 6)));
    for (double t : {-3.0, -0.5, 0.7, 4.0, 40.0})
        CHECK(pressure(kBern, t) == doctest::Approx(std::log(std::exp(-t * std::log(2.0)) + std::exp(-t * std::log(3.0)))));
    // slope asymptote -chi_inf
    CHECK(pressure(kBern, 60) + 60 * std::log(2.0) == doctest::Approx(0.0).epsilon(1e-9));
    // xor table: spectral radius of [[e^-t, 1],[1, e^-t]] is 1 + e^-t
    for (double t : {0.5, 2.0, 30.0}) CHECK(pressure(kXor, t) == doctest::Approx(std::log1p(std::exp(-t))));
}

TEST_CASE("equilibrium states") {
    EquilibriumMeasure mu = equilibrium(kBern, 0);
    CHECK(mu.P[0] == doctest::Approx(0.5));
    CHECK(entropy(mu) == doctest::Approx(std::log(2.0)));

    mu = equilibrium(kBern, 1);
    auto w = mu.cylinder_weights(1);
    CHECK(w[0] == doctest::Approx(0.6));
    CHECK(w[1] == doctest::Approx(0.4));
    CHECK(integral(mu, kBern) == doctest::Approx(0.6 * std::log(2.0) + 0.4 * std::log(3.0)));
    // Legendre identity P = h - t * int phi
    CHECK(mu.pressure == doctest::Approx(entropy(mu) - integral(mu, kBern)));

    for (std::uint64_t s = 0; s < 10; ++s) {
        PotentialTable phi = random_table(30 + s, 2 + s % 2, 1 + s % 3);
        for (double t : {-2.0, 0.3, 5.0}) {
            EquilibriumMeasure m = equilibrium(phi, t);
            double sum = 0;
            for (double x : m.cylinder_weights(phi.depth())) sum += x;
            CHECK(sum == doctest::Approx(1.0));
            CHECK(m.pressure == doctest::Approx(entropy(m) - t * integral(m, phi)).epsilon(1e-10));
        }
    }
}

TEST_CASE("pressure curve derivative matches the integral") {
    PotentialTable phi = random_table(77, 2, 3);
    auto curve = pressure_curve(phi, linear_grid(-2, 10, 13), 2);
    CHECK(curve.size() == 13);
    for (const auto& s : curve) CHECK(s.dPdt == doctest::Approx(-s.integral).epsilon(1e-6));
    // threads do not change results
    auto one = pressure_curve(phi, linear_grid(-2, 10, 13), 1);
    for (std::size_t i = 0; i < curve.size(); ++i) CHECK(curve[i].P == one[i].P);
}

TEST_CASE("grids") {
    CHECK(linear_grid(0, 1, 3) == std::vector<double>{0, 0.5, 1});
    auto g = default_freeze_grid(60);
    CHECK(g.back() == 60);
    CHECK(g.front() == 1);
}

TEST_CASE("freeze onto the fixed point") {
    FreezeReport r = freeze(kBern, {10, 30, 60});
    CHECK(r.limit.cycle == Word{0});
    CHECK(r.converged);
    CHECK_FALSE(r.degenerate);
    EquilibriumMeasure mu = equilibrium(kBern, 60);
    double mass0 = mu.cylinder_weights(1)[0];
    CHECK(mass0 >= 1 - 1e-6);
    CHECK(mass0 == doctest::Approx(1 / (1 + std::pow(2.0 / 3, 60))));
    CHECK(r.decay_rate == doctest::Approx(std::log(1.5)).epsilon(1e-3));
}

TEST_CASE("freeze onto the period-two orbit") {
    FreezeReport r = freeze(kXor, default_freeze_grid(60));
    CHECK(r.limit.cycle == Word{0, 1});
    CHECK(r.converged);
    auto w = equilibrium(kXor, 60).cylinder_weights(2);
    CHECK(w[1] == doctest::Approx(0.5));
    CHECK(w[2] == doctest::Approx(0.5));
}

TEST_CASE("constant potential is degenerate") {
    FreezeReport r = freeze(PotentialTable::constant(2, 0.4), {1, 10, 50});
    CHECK(r.degenerate);
    CHECK_FALSE(r.converged);
    for (double d : r.deviation) CHECK(d >= 0.2);
    auto w = equilibrium(PotentialTable::constant(2, 0.4), 50).cylinder_weights(2);
    for (double x : w) CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("support, entropy and ergodicity") {
    SupportReport s = markov_support_entropy_report(equilibrium(random_table(5, 2, 2), 3));
    CHECK(s.full_support);
    CHECK(s.positive_entropy);
    CHECK(s.ergodic);

    EquilibriumMeasure frozen = periodic_markov_measure(2, 2, {{0, 1}, 0});
    s = markov_support_entropy_report(frozen);
    CHECK_FALSE(s.full_support);
    CHECK_FALSE(s.positive_entropy);

    // node 0 never leaves itself
    EquilibriumMeasure red = equilibrium(kXor, 1);
    red.P = {1.0, 0.0, 0.5, 0.5};
    red.logP = {0.0, -INFINITY, std::log(0.5), std::log(0.5)};
    red.pi = {1.0, 0.0};
    s = markov_support_entropy_report(red);
    CHECK_FALSE(s.ergodic);
    CHECK_FALSE(s.full_support);
}
