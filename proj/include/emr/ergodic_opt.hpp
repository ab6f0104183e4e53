#pragma once

#include <cstdint>
#include <vector>

#include "emr/interval_maps.hpp"
#include "emr/symbolic.hpp"

namespace emr {

// Nodes are words of length k-1 (one empty node when k = 1). The edge
// leaving node u with symbol c carries the depth-k word u*p+c and ends at
// its last k-1 symbols.
struct WeightedWordGraph {
    int p = 0, k = 0;
    std::uint64_t nodes = 0;
    std::vector<double> weight;  // indexed by edge word

    explicit WeightedWordGraph(const PotentialTable& phi);
    std::uint64_t edges() const { return nodes * p; }
    std::uint64_t source(std::uint64_t e) const { return e / p; }
    std::uint64_t target(std::uint64_t e) const { return e % nodes; }
};

struct PeriodicOrbitMeasure {
    Word cycle;  // lexicographically least rotation, primitive
    double mean = 0;

    // weight of every depth-m cylinder (lexicographic index)
    std::vector<double> cylinder_weights(int p, int m) const;
    bool is_invariant(int p, int m, double tol = 1e-14) const;
};

struct OptimizationResult {
    double chi_inf = 0, chi_sup = 0;
    PeriodicOrbitMeasure argmin, argmax;
    double karp_inf = 0, karp_sup = 0;  // raw Karp values before cycle extraction
};

// windows of the periodic word cycle^infinity at each of its q shifts
double cycle_mean(const PotentialTable& phi, const Word& cycle);
bool is_lyndon(const Word& w);
Word least_rotation(const Word& w);

double karp_min_mean(const WeightedWordGraph& g);
double howard_min_mean(const WeightedWordGraph& g);

OptimizationResult chi_extrema(const PotentialTable& phi, bool use_howard = false);
OptimizationResult brute_force_extrema(const PotentialTable& phi, int max_period, std::uint64_t budget = 20000000);

struct SubAction {
    std::vector<double> u;  // on nodes, min u = 0
    double chi_inf = 0;
    int iterations = 0;
    double min_residual = 0;
    bool coboundary = false;  // every edge residual vanishes
};

SubAction subaction(const PotentialTable& phi);
SubAction subaction(const PotentialTable& phi, double chi_inf);
// phi(e) + u(source) - u(target) - chi_inf on every edge
std::vector<double> edge_residuals(const PotentialTable& phi, const SubAction& s);

// chi_inf < chi_sup, the cycle means are not all equal
bool cohomology_gap(const PotentialTable& phi);

// the minimizing cycle is the only cycle on which the calibrated residuals vanish
bool argmin_unique(const PotentialTable& phi, double tol = 1e-9);

double lyapunov_exponent(const PiecewiseMap& f, const PeriodicOrbitMeasure& orbit);

}  // namespace emr
