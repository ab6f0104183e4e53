#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emr/ergodic_opt.hpp"
#include "emr/symbolic.hpp"

namespace emr {

// Perron data of the transfer matrix exp(-t phi) on the word graph, computed
// on the conjugate exp(-s * residual) with s = |t| and the calibrated
// residuals of +-phi, whose entries lie in (0, 1].
struct TransferMatrix {
    int p = 0, k = 0;
    std::uint64_t nodes = 0;
    double t = 0;
    double shift = 0;            // log rho(exp(-t phi)) = log rho_scaled + shift
    std::vector<double> log_entry;  // per edge word, scaled entries
    std::vector<double> weight;     // phi per edge word

    TransferMatrix(const PotentialTable& phi, double t);
    TransferMatrix(const PotentialTable& phi, double t, const SubAction& plus, const SubAction& minus);
};

struct EquilibriumMeasure {
    int p = 0, k = 0;
    std::uint64_t nodes = 0;
    double t = 0;
    double pressure = 0;
    std::vector<double> P;     // per edge word: transition source -> target
    std::vector<double> logP;  // per edge word
    std::vector<double> pi;    // per node

    // measure of every depth-m cylinder (lexicographic index)
    std::vector<double> cylinder_weights(int m) const;
};

struct PerronData {
    double log_rho = 0;
    std::vector<double> right, left;  // positive, right normalized to max 1, left to <left,right> = 1
    int iterations = 0;
};

PerronData perron(const TransferMatrix& M, double rel_tol = 1e-13, int max_iter = 1000000);

double pressure(const PotentialTable& phi, double t);
EquilibriumMeasure equilibrium(const PotentialTable& phi, double t);
EquilibriumMeasure equilibrium(const TransferMatrix& M);

double entropy(const EquilibriumMeasure& mu);
double integral(const EquilibriumMeasure& mu, const PotentialTable& phi);

// Markov chain supported on a periodic orbit; transitions off the orbit are uniform
EquilibriumMeasure periodic_markov_measure(int p, int k, const PeriodicOrbitMeasure& orbit);

struct PressureSample {
    double t = 0, P = 0, dPdt = 0, integral = 0, entropy = 0;
};

// dPdt by central differences with step h
std::vector<PressureSample> pressure_curve(const PotentialTable& phi, const std::vector<double>& ts, int threads = 1,
                                           double h = 1e-3);
std::vector<double> linear_grid(double a, double b, int n);
std::vector<double> default_freeze_grid(double tmax);

struct FreezeReport {
    std::vector<PressureSample> curve;
    std::vector<double> deviation;  // sup over depth-k cylinders of |mu_t - nu| per sample
    PeriodicOrbitMeasure limit;     // argmin orbit
    double t_max = 0;
    double final_deviation = 0;
    double decay_rate = 0, decay_intercept = 0;  // log deviation ~ intercept - rate * t
    double max_legendre_error = 0;
    double max_derivative_error = 0;  // |dPdt + integral|
    bool degenerate = false;          // chi_inf == chi_sup
    bool converged = false;
    std::string status;
};

FreezeReport freeze(const PotentialTable& phi, const std::vector<double>& ts, int threads = 1, double tol = 1e-5);

struct SupportReport {
    bool full_support = false, positive_entropy = false, ergodic = false;
    double min_transition = 0, entropy = 0;
};

SupportReport markov_support_entropy_report(const EquilibriumMeasure& mu);

}  // namespace emr
