#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "emr/interval_maps.hpp"
#include "emr/symbolic.hpp"

namespace emr {

struct AdmissibilityError : std::runtime_error {
    Word w;
    int i = 0;
    AdmissibilityError(const std::string& msg, Word word = {}, int gap = 0)
        : std::runtime_error(msg), w(std::move(word)), i(gap) {}
};

// a prescribed child layout leaves no room for the gap between children
struct OverhangError : AdmissibilityError {
    double margin = 0;
    OverhangError(const std::string& msg, Word word, int gap, double m)
        : AdmissibilityError(msg, std::move(word), gap), margin(m) {}
};

struct RealizationConfig {
    int N = 2;
    int n_max = 12;
    double eps = 0.05;
};

struct GapRecord {
    int order = 0;           // |w|
    std::uint64_t w = 0;     // word index
    int i = 0;               // gap between children i-1 and i
    Interval I;              // domain
    Interval image;          // h(I)
    double tau = 0;          // |image| / |I|
    double delta = 0;        // gap ratio of the parent at i
    bool from_f0 = false;    // order < N: carried over from f0
};

// Sufficient-condition diagnostics for the departure step n = N.
struct DepartureReport {
    double max_ratio = 0;       // max |X_hat|^{-1} sum_j |X_{tail j}|/E_{wj}; < 1 means no overhang
    double min_margin = 0;      // smallest gap length produced at order N
    double delta_required = 0;  // smallest delta in the distortion/closeness conditions
    bool sufficient = false;    // (1+delta)^2/(1+K) < 1
    double s_max = 0, eta_max = 0;
    double exp_gap = 0;         // bound for sup |e^phi - |Df0|| over depth-(N+1) cylinders
};

struct ConstructionChecks {
    int gaps = 0;
    int slope_lower_violations = 0;   // tau above the lower bound, orders >= N+1
    int slope_upper_violations = 0;   // tau <= F_w, orders >= N+1
    int slope_departure_violations = 0;  // lower bound at order N
    int slope_drift_violations = 0;   // |tau' - tau| bound along extensions, orders >= N+1
    int slope_drift_departure = 0;    // same bound with the coarse gap at order N
    int delta_transfer_violations = 0;
    int delta_bound_violations = 0;   // Delta > 2K
    double max_delta = 0;
};

class RealizationState {
public:
    RealizationState(PiecewiseMap f0, PotentialTable phi, RealizationConfig cfg);

    // extend the construction to depth n (<= cfg.n_max)
    void build_to(int n);

    int built() const { return built_; }
    const RealizationConfig& config() const { return cfg_; }
    const PiecewiseMap& f0() const { return f0_; }
    const PotentialTable& phi() const { return phi_; }
    double K() const { return K_; }
    const ExpansionCertificate& expansion() const { return exp_; }

    // depth-d cylinders, valid for d <= built()+1
    const std::vector<Interval>& cylinders(int d) const { return cyl_.at(d); }
    // |Dh| on depth-d cylinders created by the construction (d >= N+1)
    const std::vector<double>& slopes(int d) const { return slope_.at(d); }
    // gaps of order k, 1 <= k <= built()
    const std::vector<GapRecord>& gaps(int k) const { return gaps_.at(k); }
    const GapRecord& gap(const Word& w, int i) const;
    double gap_slope(const Word& w, int i) const;

    const DepartureReport& departure() const { return departure_; }
    ConstructionChecks construction_checks() const;

    PiecewiseMap h(int n) const;
    PiecewiseMap f(int n) const;

    // increments of f_n within gaps of order >= N+1 against the smoothing bound
    struct SmoothingCheck {
        int checked = 0, violations = 0;
        double worst_excess = 0;
    };
    SmoothingCheck smoothing_check(int n) const;

    double cauchy_bound(int n, int m) const;
    // floating-point uncertainty of the gap slopes of order k
    double tau_roundoff(int k) const;

private:
    void step(int n);
    double image_hat(int d, std::uint64_t v, int i) const;

    PiecewiseMap f0_;
    PotentialTable phi_;
    RealizationConfig cfg_;
    double K_ = 0;
    ExpansionCertificate exp_;
    CylinderTree tree0_;  // f0 to depth N+1
    int built_ = 0;
    std::vector<std::vector<Interval>> cyl_;
    std::vector<std::vector<double>> slope_;
    std::vector<std::vector<GapRecord>> gaps_;
    DepartureReport departure_;
};

struct RealizationCertificate {
    int N = 0, n_max = 0;
    double c1_distance_to_f0 = 0;
    double value_part = 0, deriv_part = 0;
    double cauchy_tail = 0;
    double verification_residual = 0;
    double max_delta = 0, two_K = 0;
    double K = 0, lambda0 = 0, c0 = 0;
    DepartureReport departure;
    ConstructionChecks checks;
};

struct RealizedMap {
    PiecewiseMap map;
    int constancy_depth = 0;  // |Df| is constant on every cylinder of this depth
    RealizationCertificate cert;
};

struct RealizeOptions {
    int n_max = 12;
    double tail_tol = 0;  // > 0: deepen past n_max until the Cauchy tail is below this
    int verify_depth = 10;
};

// smallest N whose value-part bound max_{|v|=N-1} |X_v(f0)| is <= eps/4
int departure_depth_for(const PiecewiseMap& f0, double eps, int cap);

RealizedMap realize(const PiecewiseMap& f0, const PotentialTable& phi, double eps, const RealizeOptions& opt = {});

// smallest depth at which every cylinder lies inside one linear piece; -1 if none up to cap
int constancy_depth(const PiecewiseMap& f, int cap = 16);

double verify_realization(const PiecewiseMap& f, const PotentialTable& phi, int depth, int constancy);
double verify_realization(const RealizedMap& f, const PotentialTable& phi, int depth);

// log |Df0| along cylinders, tabulated at the given depth (exact for linear or (E3) maps deep enough)
PotentialTable log_derivative_table(const PiecewiseMap& f, int depth);

}  // namespace emr
