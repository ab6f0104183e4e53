#pragma once

#include <vector>

#include "emr/interval_maps.hpp"
#include "emr/realization.hpp"
#include "emr/symbolic.hpp"

namespace emr {

struct LcApproxReport {
    int n = 0;                    // cylinder depth carrying the ratio slopes
    double distance = 0;          // c1_distance(f0, f)
    double value_part = 0, deriv_part = 0;
    int constancy_depth = 0;      // |Df| constant on every cylinder of this depth
    double theta_max = 0;         // 1 / sup |Df|
    double max_cylinder = 0;      // max depth-n cylinder length of f0
    double max_oscillation = 0;   // max oscillation of |Df0| on depth-n cylinders
    bool expanding = false;       // expansion certificate of f verified
    bool already_lc = false;      // f0 returned unchanged
};

struct LcApprox {
    PiecewiseMap map;
    LcApproxReport report;
};

// Ratio slopes |X_tail|/|X_w| on depth-n cylinders and chord-slope smoothing on
// every gap; n grows until the measured C1 distance is <= eps.
LcApprox approximate_lc(const PiecewiseMap& f0, double eps, int max_depth = 20);

struct LipschitzPrecheck {
    double theta = 0, theta_max = 0;
    double sup_deriv = 0;
    double min_hole = 0;
    std::vector<double> gap_lower_bound;  // index n-1: lower bound for gaps of h_n
    double K = 0, M_exp = 0, L = 0;
    double lipschitz_bound = 0;            // for D f_n, uniform in n
    bool lipschitz_derivative = false;
};

// f0 must have locally constant derivative; throws DomainError when theta is
// outside (0, 1/(sup|Df0|+eps)]
LipschitzPrecheck lipschitz_realization_precheck(const PiecewiseMap& f0, const PotentialTable& phi, double theta,
                                                 double eps, int depth = 12);

struct DerivativeLipschitzScan {
    double constant = 0;  // max |Df(y)-Df(x)|/|y-x| over consecutive breakpoint samples
    double max_jump = 0;  // derivative discontinuity inside a branch
    double worst_x = 0;
};

DerivativeLipschitzScan derivative_lipschitz_scan(const PiecewiseMap& f);

}  // namespace emr
