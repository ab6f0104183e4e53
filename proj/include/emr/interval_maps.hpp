#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "emr/symbolic.hpp"

namespace emr {

struct Interval {
    double l = 0, r = 0;
    double len() const { return r - l; }
    double mid() const { return 0.5 * (l + r); }
    bool contains(double x) const { return l <= x && x <= r; }
};

// 0 = alpha_0 < beta_0 < alpha_1 < ... < beta_{p-1} = 1
struct MarkovPartition {
    std::vector<double> alpha, beta;

    MarkovPartition() = default;
    MarkovPartition(std::vector<double> a, std::vector<double> b);

    int p() const { return int(alpha.size()); }
    Interval branch(int i) const { return {alpha[i], beta[i]}; }
    // primary hole between branches i-1 and i, 1 <= i <= p-1
    Interval hole(int i) const { return {beta[i - 1], alpha[i]}; }
    bool operator==(const MarkovPartition& o) const { return alpha == o.alpha && beta == o.beta; }
};

// Closed-form C^1 bridge on [l,r]. The derivative profile g is linear from
// E at l to 2*tau-(E+E2)/2 at the midpoint and back to E2 at r, so the
// integral over [l,r] is tau*(r-l).
struct SmoothingPiece {
    double l = 0, r = 1;
    double E = 1, E2 = 1, tau = 1;
    double base = 0;  // value at l
    int sign = 1;

    static SmoothingPiece make(double l, double r, double E, double E2, double tau, double base, int sign);

    double mid_slope() const { return 2 * tau - 0.5 * (E + E2); }
    double g(double x) const;
    double integral(double x) const;  // int_l^x g
    double value(double x) const { return base + sign * integral(x); }
    double deriv(double x) const { return sign * g(x); }
    double rise() const { return integral(r); }
    // x in [l,r] with integral(x) = t, 0 <= t <= rise
    double invert_integral(double t) const;
};

struct Piece {
    enum Kind { Linear, Smoothing };
    double lo = 0, hi = 0;
    Kind kind = Linear;
    double slope = 0;  // linear: value = y0 + slope*(x-lo)
    double y0 = 0;
    SmoothingPiece sp;  // smoothing: profile interval may be larger than [lo,hi]

    static Piece linear(double lo, double hi, double y0, double slope);
    static Piece smoothing(double lo, double hi, const SmoothingPiece& sp);

    double value(double x) const;
    double deriv(double x) const;
    double min_abs_deriv(double a, double b) const;
    double max_abs_deriv(double a, double b) const;
    double invert(double y) const;
};

class PiecewiseMap {
public:
    PiecewiseMap() = default;
    // Validates tiling, continuity, monotone onto branches and nonvanishing
    // derivative. Endpoints within 1e-13 of each other are welded.
    PiecewiseMap(MarkovPartition part, std::vector<Piece> pieces);

    static PiecewiseMap linear(const MarkovPartition& part, const std::vector<int>& orientation);
    static PiecewiseMap linear(const MarkovPartition& part) { return linear(part, std::vector<int>(part.p(), 1)); }

    const MarkovPartition& partition() const { return part_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    int p() const { return part_.p(); }
    int orientation(int branch) const { return orient_[branch]; }

    // -1 when x lies in a primary hole or outside [0,1]
    int branch_of(double x) const;
    double eval(double x) const;
    double deriv(double x) const;  // right derivative except at the right end of a branch
    double deriv_left(double x) const;
    double deriv_right(double x) const;

    double branch_inverse(int branch, double y) const;
    Interval pullback(int branch, const Interval& J) const;

    double min_abs_deriv(const Interval& I) const;
    double max_abs_deriv(const Interval& I) const;
    double sup_abs_deriv() const;

    // largest jump of the derivative across interior junctions
    double max_derivative_jump() const;
    bool is_c1(double tol = 1e-12) const { return max_derivative_jump() <= tol; }
    bool is_piecewise_linear() const;

    // piece boundaries plus smoothing-profile midpoints
    std::vector<double> breakpoints() const;

    std::size_t piece_index(double x) const;

private:
    MarkovPartition part_;
    std::vector<Piece> pieces_;
    std::vector<std::size_t> first_, last_;  // piece range per branch (inclusive)
    std::vector<int> orient_;
};

// Cylinders X_w(f) for |w| <= depth and gaps X_{w box i}(f) for |w| < depth.
// Gaps of order 0 are the primary holes.
struct CylinderTree {
    int p = 0, depth = 0;
    std::vector<std::vector<Interval>> cyl;  // cyl[n][word_index], cyl[0] = {[0,1]}
    std::vector<std::vector<Interval>> gap;  // gap[m][word_index*(p-1) + i-1]

    const Interval& cylinder(const Word& w) const;
    const Interval& gap_of(const Word& w, int i) const;
    Interval hat(const Word& w, int i) const;
    double gap_ratio(const Word& w, int i) const;
    double gap_ratio(int order, std::uint64_t widx, int i) const;
    double max_gap_ratio() const;
};

CylinderTree cylinder_tree(const PiecewiseMap& f, int n);
std::string cylinder_tree_csv(const CylinderTree& t);

struct ExpansionCertificate {
    double c = 0, lambda = 0;  // empirical (E2) constants at the probe depth
    int N0 = 0;
    double c0 = 0, lambda0 = 0;
    double eps0 = 0;
    int probe_depth = 0;
    bool verified = false;
};

struct DistortionCertificate {
    double M0 = 1, K = 0;
};

// inf over depth-n cylinders of the product bound prod_j min|Df| on X_{sigma^j w}
// (a rigorous lower bound for inf |Df^n| on X_w), for n = 1..depth
std::vector<double> min_iterated_derivative(const PiecewiseMap& f, int depth);

ExpansionCertificate expansion_certificate(const PiecewiseMap& f, int probe_depth, double eps0 = 0);
DistortionCertificate distortion_certificate(const PiecewiseMap& f, int probe_depth);
double distortion_constant(const MarkovPartition& part, double M0);

// Checks the perturbation radius a posteriori: g must lie within eps0 of f
// in C^1 and must itself admit an expansion certificate.
bool validate_perturbation(const PiecewiseMap& f, const PiecewiseMap& g, double eps0, int probe_depth);

Word encode(const PiecewiseMap& f, double x, int depth);
Interval decode(const PiecewiseMap& f, const Word& w);
// shortest prefix enclosure of length < precision
Interval decode_to_precision(const PiecewiseMap& f, const Word& w, double precision);
// the point of the periodic orbit with itinerary (cycle)^infinity
double periodic_point(const PiecewiseMap& f, const Word& cycle);

struct CodingCheck {
    bool ok = true;
    int violations = 0;
    double worst_ratio = 0;  // max distance / bound
};
CodingCheck coding_lipschitz_check(const PiecewiseMap& f, double theta, int trials, std::uint64_t seed = 1,
                                   int word_length = 16);

struct C1Parts {
    double value = 0, deriv = 0;
    double total() const { return value + deriv; }
};
C1Parts c1_distance_parts(const PiecewiseMap& f, const PiecewiseMap& g, int grid = 0);
double c1_distance(const PiecewiseMap& f, const PiecewiseMap& g, int grid = 0);

}  // namespace emr
