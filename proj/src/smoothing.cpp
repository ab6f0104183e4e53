#include <algorithm>
#include <cmath>

#include "emr/interval_maps.hpp"

namespace emr {

SmoothingPiece SmoothingPiece::make(double l, double r, double E, double E2, double tau, double base, int sign) {
    if (!(r > l)) throw DomainError("smoothing interval must have positive length");
    if (!(E > 0 && E2 > 0 && tau > 0)) throw DomainError("smoothing slopes must be positive");
    if (sign != 1 && sign != -1) throw DomainError("smoothing sign must be +1 or -1");
    SmoothingPiece s{l, r, E, E2, tau, base, sign};
    if (!(s.mid_slope() > 0))
        throw DomainError("smoothing needs 2*tau-(E+E')/2 > 0 (E=" + std::to_string(E) + ", E'=" +
                          std::to_string(E2) + ", tau=" + std::to_string(tau) + ")");
    return s;
}

double SmoothingPiece::g(double x) const {
    double h = 0.5 * (r - l), m = l + h, G = mid_slope();
    // measure from the nearer end so that g(l) = E and g(r) = E2 exactly
    if (x <= m) return E + (G - E) * ((x - l) / h);
    return E2 + (G - E2) * ((r - x) / h);
}

double SmoothingPiece::integral(double x) const {
    double h = 0.5 * (r - l), m = l + h, G = mid_slope();
    if (x <= m) {
        double u = x - l;
        return u * E + (G - E) * u * u / (2 * h);
    }
    double u = x - m;
    return 0.5 * h * (E + G) + u * G + (E2 - G) * u * u / (2 * h);
}

namespace {
// u >= 0 with a*u + (b-a)*u^2/(2h) = t on a half profile of width h
double solve_half(double a, double b, double h, double t) {
    if (t <= 0) return 0;
    double c = (b - a) / h;
    double disc = a * a + 2 * c * t;
    if (disc < 0) disc = 0;
    return 2 * t / (a + std::sqrt(disc));
}
}  // namespace

double SmoothingPiece::invert_integral(double t) const {
    double h = 0.5 * (r - l), G = mid_slope();
    double first = 0.5 * h * (E + G);
    if (t <= first) return std::min(l + solve_half(E, G, h, t), l + h);
    return std::min(l + h + solve_half(G, E2, h, t - first), r);
}

Piece Piece::linear(double lo, double hi, double y0, double slope) {
    Piece pc;
    pc.lo = lo;
    pc.hi = hi;
    pc.kind = Linear;
    pc.y0 = y0;
    pc.slope = slope;
    return pc;
}

Piece Piece::smoothing(double lo, double hi, const SmoothingPiece& sp) {
    if (lo < sp.l - 1e-13 || hi > sp.r + 1e-13) throw DomainError("piece lies outside its smoothing profile");
    Piece pc;
    pc.lo = lo;
    pc.hi = hi;
    pc.kind = Smoothing;
    pc.sp = sp;
    return pc;
}

double Piece::value(double x) const { return kind == Linear ? y0 + slope * (x - lo) : sp.value(x); }

double Piece::deriv(double x) const { return kind == Linear ? slope : sp.deriv(x); }

double Piece::min_abs_deriv(double a, double b) const {
    if (kind == Linear) return std::abs(slope);
    a = std::max(a, lo);
    b = std::min(b, hi);
    double m = std::min(sp.g(a), sp.g(b));
    double mid = 0.5 * (sp.l + sp.r);
    if (a < mid && mid < b) m = std::min(m, sp.g(mid));
    return m;
}

double Piece::max_abs_deriv(double a, double b) const {
    if (kind == Linear) return std::abs(slope);
    a = std::max(a, lo);
    b = std::min(b, hi);
    double m = std::max(sp.g(a), sp.g(b));
    double mid = 0.5 * (sp.l + sp.r);
    if (a < mid && mid < b) m = std::max(m, sp.g(mid));
    return m;
}

double Piece::invert(double y) const {
    double x;
    if (kind == Linear) {
        x = lo + (y - y0) / slope;
    } else {
        double t = sp.sign * (y - sp.base);
        x = sp.invert_integral(std::max(t, 0.0));
    }
    return std::clamp(x, lo, hi);
}

}  // namespace emr
