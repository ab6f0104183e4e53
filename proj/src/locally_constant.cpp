#include "emr/locally_constant.hpp"

#include <algorithm>
#include <cmath>

namespace emr {

namespace {

constexpr std::uint64_t kWordBudget = std::uint64_t(1) << 21;

PiecewiseMap build_lc(const PiecewiseMap& f0, const CylinderTree& t, int n) {
    const int p = f0.p();
    const auto& part = f0.partition();
    std::vector<Piece> pieces;
    std::vector<double> slope(t.cyl[n].size());
    const std::uint64_t tails = ipow(p, n - 1);
    for (std::uint64_t w = 0; w < t.cyl[n].size(); ++w) {
        const Interval& X = t.cyl[n][w];
        const Interval& Y = t.cyl[n - 1][w % tails];
        int s = f0.orientation(int(w / tails));
        slope[w] = Y.len() / X.len();
        pieces.push_back(Piece::linear(X.l, X.r, s > 0 ? Y.l : Y.r, s * slope[w]));
    }
    for (int m = 1; m < n; ++m) {
        const std::uint64_t mt = ipow(p, m - 1), below = ipow(p, n - m - 1);
        for (std::uint64_t w = 0; w < t.cyl[m].size(); ++w)
            for (int i = 1; i < p; ++i) {
                const Interval& G = t.gap[m][w * (p - 1) + (i - 1)];
                const Interval& img = t.gap[m - 1][(w % mt) * (p - 1) + (i - 1)];
                int s = f0.orientation(int(w / mt));
                // depth-n cylinders touching the gap, among the descendants of children i-1 and i
                std::uint64_t first = (w * p + (i - 1)) * below, last = (w * p + i + 1) * below;
                std::uint64_t left = first, right = first;
                for (std::uint64_t v = first; v < last; ++v) {
                    if (std::abs(t.cyl[n][v].r - G.l) < std::abs(t.cyl[n][left].r - G.l)) left = v;
                    if (std::abs(t.cyl[n][v].l - G.r) < std::abs(t.cyl[n][right].l - G.r)) right = v;
                }
                double E = slope[left], E2 = slope[right];
                double tau = img.len() / G.len();
                try {
                    pieces.push_back(Piece::smoothing(
                        G.l, G.r, SmoothingPiece::make(G.l, G.r, E, E2, tau, s > 0 ? img.l : img.r, s)));
                } catch (const DomainError& e) {
                    throw AdmissibilityError(std::string("locally constant approximation: ") + e.what(),
                                             word_from_index(w, p, m), i);
                }
            }
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    return PiecewiseMap(part, std::move(pieces));
}

}  // namespace

LcApprox approximate_lc(const PiecewiseMap& f0, double eps, int max_depth) {
    if (!(eps > 0)) throw DomainError("eps must be positive");
    LcApprox out;
    auto& rep = out.report;
    if (f0.is_piecewise_linear()) {
        int c = constancy_depth(f0);
        if (c >= 1) {
            out.map = f0;
            rep.n = c;
            rep.constancy_depth = c;
            rep.already_lc = true;
            rep.theta_max = 1.0 / f0.sup_abs_deriv();
            rep.expanding = expansion_certificate(f0, 8).verified;
            return out;
        }
    }
    const int p = f0.p();
    bool found_depth = false;
    for (int n = 1; n <= max_depth; ++n) {
        if (ipow(p, n) > kWordBudget) break;
        CylinderTree t = cylinder_tree(f0, n);
        double len = 0, osc = 0;
        for (const auto& X : t.cyl[n]) {
            len = std::max(len, X.len());
            osc = std::max(osc, f0.max_abs_deriv(X) - f0.min_abs_deriv(X));
        }
        if (!found_depth && (len > eps / 2 || osc > eps / 4)) continue;
        found_depth = true;
        PiecewiseMap f = build_lc(f0, t, n);
        C1Parts d = c1_distance_parts(f0, f);
        if (d.total() > eps) continue;
        out.map = std::move(f);
        rep.n = n;
        rep.distance = d.total();
        rep.value_part = d.value;
        rep.deriv_part = d.deriv;
        rep.max_cylinder = len;
        rep.max_oscillation = osc;
        rep.constancy_depth = constancy_depth(out.map, std::max(16, n));
        rep.theta_max = 1.0 / out.map.sup_abs_deriv();
        try {
            rep.expanding = expansion_certificate(out.map, 8).verified;
        } catch (const DomainError&) {
            rep.expanding = false;
        }
        return out;
    }
    throw DomainError("approximate_lc: no depth within the word budget reaches eps = " + std::to_string(eps));
}

LipschitzPrecheck lipschitz_realization_precheck(const PiecewiseMap& f0, const PotentialTable& phi, double theta,
                                                 double eps, int depth) {
    if (constancy_depth(f0) < 1) throw DomainError("precheck needs a map with locally constant derivative");
    if (phi.p() != f0.p()) throw DomainError("potential and map use different alphabets");
    LipschitzPrecheck r;
    r.sup_deriv = f0.sup_abs_deriv();
    r.theta_max = 1.0 / (r.sup_deriv + eps);
    r.theta = theta;
    if (!(theta > 0) || theta > r.theta_max)
        throw DomainError("theta = " + std::to_string(theta) + " outside (0, " + std::to_string(r.theta_max) + "]");
    const auto& part = f0.partition();
    r.min_hole = INFINITY;
    for (int i = 1; i < part.p(); ++i) r.min_hole = std::min(r.min_hole, part.hole(i).len());
    for (int n = 1; n <= depth; ++n) r.gap_lower_bound.push_back(r.min_hole / std::pow(r.sup_deriv + eps, n));
    r.K = distortion_certificate(f0, 8).K;
    r.M_exp = std::exp(phi.max());
    r.L = lipschitz_constant(phi, ThetaMetric(theta));
    r.lipschitz_bound = (2 * r.K + 1) * r.M_exp * r.L / r.min_hole;
    r.lipschitz_derivative = std::isfinite(r.lipschitz_bound);
    return r;
}

DerivativeLipschitzScan derivative_lipschitz_scan(const PiecewiseMap& f) {
    DerivativeLipschitzScan s;
    std::vector<double> bp = f.breakpoints();
    const auto& part = f.partition();
    for (int b = 0; b < f.p(); ++b) {
        std::vector<double> xs;
        for (double x : bp)
            if (x >= part.alpha[b] && x <= part.beta[b]) xs.push_back(x);
        for (std::size_t j = 0; j + 1 < xs.size(); ++j) {
            double x = xs[j], y = xs[j + 1];
            if (!(y > x)) continue;
            // Df is affine between consecutive breakpoints
            double dl = f.deriv_right(x), dr = f.deriv_left(y);
            double q = std::abs(dr - dl) / (y - x);
            if (q > s.constant) {
                s.constant = q;
                s.worst_x = x;
            }
            if (j > 0) s.max_jump = std::max(s.max_jump, std::abs(f.deriv_right(x) - f.deriv_left(x)));
        }
    }
    return s;
}

}  // namespace emr
