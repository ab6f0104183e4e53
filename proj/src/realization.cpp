#include "emr/realization.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

namespace emr {

namespace {

// log E_v(phi) for every word v of length len
std::vector<double> log_min_table(const PotentialTable& phi, int len) {
    int p = phi.p(), k = phi.depth();
    std::uint64_t m = ipow(p, len);
    std::vector<double> out(m);
    const auto& v = phi.values();
    if (len >= k) {
        std::uint64_t div = ipow(p, len - k);
        for (std::uint64_t i = 0; i < m; ++i) out[i] = v[i / div];
    } else {
        std::uint64_t span = ipow(p, k - len);
        for (std::uint64_t i = 0; i < m; ++i)
            out[i] = *std::min_element(v.begin() + i * span, v.begin() + (i + 1) * span);
    }
    return out;
}

Interval hull(const Interval& a, const Interval& b) { return {std::min(a.l, b.l), std::max(a.r, b.r)}; }

}  // namespace

RealizationState::RealizationState(PiecewiseMap f0, PotentialTable phi, RealizationConfig cfg)
    : f0_(std::move(f0)), phi_(std::move(phi)), cfg_(cfg) {
    if (phi_.p() != f0_.p()) throw DomainError("potential and map use different alphabets");
    if (cfg_.N < 1) throw DomainError("N must be >= 1");
    if (cfg_.n_max < cfg_.N) throw DomainError("n_max must be >= N");
    int p = f0_.p();
    K_ = distortion_certificate(f0_, std::min(cfg_.N + 2, 10)).K;
    exp_ = expansion_certificate(f0_, 8);
    tree0_ = cylinder_tree(f0_, cfg_.N + 1);
    cyl_.resize(cfg_.n_max + 2);
    slope_.resize(cfg_.n_max + 2);
    gaps_.resize(cfg_.n_max + 1);
    for (int d = 0; d <= cfg_.N; ++d) cyl_[d] = tree0_.cyl[d];
    for (int k = 1; k < cfg_.N; ++k) {
        std::uint64_t m = ipow(p, k), tails = ipow(p, k - 1);
        auto& gs = gaps_[k];
        gs.reserve(m * (p - 1));
        for (std::uint64_t w = 0; w < m; ++w)
            for (int i = 1; i < p; ++i) {
                GapRecord g;
                g.order = k;
                g.w = w;
                g.i = i;
                g.I = tree0_.gap[k][w * (p - 1) + i - 1];
                g.image = tree0_.gap[k - 1][(w % tails) * (p - 1) + i - 1];
                g.tau = g.image.len() / g.I.len();
                g.delta = tree0_.gap_ratio(k, w, i);
                g.from_f0 = true;
                gs.push_back(g);
            }
    }
    built_ = cfg_.N - 1;
}

void RealizationState::build_to(int n) {
    if (n > cfg_.n_max) throw DomainError("build depth exceeds n_max");
    while (built_ < n) step(built_ + 1);
}

void RealizationState::step(int n) {
    const int p = f0_.p();
    const int N = cfg_.N;
    const std::uint64_t nw = ipow(p, n), tails = ipow(p, n - 1);
    std::vector<double> logE = log_min_table(phi_, n + 1);
    std::vector<Interval> child(nw * p);
    std::vector<double> slope(nw * p);
    std::vector<GapRecord> gs;
    gs.reserve(nw * (p - 1));

    double M_exp_diff = 0;  // bound for sup |e^phi - e^phi0| on depth-(N+1) cylinders
    if (n == N) {
        departure_ = DepartureReport{};
        departure_.min_margin = INFINITY;
        for (std::uint64_t v = 0; v < nw * p; ++v) {
            const Interval& X = tree0_.cyl[N + 1][v];
            double e0 = f0_.min_abs_deriv(X), F0 = f0_.max_abs_deriv(X);
            auto [lo, hi] = cylinder_log_extrema(phi_, word_from_index(v, p, N + 1));
            M_exp_diff = std::max({M_exp_diff, std::abs(F0 - std::exp(lo)), std::abs(std::exp(hi) - e0)});
            departure_.delta_required = std::max({departure_.delta_required, F0 / e0 - 1, e0 / std::exp(lo) - 1});
        }
        departure_.sufficient = std::pow(1 + departure_.delta_required, 2) / (1 + K_) < 1;
        departure_.exp_gap = M_exp_diff;
    }

    std::vector<Interval> P(p), c(p);
    std::vector<double> E(p);
    for (std::uint64_t w = 0; w < nw; ++w) {
        const int a0 = int(w / tails);
        const int sgn = f0_.orientation(a0);
        const std::uint64_t t = w % tails;
        const Interval C = cyl_[n][w];
        const Interval J = cyl_[n - 1][t];
        for (int j = 0; j < p; ++j) {
            const Interval& Jj = cyl_[n][t * p + j];
            E[j] = std::exp(logE[w * p + j]);
            if (n == N) {
                P[j] = tree0_.cyl[N + 1][w * p + j];
            } else {
                // h_{n-1} is affine on C
                double s = C.len() / J.len();
                double x1 = sgn > 0 ? C.l + (Jj.l - J.l) * s : C.l + (J.r - Jj.r) * s;
                double x2 = sgn > 0 ? C.l + (Jj.r - J.l) * s : C.l + (J.r - Jj.l) * s;
                P[j] = {x1, x2};
            }
        }
        // end children sit flush with the ends of C, interior ones are
        // centred on their pullbacks
        const bool up = P[0].l < P[p - 1].l;
        for (int j = 0; j < p; ++j) {
            double len = cyl_[n][t * p + j].len() / E[j];
            bool at_left = (j == 0 && up) || (j == p - 1 && !up);
            bool at_right = (j == 0 && !up) || (j == p - 1 && up);
            if (at_left)
                c[j] = {C.l, C.l + len};
            else if (at_right)
                c[j] = {C.r - len, C.r};
            else
                c[j] = {P[j].mid() - 0.5 * len, P[j].mid() + 0.5 * len};
            child[w * p + j] = c[j];
            slope[w * p + j] = E[j];
        }
        for (int i = 1; i < p; ++i) {
            const Interval& A = c[i - 1];
            const Interval& B = c[i];
            Interval G = up ? Interval{A.r, B.l} : Interval{B.r, A.l};
            if (n == N) departure_.min_margin = std::min(departure_.min_margin, G.len());
            if (!(G.len() > 0)) {
                Word ww = word_from_index(w, p, n);
                throw OverhangError("overhang at depth " + std::to_string(n) + ": gap " + word_string(ww) + "#" +
                                        std::to_string(i) + " has residual length " + std::to_string(G.len()),
                                    ww, i, G.len());
            }
            GapRecord g;
            g.order = n;
            g.w = w;
            g.i = i;
            g.I = G;
            g.image = n == 1 ? f0_.partition().hole(i) : gaps_[n - 1][t * (p - 1) + i - 1].I;
            g.tau = g.image.len() / G.len();
            g.delta = hull(A, B).len() / G.len() - 1;
            if (n == N) {
                // sufficient-condition diagnostics for the departure step
                const Interval& Ja = cyl_[n][t * p + i - 1];
                const Interval& Jb = cyl_[n][t * p + i];
                Interval hat0 = hull(tree0_.cyl[N + 1][w * p + i - 1], tree0_.cyl[N + 1][w * p + i]);
                double ratio = (Ja.len() / E[i - 1] + Jb.len() / E[i]) / hat0.len();
                departure_.max_ratio = std::max(departure_.max_ratio, ratio);
                double s = f0_.max_abs_deriv(C);
                double eta = 2 * (s - f0_.min_abs_deriv(C)) + M_exp_diff;
                departure_.s_max = std::max(departure_.s_max, s);
                departure_.eta_max = std::max(departure_.eta_max, eta);
            }
            gs.push_back(g);
        }
    }
    cyl_[n + 1] = std::move(child);
    slope_[n + 1] = std::move(slope);
    gaps_[n] = std::move(gs);
    built_ = n;
}

const GapRecord& RealizationState::gap(const Word& w, int i) const {
    int k = int(w.size());
    if (k < 1 || k > built_) throw DomainError("no live gap of that order");
    if (i < 1 || i >= f0_.p()) throw DomainError("gap index out of range");
    return gaps_[k][word_index(w, f0_.p()) * (f0_.p() - 1) + i - 1];
}

double RealizationState::gap_slope(const Word& w, int i) const {
    double t = gap(w, i).tau;
    if (!(t > 0)) throw DomainError("nonpositive gap slope");
    return t;
}

namespace {

// endpoints carry a few ulps of absolute error, so tau = |image|/|I| is known
// to relative accuracy ~ eps_mach (1/|I| + 1/|image|)
double tau_slack(const GapRecord& g) {
    return 16 * DBL_EPSILON * (1 / g.I.len() + 1 / g.image.len()) * g.tau;
}

}  // namespace

ConstructionChecks RealizationState::construction_checks() const {
    const int p = f0_.p(), N = cfg_.N;
    ConstructionChecks out;
    const double Me2 = std::exp(-2 * phi_.min());   // M(e^{-2 phi})
    const double Mp2 = std::exp(2 * phi_.max());    // M(e^{2 phi})
    const double rel = 1e-12;

    // order-0 holes
    for (int i = 1; i < p; ++i) out.max_delta = std::max(out.max_delta, tree0_.gap_ratio(0, 0, i));
    for (int k = 1; k <= built_; ++k)
        for (const auto& g : gaps_[k]) {
            ++out.gaps;
            out.max_delta = std::max(out.max_delta, g.delta);
            if (g.delta > 2 * K_ * (1 + rel)) ++out.delta_bound_violations;
            if (k >= N + 1) {
                const auto& parent = gaps_[k - 1][(g.w % ipow(p, k - 1)) * (p - 1) + g.i - 1];
                if (g.delta > parent.delta * (1 + 1e-9)) ++out.delta_transfer_violations;
                CylinderStats s = cylinder_stats(phi_, word_from_index(g.w, p, k));
                if (!(g.tau > s.E - 2 * Me2 * s.V * s.E * s.E * K_ - tau_slack(g))) ++out.slope_lower_violations;
                if (g.tau > s.F + tau_slack(g)) ++out.slope_upper_violations;
            } else if (k == N) {
                const Interval& C = cyl_[k][g.w];
                double e0 = f0_.min_abs_deriv(C), F0 = f0_.max_abs_deriv(C);
                double Mmix = std::exp(-phi_.min()) / f0_.min_abs_deriv({0, 1});
                double bound = e0 - 2 * Mmix * (2 * (F0 - e0) + departure_.exp_gap) * e0 * e0 * K_;
                if (!(g.tau > bound)) ++out.slope_departure_violations;
            }
        }

    // drift of tau along extensions: range of tau over deeper gaps in each subtree
    if (built_ >= N) {
        std::vector<double> lo, hi, sl, nlo, nhi, nsl;
        for (int k = built_; k >= N; --k) {
            std::uint64_t m = ipow(p, k);
            nlo.assign(m, INFINITY);
            nhi.assign(m, -INFINITY);
            nsl.assign(m, 0.0);
            if (k < built_)
                for (std::uint64_t w = 0; w < m; ++w)
                    for (int c = 0; c < p; ++c) {
                        std::uint64_t wc = w * p + c;
                        nlo[w] = std::min(nlo[w], lo[wc]);
                        nhi[w] = std::max(nhi[w], hi[wc]);
                        nsl[w] = std::max(nsl[w], sl[wc]);
                        for (int i = 1; i < p; ++i) {
                            const GapRecord& g = gaps_[k + 1][wc * (p - 1) + i - 1];
                            nlo[w] = std::min(nlo[w], g.tau);
                            nhi[w] = std::max(nhi[w], g.tau);
                            nsl[w] = std::max(nsl[w], tau_slack(g));
                        }
                    }
            for (std::uint64_t w = 0; w < m && k < built_; ++w) {
                double V = cylinder_stats(phi_, word_from_index(w, p, k)).V;
                double bound = (1 + Mp2 * K_) * V;
                for (int i = 1; i < p; ++i) {
                    const GapRecord& g = gaps_[k][w * (p - 1) + i - 1];
                    double dev = std::max(std::abs(nhi[w] - g.tau), std::abs(g.tau - nlo[w]));
                    if (dev > bound + tau_slack(g) + nsl[w]) {
                        if (k == N)
                            ++out.slope_drift_departure;
                        else
                            ++out.slope_drift_violations;
                    }
                }
            }
            lo.swap(nlo);
            hi.swap(nhi);
            sl.swap(nsl);
        }
    }
    return out;
}

PiecewiseMap RealizationState::h(int n) const {
    if (n < cfg_.N) return f0_;
    if (n > built_) throw DomainError("h_n requested beyond the built depth");
    const int p = f0_.p();
    std::vector<Piece> pcs;
    for (int k = 1; k <= n; ++k) {
        std::uint64_t lead = ipow(p, k - 1);
        for (const auto& g : gaps_[k]) {
            int sgn = f0_.orientation(int(g.w / lead));
            if (g.from_f0) {
                const auto& fp = f0_.pieces();
                for (std::size_t q = f0_.piece_index(g.I.l); q < fp.size() && fp[q].lo < g.I.r; ++q) {
                    Piece pc = fp[q];
                    double lo = std::max(pc.lo, g.I.l), hi = std::min(pc.hi, g.I.r);
                    if (!(hi > lo)) continue;
                    if (pc.kind == Piece::Linear) pc.y0 = pc.value(lo);
                    pc.lo = lo;
                    pc.hi = hi;
                    pcs.push_back(pc);
                }
            } else {
                pcs.push_back(Piece::linear(g.I.l, g.I.r, sgn > 0 ? g.image.l : g.image.r, sgn * g.tau));
            }
        }
    }
    std::uint64_t m = ipow(p, n + 1), tails = ipow(p, n);
    for (std::uint64_t v = 0; v < m; ++v) {
        int sgn = f0_.orientation(int(v / tails));
        const Interval& X = cyl_[n + 1][v];
        const Interval& J = cyl_[n][v % tails];
        pcs.push_back(Piece::linear(X.l, X.r, sgn > 0 ? J.l : J.r, sgn * slope_[n + 1][v]));
    }
    return PiecewiseMap(f0_.partition(), std::move(pcs));
}

PiecewiseMap RealizationState::f(int n) const {
    if (n < cfg_.N) return f0_;
    if (n > built_) throw DomainError("f_n requested beyond the built depth");
    const int p = f0_.p();
    struct Seg {
        Interval I;
        Interval image;
        double slope;  // |Dh| on children; 0 marks a gap
        int sgn;
        const GapRecord* g;
    };
    std::vector<Seg> segs;
    std::uint64_t m = ipow(p, n + 1), tails = ipow(p, n);
    segs.reserve(2 * m);
    for (std::uint64_t v = 0; v < m; ++v)
        segs.push_back({cyl_[n + 1][v], cyl_[n][v % tails], slope_[n + 1][v], f0_.orientation(int(v / tails)), nullptr});
    for (int k = 1; k <= n; ++k) {
        std::uint64_t lead = ipow(p, k - 1);
        for (const auto& g : gaps_[k]) segs.push_back({g.I, g.image, 0.0, f0_.orientation(int(g.w / lead)), &g});
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& a, const Seg& b) { return a.I.l < b.I.l; });
    std::vector<Piece> pcs;
    pcs.reserve(segs.size());
    for (std::size_t q = 0; q < segs.size(); ++q) {
        const Seg& s = segs[q];
        if (s.g == nullptr) {
            pcs.push_back(Piece::linear(s.I.l, s.I.r, s.sgn > 0 ? s.image.l : s.image.r, s.sgn * s.slope));
            continue;
        }
        if (q == 0 || q + 1 == segs.size() || segs[q - 1].g || segs[q + 1].g)
            throw DomainError("gap without neighbouring cylinders");
        double E = segs[q - 1].slope, E2 = segs[q + 1].slope;
        double tau = s.image.len() / s.I.len();
        double base = s.sgn > 0 ? s.image.l : s.image.r;
        if (!(2 * tau - 0.5 * (E + E2) > 0)) {
            Word w = word_from_index(s.g->w, p, s.g->order);
            throw AdmissibilityError("smoothing impossible on gap " + word_string(w) + "#" + std::to_string(s.g->i) +
                                         ": 2*tau-(E+E')/2 <= 0",
                                     w, s.g->i);
        }
        SmoothingPiece sp = SmoothingPiece::make(s.I.l, s.I.r, E, E2, tau, base, s.sgn);
        pcs.push_back(Piece::smoothing(s.I.l, s.I.r, sp));
    }
    return PiecewiseMap(f0_.partition(), std::move(pcs));
}

RealizationState::SmoothingCheck RealizationState::smoothing_check(int n) const {
    SmoothingCheck out;
    if (n <= cfg_.N) return out;
    PiecewiseMap fn = f(n);
    const int p = f0_.p();
    const double Me2 = std::exp(-2 * phi_.min());
    for (int k = cfg_.N + 1; k <= n; ++k)
        for (const auto& g : gaps_[k]) {
            const Piece& pc = fn.pieces()[fn.piece_index(g.I.mid())];
            const SmoothingPiece& sp = pc.sp;
            double dev = std::max({std::abs(sp.E - sp.tau), std::abs(sp.E2 - sp.tau), std::abs(sp.mid_slope() - sp.tau)});
            CylinderStats s = cylinder_stats(phi_, word_from_index(g.w, p, k));
            double bound = Me2 * s.V * s.E * s.E * K_;
            ++out.checked;
            if (dev > bound + 2 * tau_slack(g)) {
                ++out.violations;
                out.worst_excess = std::max(out.worst_excess, dev - bound);
            }
        }
    return out;
}

double RealizationState::tau_roundoff(int k) const {
    double r = 0;
    for (const auto& g : gaps_.at(k)) r = std::max(r, tau_slack(g));
    return r;
}

double RealizationState::image_hat(int d, std::uint64_t v, int i) const {
    const int p = f0_.p();
    return hull(cyl_[d + 1][v * p + i - 1], cyl_[d + 1][v * p + i]).len();
}

double RealizationState::cauchy_bound(int n, int m) const {
    if (n == m) return 0.0;
    if (n > m) std::swap(n, m);
    if (n < cfg_.N) throw DomainError("cauchy_bound needs N <= n");
    if (n > built_ + 1) throw DomainError("cauchy_bound beyond the built depth");
    const int p = f0_.p();
    double term1 = 0;
    std::uint64_t nv = ipow(p, n - 1);
    for (std::uint64_t v = 0; v < nv; ++v)
        for (int i = 1; i < p; ++i) term1 = std::max(term1, image_hat(n - 1, v, i));
    double supV = 0, maxE = 0;
    for (const auto& w : all_words(p, n)) {
        CylinderStats s = cylinder_stats(phi_, w);
        supV = std::max(supV, s.V);
        maxE = std::max(maxE, s.E);
    }
    double Me2 = std::exp(-2 * phi_.min()), Mp2 = std::exp(2 * phi_.max());
    double cst = 4 * Me2 * maxE * maxE * K_ + 1 + Mp2 * K_;
    return term1 + cst * supV;
}

namespace {

// phi coincides with log|Df0| on the cylinders of a depth where |Df0| is constant
bool exactly_realized(const PiecewiseMap& f0, const PotentialTable& phi) {
    int c = constancy_depth(f0);
    if (c < 0) return false;
    int d = std::max(c, phi.depth());
    if (ipow(f0.p(), d) > (std::uint64_t(1) << 21)) return false;
    PotentialTable a = log_derivative_table(f0, d), b = phi.refine(d);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a.at(i) - b.at(i)) > 1e-14 * std::max(1.0, std::abs(a.at(i)))) return false;
    return true;
}

}  // namespace

int departure_depth_for(const PiecewiseMap& f0, double eps, int cap) {
    if (1.0 <= eps / 4) return 1;
    for (int N = 2; N <= cap; ++N) {
        if (ipow(f0.p(), N - 1) > (std::uint64_t(1) << 24)) break;
        CylinderTree t = cylinder_tree(f0, N - 1);
        double mx = 0;
        for (const auto& x : t.cyl[N - 1]) mx = std::max(mx, x.len());
        if (mx <= eps / 4) return N;
    }
    return -1;
}

RealizedMap realize(const PiecewiseMap& f0, const PotentialTable& phi, double eps, const RealizeOptions& opt) {
    if (!(eps > 0)) throw DomainError("eps must be positive");
    int n_max = opt.n_max;
    int N0 = departure_depth_for(f0, eps, n_max);
    if (N0 < 0) throw AdmissibilityError("no departure depth N <= n_max keeps the value part within eps/4");
    if (exactly_realized(f0, phi)) {
        // the construction is stationary: every h_n and f_n equals f0
        RealizationState st(f0, phi, {N0, n_max, eps});
        RealizedMap out;
        out.map = f0;
        out.constancy_depth = std::max(constancy_depth(f0), phi.depth());
        auto& c = out.cert;
        c.N = N0;
        c.n_max = n_max;
        c.K = st.K();
        c.two_K = 2 * st.K();
        c.max_delta = cylinder_tree(f0, std::min(n_max, 12)).max_gap_ratio();
        c.lambda0 = st.expansion().lambda0;
        c.c0 = st.expansion().c0;
        c.verification_residual = verify_realization(out, phi, std::min(opt.verify_depth, n_max));
        return out;
    }
    int chosen = -1;
    double best = INFINITY;
    Word best_w;
    int best_i = 0;
    for (int N = N0; N <= n_max && chosen < 0; ++N) {
        try {
            RealizationState st(f0, phi, {N, n_max, eps});
            st.build_to(N);
            C1Parts d = c1_distance_parts(f0, st.f(N));
            if (d.total() <= eps / 2) {
                chosen = N;
            } else if (d.total() < best) {
                best = d.total();
                double worst = -1;
                for (const auto& g : st.gaps(N)) {
                    double dv = std::abs(g.tau - std::abs(f0.deriv(g.I.mid())));
                    if (dv > worst) {
                        worst = dv;
                        best_w = word_from_index(g.w, f0.p(), N);
                        best_i = g.i;
                    }
                }
            }
        } catch (const OverhangError&) {
            if (N == n_max) throw;
        }
    }
    if (chosen < 0) {
        std::string msg = "||f0 - f_N||_C1 exceeds eps/2 for every departure depth N in [" + std::to_string(N0) + "," +
                          std::to_string(n_max) + "]";
        if (std::isfinite(best)) msg += " (smallest " + std::to_string(best) + ")";
        throw AdmissibilityError(msg, best_w, best_i);
    }

    RealizationState st(f0, phi, {chosen, n_max, eps});
    st.build_to(n_max);
    if (opt.tail_tol > 0)
        while (st.cauchy_bound(n_max, n_max + 1) > opt.tail_tol && n_max < 24) {
            ++n_max;
            RealizationState deeper(f0, phi, {chosen, n_max, eps});
            deeper.build_to(n_max);
            st = std::move(deeper);
        }
    RealizedMap out;
    out.map = st.f(n_max);
    out.constancy_depth = n_max + 1;
    auto& c = out.cert;
    c.N = chosen;
    c.n_max = n_max;
    C1Parts d = c1_distance_parts(f0, out.map);
    c.value_part = d.value;
    c.deriv_part = d.deriv;
    c.c1_distance_to_f0 = d.total();
    c.cauchy_tail = st.cauchy_bound(n_max, n_max + 1);
    c.K = st.K();
    c.two_K = 2 * st.K();
    c.lambda0 = st.expansion().lambda0;
    c.c0 = st.expansion().c0;
    c.departure = st.departure();
    c.checks = st.construction_checks();
    c.max_delta = c.checks.max_delta;
    c.verification_residual = verify_realization(out, phi, std::min(opt.verify_depth, n_max));
    if (c.c1_distance_to_f0 > eps)
        throw AdmissibilityError("realized map is " + std::to_string(c.c1_distance_to_f0) + " away from f0 in C1 (eps " +
                                 std::to_string(eps) + ")");
    return out;
}

int constancy_depth(const PiecewiseMap& f, int cap) {
    const auto& pcs = f.pieces();
    for (int d = 1; d <= cap; ++d) {
        if (ipow(f.p(), d) > (std::uint64_t(1) << 21)) break;
        CylinderTree t = cylinder_tree(f, d);
        bool ok = true;
        for (const auto& X : t.cyl[d]) {
            const Piece& pc = pcs[f.piece_index(X.mid())];
            double tol = 1e-9 * X.len();
            if (pc.kind != Piece::Linear || X.l < pc.lo - tol || X.r > pc.hi + tol) {
                ok = false;
                break;
            }
        }
        if (ok) return d;
    }
    return -1;
}

double verify_realization(const PiecewiseMap& f, const PotentialTable& phi, int depth, int constancy) {
    if (phi.p() != f.p()) throw DomainError("potential and map use different alphabets");
    int R = std::max({depth, constancy, phi.depth()});
    if (ipow(f.p(), R) > (std::uint64_t(1) << 21)) throw DomainError("verification depth too large");
    CylinderTree t = cylinder_tree(f, R);
    double worst = 0;
    for (const auto& X : t.cyl[R]) {
        double x = X.mid();
        Word w = encode(f, x, phi.depth());
        worst = std::max(worst, std::abs(std::log(std::abs(f.deriv(x))) - phi(w)));
    }
    return worst;
}

double verify_realization(const RealizedMap& f, const PotentialTable& phi, int depth) {
    return verify_realization(f.map, phi, depth, f.constancy_depth);
}

PotentialTable log_derivative_table(const PiecewiseMap& f, int depth) {
    CylinderTree t = cylinder_tree(f, depth);
    std::vector<double> v;
    v.reserve(t.cyl[depth].size());
    for (const auto& X : t.cyl[depth]) v.push_back(std::log(std::abs(f.deriv(X.mid()))));
    return PotentialTable(f.p(), depth, std::move(v));
}

}  // namespace emr
