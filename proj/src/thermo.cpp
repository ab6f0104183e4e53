#include "emr/thermo.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>
#include <thread>

namespace emr {

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    std::size_t T = std::max<std::size_t>(1, std::min<std::size_t>(threads < 1 ? 1 : threads, n));
    if (T == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < T; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += T) fn(i);
        });
    for (auto& th : pool) th.join();
}

PotentialTable negated(const PotentialTable& phi) { return phi.map([](double x) { return -x; }); }

}  // namespace

TransferMatrix::TransferMatrix(const PotentialTable& phi, double t_)
    : TransferMatrix(phi, t_, subaction(phi), subaction(negated(phi))) {}

TransferMatrix::TransferMatrix(const PotentialTable& phi, double t_, const SubAction& plus, const SubAction& minus)
    : p(phi.p()), k(phi.depth()), nodes(ipow(phi.p(), phi.depth() - 1)), t(t_), weight(phi.values()) {
    // t >= 0: exp(-t phi) ~ exp(-t r) with r the residuals of phi; t < 0: residuals of -phi
    const bool pos = t >= 0;
    const double s = std::abs(t);
    const SubAction& sa = pos ? plus : minus;
    PotentialTable psi = pos ? phi : negated(phi);
    std::vector<double> r = edge_residuals(psi, sa);
    log_entry.resize(r.size());
    for (std::size_t e = 0; e < r.size(); ++e) log_entry[e] = -s * std::max(0.0, r[e]);
    shift = -s * sa.chi_inf;
}

PerronData perron(const TransferMatrix& M, double rel_tol, int max_iter) {
    const std::uint64_t n = M.nodes, E = n * std::uint64_t(M.p);
    std::vector<double> a(E);
    for (std::uint64_t e = 0; e < E; ++e) a[e] = std::exp(M.log_entry[e]);
    auto iterate = [&](bool right, std::vector<double>& x, int& its) {
        x.assign(n, 1.0);
        std::vector<double> y(n);
        for (its = 0; its < max_iter; ++its) {
            y = x;  // the +I shift separates the Perron root from the rest of the circle
            for (std::uint64_t e = 0; e < E; ++e) {
                std::uint64_t s = e / M.p, d = e % n;
                if (right)
                    y[s] += a[e] * x[d];
                else
                    y[d] += a[e] * x[s];
            }
            double mx = *std::max_element(y.begin(), y.end());
            double change = 0;
            for (std::uint64_t u = 0; u < n; ++u) {
                y[u] /= mx;
                change = std::max(change, std::abs(y[u] - x[u]));
            }
            x.swap(y);
            if (change <= rel_tol) return;
        }
    };
    PerronData pd;
    int its_r = 0, its_l = 0;
    iterate(true, pd.right, its_r);
    iterate(false, pd.left, its_l);
    pd.iterations = std::max(its_r, its_l);
    for (double& v : pd.right) v = std::max(v, DBL_MIN);
    for (double& v : pd.left) v = std::max(v, DBL_MIN);
    std::vector<double> Mr(n, 0.0);
    for (std::uint64_t e = 0; e < E; ++e) Mr[e / M.p] += a[e] * pd.right[e % n];
    double num = 0, den = 0;
    for (std::uint64_t u = 0; u < n; ++u) {
        num += Mr[u];
        den += pd.right[u];
    }
    pd.log_rho = std::log(num / den);
    double dot = 0;
    for (std::uint64_t u = 0; u < n; ++u) dot += pd.left[u] * pd.right[u];
    for (double& v : pd.left) v /= dot;
    return pd;
}

EquilibriumMeasure equilibrium(const TransferMatrix& M) {
    PerronData pd = perron(M);
    EquilibriumMeasure mu;
    mu.p = M.p;
    mu.k = M.k;
    mu.nodes = M.nodes;
    mu.t = M.t;
    mu.pressure = pd.log_rho + M.shift;
    const std::uint64_t E = M.nodes * std::uint64_t(M.p);
    mu.P.resize(E);
    mu.logP.resize(E);
    for (std::uint64_t e = 0; e < E; ++e) {
        std::uint64_t s = e / M.p, d = e % M.nodes;
        mu.logP[e] = M.log_entry[e] + std::log(pd.right[d]) - std::log(pd.right[s]) - pd.log_rho;
        mu.P[e] = std::exp(mu.logP[e]);
    }
    mu.pi.resize(M.nodes);
    double z = 0;
    for (std::uint64_t u = 0; u < M.nodes; ++u) z += mu.pi[u] = pd.left[u] * pd.right[u];
    for (double& v : mu.pi) v /= z;
    return mu;
}

EquilibriumMeasure equilibrium(const PotentialTable& phi, double t) { return equilibrium(TransferMatrix(phi, t)); }

double pressure(const PotentialTable& phi, double t) {
    TransferMatrix M(phi, t);
    return perron(M).log_rho + M.shift;
}

std::vector<double> EquilibriumMeasure::cylinder_weights(int m) const {
    if (m < 0) throw DomainError("cylinder depth must be >= 0");
    std::vector<double> w(ipow(p, m), 0.0);
    const int km = k - 1;
    if (m <= km) {
        std::uint64_t div = ipow(p, km - m);
        for (std::uint64_t u = 0; u < nodes; ++u) w[u / div] += pi[u];
        return w;
    }
    const std::uint64_t ext = ipow(p, m - km);
    for (std::uint64_t u = 0; u < nodes; ++u)
        for (std::uint64_t x = 0; x < ext; ++x) {
            // word = u followed by the m-km symbols of x
            double v = pi[u];
            std::uint64_t node = u;
            for (int j = m - km - 1; j >= 0 && v > 0; --j) {
                int c = int((x / ipow(p, j)) % p);
                std::uint64_t e = node * p + c;
                v *= P[e];
                node = e % nodes;
            }
            w[u * ext + x] = v;
        }
    return w;
}

double entropy(const EquilibriumMeasure& mu) {
    double h = 0;
    for (std::uint64_t e = 0; e < mu.P.size(); ++e)
        if (mu.P[e] > 0) h -= mu.pi[e / mu.p] * mu.P[e] * mu.logP[e];
    return h;
}

double integral(const EquilibriumMeasure& mu, const PotentialTable& phi) {
    if (phi.p() != mu.p || phi.depth() != mu.k) throw DomainError("potential does not match the measure");
    double s = 0;
    for (std::uint64_t e = 0; e < mu.P.size(); ++e) s += mu.pi[e / mu.p] * mu.P[e] * phi.at(e);
    return s;
}

EquilibriumMeasure periodic_markov_measure(int p, int k, const PeriodicOrbitMeasure& orbit) {
    EquilibriumMeasure mu;
    mu.p = p;
    mu.k = k;
    mu.nodes = ipow(p, k - 1);
    mu.t = INFINITY;
    std::vector<double> ew = orbit.cylinder_weights(p, k);
    mu.pi.assign(mu.nodes, 0.0);
    for (std::uint64_t e = 0; e < ew.size(); ++e) mu.pi[e / p] += ew[e];
    mu.P.resize(ew.size());
    mu.logP.resize(ew.size());
    for (std::uint64_t e = 0; e < ew.size(); ++e) {
        double s = mu.pi[e / p];
        mu.P[e] = s > 0 ? ew[e] / s : 1.0 / p;
        mu.logP[e] = mu.P[e] > 0 ? std::log(mu.P[e]) : -INFINITY;
    }
    return mu;
}

namespace {

struct SweepContext {
    const PotentialTable& phi;
    SubAction plus, minus;
    explicit SweepContext(const PotentialTable& f) : phi(f), plus(subaction(f)), minus(subaction(negated(f))) {}

    double P(double t) const {
        TransferMatrix M(phi, t, plus, minus);
        return perron(M).log_rho + M.shift;
    }
    PressureSample sample(double t, double h, EquilibriumMeasure* out) const {
        EquilibriumMeasure mu = equilibrium(TransferMatrix(phi, t, plus, minus));
        PressureSample s;
        s.t = t;
        s.P = mu.pressure;
        s.dPdt = (P(t + h) - P(t - h)) / (2 * h);
        s.integral = integral(mu, phi);
        s.entropy = entropy(mu);
        if (out) *out = std::move(mu);
        return s;
    }
};

}  // namespace

std::vector<PressureSample> pressure_curve(const PotentialTable& phi, const std::vector<double>& ts, int threads,
                                           double h) {
    SweepContext ctx(phi);
    std::vector<PressureSample> out(ts.size());
    parallel_for(ts.size(), threads, [&](std::size_t i) { out[i] = ctx.sample(ts[i], h, nullptr); });
    return out;
}

std::vector<double> linear_grid(double a, double b, int n) {
    if (n < 1) throw DomainError("grid needs at least one point");
    if (n == 1) return {a};
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = a + (b - a) * double(i) / double(n - 1);
    return g;
}

std::vector<double> default_freeze_grid(double tmax) {
    std::vector<double> g;
    for (int j = 0; j <= 8 && std::ldexp(1.0, j) < tmax; ++j) g.push_back(std::ldexp(1.0, j));
    g.push_back(tmax);
    return g;
}

FreezeReport freeze(const PotentialTable& phi, const std::vector<double>& ts, int threads, double tol) {
    if (ts.empty()) throw DomainError("empty t grid");
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1])) throw DomainError("t grid must be increasing");
    FreezeReport rep;
    OptimizationResult opt = chi_extrema(phi);
    rep.limit = opt.argmin;
    rep.degenerate = opt.chi_sup - opt.chi_inf <= 1e-12;
    std::vector<double> target = rep.limit.cylinder_weights(phi.p(), phi.depth());

    SweepContext ctx(phi);
    rep.curve.resize(ts.size());
    rep.deviation.resize(ts.size());
    parallel_for(ts.size(), threads, [&](std::size_t i) {
        EquilibriumMeasure mu;
        rep.curve[i] = ctx.sample(ts[i], 1e-3, &mu);
        std::vector<double> w = mu.cylinder_weights(phi.depth());
        double d = 0;
        for (std::size_t j = 0; j < w.size(); ++j) d = std::max(d, std::abs(w[j] - target[j]));
        rep.deviation[i] = d;
    });
    for (const auto& s : rep.curve) {
        rep.max_legendre_error = std::max(rep.max_legendre_error, std::abs(s.entropy - (s.P + s.t * s.integral)));
        rep.max_derivative_error = std::max(rep.max_derivative_error, std::abs(s.dPdt + s.integral));
    }
    rep.t_max = ts.back();
    rep.final_deviation = rep.deviation.back();

    // least squares of log deviation against t
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(rep.deviation[i] > 1e-300)) continue;
        double x = ts[i], y = std::log(rep.deviation[i]);
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (n >= 2 && n * sxx - sx * sx > 0) {
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        rep.decay_rate = -slope;
        rep.decay_intercept = (sy - slope * sx) / n;
    }
    rep.converged = !rep.degenerate && rep.final_deviation <= tol;
    if (rep.degenerate)
        rep.status = "degenerate: all cycle means coincide, no single periodic limit";
    else if (rep.converged)
        rep.status = "converged to the minimizing periodic orbit";
    else
        rep.status = "no convergence detected at t_max";
    return rep;
}

SupportReport markov_support_entropy_report(const EquilibriumMeasure& mu) {
    SupportReport r;
    r.min_transition = mu.P.empty() ? 0 : *std::min_element(mu.P.begin(), mu.P.end());
    r.full_support = r.min_transition > 0;
    bool pi_pos = std::all_of(mu.pi.begin(), mu.pi.end(), [](double v) { return v > 0; });
    r.full_support = r.full_support && pi_pos;
    r.entropy = entropy(mu);
    r.positive_entropy = r.entropy > 1e-14;
    // irreducible: every node reaches and is reached from node 0 along positive transitions
    auto reach = [&](bool fwd) {
        std::vector<char> seen(mu.nodes, 0);
        std::vector<std::uint64_t> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            std::uint64_t u = stack.back();
            stack.pop_back();
            for (std::uint64_t e = 0; e < mu.P.size(); ++e) {
                if (!(mu.P[e] > 0)) continue;
                std::uint64_t s = e / mu.p, d = e % mu.nodes;
                std::uint64_t from = fwd ? s : d, to = fwd ? d : s;
                if (from == u && !seen[to]) {
                    seen[to] = 1;
                    stack.push_back(to);
                }
            }
        }
        return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
    };
    r.ergodic = reach(true) && reach(false);
    return r;
}

}  // namespace emr
