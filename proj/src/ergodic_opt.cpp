#include "emr/ergodic_opt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <set>

namespace emr {

WeightedWordGraph::WeightedWordGraph(const PotentialTable& phi)
    : p(phi.p()), k(phi.depth()), nodes(ipow(phi.p(), phi.depth() - 1)), weight(phi.values()) {}

namespace {

std::uint64_t window_index(const Word& cyc, std::size_t start, int len, int p) {
    std::uint64_t idx = 0;
    std::size_t q = cyc.size();
    for (int i = 0; i < len; ++i) idx = idx * std::uint64_t(p) + std::uint64_t(cyc[(start + i) % q]);
    return idx;
}

// lexicographically least primitive cycle (prefix-first order) of length
// <= maxlen whose every depth-k window is an allowed edge word
std::optional<Word> least_cycle(int p, int k, const std::vector<char>& allowed, int maxlen) {
    Word w;
    std::function<bool()> dfs = [&]() -> bool {
        if (!w.empty() && is_lyndon(w)) {
            bool ok = true;
            for (std::size_t j = 0; j < w.size() && ok; ++j) ok = allowed[window_index(w, j, k, p)];
            if (ok) return true;
        }
        if (int(w.size()) == maxlen) return false;
        for (int c = 0; c < p; ++c) {
            w.push_back(c);
            if (int(w.size()) < k || allowed[window_index(w, w.size() - k, k, p)])
                if (dfs()) return true;
            w.pop_back();
        }
        return false;
    };
    if (dfs()) return w;
    return std::nullopt;
}

OptimizationResult extrema_impl(const PotentialTable& phi, bool use_howard) {
    OptimizationResult out;
    WeightedWordGraph g(phi);
    int maxlen = int(g.nodes);
    auto pick = [&](const PotentialTable& ph, double lam) {
        SubAction s = subaction(ph, lam);
        std::vector<double> r = edge_residuals(ph, s);
        double scale = std::max(1.0, sup_abs(ph));
        for (double tol : {1e-9, 1e-7, 1e-5}) {
            std::vector<char> allowed(r.size());
            for (std::size_t e = 0; e < r.size(); ++e) allowed[e] = r[e] <= tol * scale;
            if (auto c = least_cycle(ph.p(), ph.depth(), allowed, maxlen)) {
                PeriodicOrbitMeasure m;
                m.cycle = *c;
                m.mean = cycle_mean(ph, *c);
                return m;
            }
        }
        throw DomainError("no calibrated cycle found (mean-cycle value inconsistent)");
    };
    out.karp_inf = use_howard ? howard_min_mean(g) : karp_min_mean(g);
    out.argmin = pick(phi, out.karp_inf);
    out.chi_inf = out.argmin.mean;

    PotentialTable neg = phi.map([](double x) { return -x; });
    WeightedWordGraph gn(neg);
    double lam = use_howard ? howard_min_mean(gn) : karp_min_mean(gn);
    out.karp_sup = -lam;
    out.argmax = pick(neg, lam);
    out.argmax.mean = -out.argmax.mean;
    out.chi_sup = out.argmax.mean;
    return out;
}

}  // namespace

std::vector<double> PeriodicOrbitMeasure::cylinder_weights(int p, int m) const {
    std::vector<double> w(ipow(p, m), 0.0);
    double q = double(cycle.size());
    for (std::size_t j = 0; j < cycle.size(); ++j) w[window_index(cycle, j, m, p)] += 1.0 / q;
    return w;
}

bool PeriodicOrbitMeasure::is_invariant(int p, int m, double tol) const {
    std::vector<double> a = cylinder_weights(p, m), b = cylinder_weights(p, m + 1);
    std::uint64_t n = a.size();
    for (std::uint64_t w = 0; w < n; ++w) {
        double s = 0;
        for (int c = 0; c < p; ++c) s += b[std::uint64_t(c) * n + w];
        if (std::abs(s - a[w]) > tol) return false;
    }
    return true;
}

double cycle_mean(const PotentialTable& phi, const Word& cycle) {
    if (cycle.empty()) throw DomainError("empty cycle");
    check_word(cycle, phi.p());
    double s = 0;
    for (std::size_t j = 0; j < cycle.size(); ++j) s += phi.at(window_index(cycle, j, phi.depth(), phi.p()));
    return s / double(cycle.size());
}

bool is_lyndon(const Word& w) {
    std::size_t n = w.size();
    if (n == 0) return false;
    for (std::size_t r = 1; r < n; ++r) {
        // compare w with its rotation by r
        for (std::size_t i = 0; i < n; ++i) {
            int a = w[i], b = w[(i + r) % n];
            if (a < b) break;
            if (a > b) return false;
            if (i + 1 == n) return false;  // equal rotation: not primitive
        }
    }
    return true;
}

Word least_rotation(const Word& w) {
    Word best = w;
    for (std::size_t r = 1; r < w.size(); ++r) {
        Word x(w.begin() + r, w.end());
        x.insert(x.end(), w.begin(), w.begin() + r);
        if (x < best) best = x;
    }
    return best;
}

double karp_min_mean(const WeightedWordGraph& g) {
    std::uint64_t n = g.nodes;
    std::vector<std::vector<double>> D(n + 1, std::vector<double>(n, INFINITY));
    std::fill(D[0].begin(), D[0].end(), 0.0);
    for (std::uint64_t j = 0; j < n; ++j)
        for (std::uint64_t e = 0; e < g.edges(); ++e) {
            double v = D[j][g.source(e)] + g.weight[e];
            double& t = D[j + 1][g.target(e)];
            if (v < t) t = v;
        }
    double best = INFINITY;
    for (std::uint64_t v = 0; v < n; ++v) {
        double worst = -INFINITY;
        for (std::uint64_t j = 0; j < n; ++j) worst = std::max(worst, (D[n][v] - D[j][v]) / double(n - j));
        best = std::min(best, worst);
    }
    return best;
}

double howard_min_mean(const WeightedWordGraph& g) {
    const std::uint64_t n = g.nodes;
    const int p = g.p;
    std::vector<int> pol(n);
    for (std::uint64_t v = 0; v < n; ++v) {
        int b = 0;
        for (int c = 1; c < p; ++c)
            if (g.weight[v * p + c] < g.weight[v * p + b]) b = c;
        pol[v] = b;
    }
    std::vector<double> eta(n), x(n);
    const double tol = 1e-13;
    for (int iter = 0; iter < 10000; ++iter) {
        // value determination on the functional graph of the policy
        std::vector<int> state(n, 0);  // 0 new, 1 on stack, 2 done
        for (std::uint64_t s = 0; s < n; ++s) {
            if (state[s]) continue;
            std::vector<std::uint64_t> path;
            std::uint64_t v = s;
            while (state[v] == 0) {
                state[v] = 1;
                path.push_back(v);
                v = g.target(v * p + pol[v]);
            }
            std::size_t start = path.size();
            if (state[v] == 1) {
                // new cycle beginning at v
                start = std::find(path.begin(), path.end(), v) - path.begin();
                double sum = 0;
                for (std::size_t i = start; i < path.size(); ++i) sum += g.weight[path[i] * p + pol[path[i]]];
                double mean = sum / double(path.size() - start);
                x[v] = 0;
                eta[v] = mean;
                for (std::size_t i = path.size() - 1; i > start; --i) {
                    std::uint64_t u = path[i];
                    eta[u] = mean;
                    x[u] = g.weight[u * p + pol[u]] - mean + x[g.target(u * p + pol[u])];
                }
                for (std::size_t i = start; i < path.size(); ++i) state[path[i]] = 2;
            }
            for (std::size_t i = start; i-- > 0;) {
                std::uint64_t u = path[i], t = g.target(u * p + pol[u]);
                eta[u] = eta[t];
                x[u] = g.weight[u * p + pol[u]] - eta[t] + x[t];
                state[u] = 2;
            }
        }
        bool changed = false;
        for (std::uint64_t v = 0; v < n; ++v) {
            int b = pol[v];
            for (int c = 0; c < p; ++c)
                if (eta[g.target(v * p + c)] < eta[g.target(v * p + b)] - tol) b = c;
            if (b != pol[v] && eta[g.target(v * p + b)] < eta[v] - tol) {
                pol[v] = b;
                changed = true;
            }
        }
        if (!changed) {
            for (std::uint64_t v = 0; v < n; ++v) {
                int b = pol[v];
                double bv = x[v];
                for (int c = 0; c < p; ++c) {
                    std::uint64_t t = g.target(v * p + c);
                    if (eta[t] > eta[v] + tol) continue;
                    double val = g.weight[v * p + c] - eta[v] + x[t];
                    if (val < bv - tol * std::max(1.0, std::abs(bv))) {
                        bv = val;
                        b = c;
                    }
                }
                if (b != pol[v]) {
                    pol[v] = b;
                    changed = true;
                }
            }
        }
        if (!changed) return *std::min_element(eta.begin(), eta.end());
    }
    throw DomainError("policy iteration did not converge");
}

OptimizationResult chi_extrema(const PotentialTable& phi, bool use_howard) { return extrema_impl(phi, use_howard); }

OptimizationResult brute_force_extrema(const PotentialTable& phi, int max_period, std::uint64_t budget) {
    const int p = phi.p();
    if (max_period < 1) throw DomainError("max_period must be >= 1");
    std::uint64_t cost = 0;
    for (int q = 1; q <= max_period; ++q) {
        cost += ipow(p, q);
        if (cost > budget) throw DomainError("brute force budget exceeded");
    }
    // Duval's generation visits Lyndon words in lexicographic order
    std::vector<std::pair<Word, double>> all;
    Word w{-1};
    while (!w.empty()) {
        ++w.back();
        all.push_back({w, cycle_mean(phi, w)});
        std::size_t m = w.size();
        while (int(w.size()) < max_period) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == p - 1) w.pop_back();
    }
    double mn = INFINITY, mx = -INFINITY;
    for (auto& [c, v] : all) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    double tol = 1e-12 * std::max(1.0, sup_abs(phi));
    OptimizationResult out;
    out.chi_inf = out.karp_inf = mn;
    out.chi_sup = out.karp_sup = mx;
    bool got_min = false, got_max = false;
    for (auto& [c, v] : all) {
        if (!got_min && v <= mn + tol) {
            out.argmin = {c, v};
            got_min = true;
        }
        if (!got_max && v >= mx - tol) {
            out.argmax = {c, v};
            got_max = true;
        }
    }
    return out;
}

SubAction subaction(const PotentialTable& phi) { return subaction(phi, karp_min_mean(WeightedWordGraph(phi))); }

SubAction subaction(const PotentialTable& phi, double chi_inf) {
    WeightedWordGraph g(phi);
    SubAction s;
    s.chi_inf = chi_inf;
    s.u.assign(g.nodes, 0.0);
    int cap = int(10 * g.nodes) + 10;
    bool converged = false;
    for (int it = 0; it < cap; ++it) {
        std::vector<double> nu = s.u;
        for (std::uint64_t e = 0; e < g.edges(); ++e) {
            double v = s.u[g.source(e)] + g.weight[e] - chi_inf;
            double& t = nu[g.target(e)];
            if (v < t) t = v;
        }
        double change = 0;
        for (std::uint64_t v = 0; v < g.nodes; ++v) change = std::max(change, std::abs(nu[v] - s.u[v]));
        s.u.swap(nu);
        s.iterations = it + 1;
        if (change <= 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged) throw DomainError("sub-action iteration did not converge (chi_inf inconsistent)");
    double m = *std::min_element(s.u.begin(), s.u.end());
    for (double& x : s.u) x -= m;
    std::vector<double> r = edge_residuals(phi, s);
    s.min_residual = *std::min_element(r.begin(), r.end());
    s.coboundary = std::all_of(r.begin(), r.end(), [](double x) { return std::abs(x) <= 1e-10; });
    return s;
}

std::vector<double> edge_residuals(const PotentialTable& phi, const SubAction& s) {
    WeightedWordGraph g(phi);
    std::vector<double> r(g.edges());
    for (std::uint64_t e = 0; e < g.edges(); ++e) r[e] = g.weight[e] + s.u[g.source(e)] - s.u[g.target(e)] - s.chi_inf;
    return r;
}

bool cohomology_gap(const PotentialTable& phi) {
    OptimizationResult r = chi_extrema(phi);
    return r.chi_sup - r.chi_inf > 1e-12;
}

bool argmin_unique(const PotentialTable& phi, double tol) {
    OptimizationResult r = chi_extrema(phi);
    SubAction s = subaction(phi, r.chi_inf);
    std::vector<double> res = edge_residuals(phi, s);
    const Word& c = r.argmin.cycle;
    int p = phi.p(), k = phi.depth();
    std::set<std::uint64_t> cyc_edges, cyc_nodes;
    for (std::size_t j = 0; j < c.size(); ++j) {
        cyc_edges.insert(window_index(c, j, k, p));
        cyc_nodes.insert(k > 1 ? window_index(c, j, k - 1, p) : 0);
    }
    if (cyc_nodes.size() != c.size()) return false;
    double scale = std::max(1.0, sup_abs(phi));
    for (std::size_t e = 0; e < res.size(); ++e)
        if (res[e] <= tol * scale && !cyc_edges.count(e)) return false;
    return true;
}

double lyapunov_exponent(const PiecewiseMap& f, const PeriodicOrbitMeasure& orbit) {
    const Word& c = orbit.cycle;
    double s = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        Word rot(c.begin() + j, c.end());
        rot.insert(rot.end(), c.begin(), c.begin() + j);
        double x = periodic_point(f, rot);
        s += std::log(std::abs(f.deriv(x)));
    }
    return s / double(c.size());
}

}  // namespace emr
