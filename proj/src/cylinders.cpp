#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "emr/interval_maps.hpp"

namespace emr {

const Interval& CylinderTree::cylinder(const Word& w) const {
    if (int(w.size()) > depth) throw DomainError("word deeper than the tree");
    return cyl[w.size()][word_index(w, p)];
}

const Interval& CylinderTree::gap_of(const Word& w, int i) const {
    if (int(w.size()) >= depth) throw DomainError("gap order beyond the tree");
    if (i < 1 || i >= p) throw DomainError("gap index out of range");
    return gap[w.size()][word_index(w, p) * (p - 1) + (i - 1)];
}

Interval CylinderTree::hat(const Word& w, int i) const {
    Word a = w, b = w;
    a.push_back(i - 1);
    b.push_back(i);
    const Interval& x = cylinder(a);
    const Interval& y = cylinder(b);
    return {std::min(x.l, y.l), std::max(x.r, y.r)};
}

double CylinderTree::gap_ratio(int order, std::uint64_t widx, int i) const {
    const Interval& x = cyl[order + 1][widx * p + (i - 1)];
    const Interval& y = cyl[order + 1][widx * p + i];
    const Interval& g = gap[order][widx * (p - 1) + (i - 1)];
    if (!(g.len() > 0)) throw DomainError("zero-length gap");
    double hat = std::max(x.r, y.r) - std::min(x.l, y.l);
    return hat / g.len() - 1.0;
}

double CylinderTree::gap_ratio(const Word& w, int i) const {
    if (int(w.size()) >= depth) throw DomainError("gap order beyond the tree");
    if (i < 1 || i >= p) throw DomainError("gap index out of range");
    return gap_ratio(int(w.size()), word_index(w, p), i);
}

double CylinderTree::max_gap_ratio() const {
    double m = 0;
    for (int n = 0; n < depth; ++n)
        for (std::uint64_t w = 0; w < cyl[n].size(); ++w)
            for (int i = 1; i < p; ++i) m = std::max(m, gap_ratio(n, w, i));
    return m;
}

CylinderTree cylinder_tree(const PiecewiseMap& f, int n) {
    if (n < 1) throw DomainError("cylinder tree depth must be >= 1");
    int p = f.p();
    CylinderTree t;
    t.p = p;
    t.depth = n;
    t.cyl.resize(n + 1);
    t.gap.resize(n);
    t.cyl[0] = {Interval{0.0, 1.0}};
    for (int d = 1; d <= n; ++d) {
        std::uint64_t m = ipow(p, d - 1);
        auto& cur = t.cyl[d];
        cur.resize(m * p);
        for (int a = 0; a < p; ++a) {
            if (d == 1) {
                cur[a] = f.partition().branch(a);
                continue;
            }
            for (std::uint64_t rest = 0; rest < m; ++rest) {
                Interval x = f.pullback(a, t.cyl[d - 1][rest]);
                if (!(x.r > x.l)) throw DomainError("inversion produced an empty cylinder (malformed map)");
                cur[a * m + rest] = x;
            }
        }
    }
    for (int o = 0; o < n; ++o) {
        std::uint64_t m = ipow(p, o);
        auto& g = t.gap[o];
        g.resize(m * (p - 1));
        for (std::uint64_t w = 0; w < m; ++w)
            for (int i = 1; i < p; ++i) {
                const Interval& x = t.cyl[o + 1][w * p + i - 1];
                const Interval& y = t.cyl[o + 1][w * p + i];
                Interval gi = x.r <= y.l ? Interval{x.r, y.l} : Interval{y.r, x.l};
                if (!(gi.len() > 0)) throw DomainError("siblings overlap (malformed map)");
                g[w * (p - 1) + i - 1] = gi;
            }
    }
    return t;
}

std::string cylinder_tree_csv(const CylinderTree& t) {
    std::ostringstream os;
    char buf[128];
    os << "word,left,right,kind,order\n";
    for (int d = 1; d <= t.depth; ++d)
        for (std::uint64_t w = 0; w < t.cyl[d].size(); ++w) {
            const Interval& x = t.cyl[d][w];
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g,cyl,%d\n", x.l, x.r, d);
            os << word_string(word_from_index(w, t.p, d)) << buf;
        }
    for (int o = 0; o < t.depth; ++o)
        for (std::uint64_t w = 0; w < t.cyl[o].size(); ++w)
            for (int i = 1; i < t.p; ++i) {
                const Interval& g = t.gap[o][w * (t.p - 1) + i - 1];
                std::snprintf(buf, sizeof buf, "#%d,%.17g,%.17g,gap,%d\n", i, g.l, g.r, o);
                os << word_string(word_from_index(w, t.p, o)) << buf;
            }
    return os.str();
}

Word encode(const PiecewiseMap& f, double x, int depth) {
    Word w;
    w.reserve(depth);
    for (int j = 0; j < depth; ++j) {
        int b = f.branch_of(x);
        if (b < 0) throw DomainError("orbit escapes X after " + std::to_string(j) + " steps");
        w.push_back(b);
        if (j + 1 < depth) x = f.eval(x);
    }
    return w;
}

Interval decode(const PiecewiseMap& f, const Word& w) {
    check_word(w, f.p());
    Interval J{0.0, 1.0};
    for (auto it = w.rbegin(); it != w.rend(); ++it) J = f.pullback(*it, J);
    return J;
}

Interval decode_to_precision(const PiecewiseMap& f, const Word& w, double precision) {
    check_word(w, f.p());
    for (std::size_t n = 1; n <= w.size(); ++n) {
        Interval J = decode(f, Word(w.begin(), w.begin() + n));
        if (J.len() < precision) return J;
    }
    throw DomainError("word too short to reach the requested precision");
}

double periodic_point(const PiecewiseMap& f, const Word& cycle) {
    if (cycle.empty()) throw DomainError("empty cycle");
    check_word(cycle, f.p());
    double x = 0.5;
    for (int it = 0; it < 5000; ++it) {
        double y = x;
        for (auto s = cycle.rbegin(); s != cycle.rend(); ++s) y = f.branch_inverse(*s, y);
        bool done = std::abs(y - x) <= 1e-17;
        x = y;
        if (done) break;
    }
    return x;
}

CodingCheck coding_lipschitz_check(const PiecewiseMap& f, double theta, int trials, std::uint64_t seed, int word_length) {
    ExpansionCertificate ec = expansion_certificate(f, 1);
    if (!(theta >= 1.0 / ec.lambda0 - 1e-15 && theta < 1.0))
        throw DomainError("theta must lie in [1/lambda0, 1)");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> sym(0, f.p() - 1);
    std::uniform_int_distribution<int> pref(0, word_length);
    CodingCheck out;
    for (int t = 0; t < trials; ++t) {
        Word a(word_length), b(word_length);
        for (auto& s : a) s = sym(rng);
        int s = pref(rng);
        for (int j = 0; j < word_length; ++j) {
            if (j < s)
                b[j] = a[j];
            else if (j == s)
                b[j] = (a[j] + 1 + std::uniform_int_distribution<int>(0, f.p() - 2)(rng)) % f.p();
            else
                b[j] = sym(rng);
        }
        double d = std::abs(decode(f, a).mid() - decode(f, b).mid());
        int sd = first_disagreement(a, b);
        double bound = sd < 0 ? 0.0 : std::pow(theta, sd) / ec.c0;
        if (d > bound) {
            out.ok = false;
            ++out.violations;
        }
        if (bound > 0) out.worst_ratio = std::max(out.worst_ratio, d / bound);
    }
    return out;
}

C1Parts c1_distance_parts(const PiecewiseMap& f, const PiecewiseMap& g, int grid) {
    if (!(f.partition() == g.partition())) throw DomainError("c1_distance: partitions differ");
    std::vector<double> pts = f.breakpoints();
    std::vector<double> pg = g.breakpoints();
    pts.insert(pts.end(), pg.begin(), pg.end());
    const MarkovPartition& part = f.partition();
    for (int i = 0; i < part.p() && grid > 0; ++i)
        for (int j = 1; j < grid; ++j) pts.push_back(part.alpha[i] + (part.beta[i] - part.alpha[i]) * j / grid);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    C1Parts out;
    const auto& fp = f.pieces();
    const auto& gp = g.pieces();
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        double a = pts[k], b = pts[k + 1];
        double m = 0.5 * (a + b);
        if (f.branch_of(m) < 0) continue;
        // on [a,b] both maps are single polynomial pieces of degree <= 2
        const Piece& P = fp[f.piece_index(m)];
        const Piece& Q = gp[g.piece_index(m)];
        double d0 = P.value(a) - Q.value(a), d1 = P.value(b) - Q.value(b);
        double D0 = P.deriv(a) - Q.deriv(a), D1 = P.deriv(b) - Q.deriv(b);
        double dm = P.deriv(m) - Q.deriv(m);
        out.value = std::max({out.value, std::abs(d0), std::abs(d1)});
        out.deriv = std::max({out.deriv, std::abs(D0), std::abs(D1), std::abs(dm)});
        if ((D0 > 0) != (D1 > 0) && D0 != D1) {
            double x = a + (b - a) * D0 / (D0 - D1);
            if (x > a && x < b) out.value = std::max(out.value, std::abs(P.value(x) - Q.value(x)));
        }
    }
    return out;
}

double c1_distance(const PiecewiseMap& f, const PiecewiseMap& g, int grid) { return c1_distance_parts(f, g, grid).total(); }

}  // namespace emr
