#include "emr/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace emr {

std::uint64_t ipow(int p, int n) {
    std::uint64_t r = 1;
    for (int i = 0; i < n; ++i) {
        if (r > (std::uint64_t(1) << 62) / std::uint64_t(p))
            throw DomainError("word count overflow");
        r *= std::uint64_t(p);
    }
    return r;
}

std::uint64_t word_index(const Word& w, int p) {
    std::uint64_t idx = 0;
    for (int a : w) idx = idx * std::uint64_t(p) + std::uint64_t(a);
    return idx;
}

Word word_from_index(std::uint64_t idx, int p, int len) {
    Word w(len);
    for (int i = len - 1; i >= 0; --i) {
        w[i] = int(idx % std::uint64_t(p));
        idx /= std::uint64_t(p);
    }
    return w;
}

std::string word_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (int a : w) {
        if (a < 10)
            s.push_back(char('0' + a));
        else
            s.push_back(char('a' + a - 10));
    }
    return s;
}

Word parse_word(const std::string& s, int p) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        int a;
        if (c >= '0' && c <= '9')
            a = c - '0';
        else if (c >= 'a' && c <= 'z')
            a = c - 'a' + 10;
        else
            throw DomainError("bad symbol '" + std::string(1, c) + "' in word");
        w.push_back(a);
    }
    check_word(w, p);
    return w;
}

void check_word(const Word& w, int p) {
    for (int a : w)
        if (a < 0 || a >= p) throw DomainError("symbol " + std::to_string(a) + " out of range for p=" + std::to_string(p));
}

std::vector<Word> all_words(int p, int n) {
    std::uint64_t m = ipow(p, n);
    std::vector<Word> out;
    out.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i) out.push_back(word_from_index(i, p, n));
    return out;
}

PotentialTable::PotentialTable(int p, int depth, std::vector<double> values)
    : p_(p), k_(depth), v_(std::move(values)) {
    if (p < 2) throw DomainError("alphabet size must be >= 2");
    if (depth < 1) throw DomainError("potential depth must be >= 1");
    if (v_.size() != ipow(p, depth)) throw DomainError("potential table must have p^depth entries");
    for (double x : v_)
        if (!std::isfinite(x)) throw DomainError("potential table has a non-finite entry");
}

PotentialTable PotentialTable::constant(int p, double c) {
    return PotentialTable(p, 1, std::vector<double>(p, c));
}

PotentialTable PotentialTable::from_function(int p, int depth, const std::function<double(const Word&)>& fn) {
    std::uint64_t m = ipow(p, depth);
    std::vector<double> v(m);
    for (std::uint64_t i = 0; i < m; ++i) v[i] = fn(word_from_index(i, p, depth));
    return PotentialTable(p, depth, std::move(v));
}

double PotentialTable::operator()(const Word& w) const { return eval_at(w, 0); }

double PotentialTable::eval_at(const Word& w, std::size_t offset) const {
    if (w.size() < offset + std::size_t(k_)) throw DomainError("word shorter than potential depth");
    std::uint64_t idx = 0;
    for (int j = 0; j < k_; ++j) {
        int a = w[offset + j];
        if (a < 0 || a >= p_) throw DomainError("symbol out of range");
        idx = idx * std::uint64_t(p_) + std::uint64_t(a);
    }
    return v_[idx];
}

PotentialTable PotentialTable::refine(int depth) const {
    if (depth < k_) throw DomainError("refine: depth must not decrease");
    std::uint64_t m = ipow(p_, depth);
    std::uint64_t div = ipow(p_, depth - k_);
    std::vector<double> v(m);
    for (std::uint64_t i = 0; i < m; ++i) v[i] = v_[i / div];
    return PotentialTable(p_, depth, std::move(v));
}

PotentialTable PotentialTable::map(const std::function<double(double)>& g) const {
    std::vector<double> v(v_.size());
    std::transform(v_.begin(), v_.end(), v.begin(), g);
    return PotentialTable(p_, k_, std::move(v));
}

double PotentialTable::min() const { return *std::min_element(v_.begin(), v_.end()); }
double PotentialTable::max() const { return *std::max_element(v_.begin(), v_.end()); }

std::pair<double, double> cylinder_log_extrema(const PotentialTable& phi, const Word& w) {
    if (w.empty()) throw DomainError("cylinder_stats needs a nonempty word");
    check_word(w, phi.p());
    int k = phi.depth();
    if (int(w.size()) >= k) {
        double v = phi(w);
        return {v, v};
    }
    std::uint64_t span = ipow(phi.p(), k - int(w.size()));
    std::uint64_t lo = word_index(w, phi.p()) * span;
    const auto& v = phi.values();
    auto [mn, mx] = std::minmax_element(v.begin() + lo, v.begin() + lo + span);
    return {*mn, *mx};
}

CylinderStats cylinder_stats(const PotentialTable& phi, const Word& w) {
    auto [lo, hi] = cylinder_log_extrema(phi, w);
    CylinderStats s;
    s.E = std::exp(lo);
    s.F = std::exp(hi);
    s.V = s.F - s.E;
    return s;
}

double sup_abs(const PotentialTable& phi) {
    double m = 0;
    for (double x : phi.values()) m = std::max(m, std::abs(x));
    return m;
}

double sup_abs_exp_diff(const PotentialTable& a, const PotentialTable& b) {
    if (a.p() != b.p()) throw DomainError("alphabet size mismatch");
    int k = std::max(a.depth(), b.depth());
    PotentialTable ra = a.refine(k), rb = b.refine(k);
    double m = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) m = std::max(m, std::abs(std::exp(ra.at(i)) - std::exp(rb.at(i))));
    return m;
}

bool variation_inequality_check(const PotentialTable& phi, const PotentialTable& phi2, const Word& w) {
    if (phi.p() != phi2.p()) throw DomainError("alphabet size mismatch");
    CylinderStats s = cylinder_stats(phi, w);
    CylinderStats t = cylinder_stats(phi2, w);
    double rhs = s.V + sup_abs_exp_diff(phi, phi2);
    // rounding slack of a few ulps of the largest quantity involved
    double slack = 8 * std::numeric_limits<double>::epsilon() * std::max({s.F, t.F, 1.0});
    return std::abs(s.E - t.E) <= rhs + slack && std::abs(s.F - t.F) <= rhs + slack;
}

ThetaMetric::ThetaMetric(double t) : theta(t) {
    if (!(t > 0 && t < 1)) throw DomainError("theta must lie in (0,1)");
}

int first_disagreement(const Word& a, const Word& b) {
    std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i)
        if (a[i] != b[i]) return int(i);
    return -1;
}

double theta_distance(const ThetaMetric& m, const Word& a, const Word& b) {
    int s = first_disagreement(a, b);
    if (s < 0) return 0.0;
    return std::pow(m.theta, s);
}

double lipschitz_constant(const PotentialTable& phi, const ThetaMetric& m) {
    int p = phi.p(), k = phi.depth();
    const auto& v = phi.values();
    double L = 0;
    // pairs disagreeing first at index j share a length-j prefix u and
    // continue with different symbols c != c'
    for (int j = 0; j < k; ++j) {
        std::uint64_t nprefix = ipow(p, j);
        std::uint64_t child = ipow(p, k - j - 1);
        double scale = std::pow(m.theta, -j);
        std::vector<double> mn(p), mx(p);
        for (std::uint64_t u = 0; u < nprefix; ++u) {
            for (int c = 0; c < p; ++c) {
                std::uint64_t lo = (u * p + c) * child;
                auto [a, b] = std::minmax_element(v.begin() + lo, v.begin() + lo + child);
                mn[c] = *a;
                mx[c] = *b;
            }
            for (int c = 0; c < p; ++c)
                for (int d = 0; d < p; ++d)
                    if (c != d) L = std::max(L, (mx[c] - mn[d]) * scale);
        }
    }
    return L;
}

Snapshot snapshot(int p, int depth, const std::function<double(const Word&)>& representative,
                  const std::function<double(int)>& modulus) {
    Snapshot s{PotentialTable::from_function(p, depth, representative), modulus(depth)};
    if (!(s.tail_variation >= 0)) throw DomainError("modulus of continuity must be nonnegative");
    return s;
}

}  // namespace emr
