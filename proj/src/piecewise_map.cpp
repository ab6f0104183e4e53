#include <algorithm>
#include <cmath>

#include "emr/interval_maps.hpp"

namespace emr {

namespace {
constexpr double kWeld = 1e-13;
constexpr double kC0 = 1e-12;
}  // namespace

MarkovPartition::MarkovPartition(std::vector<double> a, std::vector<double> b) : alpha(std::move(a)), beta(std::move(b)) {
    if (alpha.size() != beta.size() || alpha.size() < 2) throw DomainError("partition needs p >= 2 matching alpha/beta");
    if (alpha.front() != 0.0 || beta.back() != 1.0) throw DomainError("partition must start at 0 and end at 1");
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (!(alpha[i] < beta[i])) throw DomainError("partition: alpha_i < beta_i violated");
        if (i > 0 && !(beta[i - 1] < alpha[i])) throw DomainError("partition: beta_{i-1} < alpha_i violated");
    }
}

PiecewiseMap::PiecewiseMap(MarkovPartition part, std::vector<Piece> pieces) : part_(std::move(part)), pieces_(std::move(pieces)) {
    int p = part_.p();
    if (pieces_.empty()) throw DomainError("map has no pieces");
    std::sort(pieces_.begin(), pieces_.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    first_.assign(p, 0);
    last_.assign(p, 0);
    orient_.assign(p, 0);
    std::size_t k = 0;
    for (int i = 0; i < p; ++i) {
        double a = part_.alpha[i], b = part_.beta[i];
        if (k >= pieces_.size() || std::abs(pieces_[k].lo - a) > kWeld)
            throw DomainError("pieces do not start at alpha_" + std::to_string(i));
        pieces_[k].lo = a;
        first_[i] = k;
        while (true) {
            Piece& pc = pieces_[k];
            if (!(pc.hi > pc.lo)) throw DomainError("piece with nonpositive length");
            if (std::abs(pc.hi - b) <= kWeld) {
                pc.hi = b;
                break;
            }
            if (pc.hi > b) throw DomainError("piece crosses beta_" + std::to_string(i));
            if (k + 1 >= pieces_.size()) throw DomainError("pieces do not cover branch " + std::to_string(i));
            Piece& nx = pieces_[k + 1];
            if (std::abs(nx.lo - pc.hi) > kWeld) throw DomainError("gap or overlap between pieces near x=" + std::to_string(pc.hi));
            nx.lo = pc.hi;
            if (std::abs(pc.value(pc.hi) - nx.value(nx.lo)) > kC0)
                throw DomainError("map is discontinuous at x=" + std::to_string(pc.hi));
            ++k;
        }
        last_[i] = k;
        ++k;
        // orientation and monotonicity
        int s = 0;
        for (std::size_t j = first_[i]; j <= last_[i]; ++j) {
            const Piece& pc = pieces_[j];
            int sj;
            if (pc.kind == Piece::Linear) {
                if (!(pc.slope != 0.0) || !std::isfinite(pc.slope)) throw DomainError("zero or non-finite slope");
                sj = pc.slope > 0 ? 1 : -1;
            } else {
                if (!(pc.sp.mid_slope() > 0) || pc.sp.E <= 0 || pc.sp.E2 <= 0)
                    throw DomainError("smoothing piece violates 2*tau-(E+E')/2 > 0");
                sj = pc.sp.sign;
            }
            if (s == 0) s = sj;
            if (sj != s) throw DomainError("branch " + std::to_string(i) + " is not monotone");
        }
        orient_[i] = s;
        double ya = pieces_[first_[i]].value(a), yb = pieces_[last_[i]].value(b);
        double want_a = s > 0 ? 0.0 : 1.0, want_b = s > 0 ? 1.0 : 0.0;
        if (std::abs(ya - want_a) > kC0 || std::abs(yb - want_b) > kC0)
            throw DomainError("branch " + std::to_string(i) + " does not map onto [0,1]");
    }
    if (k != pieces_.size()) throw DomainError("pieces lie outside the partition");
}

PiecewiseMap PiecewiseMap::linear(const MarkovPartition& part, const std::vector<int>& orientation) {
    std::vector<Piece> pcs;
    for (int i = 0; i < part.p(); ++i) {
        double a = part.alpha[i], b = part.beta[i], s = 1.0 / (b - a);
        if (orientation.at(i) > 0)
            pcs.push_back(Piece::linear(a, b, 0.0, s));
        else
            pcs.push_back(Piece::linear(a, b, 1.0, -s));
    }
    return PiecewiseMap(part, std::move(pcs));
}

int PiecewiseMap::branch_of(double x) const {
    const auto& a = part_.alpha;
    int i = int(std::upper_bound(a.begin(), a.end(), x) - a.begin()) - 1;
    if (i < 0) return -1;
    return x <= part_.beta[i] ? i : -1;
}

std::size_t PiecewiseMap::piece_index(double x) const {
    int b = branch_of(x);
    if (b < 0) throw DomainError("x=" + std::to_string(x) + " is not in X");
    auto beg = pieces_.begin() + first_[b], end = pieces_.begin() + last_[b] + 1;
    auto it = std::upper_bound(beg, end, x, [](double v, const Piece& pc) { return v < pc.lo; });
    if (it == beg) return first_[b];
    return std::size_t(it - pieces_.begin()) - 1;
}

double PiecewiseMap::eval(double x) const { return pieces_[piece_index(x)].value(x); }

double PiecewiseMap::deriv(double x) const { return deriv_right(x); }

double PiecewiseMap::deriv_right(double x) const { return pieces_[piece_index(x)].deriv(x); }

double PiecewiseMap::deriv_left(double x) const {
    std::size_t k = piece_index(x);
    int b = branch_of(x);
    if (k > first_[b] && x == pieces_[k].lo) --k;
    return pieces_[k].deriv(x);
}

double PiecewiseMap::branch_inverse(int branch, double y) const {
    if (branch < 0 || branch >= p()) throw DomainError("branch out of range");
    if (y < -kC0 || y > 1 + kC0) throw DomainError("branch_inverse: y outside [0,1]");
    int s = orient_[branch];
    std::size_t lo = first_[branch], hi = last_[branch];
    // pieces ordered so that s*value increases
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        double top = pieces_[mid].value(pieces_[mid].hi);
        if (s * (y - top) > 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return pieces_[lo].invert(y);
}

Interval PiecewiseMap::pullback(int branch, const Interval& J) const {
    double x1 = branch_inverse(branch, J.l), x2 = branch_inverse(branch, J.r);
    if (x1 > x2) std::swap(x1, x2);
    return {x1, x2};
}

double PiecewiseMap::min_abs_deriv(const Interval& I) const {
    std::size_t k = piece_index(I.l);
    double m = INFINITY;
    for (; k < pieces_.size() && pieces_[k].lo < I.r; ++k) m = std::min(m, pieces_[k].min_abs_deriv(I.l, I.r));
    if (!std::isfinite(m)) m = std::abs(pieces_[piece_index(I.l)].deriv(I.l));
    return m;
}

double PiecewiseMap::max_abs_deriv(const Interval& I) const {
    std::size_t k = piece_index(I.l);
    double m = 0;
    for (; k < pieces_.size() && pieces_[k].lo < I.r; ++k) m = std::max(m, pieces_[k].max_abs_deriv(I.l, I.r));
    if (m == 0) m = std::abs(pieces_[piece_index(I.l)].deriv(I.l));
    return m;
}

double PiecewiseMap::sup_abs_deriv() const {
    double m = 0;
    for (const auto& pc : pieces_) m = std::max(m, pc.max_abs_deriv(pc.lo, pc.hi));
    return m;
}

double PiecewiseMap::max_derivative_jump() const {
    double j = 0;
    for (int b = 0; b < p(); ++b)
        for (std::size_t k = first_[b]; k < last_[b]; ++k) {
            double x = pieces_[k].hi;
            j = std::max(j, std::abs(pieces_[k].deriv(x) - pieces_[k + 1].deriv(x)));
        }
    return j;
}

bool PiecewiseMap::is_piecewise_linear() const {
    return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& pc) { return pc.kind == Piece::Linear; });
}

std::vector<double> PiecewiseMap::breakpoints() const {
    std::vector<double> out;
    out.reserve(2 * pieces_.size() + 2);
    for (const auto& pc : pieces_) {
        out.push_back(pc.lo);
        if (pc.kind == Piece::Smoothing) {
            double m = 0.5 * (pc.sp.l + pc.sp.r);
            if (pc.lo < m && m < pc.hi) out.push_back(m);
        }
    }
    for (int i = 0; i < p(); ++i) out.push_back(part_.beta[i]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace emr
