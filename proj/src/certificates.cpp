#include <algorithm>
#include <cmath>

#include "emr/interval_maps.hpp"

namespace emr {

namespace {

// words of length n cost p^n; the searches below stay under this many
constexpr std::uint64_t kWordBudget = std::uint64_t(1) << 21;

int max_probe_depth(int p) {
    int n = 1;
    while (ipow(p, n + 1) <= kWordBudget) ++n;
    return n;
}

// log of prod_j m(X_{sigma^j w}) for every word of length d, built from
// the previous depth: L_d(a w') = log m(X_{a w'}) + L_{d-1}(w')
struct LogProducts {
    const PiecewiseMap& f;
    bool use_min;
    std::vector<Interval> cyl;
    std::vector<double> acc;
    int d = 0;

    LogProducts(const PiecewiseMap& g, bool mn) : f(g), use_min(mn) { cyl = {Interval{0.0, 1.0}}, acc = {0.0}; }

    void step() {
        int p = f.p();
        std::uint64_t m = cyl.size();
        std::vector<Interval> nc(m * p);
        std::vector<double> na(m * p);
        for (int a = 0; a < p; ++a)
            for (std::uint64_t r = 0; r < m; ++r) {
                Interval x = d == 0 ? f.partition().branch(a) : f.pullback(a, cyl[r]);
                double v = use_min ? f.min_abs_deriv(x) : f.max_abs_deriv(x);
                nc[a * m + r] = x;
                na[a * m + r] = std::log(v) + acc[r];
            }
        cyl.swap(nc);
        acc.swap(na);
        ++d;
    }
};

}  // namespace

std::vector<double> min_iterated_derivative(const PiecewiseMap& f, int depth) {
    LogProducts lp(f, true);
    std::vector<double> out;
    for (int n = 1; n <= depth; ++n) {
        lp.step();
        out.push_back(std::exp(*std::min_element(lp.acc.begin(), lp.acc.end())));
    }
    return out;
}

ExpansionCertificate expansion_certificate(const PiecewiseMap& f, int probe_depth, double eps0) {
    int cap = max_probe_depth(f.p());
    if (probe_depth > cap) probe_depth = cap;
    LogProducts lp(f, true);
    std::vector<double> mins;
    int N0 = 0;
    for (int n = 1; n <= cap; ++n) {
        lp.step();
        mins.push_back(std::exp(*std::min_element(lp.acc.begin(), lp.acc.end())));
        if (mins.back() >= 2.0) {
            N0 = n;
            break;
        }
    }
    if (N0 == 0) throw DomainError("map is not expanding enough: no N0 with inf|Df^N0| >= 2 up to depth " + std::to_string(cap));
    while (int(mins.size()) < probe_depth) {
        lp.step();
        mins.push_back(std::exp(*std::min_element(lp.acc.begin(), lp.acc.end())));
    }
    ExpansionCertificate ec;
    ec.N0 = N0;
    ec.lambda0 = std::pow(2.0, 1.0 / N0);
    if (N0 == 1) {
        ec.c0 = 1.0;
    } else {
        double m = INFINITY;
        for (int l = 1; l < N0; ++l) m = std::min(m, mins[l - 1]);
        ec.c0 = 0.5 * m;
    }
    ec.eps0 = eps0;
    ec.probe_depth = std::max(probe_depth, N0);
    ec.verified = true;
    for (int n = 1; n <= int(mins.size()); ++n)
        if (mins[n - 1] < ec.c0 * std::pow(ec.lambda0, n) * (1 - 1e-12)) ec.verified = false;
    // empirical constants: rate from the deepest probe, c from the worst depth
    int D = int(mins.size());
    ec.lambda = std::pow(mins[D - 1], 1.0 / D);
    ec.c = INFINITY;
    for (int n = 1; n <= D; ++n) ec.c = std::min(ec.c, mins[n - 1] / std::pow(ec.lambda, n));
    return ec;
}

double distortion_constant(const MarkovPartition& part, double M0) {
    double K = 0;
    for (int i = 1; i < part.p(); ++i) {
        double g = (part.alpha[i] - part.beta[i - 1]) / M0;
        K = std::max(K, (1 - g) / g);
    }
    return K;
}

DistortionCertificate distortion_certificate(const PiecewiseMap& f, int probe_depth) {
    probe_depth = std::min(probe_depth, max_probe_depth(f.p()));
    LogProducts lo(f, true), hi(f, false);
    double logM = 0;
    for (int n = 1; n <= probe_depth; ++n) {
        lo.step();
        hi.step();
        for (std::size_t k = 0; k < lo.acc.size(); ++k) logM = std::max(logM, hi.acc[k] - lo.acc[k]);
    }
    DistortionCertificate dc;
    dc.M0 = std::exp(logM);
    dc.K = distortion_constant(f.partition(), dc.M0);
    return dc;
}

bool validate_perturbation(const PiecewiseMap& f, const PiecewiseMap& g, double eps0, int probe_depth) {
    if (c1_distance(f, g) > eps0) return false;
    try {
        return expansion_certificate(g, probe_depth, eps0).verified;
    } catch (const DomainError&) {
        return false;
    }
}

}  // namespace emr
