#include "emr/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace emr {

namespace {

double num(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw IoError(std::string("missing or non-numeric field '") + key + "'");
    return j[key].get<double>();
}

std::vector<double> nums(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_array()) throw IoError(std::string("missing array '") + key + "'");
    std::vector<double> v;
    for (const auto& x : j[key]) {
        if (!x.is_number()) throw IoError(std::string("non-numeric entry in '") + key + "'");
        v.push_back(x.get<double>());
    }
    return v;
}

// JSON has no infinities; they are written as null
json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const PotentialTable& phi) {
    json v = json::object();
    for (std::uint64_t i = 0; i < phi.size(); ++i) v[word_string(word_from_index(i, phi.p(), phi.depth()))] = phi.at(i);
    return {{"p", phi.p()}, {"depth", phi.depth()}, {"values", v}};
}

PotentialTable potential_from_json(const json& j) {
    if (!j.is_object()) throw IoError("potential: expected an object");
    if (!j.contains("p") || !j["p"].is_number_integer()) throw IoError("potential: missing integer 'p'");
    if (!j.contains("depth") || !j["depth"].is_number_integer()) throw IoError("potential: missing integer 'depth'");
    int p = j["p"].get<int>(), k = j["depth"].get<int>();
    if (p < 2 || k < 1) throw IoError("potential: need p >= 2 and depth >= 1");
    if (!j.contains("values") || !j["values"].is_object()) throw IoError("potential: missing object 'values'");
    std::uint64_t n = ipow(p, k);
    std::vector<double> v(n);
    std::vector<char> seen(n, 0);
    for (auto it = j["values"].begin(); it != j["values"].end(); ++it) {
        Word w;
        try {
            w = parse_word(it.key(), p);
        } catch (const DomainError& e) {
            throw IoError(std::string("potential: ") + e.what());
        }
        if (int(w.size()) != k) throw IoError("potential: word '" + it.key() + "' has the wrong length");
        if (!it.value().is_number()) throw IoError("potential: non-numeric value for '" + it.key() + "'");
        std::uint64_t idx = word_index(w, p);
        if (seen[idx]) throw IoError("potential: duplicate word '" + it.key() + "'");
        seen[idx] = 1;
        v[idx] = it.value().get<double>();
    }
    for (std::uint64_t i = 0; i < n; ++i)
        if (!seen[i]) throw IoError("potential: missing word '" + word_string(word_from_index(i, p, k)) + "'");
    try {
        return PotentialTable(p, k, std::move(v));
    } catch (const DomainError& e) {
        throw IoError(std::string("potential: ") + e.what());
    }
}

json to_json(const PiecewiseMap& f) {
    json pcs = json::array();
    for (const auto& pc : f.pieces()) {
        json o{{"interval", json::array({pc.lo, pc.hi})}};
        if (pc.kind == Piece::Linear) {
            o["kind"] = "linear";
            o["slope"] = pc.slope;
            o["left_value"] = pc.y0;
        } else {
            const auto& s = pc.sp;
            o["kind"] = "smoothing";
            o["profile"] = json::array({s.l, s.r});
            o["E"] = s.E;
            o["E2"] = s.E2;
            o["tau"] = s.tau;
            o["base"] = s.base;
            o["sign"] = s.sign;
        }
        pcs.push_back(o);
    }
    return {{"partition", {{"alpha", f.partition().alpha}, {"beta", f.partition().beta}}}, {"pieces", pcs}};
}

PiecewiseMap map_from_json(const json& j) {
    if (!j.is_object() || !j.contains("partition") || !j["partition"].is_object())
        throw IoError("map: missing object 'partition'");
    if (!j.contains("pieces") || !j["pieces"].is_array()) throw IoError("map: missing array 'pieces'");
    try {
        MarkovPartition part(nums(j["partition"], "alpha"), nums(j["partition"], "beta"));
        std::vector<Piece> pieces;
        for (const auto& o : j["pieces"]) {
            if (!o.is_object()) throw IoError("map: piece must be an object");
            std::vector<double> I = nums(o, "interval");
            if (I.size() != 2) throw IoError("map: interval needs two endpoints");
            if (!o.contains("kind") || !o["kind"].is_string()) throw IoError("map: piece without 'kind'");
            std::string kind = o["kind"];
            if (kind == "linear") {
                pieces.push_back(Piece::linear(I[0], I[1], num(o, "left_value"), num(o, "slope")));
            } else if (kind == "smoothing") {
                std::vector<double> pr = nums(o, "profile");
                if (pr.size() != 2) throw IoError("map: profile needs two endpoints");
                double sg = num(o, "sign");
                auto sp = SmoothingPiece::make(pr[0], pr[1], num(o, "E"), num(o, "E2"), num(o, "tau"), num(o, "base"),
                                               sg < 0 ? -1 : 1);
                pieces.push_back(Piece::smoothing(I[0], I[1], sp));
            } else {
                throw IoError("map: unknown piece kind '" + kind + "'");
            }
        }
        return PiecewiseMap(std::move(part), std::move(pieces));
    } catch (const DomainError& e) {
        throw IoError(std::string("map: ") + e.what());
    }
}

json to_json(const Word& w) { return word_string(w); }

json to_json(const ExpansionCertificate& c) {
    return {{"N0", c.N0},       {"c0", c.c0},   {"lambda0", c.lambda0},         {"c", c.c},
            {"lambda", c.lambda}, {"eps0", c.eps0}, {"probe_depth", c.probe_depth}, {"verified", c.verified}};
}

json to_json(const DistortionCertificate& c) { return {{"M0", c.M0}, {"K", c.K}}; }

json to_json(const RealizationCertificate& c) {
    const auto& d = c.departure;
    const auto& k = c.checks;
    return {{"N", c.N},
            {"n_max", c.n_max},
            {"c1_distance_to_f0", c.c1_distance_to_f0},
            {"value_part", c.value_part},
            {"deriv_part", c.deriv_part},
            {"cauchy_tail", c.cauchy_tail},
            {"verification_residual", c.verification_residual},
            {"max_delta", c.max_delta},
            {"two_K", c.two_K},
            {"K", c.K},
            {"lambda0", c.lambda0},
            {"c0", c.c0},
            {"departure",
             {{"max_ratio", d.max_ratio},
              {"min_margin", d.min_margin},
              {"delta_required", d.delta_required},
              {"sufficient", d.sufficient},
              {"s_max", d.s_max},
              {"eta_max", d.eta_max},
              {"exp_gap", d.exp_gap}}},
            {"checks",
             {{"gaps", k.gaps},
              {"slope_lower_violations", k.slope_lower_violations},
              {"slope_upper_violations", k.slope_upper_violations},
              {"slope_departure_violations", k.slope_departure_violations},
              {"slope_drift_violations", k.slope_drift_violations},
              {"slope_drift_departure", k.slope_drift_departure},
              {"delta_transfer_violations", k.delta_transfer_violations},
              {"delta_bound_violations", k.delta_bound_violations},
              {"max_delta", k.max_delta}}}};
}

json to_json(const PeriodicOrbitMeasure& m) { return {{"cycle", word_string(m.cycle)}, {"mean", m.mean}}; }

json to_json(const OptimizationResult& r) {
    return {{"chi_inf", r.chi_inf},   {"chi_sup", r.chi_sup},   {"argmin", to_json(r.argmin)},
            {"argmax", to_json(r.argmax)}, {"karp_inf", r.karp_inf}, {"karp_sup", r.karp_sup}};
}

json to_json(const SubAction& s) {
    return {{"u", s.u},
            {"chi_inf", s.chi_inf},
            {"iterations", s.iterations},
            {"min_residual", s.min_residual},
            {"coboundary", s.coboundary}};
}

json to_json(const FreezeReport& r) {
    json curve = json::array();
    for (std::size_t i = 0; i < r.curve.size(); ++i) {
        const auto& s = r.curve[i];
        curve.push_back({{"t", s.t},
                         {"P", s.P},
                         {"dPdt", s.dPdt},
                         {"integral", s.integral},
                         {"entropy", s.entropy},
                         {"deviation", r.deviation[i]}});
    }
    return {{"limit", to_json(r.limit)},
            {"t_max", r.t_max},
            {"final_deviation", r.final_deviation},
            {"decay_rate", r.decay_rate},
            {"decay_intercept", r.decay_intercept},
            {"max_legendre_error", r.max_legendre_error},
            {"max_derivative_error", r.max_derivative_error},
            {"degenerate", r.degenerate},
            {"converged", r.converged},
            {"status", r.status},
            {"curve", curve}};
}

json to_json(const LcApproxReport& r) {
    return {{"n", r.n},
            {"distance", r.distance},
            {"value_part", r.value_part},
            {"deriv_part", r.deriv_part},
            {"constancy_depth", r.constancy_depth},
            {"theta_max", r.theta_max},
            {"max_cylinder", r.max_cylinder},
            {"max_oscillation", r.max_oscillation},
            {"expanding", r.expanding},
            {"already_lc", r.already_lc}};
}

json to_json(const LipschitzPrecheck& r) {
    return {{"theta", r.theta},
            {"theta_max", r.theta_max},
            {"sup_deriv", r.sup_deriv},
            {"min_hole", r.min_hole},
            {"gap_lower_bound", r.gap_lower_bound},
            {"K", r.K},
            {"M_exp", r.M_exp},
            {"L", r.L},
            {"lipschitz_bound", finite_or_null(r.lipschitz_bound)},
            {"lipschitz_derivative", r.lipschitz_derivative}};
}

json to_json(const SupportReport& r) {
    return {{"full_support", r.full_support},
            {"positive_entropy", r.positive_entropy},
            {"ergodic", r.ergodic},
            {"min_transition", r.min_transition},
            {"entropy", r.entropy}};
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw IoError("malformed JSON in '" + path + "': " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

PotentialTable load_potential(const std::string& path) { return potential_from_json(read_json(path)); }

PiecewiseMap load_map(const std::string& path) { return map_from_json(read_json(path)); }

std::string pressure_csv(const std::vector<PressureSample>& curve) {
    std::string s = "t,P,dPdt,integral,entropy\n";
    char buf[256];
    for (const auto& c : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", c.t, c.P, c.dPdt, c.integral, c.entropy);
        s += buf;
    }
    return s;
}

}  // namespace emr
