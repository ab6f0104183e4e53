#include "emr/cli.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "emr/ergodic_opt.hpp"
#include "emr/io.hpp"
#include "emr/locally_constant.hpp"
#include "emr/realization.hpp"
#include "emr/thermo.hpp"

namespace emr {

namespace {

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> parse_range(const std::string& s) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw IoError("");
        } catch (...) {
            throw IoError("--t expects a:b:n, got '" + s + "'");
        }
    }
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]))
        throw IoError("--t expects a:b:n with integer n >= 1, got '" + s + "'");
    return linear_grid(parts[0], parts[1], int(parts[2]));
}

void require_positive(double v, const char* name) {
    if (!(v > 0)) throw IoError(std::string(name) + " must be positive");
}

json optimize_json(const PotentialTable& phi, const PiecewiseMap* f, int max_period, bool howard) {
    OptimizationResult r = chi_extrema(phi, howard);
    SubAction s = subaction(phi, r.chi_inf);
    json j{{"algorithm", howard ? "howard" : "karp"}, {"result", to_json(r)}};
    j["subaction"] = to_json(s);
    j["cohomology_gap"] = cohomology_gap(phi);
    j["argmin_unique"] = argmin_unique(phi);
    try {
        OptimizationResult b = brute_force_extrema(phi, max_period);
        j["oracle"] = {{"max_period", max_period}, {"result", to_json(b)}};
        if (max_period >= int(ipow(phi.p(), phi.depth() - 1)))
            j["oracle"]["agrees"] = std::abs(b.chi_inf - r.chi_inf) <= 1e-12 && std::abs(b.chi_sup - r.chi_sup) <= 1e-12 &&
                                    b.argmin.cycle == r.argmin.cycle && b.argmax.cycle == r.argmax.cycle;
    } catch (const DomainError& e) {
        j["oracle"] = {{"max_period", max_period}, {"skipped", e.what()}};
    }
    if (f) {
        if (f->p() != phi.p()) throw IoError("map and potential use different alphabets");
        j["lyapunov"] = {{"argmin", lyapunov_exponent(*f, r.argmin)}, {"argmax", lyapunov_exponent(*f, r.argmax)}};
    }
    return j;
}

PotentialTable random_perturbation(const PotentialTable& base, int depth, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    PotentialTable b = base.refine(std::max(depth, base.depth()));
    std::vector<double> v = b.values();
    for (double& x : v) x += amplitude * U(rng);
    return PotentialTable(b.p(), b.depth(), std::move(v));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"expanding Markov map realization and Lyapunov optimization"};
    app.require_subcommand(1);
    int threads = 1;
    std::uint64_t seed = 1;
    app.add_option("--threads", threads, "worker threads for parameter sweeps")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed for random perturbations");

    std::string map_path, pot_path, out_path, cert_path, report_path;
    double eps = 0.05, theta = 0.4, tmax = 200, tol = 1e-5, amplitude = 5e-4;
    int depth = 12, verify_depth = 10, max_period = 12, pert_depth = 2;
    bool howard = false;
    std::string trange;

    auto* realize_cmd = app.add_subcommand("realize", "realize a potential as log|Df| near a map");
    realize_cmd->add_option("--map", map_path)->required();
    realize_cmd->add_option("--potential", pot_path)->required();
    realize_cmd->add_option("--eps", eps);
    realize_cmd->add_option("--depth", depth, "construction depth n_max");
    realize_cmd->add_option("--verify-depth", verify_depth);
    realize_cmd->add_option("--out", out_path)->required();
    realize_cmd->add_option("--cert", cert_path);

    auto* opt_cmd = app.add_subcommand("optimize", "Lyapunov extrema, optimizing orbits and sub-action");
    opt_cmd->add_option("--potential", pot_path)->required();
    opt_cmd->add_option("--map", map_path);
    opt_cmd->add_option("--max-period", max_period, "brute-force oracle period bound");
    opt_cmd->add_flag("--howard", howard, "policy iteration instead of Karp");
    opt_cmd->add_option("--out", out_path)->required();

    auto* pres_cmd = app.add_subcommand("pressure", "pressure curve on a uniform t grid");
    pres_cmd->add_option("--potential", pot_path)->required();
    pres_cmd->add_option("--t", trange, "a:b:n")->required();
    pres_cmd->add_option("--out", out_path)->required();

    auto* freeze_cmd = app.add_subcommand("freeze", "zero-temperature limit report");
    freeze_cmd->add_option("--potential", pot_path)->required();
    freeze_cmd->add_option("--tmax", tmax);
    freeze_cmd->add_option("--tol", tol);
    freeze_cmd->add_option("--out", out_path)->required();

    auto* lc_cmd = app.add_subcommand("approx-lc", "approximation by a map with locally constant derivative");
    lc_cmd->add_option("--map", map_path)->required();
    lc_cmd->add_option("--eps", eps);
    lc_cmd->add_option("--out", out_path)->required();
    lc_cmd->add_option("--report", report_path);

    auto* verify_cmd = app.add_subcommand("verify", "residual of log|Df| against a potential");
    verify_cmd->add_option("--map", map_path)->required();
    verify_cmd->add_option("--potential", pot_path)->required();
    verify_cmd->add_option("--depth", verify_depth);
    verify_cmd->add_option("--out", out_path);

    auto* tree_cmd = app.add_subcommand("tree", "cylinder and gap intervals as CSV");
    tree_cmd->add_option("--map", map_path)->required();
    tree_cmd->add_option("--depth", depth);
    tree_cmd->add_option("--out", out_path)->required();

    auto* pipe_cmd = app.add_subcommand("pipeline", "approx-lc, perturb, precheck, realize, optimize, freeze");
    pipe_cmd->add_option("--map", map_path)->required();
    pipe_cmd->add_option("--eps", eps);
    pipe_cmd->add_option("--theta", theta);
    pipe_cmd->add_option("--potential", pot_path, "perturbed potential; random when omitted");
    pipe_cmd->add_option("--amplitude", amplitude, "size of the random perturbation");
    pipe_cmd->add_option("--perturbation-depth", pert_depth);
    pipe_cmd->add_option("--depth", depth, "construction depth n_max");
    pipe_cmd->add_option("--tmax", tmax);
    pipe_cmd->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 1;
    }

    try {
        if (*realize_cmd) {
            require_positive(eps, "--eps");
            PiecewiseMap f0 = load_map(map_path);
            PotentialTable phi = load_potential(pot_path);
            RealizeOptions o;
            o.n_max = depth;
            o.verify_depth = verify_depth;
            RealizedMap r = realize(f0, phi, eps, o);
            write_json(out_path, to_json(r.map));
            json cert = to_json(r.cert);
            cert["constancy_depth"] = r.constancy_depth;
            if (!cert_path.empty()) write_json(cert_path, cert);
            out << "N " << r.cert.N << "\nc1_distance " << fmt(r.cert.c1_distance_to_f0) << "\nresidual "
                << fmt(r.cert.verification_residual) << "\n";
        } else if (*opt_cmd) {
            PotentialTable phi = load_potential(pot_path);
            std::optional<PiecewiseMap> f;
            if (!map_path.empty()) f = load_map(map_path);
            json j = optimize_json(phi, f ? &*f : nullptr, max_period, howard);
            write_json(out_path, j);
            out << "chi_inf " << fmt(j["result"]["chi_inf"].get<double>()) << " on "
                << j["result"]["argmin"]["cycle"].get<std::string>() << "\n";
        } else if (*pres_cmd) {
            PotentialTable phi = load_potential(pot_path);
            write_text(out_path, pressure_csv(pressure_curve(phi, parse_range(trange), threads)));
        } else if (*freeze_cmd) {
            require_positive(tmax, "--tmax");
            require_positive(tol, "--tol");
            PotentialTable phi = load_potential(pot_path);
            FreezeReport r = freeze(phi, default_freeze_grid(tmax), threads, tol);
            write_json(out_path, to_json(r));
            out << r.status << "\n";
        } else if (*lc_cmd) {
            require_positive(eps, "--eps");
            PiecewiseMap f0 = load_map(map_path);
            LcApprox r = approximate_lc(f0, eps);
            write_json(out_path, to_json(r.map));
            if (!report_path.empty()) write_json(report_path, to_json(r.report));
            out << "n " << r.report.n << "\ndistance " << fmt(r.report.distance) << "\n";
        } else if (*verify_cmd) {
            PiecewiseMap f = load_map(map_path);
            PotentialTable phi = load_potential(pot_path);
            if (phi.p() != f.p()) throw IoError("map and potential use different alphabets");
            int c = constancy_depth(f);
            double res = verify_realization(f, phi, verify_depth, std::max(c, 1));
            if (!out_path.empty())
                write_json(out_path, {{"depth", verify_depth}, {"constancy_depth", c}, {"residual", res}});
            out << "residual " << fmt(res) << "\n";
        } else if (*tree_cmd) {
            PiecewiseMap f = load_map(map_path);
            write_text(out_path, cylinder_tree_csv(cylinder_tree(f, depth)));
        } else if (*pipe_cmd) {
            require_positive(eps, "--eps");
            PiecewiseMap f0 = load_map(map_path);
            json rep;
            rep["seed"] = seed;
            rep["eps"] = eps;
            rep["theta"] = theta;
            LcApprox lc = approximate_lc(f0, eps);
            rep["approx_lc"] = to_json(lc.report);
            PotentialTable base = log_derivative_table(lc.map, std::max(1, lc.report.constancy_depth));
            PotentialTable phi;
            if (!pot_path.empty()) {
                phi = load_potential(pot_path);
                rep["perturbation"] = {{"source", pot_path}};
            } else {
                phi = random_perturbation(base, pert_depth, amplitude, seed);
                rep["perturbation"] = {{"source", "random"}, {"amplitude", amplitude}, {"depth", phi.depth()}};
            }
            rep["potential"] = to_json(phi);
            rep["precheck"] = to_json(lipschitz_realization_precheck(lc.map, phi, theta, eps));
            RealizeOptions o;
            o.n_max = depth;
            RealizedMap r = realize(lc.map, phi, eps, o);
            rep["realization"] = to_json(r.cert);
            rep["realized_map"] = to_json(r.map);
            json opt = optimize_json(phi, &r.map, max_period, false);
            rep["optimize"] = opt;
            FreezeReport fr = freeze(phi, default_freeze_grid(tmax), threads);
            rep["freeze"] = to_json(fr);
            bool degenerate = !opt["cohomology_gap"].get<bool>();
            rep["degenerate"] = degenerate;
            rep["limit_matches_argmin"] = fr.limit.cycle == parse_word(opt["result"]["argmin"]["cycle"], phi.p());
            rep["unique_minimizer"] = opt["argmin_unique"];
            write_json(out_path, rep);
            out << (degenerate ? "degenerate: all cycle means tie\n" : fr.status + "\n");
        }
    } catch (const AdmissibilityError& e) {
        err << "inadmissible: " << e.what();
        if (!e.w.empty() || e.i != 0) err << " (word=" << (e.w.empty() ? std::string("<empty>") : word_string(e.w)) << ", gap=" << e.i << ")";
        err << "\n";
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        err << "inadmissible: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace emr
