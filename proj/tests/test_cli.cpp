#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "emr/cli.hpp"
#include "emr/io.hpp"

using namespace emr;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "emr");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("emr_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
        PiecewiseMap f = PiecewiseMap::linear(MarkovPartition({0.0, 0.55}, {0.45, 1.0}));
        write_json(path("f0.json"), to_json(f));
        double s = std::log(1 / 0.45);
        write_json(path("exact.json"), to_json(PotentialTable(2, 1, {s, s})));
        write_json(path("small.json"), to_json(PotentialTable(2, 2, {s + 3e-4, s - 2e-4, s + 1e-4, s - 4e-4})));
        write_json(path("tiny.json"), to_json(PotentialTable(2, 1, {s - std::log(10.0), s - std::log(10.0)})));
        write_json(path("xor.json"), to_json(PotentialTable(2, 2, {1, 0, 0, 1})));
        write_text(path("bad.json"), "{\"p\": 2, \"depth\": ");
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("usage errors exit 1") {
    Workspace ws;
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"verify", "--map", ws.path("f0.json")}).code == 1);
    Run r = run({"verify", "--map", ws.path("f0.json"), "--potential", ws.path("bad.json")});
    CHECK(r.code == 1);
    CHECK(r.err.find("malformed JSON") != std::string::npos);
    CHECK(run({"verify", "--map", ws.path("missing.json"), "--potential", ws.path("xor.json")}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("verify an exactly realized potential") {
    Workspace ws;
    Run r = run({"verify", "--map", ws.path("f0.json"), "--potential", ws.path("exact.json"), "--depth", "10"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("residual ", 0) == 0);
    CHECK(std::stod(r.out.substr(9)) < 1e-12);
}

TEST_CASE("realize: success, determinism and inadmissible input") {
    Workspace ws;
    std::vector<std::string> args = {"realize", "--map", ws.path("f0.json"), "--potential", ws.path("small.json"),
                                     "--eps", "0.05", "--depth", "10", "--out", ws.path("f1.json"), "--cert",
                                     ws.path("c1.json")};
    Run a = run(args);
    CHECK(a.code == 0);
    args[10] = ws.path("f2.json");
    args[12] = ws.path("c2.json");
    Run b = run(args);
    CHECK(b.code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(ws.dir / "f1.json") == slurp(ws.dir / "f2.json"));
    CHECK(slurp(ws.dir / "c1.json") == slurp(ws.dir / "c2.json"));
    json cert = read_json(ws.path("c1.json"));
    CHECK(cert["c1_distance_to_f0"].get<double>() <= 0.05);

    Run v = run({"verify", "--map", ws.path("f1.json"), "--potential", ws.path("small.json"), "--depth", "10"});
    CHECK(v.code == 0);
    CHECK(std::stod(v.out.substr(9)) < 1e-12);

    Run bad = run({"realize", "--map", ws.path("f0.json"), "--potential", ws.path("tiny.json"), "--out",
                   ws.path("f3.json")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("word=") != std::string::npos);
    CHECK(bad.err.find("gap=") != std::string::npos);
}

TEST_CASE("map JSON round trip") {
    Workspace ws;
    REQUIRE(run({"realize", "--map", ws.path("f0.json"), "--potential", ws.path("small.json"), "--depth", "8", "--out",
                 ws.path("f1.json")})
                .code == 0);
    json j = read_json(ws.path("f1.json"));
    PiecewiseMap f = map_from_json(j);
    write_json(ws.path("f2.json"), to_json(f));
    CHECK(slurp(ws.dir / "f1.json") == slurp(ws.dir / "f2.json"));
    PiecewiseMap g = load_map(ws.path("f2.json"));
    CHECK(g.pieces().size() == f.pieces().size());
    CHECK(c1_distance(f, g) == 0.0);
}

TEST_CASE("optimize, pressure and freeze") {
    Workspace ws;
    Run r = run({"optimize", "--potential", ws.path("xor.json"), "--max-period", "6", "--out", ws.path("opt.json")});
    CHECK(r.code == 0);
    json o = read_json(ws.path("opt.json"));
    CHECK(o["result"]["argmin"]["cycle"] == "01");
    CHECK(o["result"]["chi_inf"].get<double>() == doctest::Approx(0.0));

    CHECK(run({"pressure", "--potential", ws.path("xor.json"), "--t", "0:4:5", "--out", ws.path("p.csv")}).code == 0);
    std::string csv = slurp(ws.dir / "p.csv");
    CHECK(csv.rfind("t,P,dPdt,integral,entropy\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(run({"pressure", "--potential", ws.path("xor.json"), "--t", "0:4", "--out", ws.path("p.csv")}).code == 1);

    r = run({"freeze", "--potential", ws.path("xor.json"), "--tmax", "60", "--out", ws.path("fr.json")});
    CHECK(r.code == 0);
    json fr = read_json(ws.path("fr.json"));
    CHECK(fr["limit"]["cycle"] == "01");
    CHECK(fr["converged"] == true);
}

TEST_CASE("approx-lc and tree") {
    Workspace ws;
    Run r = run({"approx-lc", "--map", ws.path("f0.json"), "--eps", "0.05", "--out", ws.path("lc.json"), "--report",
                 ws.path("lcr.json")});
    CHECK(r.code == 0);
    CHECK(read_json(ws.path("lcr.json"))["already_lc"] == true);
    CHECK(run({"tree", "--map", ws.path("f0.json"), "--depth", "3", "--out", ws.path("t.csv")}).code == 0);
    CHECK_FALSE(slurp(ws.dir / "t.csv").empty());
}

TEST_CASE("pipeline") {
    Workspace ws;
    Run r = run({"--seed", "5", "pipeline", "--map", ws.path("f0.json"), "--eps", "0.05", "--theta", "0.4", "--depth",
                 "10", "--tmax", "60", "--out", ws.path("pipe.json")});
    CHECK(r.code == 0);
    json p = read_json(ws.path("pipe.json"));
    CHECK(p["limit_matches_argmin"] == true);
    CHECK(p["degenerate"] == false);

    Run again = run({"--seed", "5", "pipeline", "--map", ws.path("f0.json"), "--eps", "0.05", "--theta", "0.4",
                     "--depth", "10", "--tmax", "60", "--out", ws.path("pipe2.json")});
    CHECK(again.code == 0);
    CHECK(slurp(ws.dir / "pipe.json") == slurp(ws.dir / "pipe2.json"));

    r = run({"pipeline", "--map", ws.path("f0.json"), "--amplitude", "0", "--depth", "8", "--tmax", "20", "--out",
             ws.path("pipe3.json")});
    CHECK(r.code == 0);
    CHECK(read_json(ws.path("pipe3.json"))["degenerate"] == true);

    r = run({"pipeline", "--map", ws.path("f0.json"), "--potential", ws.path("tiny.json"), "--depth", "8", "--out",
             ws.path("pipe4.json")});
    CHECK(r.code == 2);
    CHECK(run({"pipeline", "--map", ws.path("f0.json"), "--theta", "0.5", "--out", ws.path("pipe5.json")}).code == 2);
}
