// Integration tests that drive the installed binary through a shell, check
// exit codes, parse its outputs back, and compare against the library.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <torusgabor/torusgabor.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace torusgabor;
namespace fs = std::filesystem;

#ifndef TORUSGABOR_BIN
#error "TORUSGABOR_BIN must point at the CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const fs::path outfile = fs::temp_directory_path() / "torusgabor_cli_stdout.txt";
    const std::string cmd = std::string(TORUSGABOR_BIN) + " " + args + " > " +
                            outfile.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(outfile);
    r.out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return r;
}

fs::path sandbox() {
    const fs::path dir = fs::temp_directory_path() / "torusgabor_cli_tests";
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

} // namespace

TEST_CASE("dgt subcommand reproduces the two-point all-ones example") {
    const fs::path dir = sandbox();
    write(dir / "f.json", "[[1,0],[0,0]]");
    write(dir / "g.json", "[[1,0],[1,0]]");
    const RunResult r = run_cli("dgt --n 2 --f " + (dir / "f.json").string() + " --g " +
                                (dir / "g.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "k,l,re,im\n0,0,1,0\n0,1,1,0\n1,0,1,0\n1,1,1,0\n");
}

TEST_CASE("stft subcommand matches the library at the requested points") {
    const fs::path dir = sandbox();
    write(dir / "phi.json", "[[1,0],[0,0.5],[0,0],[0.25,0]]");
    write(dir / "pts.csv", "x,xi\n0.1,0.7\n0.9,3.2\n");
    const fs::path out = dir / "stft.csv";
    const RunResult r = run_cli("stft --n 4 --lambda 1 --phi " + (dir / "phi.json").string() +
                                " --points " + (dir / "pts.csv").string() + " --out " +
                                out.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "x,xi,re,im");
    const SNVector phi = snvector_from_json(parse_json_file((dir / "phi.json").string()));
    const Window w = GaussianWindow(1.0);
    int checked = 0;
    while (std::getline(in, line)) {
        double x, xi, re, im;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &xi, &re, &im) == 4);
        const cplx want = stft(w, phi, TorusPoint::wrap(x, xi, 4));
        CHECK(std::abs(cplx(re, im) - want) < 1e-13);
        ++checked;
    }
    CHECK(checked == 2);
}

TEST_CASE("stft subcommand accepts the witness window spec") {
    const fs::path dir = sandbox();
    write(dir / "phi.json", "[[1,0],[0,0]]");
    write(dir / "pts.csv", "0.25,0.5\n");
    const RunResult r = run_cli("stft --n 2 --window sincgauss:0 --phi " +
                                (dir / "phi.json").string() + " --points " +
                                (dir / "pts.csv").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("x,xi,re,im\n", 0) == 0);
}

TEST_CASE("kernel subcommand emits a value with a small forms deviation") {
    const RunResult r =
        run_cli("kernel --n 4 --lambda 1 --point-prime 0.3,1.2 --point 0.8,2.9");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["forms_deviation"].get<double>() < 1e-10);
    const cplx got = complex_from_json(j["value"]);
    const cplx want = kernel_gaussian(1.0, 4, TorusPoint::wrap(0.3, 1.2, 4),
                                      TorusPoint::wrap(0.8, 2.9, 4));
    CHECK(std::abs(got - want) < 1e-13);
    // JSON round trip is the identity.
    CHECK(json::parse(json::parse(r.out).dump(2)) == json::parse(r.out));
}

TEST_CASE("zeros subcommand locates the theta lattice for a unit vector") {
    const fs::path dir = sandbox();
    write(dir / "e0.json", "[[1,0],[0,0],[0,0]]");
    const RunResult r = run_cli("zeros --n 3 --lambda 1 --phi " + (dir / "e0.json").string());
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["count"].get<int>() == 3);
    CHECK(j["sum_deviation"].get<double>() < 1e-8);
    for (int k = 0; k < 3; ++k) {
        const cplx z = complex_from_json(j["zeros"][k]);
        CHECK(std::abs(z - cplx(0.5, k + 0.5)) < 1e-8);
    }
    CHECK(json::parse(j.dump(2)) == j);
}

TEST_CASE("frame-check subcommand on grid and continuous configurations") {
    const fs::path dir = sandbox();
    write(dir / "bad.csv", "0,1\n0,3\n1,0\n3,0\n");
    const RunResult bad = run_cli("frame-check --n 4 --lambda 1 --grid --points " +
                                  (dir / "bad.csv").string());
    CHECK(bad.exit_code == 0);
    const json jb = json::parse(bad.out);
    CHECK(jb["predicate_verdict"] == "not-frame");
    CHECK(jb["numeric_verdict"] == "not-frame");
    CHECK(jb["sigma_ratio"].get<double>() < 1e-10);

    write(dir / "good.csv", "0.1,0.3\n0.55,1.4\n0.9,2.2\n0.35,3.6\n0.72,0.9\n");
    const RunResult good = run_cli("frame-check --n 4 --lambda 1 --points " +
                                   (dir / "good.csv").string());
    CHECK(good.exit_code == 0);
    const json jg = json::parse(good.out);
    CHECK(jg["predicate_verdict"] == "frame");
    CHECK(jg["numeric_verdict"] == "frame");
    CHECK(json::parse(jg.dump(2)) == jg);
}

TEST_CASE("verify subcommand summary and report") {
    const fs::path dir = sandbox();
    const fs::path rep = dir / "verify.json";
    const RunResult r = run_cli("verify --n 3 --lambda 1 --out " + rep.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "mismatches: 0, subsets: 84\n");
    const json j = parse_json_file(rep.string());
    CHECK(j["mismatch_count"].get<long>() == 0);
    CHECK(j["grid_subsets_size_n"].get<long>() == 84);
    CHECK(j["grid_subsets_size_n_plus_1"].get<long>() == 126);
    CHECK(json::parse(j.dump(2)) == j);
}

TEST_CASE("plot-window subcommand shows the localization of large dilations") {
    const RunResult one = run_cli("plot-window --lambda 64 --samples 2");
    CHECK(one.exit_code == 0);
    double t0, v0, t1, v1;
    REQUIRE(std::sscanf(one.out.c_str(), "t,p\n%lf,%lf\n%lf,%lf", &t0, &v0, &t1, &v1) == 4);
    CHECK(t0 == 0.0);
    CHECK(t1 == 0.5);
    CHECK(v1 / v0 < 1e-20);

    const RunResult single = run_cli("plot-window --lambda 1 --samples 1");
    CHECK(single.exit_code == 0);
    CHECK(single.out.rfind("t,p\n0,", 0) == 0);
    CHECK(single.out.find("1.08643481121330") != std::string::npos);

    // Mild dilation: nearly flat profile, max/min ratio is 2^(1/4).
    const RunResult flat = run_cli("plot-window --lambda 1 --samples 64");
    CHECK(flat.exit_code == 0);
    double vmax = 0.0, vmin = 1e300;
    std::istringstream in(flat.out);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        double t, v;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &t, &v) == 2);
        vmax = std::max(vmax, v);
        vmin = std::min(vmin, v);
    }
    CHECK(vmax / vmin == doctest::Approx(1.1892071150027212).epsilon(1e-10));
}

TEST_CASE("outputs are byte-identical across runs with fixed flags and seed") {
    const fs::path dir = sandbox();
    write(dir / "phi2.json", "[[0.3,-0.2],[0.9,0.1],[-0.4,0.7]]");
    const std::string cmd = "zeros --n 3 --lambda 1 --seed 7 --phi " +
                            (dir / "phi2.json").string();
    const RunResult a = run_cli(cmd);
    const RunResult b = run_cli(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("validation failures exit with code 1 and a single diagnostic line") {
    const fs::path dir = sandbox();
    const RunResult unknown = run_cli("dgt --n 2 --bogus x");
    CHECK(unknown.exit_code == 1);
    CHECK(unknown.out.rfind("error:", 0) == 0);
    CHECK(std::count(unknown.out.begin(), unknown.out.end(), '\n') == 1);

    write(dir / "broken.json", "[[1,0],");
    const RunResult malformed = run_cli("dgt --n 2 --f " + (dir / "broken.json").string() +
                                        " --g " + (dir / "broken.json").string());
    CHECK(malformed.exit_code == 1);
    CHECK(malformed.out.rfind("error:", 0) == 0);

    write(dir / "short.json", "[[1,0]]");
    const RunResult mismatch = run_cli("dgt --n 2 --f " + (dir / "short.json").string() +
                                       " --g " + (dir / "short.json").string());
    CHECK(mismatch.exit_code == 1);

    const RunResult missing = run_cli("zeros --n 2 --phi /nonexistent/phi.json");
    CHECK(missing.exit_code == 1);

    const RunResult badeps = run_cli("plot-window --lambda 1 --eps 1e-3");
    CHECK(badeps.exit_code == 1);
}

TEST_CASE("no temp files are left next to atomic outputs") {
    const fs::path dir = sandbox();
    const fs::path out = dir / "plot.csv";
    const RunResult r = run_cli("plot-window --lambda 1 --samples 16 --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(out));
    CHECK(!fs::exists(out.string() + ".tmp"));
}
