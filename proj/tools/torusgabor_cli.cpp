// Command-line front end: discrete and continuous Gabor transforms on the
// flat torus, reproducing-kernel evaluation, Bargmann zero sets, frame
// certification and brute-force verification sweeps, plus plot-data export
// of periodized Gaussian windows.
//
// Conventions: CSV for tabular and plot data, JSON for structured objects,
// complex numbers as [re, im] pairs.  Exit codes: 0 success, 1 validation
// error, 2 numeric failure.  Files are written atomically.

#include <CLI11.hpp>
#include <torusgabor/torusgabor.hpp>

#include <cstdio>
#include <string>

using namespace torusgabor;

namespace {

struct GlobalOpts {
    double eps = kDefaultEps;
    int quad = kDefaultQuadNodes;
    std::uint64_t seed = 1;
    int jobs = 1;
};

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::fputs(content.c_str(), stdout);
    else
        atomic_write_file(out_path, content);
}

std::pair<double, double> parse_xy(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("expected \"x,xi\", got: " + s);
    try {
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument("expected \"x,xi\", got: " + s);
    }
}

Window make_window(const std::string& spec, double lambda, int n_dim) {
    if (spec == "gaussian")
        return GaussianWindow(lambda);
    const std::string prefix = "sincgauss:";
    if (spec.rfind(prefix, 0) == 0) {
        const int n = std::stoi(spec.substr(prefix.size()));
        return sinc_gaussian_witness(n_dim, n);
    }
    throw std::invalid_argument("unknown window spec: " + spec +
                                " (use gaussian or sincgauss:<n>)");
}

int run_dgt(int n_dim, const std::string& f_path, const std::string& g_path,
            const std::string& out_path) {
    const FiniteSignal f = finite_signal_from_json(parse_json_file(f_path));
    const FiniteSignal g = finite_signal_from_json(parse_json_file(g_path));
    if (f.dim() != n_dim || g.dim() != n_dim)
        throw std::invalid_argument("signal length does not match --n");
    const CMatrix v = dgt(f, g);
    std::string csv = "k,l,re,im\n";
    for (std::size_t k = 0; k < v.rows; ++k)
        for (std::size_t l = 0; l < v.cols; ++l)
            csv += std::to_string(k) + "," + std::to_string(l) + "," +
                   format_double(v(k, l).real()) + "," + format_double(v(k, l).imag()) + "\n";
    emit(out_path, csv);
    return 0;
}

int run_stft(int n_dim, double lambda, const std::string& window_spec,
             const std::string& phi_path, const std::string& points_path,
             const std::string& out_path, const GlobalOpts& go) {
    const SNVector phi = snvector_from_json(parse_json_file(phi_path));
    if (phi.dim() != n_dim)
        throw std::invalid_argument("coefficient vector length does not match --n");
    const Window w = make_window(window_spec, lambda, n_dim);
    const auto raw_points = parse_points_csv(read_file(points_path));
    std::string csv = "x,xi,re,im\n";
    for (const auto& [x, xi] : raw_points) {
        const TorusPoint p = TorusPoint::wrap(x, xi, n_dim);
        const cplx v = stft(w, phi, p, go.eps);
        csv += format_double(p.x) + "," + format_double(p.xi) + "," +
               format_double(v.real()) + "," + format_double(v.imag()) + "\n";
    }
    emit(out_path, csv);
    return 0;
}

int run_kernel(int n_dim, double lambda, const std::string& p_prime_str,
               const std::string& p_str, const std::string& out_path,
               const GlobalOpts& go) {
    const auto [xp, xip] = parse_xy(p_prime_str);
    const auto [x, xi] = parse_xy(p_str);
    const TorusPoint p_prime = TorusPoint::wrap(xp, xip, n_dim);
    const TorusPoint p = TorusPoint::wrap(x, xi, n_dim);
    const cplx closed = kernel_gaussian(lambda, n_dim, p_prime, p, go.eps);
    const cplx basis = kernel_basis_sum(Window(GaussianWindow(lambda)), n_dim, p_prime, p, go.eps);
    json out;
    out["value"] = complex_to_json(closed);
    out["forms_deviation"] = std::abs(closed - basis);
    emit(out_path, out.dump(2) + "\n");
    return 0;
}

int run_zeros(int n_dim, double lambda, const std::string& phi_path, int nodes,
              const std::string& out_path, const GlobalOpts& go) {
    const SNVector phi = snvector_from_json(parse_json_file(phi_path));
    if (phi.dim() != n_dim)
        throw std::invalid_argument("coefficient vector length does not match --n");
    const BargmannFn b(lambda, phi);
    const ZeroSet zs = zero_locate(b, nodes, go.eps, go.seed);
    json out = to_json(zs);
    out["sum_deviation"] = zero_sum_deviation(zs, lambda, n_dim);
    emit(out_path, out.dump(2) + "\n");
    return 0;
}

int run_frame_check(int n_dim, double lambda, const std::string& points_path,
                    bool grid_kind, const std::string& out_path, const GlobalOpts& go) {
    const auto raw = parse_points_csv(read_file(points_path));
    PointConfig cfg;
    if (grid_kind) {
        std::vector<std::pair<int, int>> pairs;
        for (const auto& [a, b] : raw) {
            const int j = static_cast<int>(std::lround(a));
            const int l = static_cast<int>(std::lround(b));
            if (std::abs(a - j) > 1e-9 || std::abs(b - l) > 1e-9)
                throw std::invalid_argument("non-integer entry in grid points file");
            pairs.emplace_back(j, l);
        }
        cfg = PointConfig::grid(pairs, n_dim);
    } else {
        std::vector<TorusPoint> pts;
        for (const auto& [x, xi] : raw)
            pts.push_back(TorusPoint{x, xi});
        cfg = PointConfig::continuous(pts, n_dim);
    }
    const FrameReport report = frame_check(lambda, cfg, n_dim, go.eps);
    emit(out_path, to_json(report).dump(2) + "\n");
    return 0;
}

int run_verify(int n_dim, double lambda, long budget, const std::string& out_path,
               const GlobalOpts& go) {
    const VerifyReport report =
        verify_equivalence(n_dim, lambda, budget, go.seed, go.jobs, go.eps);
    std::printf("mismatches: %zu, subsets: %ld\n", report.mismatches.size(),
                report.grid_subsets_size_n);
    if (!out_path.empty())
        atomic_write_file(out_path, to_json(report).dump(2) + "\n");
    return report.mismatches.empty() ? 0 : 2;
}

int run_plot_window(double lambda, int samples, const std::string& out_path,
                    const GlobalOpts& go) {
    if (samples < 1)
        throw std::invalid_argument("--samples must be at least 1");
    const Window w = GaussianWindow(lambda);
    std::string csv = "t,p\n";
    for (int j = 0; j < samples; ++j) {
        const double t = static_cast<double>(j) / samples;
        csv += format_double(t) + "," + format_double(periodize_at(w, t, go.eps).real()) + "\n";
    }
    emit(out_path, csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"short-time Fourier analysis on flat tori and finite Gabor frames"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts go;
    app.add_option("--eps", go.eps, "series truncation target, in (0, 1e-6]")
        ->check(CLI::Range(1e-300, 1e-6));
    app.add_option("--quad", go.quad,
                   "quadrature nodes per unit length (reserved for quadrature-backed runs)")
        ->check(CLI::Range(8, 1 << 20));
    app.add_option("--seed", go.seed, "seed for every randomized routine");
    app.add_option("--jobs", go.jobs, "worker threads for verification sweeps")
        ->check(CLI::Range(1, 256));

    int n_dim = 0;
    double lambda = 1.0;
    std::string out_path, f_path, g_path, phi_path, points_path, window_spec = "gaussian";
    std::string p_prime_str, p_str;
    long budget = 10000;
    int samples = 256, nodes = kDefaultContourNodes;
    bool grid_kind = false;

    CLI::App* c_dgt = app.add_subcommand("dgt", "finite discrete Gabor transform -> CSV");
    c_dgt->add_option("--n", n_dim, "dimension N")->required()->check(CLI::PositiveNumber);
    c_dgt->add_option("--f", f_path, "signal JSON (array of [re, im])")->required();
    c_dgt->add_option("--g", g_path, "window JSON (array of [re, im])")->required();
    c_dgt->add_option("--out", out_path, "output path (stdout if omitted)");

    CLI::App* c_stft = app.add_subcommand("stft", "continuous transform at torus points -> CSV");
    c_stft->add_option("--n", n_dim, "dimension N")->required()->check(CLI::PositiveNumber);
    c_stft->add_option("--lambda", lambda, "gaussian dilation")->check(CLI::PositiveNumber);
    c_stft->add_option("--window", window_spec, "gaussian (default) or sincgauss:<n>");
    c_stft->add_option("--phi", phi_path, "coefficient vector JSON")->required();
    c_stft->add_option("--points", points_path, "CSV of x,xi evaluation points")->required();
    c_stft->add_option("--out", out_path, "output path (stdout if omitted)");

    CLI::App* c_kernel = app.add_subcommand("kernel", "reproducing kernel value -> JSON");
    c_kernel->add_option("--n", n_dim, "dimension N")->required()->check(CLI::PositiveNumber);
    c_kernel->add_option("--lambda", lambda, "gaussian dilation")->check(CLI::PositiveNumber);
    c_kernel->add_option("--point-prime", p_prime_str, "first argument point \"x,xi\"")->required();
    c_kernel->add_option("--point", p_str, "second argument point \"x,xi\"")->required();
    c_kernel->add_option("--out", out_path, "output path (stdout if omitted)");

    CLI::App* c_zeros = app.add_subcommand("zeros", "Bargmann zero set on one period -> JSON");
    c_zeros->add_option("--n", n_dim, "dimension N")->required()->check(CLI::PositiveNumber);
    c_zeros->add_option("--lambda", lambda, "gaussian dilation")->check(CLI::PositiveNumber);
    c_zeros->add_option("--phi", phi_path, "coefficient vector JSON")->required();
    c_zeros->add_option("--nodes", nodes, "contour nodes per unit length")
        ->check(CLI::Range(8, 4096));
    c_zeros->add_option("--out", out_path, "output path (stdout if omitted)");

    CLI::App* c_frame = app.add_subcommand("frame-check", "frame bounds and verdicts -> JSON");
    c_frame->add_option("--n", n_dim, "dimension N")->required()->check(CLI::PositiveNumber);
    c_frame->add_option("--lambda", lambda, "gaussian dilation")->check(CLI::PositiveNumber);
    c_frame->add_option("--points", points_path, "CSV of points (x,xi or integer j,l)")
        ->required();
    c_frame->add_flag("--grid", grid_kind, "interpret the points file as integer grid pairs");
    c_frame->add_option("--out", out_path, "output path (stdout if omitted)");

    CLI::App* c_verify = app.add_subcommand(
        "verify", "predicate vs sigma-ratio equivalence sweep -> summary + JSON");
    c_verify->add_option("--n", n_dim, "dimension N")->required()->check(CLI::PositiveNumber);
    c_verify->add_option("--lambda", lambda, "gaussian dilation")->check(CLI::PositiveNumber);
    c_verify->add_option("--budget", budget, "max subsets per size before sampling")
        ->check(CLI::Range(1L, 2'000'000L));
    c_verify->add_option("--out", out_path, "report JSON path");

    CLI::App* c_plot = app.add_subcommand("plot-window",
                                          "periodized gaussian samples on [0,1) -> CSV");
    c_plot->add_option("--lambda", lambda, "gaussian dilation")->check(CLI::PositiveNumber);
    c_plot->add_option("--samples", samples, "sample count")->check(CLI::PositiveNumber);
    c_plot->add_option("--out", out_path, "output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // help/version
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        if (app.got_subcommand(c_dgt))
            return run_dgt(n_dim, f_path, g_path, out_path);
        if (app.got_subcommand(c_stft))
            return run_stft(n_dim, lambda, window_spec, phi_path, points_path, out_path, go);
        if (app.got_subcommand(c_kernel))
            return run_kernel(n_dim, lambda, p_prime_str, p_str, out_path, go);
        if (app.got_subcommand(c_zeros))
            return run_zeros(n_dim, lambda, phi_path, nodes, out_path, go);
        if (app.got_subcommand(c_frame))
            return run_frame_check(n_dim, lambda, points_path, grid_kind, out_path, go);
        if (app.got_subcommand(c_verify))
            return run_verify(n_dim, lambda, budget, out_path, go);
        if (app.got_subcommand(c_plot))
            return run_plot_window(lambda, samples, out_path, go);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric failure: %s\n", e.what());
        return 2;
    }
    return 1;
}
