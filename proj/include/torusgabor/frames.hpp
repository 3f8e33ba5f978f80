// Frame certification for Gaussian-window sampling of the torus STFT.
//
// A configuration of K points z_1, ..., z_K is a frame iff the K x N
// analysis matrix A[k, n] = V_g e_n(z_k) has full column rank; the optimal
// frame bounds are the extremal squared singular values.  Two arithmetic
// predicates decide the same question without linear algebra: on the torus,
// K >= N+1 always works and K = N works unless the point mean falls on an
// excluded affine lattice; on the integer grid the mean condition becomes a
// divisibility constraint on the coordinate sums.  verify_equivalence
// brute-forces the agreement between the sigma-ratio verdict and the
// predicates over grid subsets and random continuous configurations.

#ifndef TORUSGABOR_FRAMES_HPP
#define TORUSGABOR_FRAMES_HPP

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "rand.hpp"
#include "torus_stft.hpp"

namespace torusgabor {

enum class FrameVerdict { frame, not_frame };
enum class NumericVerdict { frame, not_frame, indeterminate };

inline const char* to_string(FrameVerdict v) {
    return v == FrameVerdict::frame ? "frame" : "not-frame";
}
inline const char* to_string(NumericVerdict v) {
    switch (v) {
    case NumericVerdict::frame: return "frame";
    case NumericVerdict::not_frame: return "not-frame";
    default: return "indeterminate";
    }
}

// Sigma-ratio thresholds: above the first is a certified frame, below the
// second a certified non-frame, the band between is indeterminate (extreme
// dilations and clustered points degrade conditioning, and the dichotomy is
// exact only in exact arithmetic).
inline constexpr double kFrameRatioThreshold = 1e-8;
inline constexpr double kNotFrameRatioThreshold = 1e-12;

// Minimal wrapped distance between distinct continuous points.
inline constexpr double kDistinctTolerance = 1e-9;

struct PointConfig {
    enum class Kind { continuous, grid };

    Kind kind = Kind::continuous;
    std::vector<TorusPoint> points;            // canonical representatives
    std::vector<std::pair<int, int>> pairs;    // grid kind only

    int size() const { return static_cast<int>(points.size()); }

    static PointConfig continuous(std::vector<TorusPoint> pts, int n_dim) {
        PointConfig cfg;
        cfg.kind = Kind::continuous;
        for (const TorusPoint& p : pts)
            cfg.points.push_back(TorusPoint::wrap(p.x, p.xi, n_dim));
        for (std::size_t i = 0; i < cfg.points.size(); ++i)
            for (std::size_t j = i + 1; j < cfg.points.size(); ++j) {
                const double dx = std::abs(cfg.points[i].x - cfg.points[j].x);
                const double dxi = std::abs(cfg.points[i].xi - cfg.points[j].xi);
                const double wx = std::min(dx, 1.0 - dx);
                const double wxi = std::min(dxi, n_dim - dxi);
                if (std::hypot(wx, wxi) <= kDistinctTolerance)
                    throw std::invalid_argument("PointConfig: points must be pairwise distinct");
            }
        return cfg;
    }

    static PointConfig grid(std::vector<std::pair<int, int>> prs, int n_dim) {
        PointConfig cfg;
        cfg.kind = Kind::grid;
        for (auto [j, l] : prs) {
            if (j < 0 || j >= n_dim || l < 0 || l >= n_dim)
                throw std::invalid_argument("PointConfig: grid pair out of range");
            cfg.points.push_back(TorusPoint{static_cast<double>(j) / n_dim,
                                            static_cast<double>(l)});
        }
        std::vector<std::pair<int, int>> sorted = prs;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("PointConfig: grid pairs must be distinct");
        cfg.pairs = std::move(prs);
        return cfg;
    }
};

/// K x N matrix A[k, n] = V_g e_n(z_k) for the Gaussian window of dilation
/// lambda, so that sum_k |V phi(z_k)|^2 = ||A a||^2.
inline CMatrix analysis_matrix(double lambda, const PointConfig& config, int n_dim,
                               double eps = kDefaultEps) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("analysis_matrix: lambda must be positive");
    if (n_dim <= 0)
        throw std::invalid_argument("analysis_matrix: N must be positive");
    const Window w = GaussianWindow(lambda);
    CMatrix a(config.points.size(), static_cast<std::size_t>(n_dim));
    for (std::size_t k = 0; k < config.points.size(); ++k)
        for (int n = 0; n < n_dim; ++n)
            a(k, static_cast<std::size_t>(n)) = stft_basis(w, n_dim, n, config.points[k], eps);
    return a;
}

struct FrameBounds {
    double lower = 0.0; // sigma_min^2
    double upper = 0.0; // sigma_max^2
    double sigma_ratio() const {
        return upper > 0.0 ? std::sqrt(lower / upper) : 0.0;
    }
};

/// Optimal frame bounds as extremal squared singular values of the analysis
/// matrix.
inline FrameBounds frame_bounds(const CMatrix& m) {
    if (m.rows == 0 || m.cols == 0)
        throw std::invalid_argument("frame_bounds: empty matrix");
    Eigen::MatrixXcd a(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = 0; c < m.cols; ++c)
            a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    const auto& sv = svd.singularValues();
    FrameBounds out;
    out.upper = sv(0) * sv(0);
    // Fewer rows than columns means rank deficiency regardless of the values.
    out.lower = (m.rows < m.cols) ? 0.0 : sv(sv.size() - 1) * sv(sv.size() - 1);
    return out;
}

inline NumericVerdict numeric_verdict(const FrameBounds& b) {
    const double r = b.sigma_ratio();
    if (r > kFrameRatioThreshold)
        return NumericVerdict::frame;
    if (r < kNotFrameRatioThreshold)
        return NumericVerdict::not_frame;
    return NumericVerdict::indeterminate;
}

namespace detail {

inline double dist_to_integer(double v) { return std::abs(v - std::round(v)); }

} // namespace detail

/// Continuous-point predicate: K >= N+1 is always a frame; K = N is a frame
/// unless the point mean equals (1/2 + n/N, N/2 + m) for integers n, m;
/// fewer than N points never span.
inline FrameVerdict predicate_torus(const std::vector<TorusPoint>& pts, int n_dim,
                                    double tol = 1e-9) {
    const int k = static_cast<int>(pts.size());
    if (k < n_dim)
        return FrameVerdict::not_frame;
    if (k >= n_dim + 1)
        return FrameVerdict::frame;
    double mean_x = 0.0, mean_xi = 0.0;
    for (const TorusPoint& p : pts) {
        mean_x += p.x;
        mean_xi += p.xi;
    }
    mean_x /= n_dim;
    mean_xi /= n_dim;
    // Excluded iff mean_x = 1/2 (mod 1/N) and mean_xi = N/2 (mod 1); both
    // conditions are invariant under re-wrapping individual points.
    const double dx = detail::dist_to_integer((mean_x - 0.5) * n_dim) / n_dim;
    const double dxi = detail::dist_to_integer(mean_xi - 0.5 * n_dim);
    return (dx < tol && dxi < tol) ? FrameVerdict::not_frame : FrameVerdict::frame;
}

/// Grid predicate: N^2 >= K >= N+1 is a frame; K = N odd is a frame; K = N
/// even is a frame unless both coordinate sums are divisible by N.  The
/// divisibility form comes from specializing the torus mean condition to
/// grid points.
inline FrameVerdict predicate_grid(const std::vector<std::pair<int, int>>& pairs, int n_dim) {
    const int k = static_cast<int>(pairs.size());
    if (k < n_dim)
        return FrameVerdict::not_frame;
    if (k >= n_dim + 1)
        return FrameVerdict::frame;
    if (n_dim % 2 == 1)
        return FrameVerdict::frame;
    long sum_j = 0, sum_l = 0;
    for (auto [j, l] : pairs) {
        sum_j += j;
        sum_l += l;
    }
    return (sum_j % n_dim == 0 && sum_l % n_dim == 0) ? FrameVerdict::not_frame
                                                      : FrameVerdict::frame;
}

inline FrameVerdict predicate(const PointConfig& config, int n_dim) {
    return config.kind == PointConfig::Kind::grid ? predicate_grid(config.pairs, n_dim)
                                                  : predicate_torus(config.points, n_dim);
}

struct FrameReport {
    int points = 0;
    double lower_bound = 0.0;
    double upper_bound = 0.0;
    double sigma_ratio = 0.0;
    FrameVerdict predicate_verdict = FrameVerdict::not_frame;
    NumericVerdict numeric_verdict = NumericVerdict::indeterminate;
};

inline FrameReport frame_check(double lambda, const PointConfig& config, int n_dim,
                               double eps = kDefaultEps) {
    const FrameBounds b = frame_bounds(analysis_matrix(lambda, config, n_dim, eps));
    FrameReport r;
    r.points = config.size();
    r.lower_bound = b.lower;
    r.upper_bound = b.upper;
    r.sigma_ratio = b.sigma_ratio();
    r.predicate_verdict = predicate(config, n_dim);
    r.numeric_verdict = numeric_verdict(b);
    return r;
}

struct VerifyMismatch {
    std::string kind;      // "grid" or "continuous"
    std::string config;    // rendered point list
    FrameVerdict predicted = FrameVerdict::not_frame;
    NumericVerdict numeric = NumericVerdict::indeterminate;
    double sigma_ratio = 0.0;
};

struct VerifyReport {
    int n_dim = 0;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    long grid_subsets = 0;         // total over both subset sizes
    long grid_subsets_size_n = 0;  // size-N sweep alone
    long grid_subsets_size_n1 = 0; // size-(N+1) sweep alone
    long continuous_samples = 0;
    long indeterminate = 0;
    std::vector<VerifyMismatch> mismatches;
    double elapsed_seconds = 0.0;
};

namespace detail {

// Mismatch iff both sides are certain and disagree.
inline bool is_mismatch(FrameVerdict p, NumericVerdict nv) {
    return (nv == NumericVerdict::frame && p == FrameVerdict::not_frame) ||
           (nv == NumericVerdict::not_frame && p == FrameVerdict::frame);
}

inline std::string render_pairs(const std::vector<std::pair<int, int>>& pairs) {
    std::string s;
    for (auto [j, l] : pairs)
        s += "(" + std::to_string(j) + "," + std::to_string(l) + ")";
    return s;
}

inline std::string render_points(const std::vector<TorusPoint>& pts) {
    std::string s;
    char buf[64];
    for (const TorusPoint& p : pts) {
        std::snprintf(buf, sizeof(buf), "(%.6f,%.6f)", p.x, p.xi);
        s += buf;
    }
    return s;
}

// Binomial coefficient saturated at cap; only the comparison against a
// budget matters, so overflow is cut off early.
inline long binomial_capped(long n, long k, long cap) {
    if (k < 0 || k > n)
        return 0;
    long r = 1;
    for (long i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
        if (r > cap)
            return cap + 1;
    }
    return r;
}

} // namespace detail

/// Brute-force agreement check between the arithmetic predicates and the
/// sigma-ratio verdict: all grid subsets of sizes N and N+1 (exhaustive when
/// their number is within budget, a seeded random sample otherwise) plus
/// random continuous configurations including mean-excluded ones.
inline VerifyReport verify_equivalence(int n_dim, double lambda, long budget = 10000,
                                       std::uint64_t seed = 1, int jobs = 1,
                                       double eps = kDefaultEps) {
    if (n_dim <= 0)
        throw std::invalid_argument("verify_equivalence: N must be positive");
    if (budget <= 0 || budget > 2'000'000)
        throw std::invalid_argument("verify_equivalence: budget out of range");
    if (jobs < 1)
        throw std::invalid_argument("verify_equivalence: jobs must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    VerifyReport report;
    report.n_dim = n_dim;
    report.lambda = lambda;
    report.seed = seed;

    // Full-grid analysis matrix once; subset rows are selections from it.
    std::vector<std::pair<int, int>> all_pairs;
    for (int j = 0; j < n_dim; ++j)
        for (int l = 0; l < n_dim; ++l)
            all_pairs.emplace_back(j, l);
    const CMatrix full = analysis_matrix(
        lambda, PointConfig::grid(all_pairs, n_dim), n_dim, eps);

    std::uint64_t state = seed ^ 0x243f'6a88'85a3'08d3ULL;
    for (int size : {n_dim, n_dim + 1}) {
        if (size > n_dim * n_dim)
            continue;
        const long total =
            detail::binomial_capped(static_cast<long>(n_dim) * n_dim, size, budget);
        std::vector<std::vector<std::size_t>> subsets;
        if (total <= budget) {
            std::vector<std::size_t> idx(static_cast<std::size_t>(size));
            for (int i = 0; i < size; ++i)
                idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
            for (;;) {
                subsets.push_back(idx);
                int pos = size - 1;
                while (pos >= 0 &&
                       idx[static_cast<std::size_t>(pos)] ==
                           static_cast<std::size_t>(n_dim * n_dim - size + pos))
                    --pos;
                if (pos < 0)
                    break;
                ++idx[static_cast<std::size_t>(pos)];
                for (int i = pos + 1; i < size; ++i)
                    idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
            }
        } else {
            for (long s = 0; s < budget; ++s) {
                // Sorted sample without replacement.
                std::vector<std::size_t> idx;
                while (static_cast<int>(idx.size()) < size) {
                    const auto cand = static_cast<std::size_t>(
                        detail::splitmix_uniform(state) * n_dim * n_dim);
                    if (std::find(idx.begin(), idx.end(), cand) == idx.end())
                        idx.push_back(cand);
                }
                std::sort(idx.begin(), idx.end());
                subsets.push_back(std::move(idx));
            }
        }

        const std::size_t count = subsets.size();
        std::vector<char> mismatch_flags(count, 0);
        std::vector<char> indeterminate_flags(count, 0);
        std::vector<double> ratios(count, 0.0);
        std::vector<FrameVerdict> predicted(count, FrameVerdict::not_frame);
        std::vector<NumericVerdict> numerics(count, NumericVerdict::indeterminate);
        auto run_range = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t s = lo; s < hi; ++s) {
                std::vector<std::pair<int, int>> pairs;
                for (std::size_t i : subsets[s])
                    pairs.push_back(all_pairs[i]);
                const FrameBounds b = frame_bounds(full.select_rows(subsets[s]));
                const NumericVerdict nv = numeric_verdict(b);
                const FrameVerdict pv = predicate_grid(pairs, n_dim);
                ratios[s] = b.sigma_ratio();
                predicted[s] = pv;
                numerics[s] = nv;
                if (nv == NumericVerdict::indeterminate)
                    indeterminate_flags[s] = 1;
                if (detail::is_mismatch(pv, nv))
                    mismatch_flags[s] = 1;
            }
        };
        if (jobs == 1 || count < 64) {
            run_range(0, count);
        } else {
            std::vector<std::thread> workers;
            const std::size_t chunk = (count + jobs - 1) / jobs;
            for (int w = 0; w < jobs; ++w) {
                const std::size_t lo = std::min(count, static_cast<std::size_t>(w) * chunk);
                const std::size_t hi = std::min(count, lo + chunk);
                if (lo < hi)
                    workers.emplace_back(run_range, lo, hi);
            }
            for (std::thread& t : workers)
                t.join();
        }
        for (std::size_t s = 0; s < count; ++s) {
            ++report.grid_subsets;
            if (size == n_dim)
                ++report.grid_subsets_size_n;
            else
                ++report.grid_subsets_size_n1;
            if (indeterminate_flags[s])
                ++report.indeterminate;
            if (mismatch_flags[s]) {
                std::vector<std::pair<int, int>> pairs;
                for (std::size_t i : subsets[s])
                    pairs.push_back(all_pairs[i]);
                report.mismatches.push_back(VerifyMismatch{
                    "grid", detail::render_pairs(pairs), predicted[s], numerics[s], ratios[s]});
            }
        }
    }

    // Continuous configurations: random (expected frames) and mean-excluded
    // (expected non-frames by the constructed vanishing function).
    const long cont_each = std::min<long>(25, budget);
    auto check_continuous = [&](const std::vector<TorusPoint>& pts) {
        const PointConfig cfg = PointConfig::continuous(pts, n_dim);
        const FrameBounds b = frame_bounds(analysis_matrix(lambda, cfg, n_dim, eps));
        const NumericVerdict nv = numeric_verdict(b);
        const FrameVerdict pv = predicate_torus(cfg.points, n_dim);
        ++report.continuous_samples;
        if (nv == NumericVerdict::indeterminate)
            ++report.indeterminate;
        if (detail::is_mismatch(pv, nv))
            report.mismatches.push_back(VerifyMismatch{
                "continuous", detail::render_points(cfg.points), pv, nv, b.sigma_ratio()});
    };
    for (long s = 0; s < cont_each; ++s) {
        std::vector<TorusPoint> pts;
        for (int i = 0; i < n_dim; ++i)
            pts.push_back(TorusPoint{detail::splitmix_uniform(state),
                                     detail::splitmix_uniform(state) * n_dim});
        check_continuous(pts);

        std::vector<TorusPoint> plus = pts;
        plus.push_back(TorusPoint{detail::splitmix_uniform(state),
                                  detail::splitmix_uniform(state) * n_dim});
        check_continuous(plus);

        // Force the mean onto the excluded lattice by solving for the last
        // point.  Skipped for N = 1: the scale-free sigma ratio of a 1 x 1
        // matrix cannot certify the vanishing of a single transform value.
        if (n_dim >= 2) {
            std::vector<TorusPoint> excl = pts;
            excl.pop_back();
            double sx = 0.0, sxi = 0.0;
            for (const TorusPoint& p : excl) {
                sx += p.x;
                sxi += p.xi;
            }
            excl.push_back(TorusPoint::wrap(0.5 * n_dim - sx, 0.5 * n_dim * n_dim - sxi, n_dim));
            check_continuous(excl);
        }
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace torusgabor

#endif
