// Bargmann-type transform of a coefficient vector and rigorous zero
// counting/location on its period rectangle [0, lambda) x [0, N).
//
// For phi = sum a_n e_n the transform is the entire function
//
//   B phi(z) = sum_n a_n exp(-pi l (n/N)^2) exp(2 pi z n/N)
//                theta(i (z - l n/N), i l),
//
// equal to the Gaussian-window STFT at (x/l, -xi) times exp(pi x^2 / l).
// It satisfies B(z + l) = e^{pi l + 2 pi z} B(z) and B(z + iN) = B(z), so
// zero counting with the argument principle on one period rectangle is
// meaningful: for nonzero phi there are exactly N zeros counted with
// multiplicity, and their sum is constrained modulo the period lattice.
//
// Winding numbers are computed by accumulating principal phase increments
// along the discretized contour, bisecting any segment whose increment
// exceeds pi/2.  Contour admissibility is judged on the weighted modulus
// |B(z)| exp(-pi x^2 / l) (the STFT magnitude at the mapped point), which is
// doubly periodic; |B| itself grows like exp(2 pi x) along the contour and
// would make a global relative floor meaningless.

#ifndef TORUSGABOR_BARGMANN_HPP
#define TORUSGABOR_BARGMANN_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rand.hpp"
#include "signals.hpp"
#include "torus_stft.hpp"

namespace torusgabor {

// Contour passed too close to a zero (or a winding refinement failed);
// callers may retry on a shifted contour.
struct ContourError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BargmannFn {
    double lambda;
    int n_dim;
    SNVector coeffs;

    BargmannFn(double lambda_, SNVector coeffs_)
        : lambda(lambda_), n_dim(coeffs_.dim()), coeffs(std::move(coeffs_)) {
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("BargmannFn: lambda must be positive");
        if (n_dim <= 0)
            throw std::invalid_argument("BargmannFn: empty coefficient vector");
    }

    bool is_zero() const {
        for (const cplx& c : coeffs.coeffs)
            if (c != cplx(0.0))
                return false;
        return true;
    }
};

inline cplx bargmann_eval(const BargmannFn& b, cplx z, double eps = kDefaultEps) {
    const cplx i(0.0, 1.0);
    const cplx tau(0.0, b.lambda);
    cplx s = 0.0;
    for (int n = 0; n < b.n_dim; ++n) {
        const double frac = static_cast<double>(n) / b.n_dim;
        s += b.coeffs[static_cast<std::size_t>(n)] *
             std::exp(-kPi * b.lambda * frac * frac) * std::exp(2.0 * kPi * z * frac) *
             theta(i * (z - b.lambda * frac), tau, eps);
    }
    return s;
}

/// d/dz of the series, term-wise; used by Newton refinement.
inline cplx bargmann_dz(const BargmannFn& b, cplx z, double eps = kDefaultEps) {
    const cplx i(0.0, 1.0);
    const cplx tau(0.0, b.lambda);
    cplx s = 0.0;
    for (int n = 0; n < b.n_dim; ++n) {
        const double frac = static_cast<double>(n) / b.n_dim;
        const cplx arg = i * (z - b.lambda * frac);
        const cplx common = b.coeffs[static_cast<std::size_t>(n)] *
                            std::exp(-kPi * b.lambda * frac * frac) *
                            std::exp(2.0 * kPi * z * frac);
        s += common * (2.0 * kPi * frac * theta(arg, tau, eps) + i * theta_dz(arg, tau, eps));
    }
    return s;
}

/// The defining identity: the transform through the STFT route,
/// V phi(x/l, -xi) e^{pi x^2 / l} with the quasiperiodic phase restored
/// after wrapping the evaluation point onto the torus.
inline cplx bargmann_eval_stft_route(const BargmannFn& b, cplx z, double eps = kDefaultEps) {
    const double x = z.real();
    const double u = x / b.lambda;
    const double k = std::floor(u);
    const double eta = -z.imag();
    const TorusPoint p = TorusPoint::wrap(u - k, eta, b.n_dim);
    const cplx phase = std::exp(cplx(0.0, -2.0 * kPi * eta * k));
    return phase * stft(Window(GaussianWindow(b.lambda)), b.coeffs, p, eps) *
           std::exp(kPi * x * x / b.lambda);
}

/// Max relative deviation of the vertical-line Fourier coefficients from the
/// recursion c_{k+nN} = c_k exp(-pi l (n^2 + 2 k n / N)), n = +-1.
/// Coefficients are extracted by discrete Fourier analysis of B(i xi) over
/// one vertical period, which is exact up to the Gaussian tail of c_k.
inline double coeff_recursion_deviation(const BargmannFn& b, int k_max,
                                        double eps = kDefaultEps) {
    const int n_dim = b.n_dim;
    if (k_max < n_dim)
        k_max = n_dim;
    const int samples = 4 * (k_max + n_dim);
    std::vector<cplx> values(static_cast<std::size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        const double xi = static_cast<double>(j) * n_dim / samples;
        values[static_cast<std::size_t>(j)] = bargmann_eval(b, cplx(0.0, xi), eps);
    }
    auto fourier = [&](int k) {
        cplx s = 0.0;
        for (int j = 0; j < samples; ++j)
            s += values[static_cast<std::size_t>(j)] *
                 std::exp(cplx(0.0, -2.0 * kPi * static_cast<double>(k) * j / samples));
        return s / static_cast<double>(samples);
    };
    // Deviations are measured against the coefficient scale, not pointwise:
    // sparse vectors have exactly vanishing c_k whose extraction leaves
    // nothing but rounding noise to divide by.
    double scale = 0.0;
    for (int k = -n_dim; k < 2 * n_dim; ++k)
        scale = std::max(scale, std::abs(fourier(k)));
    if (scale == 0.0)
        return 0.0;
    double worst = 0.0;
    for (int k = 0; k < n_dim; ++k) {
        const cplx ck = fourier(k);
        for (int n : {-1, 1}) {
            const cplx expected =
                ck * std::exp(-kPi * b.lambda *
                              (static_cast<double>(n * n) +
                               2.0 * static_cast<double>(k * n) / n_dim));
            const cplx actual = fourier(k + n * n_dim);
            const double denom = std::max(std::abs(expected), scale);
            worst = std::max(worst, std::abs(actual - expected) / denom);
        }
    }
    return worst;
}

// Axis-aligned rectangle in the z plane.
struct Rect {
    double x0, y0, width, height;
    double diameter() const { return std::hypot(width, height); }
    cplx center() const { return cplx(x0 + 0.5 * width, y0 + 0.5 * height); }
    bool contains(cplx z) const {
        return z.real() >= x0 && z.real() <= x0 + width && z.imag() >= y0 &&
               z.imag() <= y0 + height;
    }
};

namespace detail {

// Doubly periodic weighted modulus: the STFT magnitude at the mapped point.
inline double weighted_modulus(const BargmannFn& b, cplx z, cplx value) {
    return std::abs(value) * std::exp(-kPi * z.real() * z.real() / b.lambda);
}

struct ContourResult {
    int winding = 0;
    double max_weighted = 0.0; // max of the weighted modulus over the samples
    double max_abs = 0.0;      // max of |B| over the samples
};

inline constexpr double kContourFloor = 1e-6;

// Phase increment between two contour samples, bisecting while the
// principal increment exceeds pi/2.
inline double phase_increment(const BargmannFn& b, double eps, double floor_weighted,
                              cplx za, cplx va, cplx zb, cplx vb, int depth) {
    const double d = std::remainder(std::arg(vb) - std::arg(va), 2.0 * kPi);
    if (std::abs(d) <= kPi / 2.0)
        return d;
    if (depth <= 0)
        throw ContourError("bargmann: winding refinement exhausted (zero on contour?)");
    const cplx zm = 0.5 * (za + zb);
    const cplx vm = bargmann_eval(b, zm, eps);
    if (weighted_modulus(b, zm, vm) < floor_weighted)
        throw ContourError("bargmann: contour sample below the modulus floor");
    return phase_increment(b, eps, floor_weighted, za, va, zm, vm, depth - 1) +
           phase_increment(b, eps, floor_weighted, zm, vm, zb, vb, depth - 1);
}

inline ContourResult contour_count(const BargmannFn& b, const Rect& rect,
                                   int nodes_per_unit, double eps) {
    if (b.is_zero())
        throw std::invalid_argument("bargmann: zero function has no well-defined zero count");
    if (!(rect.width > 0.0) || !(rect.height > 0.0))
        throw std::invalid_argument("bargmann: degenerate rectangle");
    const cplx corners[4] = {cplx(rect.x0, rect.y0), cplx(rect.x0 + rect.width, rect.y0),
                             cplx(rect.x0 + rect.width, rect.y0 + rect.height),
                             cplx(rect.x0, rect.y0 + rect.height)};
    std::vector<cplx> pts;
    for (int e = 0; e < 4; ++e) {
        const cplx a = corners[e];
        const cplx c = corners[(e + 1) % 4];
        const double len = std::abs(c - a);
        const int m = std::max(8, static_cast<int>(std::ceil(len * nodes_per_unit)));
        for (int j = 0; j < m; ++j)
            pts.push_back(a + (c - a) * (static_cast<double>(j) / m));
    }
    const std::size_t m = pts.size();
    std::vector<cplx> vals(m);
    ContourResult res;
    for (std::size_t i = 0; i < m; ++i) {
        vals[i] = bargmann_eval(b, pts[i], eps);
        res.max_weighted = std::max(res.max_weighted, weighted_modulus(b, pts[i], vals[i]));
        res.max_abs = std::max(res.max_abs, std::abs(vals[i]));
    }
    const double floor_weighted = kContourFloor * res.max_weighted;
    for (std::size_t i = 0; i < m; ++i)
        if (weighted_modulus(b, pts[i], vals[i]) < floor_weighted)
            throw ContourError("bargmann: contour sample below the modulus floor");
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = (i + 1) % m;
        total += phase_increment(b, eps, floor_weighted, pts[i], vals[i], pts[j], vals[j], 48);
    }
    const double w = total / (2.0 * kPi);
    const long rounded = std::lround(w);
    if (std::abs(w - static_cast<double>(rounded)) > 0.25)
        throw ContourError("bargmann: winding number failed to settle on an integer");
    res.winding = static_cast<int>(rounded);
    return res;
}

} // namespace detail

inline constexpr int kDefaultContourNodes = 16;

/// Number of zeros of B inside the rectangle, counted with multiplicity.
/// Exact integer via the argument principle; throws ContourError when the
/// boundary passes too close to a zero.
inline int zero_count(const BargmannFn& b, const Rect& rect,
                      int contour_nodes = kDefaultContourNodes, double eps = kDefaultEps) {
    return detail::contour_count(b, rect, contour_nodes, eps).winding;
}

/// Zero count over one full period rectangle.  The count is invariant under
/// translations of the rectangle, so a contour through a zero is retried on
/// up to eight randomly shifted copies before giving up.
inline int zero_count_torus(const BargmannFn& b, int contour_nodes = kDefaultContourNodes,
                            double eps = kDefaultEps, std::uint64_t seed = 1) {
    std::uint64_t state = seed ^ 0x5bf0'3635'dee3'9af1ULL;
    Rect rect{0.0, 0.0, b.lambda, static_cast<double>(b.n_dim)};
    for (int attempt = 0;; ++attempt) {
        try {
            return zero_count(b, rect, contour_nodes, eps);
        } catch (const ContourError&) {
            if (attempt >= 8)
                throw ContourError("bargmann: no admissible period contour after 8 shifts");
            rect.x0 = detail::splitmix_uniform(state) * b.lambda / (4.0 * b.n_dim);
            rect.y0 = detail::splitmix_uniform(state) * 0.25;
        }
    }
}

// Located zeros on [0, lambda) x [0, N) with multiplicities and residual
// certificates (residual = |B| at the zero, scale = max |B| on the boundary
// of the isolating box).
struct ZeroSet {
    std::vector<cplx> zeros;
    std::vector<int> multiplicities;
    std::vector<double> residuals;
    std::vector<double> local_scales;
    int total_count = 0;
};

namespace detail {

struct Box {
    Rect rect;
    int count;
};

// Split a box so that both child contours are admissible and the child
// counts add up to the parent's.  The split line is nudged when it lands on
// a zero.
inline void split_box(const BargmannFn& b, const Box& box, int nodes, double eps,
                      std::vector<Box>& out) {
    static constexpr double kFractions[] = {0.5, 0.46, 0.54, 0.42, 0.58, 0.38, 0.62, 0.34, 0.66};
    const bool split_x = box.rect.width >= box.rect.height;
    for (double f : kFractions) {
        Rect a = box.rect, c = box.rect;
        if (split_x) {
            a.width = box.rect.width * f;
            c.x0 = box.rect.x0 + a.width;
            c.width = box.rect.width - a.width;
        } else {
            a.height = box.rect.height * f;
            c.y0 = box.rect.y0 + a.height;
            c.height = box.rect.height - a.height;
        }
        try {
            const ContourResult ra = contour_count(b, a, nodes, eps);
            const ContourResult rc = contour_count(b, c, nodes, eps);
            if (ra.winding + rc.winding != box.count)
                continue; // a zero slipped through the shared edge; try another split
            if (ra.winding > 0)
                out.push_back(Box{a, ra.winding});
            if (rc.winding > 0)
                out.push_back(Box{c, rc.winding});
            return;
        } catch (const ContourError&) {
            continue;
        }
    }
    throw ContourError("bargmann: could not find an admissible split line");
}

} // namespace detail

/// Locate all zeros on one period rectangle by recursive subdivision.
/// Isolated zeros are polished by Newton iteration on B'/B; clusters that
/// refuse to separate below diameter 1e-6 are reported with multiplicity.
inline ZeroSet zero_locate(const BargmannFn& b, int contour_nodes = kDefaultContourNodes,
                           double eps = kDefaultEps, std::uint64_t seed = 1) {
    if (b.is_zero())
        throw std::invalid_argument("bargmann: zero function has no zero set");
    constexpr double kMinDiameter = 1e-6;
    constexpr double kNewtonStartDiameter = 0.75;
    constexpr int kNewtonSteps = 40;

    // Admissible base period rectangle, shifted if necessary.
    std::uint64_t state = seed ^ 0x9d58'ff24'ce01'7b33ULL;
    Rect base{0.0, 0.0, b.lambda, static_cast<double>(b.n_dim)};
    detail::ContourResult root;
    for (int attempt = 0;; ++attempt) {
        try {
            root = detail::contour_count(b, base, contour_nodes, eps);
            break;
        } catch (const ContourError&) {
            if (attempt >= 8)
                throw ContourError("bargmann: no admissible period contour after 8 shifts");
            base.x0 = detail::splitmix_uniform(state) * b.lambda / (4.0 * b.n_dim);
            base.y0 = detail::splitmix_uniform(state) * 0.25;
        }
    }
    if (root.winding != b.n_dim)
        throw std::runtime_error("bargmann: period rectangle does not contain N zeros");

    ZeroSet zs;
    std::vector<detail::Box> work{detail::Box{base, root.winding}};
    while (!work.empty()) {
        const detail::Box box = work.back();
        work.pop_back();
        const double diam = box.rect.diameter();

        if (box.count == 1 && diam <= kNewtonStartDiameter) {
            const detail::ContourResult cert = detail::contour_count(b, box.rect,
                                                                     contour_nodes, eps);
            cplx z = box.rect.center();
            bool ok = false;
            for (int step = 0; step < kNewtonSteps; ++step) {
                const cplx val = bargmann_eval(b, z, eps);
                const cplx der = bargmann_dz(b, z, eps);
                if (der == cplx(0.0))
                    break;
                const cplx dz = val / der;
                z -= dz;
                if (!box.rect.contains(z)) {
                    ok = false;
                    break;
                }
                if (std::abs(dz) < 1e-14 * (1.0 + std::abs(z))) {
                    ok = true;
                    break;
                }
            }
            const double residual = ok ? std::abs(bargmann_eval(b, z, eps)) : 1e300;
            if (ok && residual < 1e-9 * cert.max_abs) {
                zs.zeros.push_back(z);
                zs.multiplicities.push_back(1);
                zs.residuals.push_back(residual);
                zs.local_scales.push_back(cert.max_abs);
                continue;
            }
            // Newton left the box or failed the certificate: keep bisecting.
        }

        if (diam < kMinDiameter) {
            const detail::ContourResult cert = detail::contour_count(b, box.rect,
                                                                     contour_nodes, eps);
            const cplx z = box.rect.center();
            zs.zeros.push_back(z);
            zs.multiplicities.push_back(box.count);
            zs.residuals.push_back(std::abs(bargmann_eval(b, z, eps)));
            zs.local_scales.push_back(cert.max_abs);
            continue;
        }

        detail::split_box(b, box, contour_nodes, eps, work);
    }

    // Wrap into the fundamental rectangle and order by (Im, Re).
    for (cplx& z : zs.zeros)
        z = cplx(detail::wrap_into(z.real(), b.lambda),
                 detail::wrap_into(z.imag(), static_cast<double>(b.n_dim)));
    std::vector<std::size_t> order(zs.zeros.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
        if (zs.zeros[a].imag() != zs.zeros[c].imag())
            return zs.zeros[a].imag() < zs.zeros[c].imag();
        return zs.zeros[a].real() < zs.zeros[c].real();
    });
    ZeroSet sorted;
    for (std::size_t i : order) {
        sorted.zeros.push_back(zs.zeros[i]);
        sorted.multiplicities.push_back(zs.multiplicities[i]);
        sorted.residuals.push_back(zs.residuals[i]);
        sorted.local_scales.push_back(zs.local_scales[i]);
        sorted.total_count += zs.multiplicities[i];
    }
    if (sorted.total_count != b.n_dim)
        throw std::runtime_error("bargmann: located zero multiplicities do not sum to N");
    return sorted;
}

/// Distance of sum(zeros) - (N lambda / 2 + i N^2 / 2) to the period lattice
/// lambda Z + i N Z.
inline double zero_sum_deviation(const ZeroSet& zs, double lambda, int n_dim) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < zs.zeros.size(); ++i)
        s += zs.zeros[i] * static_cast<double>(zs.multiplicities[i]);
    const cplx d = s - cplx(n_dim * lambda / 2.0, n_dim * n_dim / 2.0);
    auto dist_to_multiple = [](double v, double period) {
        return std::abs(v - period * std::round(v / period));
    };
    return std::hypot(dist_to_multiple(d.real(), lambda),
                      dist_to_multiple(d.imag(), static_cast<double>(n_dim)));
}

} // namespace torusgabor

#endif
