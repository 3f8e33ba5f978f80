// Short-time Fourier analysis on the flat torus [0,1) x [0,N).
//
// The Zak transform Zg(u, xi) = sum_k g(u - k) exp(2 pi i k xi) carries all
// window information: the transform of a basis vector e_n evaluated at a
// torus point (x, xi) is
//
//   V_g e_n(x, xi) = exp(-2 pi i xi n / N) Zgbar(n/N - x, xi),
//
// with gbar the complex conjugate window, and transforms of general
// coefficient vectors are linear combinations of these.  Sampling on the
// grid (k/N, l) reproduces 1/N times the finite discrete Gabor transform;
// bridge_deviation measures that identity numerically.

#ifndef TORUSGABOR_TORUS_STFT_HPP
#define TORUSGABOR_TORUS_STFT_HPP

#include <cmath>
#include <complex>
#include <stdexcept>

#include "matrix.hpp"
#include "signals.hpp"
#include "theta.hpp"

namespace torusgabor {

namespace detail {

// Value wrapped into [0, length); results exactly at the upper edge due to
// rounding are folded back to 0.
inline double wrap_into(double v, double length) {
    double r = v - length * std::floor(v / length);
    if (r >= length)
        r = 0.0;
    return r;
}

} // namespace detail

// Phase-space point with canonical representatives x in [0,1), xi in [0,N).
// Quasiperiodic phase factors are the business of the transforms, never of
// the point itself.
struct TorusPoint {
    double x = 0.0;
    double xi = 0.0;

    static TorusPoint wrap(double x, double xi, int n_dim) {
        if (n_dim <= 0)
            throw std::invalid_argument("TorusPoint: N must be positive");
        return TorusPoint{detail::wrap_into(x, 1.0),
                          detail::wrap_into(xi, static_cast<double>(n_dim))};
    }

    // Complex coordinate lambda * x + i * xi used by the Gaussian closed forms.
    cplx z_lambda(double lambda) const { return cplx(lambda * x, xi); }
};

/// Zak transform Zg(u, xi).  Gaussian windows reduce u to [-1/2, 1/2] by the
/// quasiperiodicity Zg(u+1, xi) = e^{2 pi i xi} Zg(u, xi) and use
///   Zg(u, xi) = exp(-pi lambda u^2) theta(xi - i lambda u, i lambda);
/// generic windows are summed directly against their decay envelope.
inline cplx zak(const Window& w, double u, double xi, double eps = kDefaultEps) {
    if (const auto* g = std::get_if<GaussianWindow>(&w)) {
        const long m = std::lround(u);
        const double u0 = u - static_cast<double>(m);
        const double l = g->lambda;
        const cplx core = std::exp(-kPi * l * u0 * u0) *
                          theta(cplx(xi, -l * u0), cplx(0.0, l), eps);
        if (m == 0)
            return core;
        return std::exp(cplx(0.0, 2.0 * kPi * static_cast<double>(m) * xi)) * core;
    }
    const auto& gw = std::get<GenericWindow>(w);
    const int radius = static_cast<int>(std::ceil(gw.trunc_radius(eps)));
    const long k0 = std::lround(u);
    cplx s = 0.0;
    for (long k = k0 - radius; k <= k0 + radius; ++k)
        s += gw.eval(u - static_cast<double>(k)) *
             std::exp(cplx(0.0, 2.0 * kPi * static_cast<double>(k) * xi));
    return s;
}

// Zak transform of the conjugated window: Zgbar(u, xi) = conj(Zg(u, -xi)).
inline cplx zak_conj(const Window& w, double u, double xi, double eps = kDefaultEps) {
    return std::conj(zak(w, u, -xi, eps));
}

namespace detail {

// Basis transform through the Zak route; reference path for any window.
inline cplx stft_basis_zak(const Window& w, int n_dim, int n, TorusPoint p, double eps) {
    const double frac = static_cast<double>(n) / n_dim;
    return std::exp(cplx(0.0, -2.0 * kPi * p.xi * frac)) *
           zak_conj(w, frac - p.x, p.xi, eps);
}

} // namespace detail

/// V_g e_n at a torus point.  Gaussian windows use the theta closed form
///   exp(-pi l x^2) exp(-pi l (n/N)^2) exp(2 pi zbar n/N)
///     theta(i (zbar - l n/N), i l),   zbar = l x - i xi,
/// generic windows go through the Zak sum.
inline cplx stft_basis(const Window& w, int n_dim, int n, TorusPoint p,
                       double eps = kDefaultEps) {
    if (n_dim <= 0 || n < 0 || n >= n_dim)
        throw std::invalid_argument("stft_basis: index out of range");
    if (const auto* g = std::get_if<GaussianWindow>(&w)) {
        const double l = g->lambda;
        const double frac = static_cast<double>(n) / n_dim;
        const cplx zbar(l * p.x, -p.xi);
        const cplx i(0.0, 1.0);
        return std::exp(-kPi * l * p.x * p.x) * std::exp(-kPi * l * frac * frac) *
               std::exp(2.0 * kPi * zbar * frac) *
               theta(i * (zbar - l * frac), cplx(0.0, l), eps);
    }
    return detail::stft_basis_zak(w, n_dim, n, p, eps);
}

/// V_g phi at a torus point: the literal linear combination of basis values.
inline cplx stft(const Window& w, const SNVector& phi, TorusPoint p,
                 double eps = kDefaultEps) {
    const int n_dim = phi.dim();
    if (n_dim <= 0)
        throw std::invalid_argument("stft: empty coefficient vector");
    cplx s = 0.0;
    for (int n = 0; n < n_dim; ++n)
        s += phi[static_cast<std::size_t>(n)] * stft_basis(w, n_dim, n, p, eps);
    return s;
}

namespace detail {

// Length-N transform with kernel exp(-2 pi i l m / N).
inline std::vector<cplx> dft_forward(const std::vector<cplx>& v) {
    const std::size_t n = v.size();
    std::vector<cplx> out(n);
    for (std::size_t l = 0; l < n; ++l) {
        cplx s = 0.0;
        for (std::size_t m = 0; m < n; ++m)
            s += v[m] * std::exp(cplx(0.0, -2.0 * kPi * static_cast<double>(l * m) / n));
        out[l] = s;
    }
    return out;
}

} // namespace detail

/// Finite discrete Gabor transform
///   V[k, l] = sum_m f[m] conj(g[m - k]) exp(-2 pi i l m / N),
/// indices modulo N; each shift row is a plain N-point transform of the
/// windowed product.
inline CMatrix dgt(const FiniteSignal& f, const FiniteSignal& g) {
    const int n = f.dim();
    if (n <= 0 || g.dim() != n)
        throw std::invalid_argument("dgt: signals must have equal positive length");
    CMatrix out(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    std::vector<cplx> windowed(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m)
            windowed[static_cast<std::size_t>(m)] =
                f[static_cast<std::size_t>(m)] * std::conj(g.at(m - k));
        std::vector<cplx> row = detail::dft_forward(windowed);
        for (int l = 0; l < n; ++l)
            out(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) =
                row[static_cast<std::size_t>(l)];
    }
    return out;
}

/// Max deviation over the N x N grid between the continuous transform of the
/// double periodization of f and 1/N times the discrete transform of the
/// periodized signals.
inline double bridge_deviation(const Window& f, const Window& g, int n_dim,
                               double eps = kDefaultEps) {
    if (n_dim <= 0)
        throw std::invalid_argument("bridge_deviation: N must be positive");
    const SNVector phi = sigma_coeffs(f, n_dim, eps);
    const CMatrix discrete = dgt(periodize_to_signal(f, n_dim, eps),
                                 periodize_to_signal(g, n_dim, eps));
    double worst = 0.0;
    for (int k = 0; k < n_dim; ++k) {
        for (int l = 0; l < n_dim; ++l) {
            const TorusPoint p = TorusPoint::wrap(static_cast<double>(k) / n_dim,
                                                  static_cast<double>(l), n_dim);
            const cplx lhs = stft(g, phi, p, eps);
            const cplx rhs = discrete(static_cast<std::size_t>(k),
                                      static_cast<std::size_t>(l)) /
                             static_cast<double>(n_dim);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

} // namespace torusgabor

#endif
