// Quadrature-based identities of the torus STFT: Moyal orthogonality,
// inversion back to coefficient vectors, and the reproducing kernel of the
// transform range in three algebraically distinct forms.
//
// All integrals are tensor trapezoid sums on uniform periodic grids.  The
// integrands are smooth and fully periodic on the torus, so the rule
// converges spectrally in the node density; accumulation runs in a fixed
// node order so results are reproducible run to run.

#ifndef TORUSGABOR_ANALYSIS_HPP
#define TORUSGABOR_ANALYSIS_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "signals.hpp"
#include "torus_stft.hpp"

namespace torusgabor {

// Uniform tensor grid on [0,1) x [0,N): nodes_x points per unit in x,
// nodes_xi per unit in xi (so N * nodes_xi frequency nodes in total).
// Periodicity makes the left-endpoint rule identical to trapezoid.
struct QuadratureGrid {
    int nodes_x;
    int nodes_xi;

    QuadratureGrid(int mx, int mxi) : nodes_x(mx), nodes_xi(mxi) {
        if (mx < 8 || mxi < 8)
            throw std::invalid_argument("QuadratureGrid: need at least 8 nodes per unit");
    }
};

inline constexpr int kDefaultQuadNodes = 32;

/// integral over the torus of F * conj(G), F and G point-evaluable (x, xi).
template <class F, class G>
cplx torus_inner(F&& f, G&& g, int n_dim, const QuadratureGrid& grid) {
    if (n_dim <= 0)
        throw std::invalid_argument("torus_inner: N must be positive");
    const int nx = grid.nodes_x;
    const int nxi = grid.nodes_xi * n_dim;
    const double hx = 1.0 / grid.nodes_x;
    const double hxi = 1.0 / grid.nodes_xi;
    cplx acc = 0.0;
    for (int i = 0; i < nx; ++i) {
        const double x = i * hx;
        for (int j = 0; j < nxi; ++j) {
            const double xi = j * hxi;
            acc += f(x, xi) * std::conj(g(x, xi));
        }
    }
    return acc * (hx * hxi);
}

/// Gram matrix of the transformed basis vectors, normalized by
/// N <g2, g1>: the Moyal identity makes it the identity matrix.
inline CMatrix moyal_gram(const Window& w1, const Window& w2, int n_dim,
                          const QuadratureGrid& grid, double eps = kDefaultEps) {
    if (n_dim <= 0)
        throw std::invalid_argument("moyal_gram: N must be positive");
    const std::size_t n = static_cast<std::size_t>(n_dim);
    CMatrix gram(n, n);
    std::vector<cplx> v1(n), v2(n);
    const int nx = grid.nodes_x;
    const int nxi = grid.nodes_xi * n_dim;
    const double hx = 1.0 / grid.nodes_x;
    const double hxi = 1.0 / grid.nodes_xi;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nxi; ++j) {
            const TorusPoint p{i * hx, j * hxi};
            for (std::size_t a = 0; a < n; ++a) {
                v1[a] = stft_basis(w1, n_dim, static_cast<int>(a), p, eps);
                v2[a] = stft_basis(w2, n_dim, static_cast<int>(a), p, eps);
            }
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    gram(a, b) += v1[a] * std::conj(v2[b]);
        }
    }
    const cplx scale = static_cast<double>(n_dim) * l2_inner(w2, w1, eps);
    for (cplx& v : gram.data)
        v *= (hx * hxi) / scale;
    return gram;
}

/// Coefficient recovery from a point-evaluable transform V:
///   a_n = (1/(N ||g||^2)) integral V(x, xi) e^{2 pi i xi n/N} Zg(n/N - x, -xi).
template <class V>
SNVector invert_stft(const Window& w, V&& transform, int n_dim,
                     const QuadratureGrid& grid, double eps = kDefaultEps) {
    if (n_dim <= 0)
        throw std::invalid_argument("invert_stft: N must be positive");
    const std::size_t n = static_cast<std::size_t>(n_dim);
    std::vector<cplx> acc(n, cplx(0.0));
    const int nx = grid.nodes_x;
    const int nxi = grid.nodes_xi * n_dim;
    const double hx = 1.0 / grid.nodes_x;
    const double hxi = 1.0 / grid.nodes_xi;
    for (int i = 0; i < nx; ++i) {
        const double x = i * hx;
        for (int j = 0; j < nxi; ++j) {
            const double xi = j * hxi;
            const cplx v = transform(x, xi);
            for (std::size_t a = 0; a < n; ++a) {
                const double frac = static_cast<double>(a) / n_dim;
                acc[a] += v * std::exp(cplx(0.0, 2.0 * kPi * xi * frac)) *
                          zak(w, frac - x, -xi, eps);
            }
        }
    }
    const double scale = hx * hxi / (static_cast<double>(n_dim) * norm_sq(w, eps));
    SNVector out(n);
    for (std::size_t a = 0; a < n; ++a)
        out[a] = acc[a] * scale;
    return out;
}

/// Reproducing kernel K(p', p) as the basis sum
///   (1/(N ||g||^2)) sum_n e^{2 pi i (xi - xi') n/N}
///       conj(Zgbar(n/N - x, xi)) Zgbar(n/N - x', xi').
inline cplx kernel_basis_sum(const Window& w, int n_dim, TorusPoint p_prime,
                             TorusPoint p, double eps = kDefaultEps) {
    if (n_dim <= 0)
        throw std::invalid_argument("kernel_basis_sum: N must be positive");
    cplx s = 0.0;
    for (int n = 0; n < n_dim; ++n) {
        const double frac = static_cast<double>(n) / n_dim;
        s += std::exp(cplx(0.0, 2.0 * kPi * (p.xi - p_prime.xi) * frac)) *
             std::conj(zak_conj(w, frac - p.x, p.xi, eps)) *
             zak_conj(w, frac - p_prime.x, p_prime.xi, eps);
    }
    return s / (static_cast<double>(n_dim) * norm_sq(w, eps));
}

/// The same kernel through the coefficients of the doubly periodized
/// time-frequency shifts:  K(p', p) = (N/||g||^2) <c(p), c(p')> with
///   c_n(x, xi) = (1/N) e^{2 pi i xi n/N} Zg(n/N - x, -xi).
inline cplx kernel_sigma_pair(const Window& w, int n_dim, TorusPoint p_prime,
                              TorusPoint p, double eps = kDefaultEps) {
    if (n_dim <= 0)
        throw std::invalid_argument("kernel_sigma_pair: N must be positive");
    auto coeff = [&](TorusPoint q, int n) {
        const double frac = static_cast<double>(n) / n_dim;
        return std::exp(cplx(0.0, 2.0 * kPi * q.xi * frac)) *
               zak(w, frac - q.x, -q.xi, eps) / static_cast<double>(n_dim);
    };
    cplx s = 0.0;
    for (int n = 0; n < n_dim; ++n)
        s += coeff(p, n) * std::conj(coeff(p_prime, n));
    return s * static_cast<double>(n_dim) / norm_sq(w, eps);
}

/// Gaussian-window kernel in theta closed form, with z = lambda x + i xi
/// from p and w = lambda x' + i xi' from p':
///   exp(-pi l (x^2 + x'^2)) exp(pi (z + conj(w))^2 / (2 l))
///     theta(i (z - conj(w))/2, i l/2) theta((z + conj(w)) N/(2 l), i N^2/(2 l)).
inline cplx kernel_gaussian(double lambda, int n_dim, TorusPoint p_prime,
                            TorusPoint p, double eps = kDefaultEps) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("kernel_gaussian: lambda must be positive");
    if (n_dim <= 0)
        throw std::invalid_argument("kernel_gaussian: N must be positive");
    const cplx z = p.z_lambda(lambda);
    const cplx wbar = std::conj(p_prime.z_lambda(lambda));
    const cplx i(0.0, 1.0);
    const double nn = static_cast<double>(n_dim);
    return std::exp(-kPi * lambda * (p.x * p.x + p_prime.x * p_prime.x)) *
           std::exp(kPi / (2.0 * lambda) * (z + wbar) * (z + wbar)) *
           theta(i * (z - wbar) / 2.0, cplx(0.0, lambda / 2.0), eps) *
           theta((z + wbar) * nn / (2.0 * lambda), cplx(0.0, nn * nn / (2.0 * lambda)), eps);
}

/// | V phi(p') - integral V phi(p) K(p', p) dp | for a Gaussian window.
inline double kernel_reproduce_error(double lambda, const SNVector& phi,
                                     TorusPoint p_prime, const QuadratureGrid& grid,
                                     double eps = kDefaultEps) {
    const int n_dim = phi.dim();
    if (n_dim <= 0)
        throw std::invalid_argument("kernel_reproduce_error: empty coefficient vector");
    const Window w = GaussianWindow(lambda);
    const cplx direct = stft(w, phi, p_prime, eps);
    const int nx = grid.nodes_x;
    const int nxi = grid.nodes_xi * n_dim;
    const double hx = 1.0 / grid.nodes_x;
    const double hxi = 1.0 / grid.nodes_xi;
    cplx acc = 0.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nxi; ++j) {
            const TorusPoint p{i * hx, j * hxi};
            acc += stft(w, phi, p, eps) * kernel_gaussian(lambda, n_dim, p_prime, p, eps);
        }
    }
    return std::abs(acc * (hx * hxi) - direct);
}

} // namespace torusgabor

#endif
