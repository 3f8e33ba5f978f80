// Signal models: coefficient vectors on the N-dimensional space spanned by
// the periodic delta trains e_n = sum_k delta_{n/N + k}, finite signals on
// Z_N, and the window types that drive every closed-form vs. truncated-sum
// branch in the transforms.
//
// Windows come in two flavors.  A GaussianWindow carries the dilation
// lambda of g(t) = exp(-pi lambda t^2) and unlocks theta closed forms.
// A GenericWindow carries an arbitrary complex evaluator together with an
// exponential decay envelope |g(t)| <= C exp(-alpha |t|); the envelope is
// the operational substitute for membership in a nice function class and
// yields a closed-form truncation radius for all periodization sums.

#ifndef TORUSGABOR_SIGNALS_HPP
#define TORUSGABOR_SIGNALS_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "theta.hpp"

namespace torusgabor {

namespace detail {
inline void require_finite(const std::vector<cplx>& v, const char* what) {
    for (const cplx& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::invalid_argument(std::string(what) + ": non-finite entry");
}
} // namespace detail

// Coefficients (a_0, ..., a_{N-1}) of phi = sum a_n e_n.  The basis vectors
// e_n are orthonormal, so the inner product is the plain Euclidean one.
struct SNVector {
    std::vector<cplx> coeffs;

    SNVector() = default;
    explicit SNVector(std::size_t n) : coeffs(n) {}
    explicit SNVector(std::vector<cplx> c) : coeffs(std::move(c)) {
        detail::require_finite(coeffs, "SNVector");
    }

    int dim() const { return static_cast<int>(coeffs.size()); }
    cplx& operator[](std::size_t i) { return coeffs[i]; }
    const cplx& operator[](std::size_t i) const { return coeffs[i]; }

    cplx inner(const SNVector& other) const {
        if (other.dim() != dim())
            throw std::invalid_argument("SNVector: dimension mismatch");
        cplx s = 0.0;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            s += coeffs[i] * std::conj(other.coeffs[i]);
        return s;
    }

    double norm_sq() const {
        double s = 0.0;
        for (const cplx& c : coeffs)
            s += std::norm(c);
        return s;
    }
    double norm() const { return std::sqrt(norm_sq()); }

    static SNVector unit(int n_dim, int n) {
        if (n_dim <= 0 || n < 0 || n >= n_dim)
            throw std::invalid_argument("SNVector::unit: index out of range");
        SNVector v(static_cast<std::size_t>(n_dim));
        v.coeffs[static_cast<std::size_t>(n)] = 1.0;
        return v;
    }
};

// Length-N signal indexed modulo N.
struct FiniteSignal {
    std::vector<cplx> entries;

    FiniteSignal() = default;
    explicit FiniteSignal(std::size_t n) : entries(n) {}
    explicit FiniteSignal(std::vector<cplx> e) : entries(std::move(e)) {
        detail::require_finite(entries, "FiniteSignal");
    }

    int dim() const { return static_cast<int>(entries.size()); }
    cplx& operator[](std::size_t i) { return entries[i]; }
    const cplx& operator[](std::size_t i) const { return entries[i]; }

    // Index wrapped into [0, N).
    cplx at(long i) const {
        const long n = static_cast<long>(entries.size());
        long r = i % n;
        if (r < 0)
            r += n;
        return entries[static_cast<std::size_t>(r)];
    }

    double norm_sq() const {
        double s = 0.0;
        for (const cplx& c : entries)
            s += std::norm(c);
        return s;
    }
};

// g(t) = exp(-pi lambda t^2), not normalized; ||g||_2^2 = (2 lambda)^{-1/2}.
struct GaussianWindow {
    double lambda;

    explicit GaussianWindow(double lambda_) : lambda(lambda_) {
        if (!(lambda > 0.0) || !std::isfinite(lambda))
            throw std::invalid_argument("GaussianWindow: lambda must be positive");
    }

    double eval(double t) const { return std::exp(-kPi * lambda * t * t); }
    double norm_sq() const { return 1.0 / std::sqrt(2.0 * lambda); }
};

// Arbitrary complex window with a decay certificate |g(t)| <= C exp(-alpha|t|).
struct GenericWindow {
    std::function<cplx(double)> eval;
    double envelope_c;
    double envelope_alpha;

    GenericWindow(std::function<cplx(double)> f, double c, double alpha)
        : eval(std::move(f)), envelope_c(c), envelope_alpha(alpha) {
        if (!eval)
            throw std::invalid_argument("GenericWindow: missing evaluator");
        if (!(c > 0.0) || !(alpha > 0.0) || !std::isfinite(c) || !std::isfinite(alpha))
            throw std::invalid_argument("GenericWindow: decay envelope requires C > 0, alpha > 0");
    }

    // Closed-form summation radius from the geometric tail of the envelope.
    double trunc_radius(double eps) const {
        if (!(eps > 0.0))
            throw std::invalid_argument("GenericWindow: eps must be positive");
        return std::log(2.0 * envelope_c / (envelope_alpha * eps)) / envelope_alpha + 1.0;
    }
};

using Window = std::variant<GaussianWindow, GenericWindow>;

inline cplx eval_window(const Window& w, double t) {
    if (const auto* g = std::get_if<GaussianWindow>(&w))
        return g->eval(t);
    return std::get<GenericWindow>(w).eval(t);
}

// sin(pi x)/(pi x), with the series expansion near zero.
inline double sinc(double x) {
    const double u = kPi * x;
    if (std::abs(u) < 1e-5)
        return 1.0 - u * u / 6.0 * (1.0 - u * u / 20.0);
    return std::sin(u) / u;
}

// f_n(t) = sinc(N t - n) exp(-pi (t - n/N)^2): its periodization samples to
// the n-th unit vector on the grid {k/N}, which makes the double
// periodization hit any prescribed coefficient vector.
inline GenericWindow sinc_gaussian_witness(int n_dim, int n) {
    if (n_dim <= 0 || n < 0 || n >= n_dim)
        throw std::invalid_argument("sinc_gaussian_witness: index out of range");
    const double a = static_cast<double>(n) / n_dim;
    auto f = [n_dim, n, a](double t) -> cplx {
        return sinc(n_dim * t - n) * std::exp(-kPi * (t - a) * (t - a));
    };
    // sup_t exp(-pi (t-a)^2 + pi |t|) = exp(pi (a + 1/4)) for a in [0,1).
    return GenericWindow(f, std::exp(kPi * (a + 0.25)), kPi);
}

namespace detail {

// Direct periodization sum over |j - round(t)| <= radius.
inline cplx periodize_sum(const GenericWindow& w, double t, int radius) {
    const long j0 = std::lround(t);
    cplx s = 0.0;
    for (long j = j0 - radius; j <= j0 + radius; ++j)
        s += w.eval(t - static_cast<double>(j));
    return s;
}

// One-dimensional adaptive Simpson quadrature (deterministic recursion).
template <class F>
cplx adaptive_simpson(F&& f, double a, double b, double tol, int depth,
                      cplx fa, cplx fm, cplx fb, cplx whole) {
    const double m = 0.5 * (a + b);
    const cplx fl = f(0.5 * (a + m));
    const cplx fr = f(0.5 * (m + b));
    const cplx left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    const cplx right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, 0.5 * tol, depth - 1, fa, fl, fm, left) +
           adaptive_simpson(f, m, b, 0.5 * tol, depth - 1, fm, fr, fb, right);
}

template <class F>
cplx integrate_line(F&& f, double a, double b, double tol) {
    const cplx fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const cplx whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, tol, 48, fa, fm, fb, whole);
}

} // namespace detail

// <w1, w2>_{L^2} = integral of w1(t) conj(w2(t)) dt.  Gaussian pairs use the
// closed form (lambda1 + lambda2)^{-1/2}; anything else is integrated over
// the envelope-certified support.
inline cplx l2_inner(const Window& w1, const Window& w2, double eps = kDefaultEps) {
    const auto* g1 = std::get_if<GaussianWindow>(&w1);
    const auto* g2 = std::get_if<GaussianWindow>(&w2);
    if (g1 && g2)
        return 1.0 / std::sqrt(g1->lambda + g2->lambda);
    auto radius = [&](const Window& w) {
        if (const auto* g = std::get_if<GaussianWindow>(&w))
            return std::sqrt(std::log(1.0 / eps) / (kPi * g->lambda)) + 1.0;
        return std::get<GenericWindow>(w).trunc_radius(eps);
    };
    const double r = std::max(radius(w1), radius(w2));
    auto f = [&](double t) { return eval_window(w1, t) * std::conj(eval_window(w2, t)); };
    return detail::integrate_line(f, -r, r, std::min(eps, 1e-13));
}

inline double norm_sq(const Window& w, double eps = kDefaultEps) {
    if (const auto* g = std::get_if<GaussianWindow>(&w))
        return g->norm_sq();
    return l2_inner(w, w, eps).real();
}

// Pf(t) = sum_j f(t - j).  Gaussian branch:
//   P g(t) = exp(-pi lambda t^2) theta(-i lambda t, i lambda),
// after reducing t by its nearest integer (P is 1-periodic).
inline cplx periodize_at(const Window& w, double t, double eps = kDefaultEps) {
    if (const auto* g = std::get_if<GaussianWindow>(&w)) {
        const double t0 = t - static_cast<double>(std::lround(t));
        const double l = g->lambda;
        return std::exp(-kPi * l * t0 * t0) * theta(cplx(0.0, -l * t0), cplx(0.0, l), eps);
    }
    const auto& gw = std::get<GenericWindow>(w);
    return detail::periodize_sum(gw, t, static_cast<int>(std::ceil(gw.trunc_radius(eps))));
}

/// Pf(n/N) for a grid index 0 <= n < N.
inline cplx periodize(const Window& w, int n_dim, int n, double eps = kDefaultEps) {
    if (n_dim <= 0 || n < 0 || n >= n_dim)
        throw std::invalid_argument("periodize: grid index out of range");
    return periodize_at(w, static_cast<double>(n) / n_dim, eps);
}

/// All N grid samples of Pf: the periodized window as a finite signal.
inline FiniteSignal periodize_to_signal(const Window& w, int n_dim, double eps = kDefaultEps) {
    if (n_dim <= 0)
        throw std::invalid_argument("periodize_to_signal: N must be positive");
    FiniteSignal s(static_cast<std::size_t>(n_dim));
    for (int n = 0; n < n_dim; ++n)
        s[static_cast<std::size_t>(n)] = periodize_at(w, static_cast<double>(n) / n_dim, eps);
    return s;
}

/// Coefficients of the double periodization: a_n = Pf(n/N) / N.
inline SNVector sigma_coeffs(const Window& w, int n_dim, double eps = kDefaultEps) {
    FiniteSignal p = periodize_to_signal(w, n_dim, eps);
    SNVector v(static_cast<std::size_t>(n_dim));
    for (int n = 0; n < n_dim; ++n)
        v[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n)] / static_cast<double>(n_dim);
    return v;
}

/// Duality pairing of the double periodization of f against g:
///   (1/N) sum_n Pf(n/N) conj(Pg(n/N)),
/// which equals N times the coefficient inner product of the two
/// periodizations.
inline cplx duality_pairing(const Window& f, const Window& g, int n_dim,
                            double eps = kDefaultEps) {
    if (n_dim <= 0)
        throw std::invalid_argument("duality_pairing: N must be positive");
    cplx s = 0.0;
    for (int n = 0; n < n_dim; ++n) {
        const double t = static_cast<double>(n) / n_dim;
        s += periodize_at(f, t, eps) * std::conj(periodize_at(g, t, eps));
    }
    return s / static_cast<double>(n_dim);
}

} // namespace torusgabor

#endif
