// Jacobi theta function for complex argument and complex lattice parameter,
// evaluated by series summation with a certified truncation radius.
//
//   theta(z, tau) = sum_{k in Z} exp(pi i k^2 tau + 2 pi i k z),   Im(tau) > 0.
//
// The magnitude of the k-th term is exp(-pi t k^2 - 2 pi y k) with
// t = Im(tau), y = Im(z); it peaks at k = -y/t.  The sum is therefore taken
// over a window centered at the nearest integer k* to the peak, with the
// half-width R chosen so that the two neglected tails stay below eps times
// the peak term.  Conditioning degrades as Im(tau) -> 0; no modular
// transformation is applied.

#ifndef TORUSGABOR_THETA_HPP
#define TORUSGABOR_THETA_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace torusgabor {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

// Relative truncation target inherited by every closed form built on theta.
inline constexpr double kDefaultEps = 1e-14;

// Largest eps accepted by the series evaluators.
inline constexpr double kMaxEps = 1e-6;

namespace detail {

inline void check_theta_args(cplx tau, double eps) {
    if (!(tau.imag() > 0.0))
        throw std::invalid_argument("theta: Im(tau) must be positive");
    if (!(eps > 0.0) || eps > kMaxEps)
        throw std::invalid_argument("theta: eps must lie in (0, 1e-6]");
}

inline long theta_peak_index(cplx z, cplx tau) {
    return std::lround(-z.imag() / tau.imag());
}

// Smallest half-width R >= 1 with
//   2 e^{pi t/4} e^{-pi t (R+1/2)^2} / (1 - e^{-2 pi t (R+1/2)}) <= eps.
// The e^{pi t/4} factor absorbs the offset (at most 1/2) between the integer
// center k* and the real peak; the denominator majorizes the tail by a
// geometric series.
inline int theta_radius(cplx tau, double eps) {
    const double t = tau.imag();
    const double log_eps = std::log(eps);
    // Closed-form under-estimate, then verify and grow.
    double guess = std::sqrt(std::max(0.0, (std::log(2.0) - log_eps) / (kPi * t) + 0.25));
    int radius = static_cast<int>(guess) > 1 ? static_cast<int>(guess) - 1 : 1;
    for (;; ++radius) {
        const double r = radius + 0.5;
        const double log_tail = std::log(2.0) + kPi * t / 4.0 - kPi * t * r * r
                                - std::log1p(-std::exp(-2.0 * kPi * t * r));
        if (log_tail <= log_eps)
            return radius;
        if (radius > 50'000'000)
            throw std::runtime_error("theta: truncation radius overflow");
    }
}

// Windowed series with symmetric pairing, smallest terms first, so that
// rounding error does not accumulate against the dominant terms.
inline cplx theta_sum(cplx z, cplx tau, long center, int radius, bool derivative) {
    const cplx i_pi(0.0, kPi);
    const cplx i_two_pi(0.0, 2.0 * kPi);
    auto term = [&](double k) {
        cplx v = std::exp(i_pi * (k * k) * tau + i_two_pi * k * z);
        return derivative ? v * cplx(0.0, 2.0 * kPi * k) : v;
    };
    cplx s = 0.0;
    for (int j = radius; j >= 1; --j)
        s += term(static_cast<double>(center + j)) + term(static_cast<double>(center - j));
    s += term(static_cast<double>(center));
    return s;
}

} // namespace detail

/// theta(z, tau) with the neglected tail below eps relative to the largest term.
inline cplx theta(cplx z, cplx tau, double eps = kDefaultEps) {
    detail::check_theta_args(tau, eps);
    const long center = detail::theta_peak_index(z, tau);
    return detail::theta_sum(z, tau, center, detail::theta_radius(tau, eps), false);
}

/// d/dz theta(z, tau), term-wise differentiated series, same truncation rule.
/// The factor 2 pi i k grows only linearly in k, so two extra terms cover it.
inline cplx theta_dz(cplx z, cplx tau, double eps = kDefaultEps) {
    detail::check_theta_args(tau, eps);
    const long center = detail::theta_peak_index(z, tau);
    return detail::theta_sum(z, tau, center, detail::theta_radius(tau, eps) + 2, true);
}

} // namespace torusgabor

#endif
