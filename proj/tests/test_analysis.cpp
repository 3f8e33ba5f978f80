#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <torusgabor/analysis.hpp>

#include "oracles.hpp"

using namespace torusgabor;

namespace {

SNVector random_vector(int n_dim, oracles::Rng& rng) {
    std::vector<cplx> c(static_cast<std::size_t>(n_dim));
    for (auto& v : c)
        v = cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    return SNVector(std::move(c));
}

double max_identity_deviation(const CMatrix& m) {
    double worst = 0.0;
    for (std::size_t a = 0; a < m.rows; ++a)
        for (std::size_t b = 0; b < m.cols; ++b)
            worst = std::max(worst, std::abs(m(a, b) - (a == b ? cplx(1.0) : cplx(0.0))));
    return worst;
}

} // namespace

TEST_CASE("quadrature grid validation") {
    CHECK_THROWS_AS(QuadratureGrid(4, 32), std::invalid_argument);
    CHECK_THROWS_AS(QuadratureGrid(32, 7), std::invalid_argument);
}

TEST_CASE("torus inner products of transformed basis vectors") {
    const double lambda = 1.0;
    const int n_dim = 4;
    const Window w = GaussianWindow(lambda);
    const QuadratureGrid grid(32, 32);
    auto v0 = [&](double x, double xi) { return stft_basis(w, n_dim, 0, TorusPoint{x, xi}); };
    auto v1 = [&](double x, double xi) { return stft_basis(w, n_dim, 1, TorusPoint{x, xi}); };

    const cplx diag = torus_inner(v0, v0, n_dim, grid);
    CHECK(std::abs(diag - n_dim / std::sqrt(2.0 * lambda)) < 1e-9);

    const cplx off = torus_inner(v0, v1, n_dim, grid);
    CHECK(std::abs(off) < 1e-9);

    auto zero = [](double, double) { return cplx(0.0); };
    CHECK(std::abs(torus_inner(zero, v0, n_dim, grid)) == 0.0);
}

TEST_CASE("moyal gram is the identity") {
    const QuadratureGrid grid(32, 32);
    CHECK(max_identity_deviation(moyal_gram(GaussianWindow(1.0), GaussianWindow(1.0), 3, grid)) <
          1e-8);
    // Scalar case.
    const CMatrix one = moyal_gram(GaussianWindow(2.0), GaussianWindow(2.0), 1, grid);
    CHECK(std::abs(one(0, 0) - 1.0) < 1e-10);
}

TEST_CASE("moyal gram with two different gaussian windows") {
    const QuadratureGrid grid(32, 32);
    const CMatrix gram = moyal_gram(GaussianWindow(1.0), GaussianWindow(2.0), 3, grid);
    CHECK(max_identity_deviation(gram) < 1e-8);
    // The normalizing pairing itself against a quadrature oracle.
    const cplx pairing = oracles::simpson_direct(
        [](double t) -> cplx { return std::exp(-kPi * 2.0 * t * t) * std::exp(-kPi * t * t); },
        -8.0, 8.0);
    CHECK(std::abs(l2_inner(Window(GaussianWindow(2.0)), Window(GaussianWindow(1.0))) - pairing) <
          1e-12);
}

TEST_CASE("moyal gram through the generic window branch") {
    const QuadratureGrid grid(16, 16);
    const Window generic =
        GenericWindow([](double t) -> cplx { return std::exp(-kPi * t * t); },
                      std::exp(kPi / 4.0), kPi);
    const CMatrix gram = moyal_gram(generic, GaussianWindow(1.0), 2, grid);
    CHECK(max_identity_deviation(gram) < 1e-8);
}

TEST_CASE("moyal scaling is independent of the analyzed vector") {
    oracles::Rng rng(31);
    const double lambda = 1.0;
    const int n_dim = 3;
    const Window w = GaussianWindow(lambda);
    const QuadratureGrid grid(24, 24);
    double lo = 1e300, hi = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const SNVector phi = random_vector(n_dim, rng);
        auto v = [&](double x, double xi) { return stft(w, phi, TorusPoint{x, xi}); };
        const double ratio = torus_inner(v, v, n_dim, grid).real() /
                             (n_dim * phi.norm_sq());
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(std::abs(hi - lo) / hi < 1e-8);
    CHECK(hi == doctest::Approx(1.0 / std::sqrt(2.0 * lambda)).epsilon(1e-8));
}

TEST_CASE("quadrature converges spectrally until the truncation floor") {
    const double lambda = 8.0;
    const int n_dim = 2;
    const Window w = GaussianWindow(lambda);
    double prev = -1.0;
    for (int m : {8, 16, 32}) {
        const double err = max_identity_deviation(moyal_gram(w, w, n_dim, QuadratureGrid(m, m)));
        if (prev >= 0.0)
            CHECK((err <= prev / 4.0 || err < 1e-12));
        prev = err;
    }
    CHECK(prev < 1e-12);
}

TEST_CASE("stft inversion round trip") {
    oracles::Rng rng(32);
    const int n_dim = 4;
    const Window w = GaussianWindow(1.0);
    const QuadratureGrid grid(32, 32);
    const SNVector phi = random_vector(n_dim, rng);
    auto v = [&](double x, double xi) { return stft(w, phi, TorusPoint{x, xi}); };
    const SNVector back = invert_stft(w, v, n_dim, grid);
    for (int n = 0; n < n_dim; ++n)
        CHECK(std::abs(back[n] - phi[n]) < 1e-8);
}

TEST_CASE("inversion recovers a unit vector and is linear") {
    const int n_dim = 3;
    const Window w = GaussianWindow(1.0);
    const QuadratureGrid grid(24, 24);
    auto v0 = [&](double x, double xi) { return stft_basis(w, n_dim, 0, TorusPoint{x, xi}); };
    const SNVector e0 = invert_stft(w, v0, n_dim, grid);
    for (int n = 0; n < n_dim; ++n)
        CHECK(std::abs(e0[n] - (n == 0 ? cplx(1.0) : cplx(0.0))) < 1e-8);

    const cplx c(0.7, -1.1);
    auto scaled = [&](double x, double xi) { return c * v0(x, xi); };
    const SNVector sc = invert_stft(w, scaled, n_dim, grid);
    for (int n = 0; n < n_dim; ++n)
        CHECK(std::abs(sc[n] - c * e0[n]) < 1e-12);
}

TEST_CASE("kernel forms agree pairwise") {
    oracles::Rng rng(33);
    for (double lambda : {1.0, 4.0}) {
        for (int n_dim : {2, 4, 8}) {
            const Window w = GaussianWindow(lambda);
            for (int trial = 0; trial < 12; ++trial) {
                const TorusPoint p{rng.uniform(), rng.uniform(0.0, n_dim)};
                const TorusPoint q{rng.uniform(), rng.uniform(0.0, n_dim)};
                const cplx a = kernel_basis_sum(w, n_dim, q, p);
                const cplx b = kernel_sigma_pair(w, n_dim, q, p);
                const cplx c = kernel_gaussian(lambda, n_dim, q, p);
                const double scale = std::max(1.0, std::abs(a));
                CHECK(std::abs(a - b) <= 1e-10 * scale);
                CHECK(std::abs(a - c) <= 1e-10 * scale);
            }
        }
    }
}

TEST_CASE("kernel against the lattice sum of gaussian shift inner products") {
    // Third route: (1/||g||^2) sum_{k1,k2} e^{-2 pi i k1 xi}
    //   <pi(x+k1, xi+N k2) g, pi(x', xi') g>, with the shift inner product in
    // closed form.
    const double lambda = 1.0;
    const int n_dim = 2;
    oracles::Rng rng(34);
    auto shift_inner = [&](double x, double xi, double xp, double xip) {
        return std::pow(2.0 * lambda, -0.5) *
               std::exp(cplx(0.0, kPi * (xi - xip) * (x + xp))) *
               std::exp(-0.5 * kPi *
                        (lambda * (x - xp) * (x - xp) + (xi - xip) * (xi - xip) / lambda));
    };
    for (int trial = 0; trial < 10; ++trial) {
        const TorusPoint p{rng.uniform(), rng.uniform(0.0, n_dim)};
        const TorusPoint q{rng.uniform(), rng.uniform(0.0, n_dim)};
        cplx acc = 0.0;
        for (int k1 = -12; k1 <= 12; ++k1)
            for (int k2 = -12; k2 <= 12; ++k2)
                acc += std::exp(cplx(0.0, -2.0 * kPi * k1 * p.xi)) *
                       shift_inner(p.x + k1, p.xi + n_dim * k2, q.x, q.xi);
        acc *= std::sqrt(2.0 * lambda);
        const cplx got = kernel_gaussian(lambda, n_dim, q, p);
        CHECK(std::abs(got - acc) <= 1e-10 * std::max(1.0, std::abs(acc)));
    }
}

TEST_CASE("kernel diagonal is positive and the kernel is hermitian") {
    oracles::Rng rng(35);
    const double lambda = 2.0;
    const int n_dim = 3;
    for (int trial = 0; trial < 50; ++trial) {
        const TorusPoint p{rng.uniform(), rng.uniform(0.0, n_dim)};
        const TorusPoint q{rng.uniform(), rng.uniform(0.0, n_dim)};
        const cplx kpp = kernel_gaussian(lambda, n_dim, p, p);
        CHECK(kpp.real() > 0.0);
        CHECK(std::abs(kpp.imag()) <= 1e-12 * kpp.real());
        const cplx kqp = kernel_gaussian(lambda, n_dim, q, p);
        const cplx kpq = kernel_gaussian(lambda, n_dim, p, q);
        CHECK(std::abs(kqp - std::conj(kpq)) <= 1e-12 * std::max(1.0, std::abs(kqp)));
    }
}

TEST_CASE("kernel reproduces transform values") {
    oracles::Rng rng(36);
    const int n_dim = 4;
    const QuadratureGrid grid(32, 32);
    const SNVector phi = random_vector(n_dim, rng);
    const TorusPoint p_prime{rng.uniform(), rng.uniform(0.0, n_dim)};
    CHECK(kernel_reproduce_error(1.0, phi, p_prime, grid) < 1e-8);

    const SNVector zero(static_cast<std::size_t>(n_dim));
    CHECK(kernel_reproduce_error(1.0, zero, p_prime, grid) == 0.0);

    // Basis vector at a grid point: reproduction against the direct value.
    const SNVector e1 = SNVector::unit(n_dim, 1);
    const TorusPoint grid_pt{0.25, 2.0};
    CHECK(kernel_reproduce_error(1.0, e1, grid_pt, grid) < 1e-8);
}

TEST_CASE("kernel integral operator has identity gram on the transformed basis") {
    const double lambda = 1.0;
    const int n_dim = 2;
    const Window w = GaussianWindow(lambda);
    const QuadratureGrid grid(24, 24);
    // Apply the kernel operator to V e_n and pair against V e_m: this equals
    // <V e_n, V e_m> / (N ||g||^2) after the Moyal normalization, i.e. the
    // identity once scaled.
    for (int n = 0; n < n_dim; ++n) {
        auto vn = [&](double x, double xi) { return stft_basis(w, n_dim, n, TorusPoint{x, xi}); };
        for (int m = 0; m < n_dim; ++m) {
            auto km = [&](double x, double xi) {
                const TorusPoint pp{x, xi};
                const int nx = grid.nodes_x, nxi = grid.nodes_xi * n_dim;
                const double hx = 1.0 / grid.nodes_x, hxi = 1.0 / grid.nodes_xi;
                cplx acc = 0.0;
                for (int i = 0; i < nx; ++i)
                    for (int j = 0; j < nxi; ++j) {
                        const TorusPoint p{i * hx, j * hxi};
                        acc += stft_basis(w, n_dim, m, p) *
                               kernel_gaussian(lambda, n_dim, pp, p);
                    }
                return acc * (hx * hxi);
            };
            const cplx entry = torus_inner(km, vn, n_dim, grid) /
                               (n_dim / std::sqrt(2.0 * lambda));
            CHECK(std::abs(entry - (n == m ? cplx(1.0) : cplx(0.0))) < 1e-7);
        }
    }
}
