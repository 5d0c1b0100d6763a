#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "pasv/errors.hpp"
#include "pasv/fock_oracle.hpp"
#include "pasv/oracles.hpp"
#include "pasv/pasv_core.hpp"
#include "pasv/scan.hpp"

using namespace pasv;
using cdouble = std::complex<double>;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(PasvParams(-0.1, 1), std::domain_error);
    CHECK_THROWS_AS(PasvParams(0.3, -1), std::domain_error);
    CHECK_THROWS_AS(PasvParams(0.3, 33), std::domain_error);
    CHECK(PasvParams(0.5, 2).zeta() == doctest::Approx(std::cosh(0.5)));
    const PhasePoint pt{1.0, 2.0};
    CHECK(pt.alpha().real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(pt.alpha().imag() == doctest::Approx(2.0 / std::sqrt(2.0)));
}

TEST_CASE("beta pair") {
    CHECK_THROWS_AS(beta_pair(PasvParams{0.0, 1}, {1.0, 0.0}), std::domain_error);
    const double r = 0.5;
    const auto bp = beta_pair(PasvParams{r, 1}, {1.0, 2.0});
    CHECK(bp.beta.real() == doctest::Approx(std::exp(-r) / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(bp.beta.imag() ==
          doctest::Approx(2.0 * std::exp(r) / std::sqrt(2.0)).epsilon(1e-14));
    const cdouble want = cdouble{0.0, -1.0} * bp.beta * std::sqrt(2.0 / std::tanh(r));
    CHECK(std::abs(bp.beta_bar - want) <= 1e-14 * std::abs(want));
}

TEST_CASE("norm factor") {
    for (int m = 0; m <= 8; ++m) {
        const double want = std::round(std::exp(poly::log_factorial(m)));
        CHECK(norm_factor_sq_inv(PasvParams{0.0, m}) ==
              doctest::Approx(want).epsilon(1e-12));
    }
    for (const double r : {0.2, 0.7, 1.4}) {
        const double c = std::cosh(r);
        CHECK(norm_factor_sq_inv(PasvParams{r, 1}) ==
              doctest::Approx(c * c).epsilon(1e-13));
    }
    // cross-check against the Fock-oracle norm of a^{dag 3} S(0.5)|0>
    const auto added = fock::add_photons(fock::squeezed_vacuum_auto(0.5), 3);
    CHECK(added.norm_sq ==
          doctest::Approx(norm_factor_sq_inv(PasvParams{0.5, 3})).epsilon(1e-10));
}

TEST_CASE("photon moments") {
    for (int m = 0; m <= 5; ++m)
        CHECK(mean_photon(PasvParams{0.0, m}) == doctest::Approx(m).epsilon(1e-13));
    for (const double r : {0.2, 0.8, 1.3}) {
        const double c = std::cosh(r);
        CHECK(mean_photon(PasvParams{r, 1}) ==
              doctest::Approx(3.0 * c * c - 2.0).epsilon(1e-13));
        const double tanh_r = std::tanh(r);
        const double want = 3.0 * (3.0 + 2.0 * tanh_r * tanh_r) /
                            ((1.0 / tanh_r - tanh_r) * (1.0 / tanh_r - tanh_r));
        CHECK(second_factorial_moment(PasvParams{r, 1}) ==
              doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(std::abs(second_factorial_moment(PasvParams{0.0, 1})) < 1e-13);

    // oracle cross-checks
    const auto v2 = fock::add_photons(fock::squeezed_vacuum(0.3, 64), 2).state;
    CHECK(mean_photon(PasvParams{0.3, 2}) ==
          doctest::Approx(fock::mean_photon(v2)).epsilon(1e-10));
    const auto v3 = fock::add_photons(fock::squeezed_vacuum_auto(0.4), 3).state;
    CHECK(second_factorial_moment(PasvParams{0.4, 3}) ==
          doctest::Approx(fock::second_factorial_moment(v3)).epsilon(1e-10));
}

TEST_CASE("consecutive-norm identity") {
    for (int m = 0; m <= 6; ++m)
        for (const double r : {0.0, 0.25, 0.5, 1.0, 1.5}) {
            const double ratio = norm_factor_sq_inv(PasvParams{r, m + 1}) /
                                 norm_factor_sq_inv(PasvParams{r, m});
            CHECK(ratio ==
                  doctest::Approx(mean_photon(PasvParams{r, m}) + 1.0).epsilon(1e-12));
        }
}

TEST_CASE("mandel q") {
    CHECK(mandel_q(PasvParams{0.0, 1}) == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK_THROWS_AS(mandel_q(PasvParams{0.0, 0}), std::domain_error);
    CHECK(mandel_q(PasvParams{1.0, 0}) > 0.0);
    // m = 0: Q reduces to cosh 2r, cross-checked against oracle moments
    for (const double r : {0.4, 1.0}) {
        CHECK(mandel_q(PasvParams{r, 0}) ==
              doctest::Approx(std::cosh(2.0 * r)).epsilon(1e-12));
        const auto v = fock::squeezed_vacuum_auto(r);
        const double mean = fock::mean_photon(v);
        const double second = fock::second_factorial_moment(v);
        CHECK(mandel_q(PasvParams{r, 0}) ==
              doctest::Approx(second / mean - mean).epsilon(1e-10));
    }
    // m = 1 closed form
    for (const double r : {0.2, 0.6}) {
        const double want =
            3.0 * std::pow(std::sinh(2.0 * r), 2) / (3.0 * std::cosh(2.0 * r) - 1.0) - 1.0;
        CHECK(mandel_q(PasvParams{r, 1}) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("mandel q sign change") {
    const double root = q_sign_change(1, {0.3, 0.6});
    CHECK(root > 0.45);
    CHECK(root < 0.47);
    CHECK(std::abs(mandel_q(PasvParams{root, 1})) < 1e-10);
    // algebraic root of 3c^2 - 3c - 2 = 0, c = cosh 2r
    const double algebraic = 0.5 * std::acosh((3.0 + std::sqrt(33.0)) / 6.0);
    CHECK(root == doctest::Approx(algebraic).epsilon(1e-9));

    CHECK_THROWS_AS(q_sign_change(1, {0.1, 0.2}), bracket_error);
    CHECK(q_sign_change(2, {0.3, 1.0}) > root);
}

TEST_CASE("wigner origin values") {
    const double inv_pi = 1.0 / std::numbers::pi;
    for (const double r : {0.0, 0.3, 0.8}) {
        CHECK(std::abs(wigner(PasvParams{r, 0}, {0.0, 0.0}) - inv_pi) < 1e-14);
        CHECK(std::abs(wigner(PasvParams{r, 1}, {0.0, 0.0}) + inv_pi) < 1e-14);
    }
}

TEST_CASE("wigner closed special cases") {
    const GridSpec window = GridSpec::square(3.0, 15);
    for (const double r : {0.1, 0.6, 1.2})
        for (int i = 0; i < window.nq; ++i)
            for (int j = 0; j < window.np; ++j) {
                const double q = window.q(i);
                const double p = window.p(j);
                CHECK(std::abs(wigner(PasvParams{r, 0}, {q, p}) -
                               oracle::wigner_m0_closed(r, q, p)) < 1e-12);
                CHECK(std::abs(wigner(PasvParams{r, 1}, {q, p}) -
                               oracle::wigner_m1_closed(r, q, p)) < 1e-12);
            }
}

TEST_CASE("wigner matches the displaced-parity oracle") {
    const auto rho = fock::pure_density(
        fock::add_photons(fock::squeezed_vacuum(0.3, 64), 2).state);
    const PasvParams s{0.3, 2};
    for (const double q : {0.0, 0.8, -1.6})
        for (const double p : {0.0, -0.6, 1.9}) {
            CHECK(wigner(s, {q, p}) ==
                  doctest::Approx(fock::wigner_fock(rho, {q, p})).epsilon(1e-8));
        }
}

TEST_CASE("wigner fock limit at r = 0") {
    for (const int m : {2, 3}) {
        fock::FockVector v{std::vector<cdouble>(64)};
        v.amp[static_cast<std::size_t>(m)] = 1.0;
        const auto rho = fock::pure_density(v);
        for (const double q : {0.0, 0.9})
            for (const double p : {0.4, -1.2})
                CHECK(wigner(PasvParams{0.0, m}, {q, p}) ==
                      doctest::Approx(fock::wigner_fock(rho, {q, p})).epsilon(1e-10));
    }
    // the guard at tiny r joins the closed form continuously
    const double below = wigner(PasvParams{1e-9, 2}, {0.5, 0.5});
    const double above = wigner(PasvParams{1e-7, 2}, {0.5, 0.5});
    CHECK(std::abs(below - above) < 1e-5);
}

TEST_CASE("wigner rejects nonfinite points") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(wigner(PasvParams{0.3, 1}, {nan, 0.0}), std::domain_error);
}

TEST_CASE("wigner normalization on an adequate window") {
    const PasvParams s{0.3, 2};
    const auto grid = evaluate_grid(
        [&](double q, double p) { return wigner(s, {q, p}); }, GridSpec::square(7.0, 401));
    CHECK(integrate(grid) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("wigner negativity for photon-added states") {
    for (const int m : {1, 2})
        for (const double r : {0.1, 0.8}) {
            const PasvParams s{r, m};
            const auto grid = evaluate_grid(
                [&](double q, double p) { return wigner(s, {q, p}); },
                GridSpec::square(4.0, 101));
            double mn = grid.values.front();
            for (const double v : grid.values) mn = std::min(mn, v);
            CHECK(mn < 0.0);
        }
}
