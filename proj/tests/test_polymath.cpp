#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>

#include "pasv/oracles.hpp"
#include "pasv/polymath.hpp"

using namespace pasv;
using poly::PolyDegree;
using cdouble = std::complex<double>;

TEST_CASE("hermite fixed values") {
    CHECK(poly::hermite(PolyDegree{0}, {3.7, -1.2}) == cdouble{1.0, 0.0});
    CHECK(poly::hermite(PolyDegree{1}, {2.0, 0.0}).real() == doctest::Approx(4.0));
    CHECK(poly::hermite(PolyDegree{3}, {2.0, 0.0}).real() == doctest::Approx(40.0));
    // H_2(i) = 4 i^2 - 2 = -6, frozen from the explicit sum
    const cdouble h2i = poly::hermite(PolyDegree{2}, {0.0, 1.0});
    CHECK(h2i.real() == doctest::Approx(-6.0).epsilon(1e-14));
    CHECK(h2i.imag() == doctest::Approx(0.0));
}

TEST_CASE("hermite degree bound and bad input") {
    CHECK_THROWS_AS(PolyDegree{65}, std::domain_error);
    CHECK_THROWS_AS(PolyDegree{-1}, std::domain_error);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(poly::hermite(PolyDegree{2}, {inf, 0.0}), std::domain_error);
}

TEST_CASE("hermite recurrence matches the explicit sum") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 30; ++trial) {
        cdouble z{u(rng), u(rng)};
        while (std::abs(z) > 5.0) z = {u(rng), u(rng)};
        for (int n = 0; n <= 15; ++n) {
            const cdouble got = poly::hermite(PolyDegree{n}, z);
            const cdouble want = oracle::hermite_explicit_sum(n, z);
            CHECK(std::abs(got - want) <= 1e-10 * std::abs(want));
        }
    }
}

TEST_CASE("hermite parity at the origin") {
    for (int m = 0; m <= 14; ++m) {
        const double got = poly::hermite(PolyDegree{m}, {0.0, 0.0}).real();
        if (m % 2 == 1) {
            CHECK(got == 0.0);
        } else {
            const int j = m / 2;
            const double want =
                ((j % 2 == 0) ? 1.0 : -1.0) *
                std::round(std::exp(poly::log_factorial(m) - poly::log_factorial(j)));
            CHECK(got == want);
        }
    }
}

TEST_CASE("legendre fixed values") {
    for (int m = 0; m <= 10; ++m)
        CHECK(poly::legendre(PolyDegree{m}, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (const double x : {1.0, 1.3, 2.7}) {
        CHECK(poly::legendre(PolyDegree{2}, x) ==
              doctest::Approx((3.0 * x * x - 1.0) / 2.0).epsilon(1e-14));
    }
    // (63 x^5 - 70 x^3 + 15 x)/8 at x = 1.2, evaluated by hand
    CHECK(poly::legendre(PolyDegree{5}, 1.2) == doctest::Approx(6.72552).epsilon(1e-13));
}

TEST_CASE("legendre product form") {
    CHECK_THROWS_AS(poly::legendre_product_form(PolyDegree{3}, 0.0), std::domain_error);
    CHECK(poly::legendre_product_form(PolyDegree{0}, 2.0) == doctest::Approx(1.0));
    for (const double x : {1.0, 1.2, 3.0}) {
        const double want = (5.0 * x * x * x - 3.0 * x) / 2.0;
        CHECK(poly::legendre_product_form(PolyDegree{3}, x) ==
              doctest::Approx(want).epsilon(1e-13));
    }
    CHECK(poly::legendre_product_form(PolyDegree{4}, 1.5) ==
          doctest::Approx(poly::legendre(PolyDegree{4}, 1.5)).epsilon(1e-13));
    for (int n = 0; n <= 10; ++n)
        for (const double x : {1.0, 1.1, 1.5, 2.0, 5.0, 10.0}) {
            const double a = poly::legendre_product_form(PolyDegree{n}, x);
            const double b = poly::legendre(PolyDegree{n}, x);
            CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
        }
}

TEST_CASE("generating-function cross derivative") {
    CHECK(poly::generating_derivative(PolyDegree{0}, 4.2) == doctest::Approx(1.0));
    for (const double c : {0.5, -1.3, 7.0})
        CHECK(poly::generating_derivative(PolyDegree{1}, c) ==
              doctest::Approx(2.0 * c).epsilon(1e-14));
    CHECK_THROWS_AS(poly::generating_derivative(PolyDegree{21}, 1.0), std::domain_error);

    // equals 2^m m! (x^2-1)^{-m/2} P_m(x) at x = cosh r
    for (const int m : {2, 3, 5})
        for (const double r : {0.3, 0.7, 1.4}) {
            const double x = std::cosh(r);
            const double s2 = x * x - 1.0;
            const double got = poly::generating_derivative(PolyDegree{m}, x / std::sqrt(s2));
            const double want = std::exp(m * std::numbers::ln2 + poly::log_factorial(m) -
                                         0.5 * m * std::log(s2)) *
                                poly::legendre(PolyDegree{m}, x);
            CHECK(got == doctest::Approx(want).epsilon(1e-9));
        }
}

TEST_CASE("gaussian double derivative") {
    CHECK(poly::gaussian_double_derivative(PolyDegree{0}, 1.5, {0.3, 0.1}) ==
          cdouble{1.0, 0.0});
    const cdouble e{0.8, -0.4};
    const cdouble first = poly::gaussian_double_derivative(PolyDegree{1}, 1.0, e);
    CHECK(std::abs(first - 2.0 * e) <= 1e-14);
    CHECK_THROWS_AS(poly::gaussian_double_derivative(PolyDegree{2}, 0.0, e),
                    std::domain_error);
    CHECK_THROWS_AS(poly::gaussian_double_derivative(PolyDegree{2}, -1.0, e),
                    std::domain_error);

    // m=2, g=2, e=1+i: 2 H_2((1+i)/sqrt 2) = 2(4i - 2) = -4 + 8i
    const cdouble got = poly::gaussian_double_derivative(PolyDegree{2}, 2.0, {1.0, 1.0});
    CHECK(got.real() == doctest::Approx(-4.0).epsilon(1e-13));
    CHECK(got.imag() == doctest::Approx(8.0).epsilon(1e-13));

    for (int m = 0; m <= 6; ++m)
        for (const double g : {0.5, 2.0}) {
            const cdouble want =
                std::pow(g, 0.5 * m) * poly::hermite(PolyDegree{m}, e / std::sqrt(g));
            const cdouble v = poly::gaussian_double_derivative(PolyDegree{m}, g, e);
            CHECK(std::abs(v - want) <= 1e-10 * std::abs(want));
        }
}

TEST_CASE("log factorial table") {
    CHECK(poly::log_factorial(0) == 0.0);
    CHECK(poly::log_factorial(1) == 0.0);
    CHECK(poly::log_factorial(5) == doctest::Approx(std::log(120.0)).epsilon(1e-15));
    CHECK(poly::log_factorial(20) ==
          doctest::Approx(std::lgamma(21.0)).epsilon(1e-14));
    CHECK_THROWS_AS(poly::log_factorial(-1), std::domain_error);
}
