#ifndef PASV_ORACLES_HPP
#define PASV_ORACLES_HPP

#include <cmath>
#include <complex>
#include <numbers>

#include "pasv/polymath.hpp"

// Closed forms kept solely for verification. Each one is an independent
// evaluation route for a result the library computes some other way.

namespace pasv::oracle {

/// Hermite polynomial from the explicit sum
///   H_m(z) = sum_l (-1)^l m!/(l! (m-2l)!) (2z)^{m-2l}.
inline std::complex<double> hermite_explicit_sum(int m, std::complex<double> z) {
    std::complex<double> sum{0.0, 0.0};
    for (int l = 0; 2 * l <= m; ++l) {
        const double coeff = std::exp(poly::log_factorial(m) - poly::log_factorial(l) -
                                      poly::log_factorial(m - 2 * l));
        std::complex<double> term{(l % 2 == 0) ? coeff : -coeff, 0.0};
        for (int j = 0; j < m - 2 * l; ++j) term *= 2.0 * z;
        sum += term;
    }
    return sum;
}

/// Squeezed-vacuum Wigner function (1/pi) e^{-(q^2 e^{-2r} + p^2 e^{2r})}.
inline double wigner_m0_closed(double r, double q, double p) {
    return std::exp(-(q * q * std::exp(-2.0 * r) + p * p * std::exp(2.0 * r))) /
           std::numbers::pi;
}

/// Single-photon-added closed form
///   (1/pi) {2(q^2 e^{-2r} + p^2 e^{2r}) - 1} e^{-(q^2 e^{-2r} + p^2 e^{2r})}.
inline double wigner_m1_closed(double r, double q, double p) {
    const double u = q * q * std::exp(-2.0 * r) + p * p * std::exp(2.0 * r);
    return (2.0 * u - 1.0) * std::exp(-u) / std::numbers::pi;
}

/// Thermal-state Wigner function (1/(pi(2nbar+1))) e^{-(q^2+p^2)/(2nbar+1)}.
inline double wigner_thermal(double nbar, double q, double p) {
    const double w = 2.0 * nbar + 1.0;
    return std::exp(-(q * q + p * p) / w) / (std::numbers::pi * w);
}

/// Evolved squeezed vacuum (m = 0) as an explicit Gaussian,
///   N exp(-D |zeta|^2 + E (zeta^2 + zeta*^2)),
/// with the three constants assembled directly from (r, kt, nbar).
inline double wigner_evolved_m0_closed(double r, double kt, double nbar, double q,
                                       double p) {
    const double t_fac = -std::expm1(-2.0 * kt);
    const double tau = (2.0 * nbar + 1.0) * t_fac;
    const double x2 = std::exp(-2.0 * kt);
    const double sinh2r = std::sinh(2.0 * r);
    const double a = 2.0 * x2 / tau + 2.0 * std::cosh(2.0 * r);
    const double c = a * a - 4.0 * sinh2r * sinh2r;
    const double norm = 2.0 / (std::numbers::pi * std::sqrt(c) * tau);
    const double e_coef = 4.0 * x2 * sinh2r / (tau * tau * c);
    const double d_coef = 2.0 / tau - a * e_coef / sinh2r;
    const std::complex<double> zeta{q / std::sqrt(2.0), p / std::sqrt(2.0)};
    const double zz = 2.0 * (zeta * zeta).real(); // zeta^2 + zeta*^2
    return norm * std::exp(-d_coef * std::norm(zeta) + e_coef * zz);
}

} // namespace pasv::oracle

#endif
