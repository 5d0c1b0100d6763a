#ifndef PASV_POLYMATH_HPP
#define PASV_POLYMATH_HPP

#include <complex>

namespace pasv::poly {

/// Polynomial order for the special-function kernels. Orders above 64 are
/// rejected: the log-space coefficient machinery is only validated up to there.
class PolyDegree {
public:
    static constexpr int max_degree = 64;

    explicit PolyDegree(int n);
    int value() const noexcept { return n_; }

private:
    int n_;
};

/// log(n!) from a cumulatively summed table (exact to ~1 ulp per entry).
double log_factorial(int n);

/// Hermite polynomial H_n(z) by the three-term recurrence
/// H_{k+1}(z) = 2 z H_k(z) - 2 k H_{k-1}(z).
std::complex<double> hermite(PolyDegree n, std::complex<double> z);

/// Legendre polynomial P_n(x) by the Bonnet recurrence
/// (k+1) P_{k+1}(x) = (2k+1) x P_k(x) - k P_{k-1}(x).
double legendre(PolyDegree n, double x);

/// Alternative product form
///   P_n(x) = x^n sum_l n! / (2^{2l} (l!)^2 (n-2l)!) (1 - 1/x^2)^l,
/// singular at x = 0 (the standard form is not). Must agree with legendre()
/// for x >= 1.
double legendre_product_form(PolyDegree n, double x);

/// The 2m-th cross derivative
///   d^{2m}/dt^m dtau^m exp(-t^2 - tau^2 + 2 c tau t) at t = tau = 0,
/// evaluated by the explicit triple series (only terms with 2n+k = m and
/// 2l+k = m survive). Series oracle; bounded at m <= 20.
double generating_derivative(PolyDegree m, double c);

/// The m-th derivative d^m/dv^m exp(-g v^2 + 2 v e) at v = 0, evaluated by
/// truncated power-series differentiation. Equals g^{m/2} H_m(e/sqrt(g));
/// kept as an independent series oracle. Requires g > 0.
std::complex<double> gaussian_double_derivative(PolyDegree m, double g,
                                                std::complex<double> e);

} // namespace pasv::poly

#endif
