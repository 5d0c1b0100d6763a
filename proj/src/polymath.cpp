#include "pasv/polymath.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace pasv::poly {

namespace {

constexpr int kFactorialTableSize = 4096;

// Cumulative long-double summation keeps every entry accurate to ~1 ulp,
// unlike lgamma whose absolute error grows with the argument.
const std::vector<double>& factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kFactorialTableSize + 1);
        long double acc = 0.0L;
        t[0] = 0.0;
        for (int k = 1; k <= kFactorialTableSize; ++k) {
            acc += std::log(static_cast<long double>(k));
            t[k] = static_cast<double>(acc);
        }
        return t;
    }();
    return table;
}

} // namespace

PolyDegree::PolyDegree(int n) : n_(n) {
    if (n < 0 || n > max_degree)
        throw std::domain_error("PolyDegree: order " + std::to_string(n) +
                                " outside supported range [0, " +
                                std::to_string(max_degree) + "]");
}

double log_factorial(int n) {
    if (n < 0 || n > kFactorialTableSize)
        throw std::domain_error("log_factorial: argument out of table range");
    return factorial_table()[n];
}

std::complex<double> hermite(PolyDegree n, std::complex<double> z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::domain_error("hermite: nonfinite argument");
    const int m = n.value();
    if (m == 0) return {1.0, 0.0};
    std::complex<double> hk_prev{1.0, 0.0};
    std::complex<double> hk = 2.0 * z;
    for (int k = 1; k < m; ++k) {
        const std::complex<double> next = 2.0 * z * hk - 2.0 * static_cast<double>(k) * hk_prev;
        hk_prev = hk;
        hk = next;
    }
    return hk;
}

double legendre(PolyDegree n, double x) {
    if (!std::isfinite(x)) throw std::domain_error("legendre: nonfinite argument");
    const int m = n.value();
    if (m == 0) return 1.0;
    double pk_prev = 1.0;
    double pk = x;
    for (int k = 1; k < m; ++k) {
        const double next = ((2.0 * k + 1.0) * x * pk - k * pk_prev) / (k + 1.0);
        pk_prev = pk;
        pk = next;
    }
    return pk;
}

double legendre_product_form(PolyDegree n, double x) {
    if (!std::isfinite(x)) throw std::domain_error("legendre_product_form: nonfinite argument");
    if (x == 0.0) throw std::domain_error("legendre_product_form: singular at x = 0");
    const int m = n.value();
    const double t = 1.0 - 1.0 / (x * x);
    double sum = 0.0;
    double t_pow = 1.0;
    for (int l = 0; 2 * l <= m; ++l) {
        const double log_coeff = log_factorial(m) - 2.0 * l * std::numbers::ln2 -
                                 2.0 * log_factorial(l) - log_factorial(m - 2 * l);
        sum += std::exp(log_coeff) * t_pow;
        t_pow *= t;
    }
    double x_pow = 1.0;
    for (int k = 0; k < m; ++k) x_pow *= x;
    return x_pow * sum;
}

double generating_derivative(PolyDegree m_deg, double c) {
    const int m = m_deg.value();
    if (m > 20)
        throw std::domain_error("generating_derivative: order above oracle bound 20");
    if (!std::isfinite(c)) throw std::domain_error("generating_derivative: nonfinite argument");

    // Triple series of exp(-t^2 - tau^2 + 2c tau t); the t^m tau^m cross
    // derivative at the origin keeps only terms with 2n+k = m and 2l+k = m,
    // each contributing (m!)^2 from the monomial derivatives.
    double sum = 0.0;
    for (int n = 0; n <= m; ++n)
        for (int l = 0; l <= m; ++l)
            for (int k = 0; k <= m; ++k) {
                if (2 * n + k != m || 2 * l + k != m) continue;
                if (c == 0.0 && k > 0) continue;
                const double log_mag = 2.0 * log_factorial(m) - log_factorial(n) -
                                       log_factorial(l) - log_factorial(k) +
                                       (k == 0 ? 0.0 : k * std::log(2.0 * std::abs(c)));
                double sign = ((n + l) % 2 == 0) ? 1.0 : -1.0;
                if (c < 0.0 && k % 2 == 1) sign = -sign;
                sum += sign * std::exp(log_mag);
            }
    return sum;
}

std::complex<double> gaussian_double_derivative(PolyDegree m_deg, double g,
                                                std::complex<double> e) {
    if (!(g > 0.0)) throw std::domain_error("gaussian_double_derivative: requires g > 0");
    if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
        throw std::domain_error("gaussian_double_derivative: nonfinite argument");
    const int m = m_deg.value();

    // exp(-g v^2 + 2 v e) = sum_{a,b} (-g)^a (2e)^b v^{2a+b} / (a! b!);
    // the m-th derivative at v = 0 picks out 2a + b = m with weight m!.
    std::complex<double> sum{0.0, 0.0};
    for (int a = 0; 2 * a <= m; ++a) {
        const int b = m - 2 * a;
        const double coeff = std::exp(log_factorial(m) - log_factorial(a) - log_factorial(b));
        std::complex<double> term{coeff, 0.0};
        for (int j = 0; j < a; ++j) term *= -g;
        for (int j = 0; j < b; ++j) term *= 2.0 * e;
        sum += term;
    }
    return sum;
}

} // namespace pasv::poly
