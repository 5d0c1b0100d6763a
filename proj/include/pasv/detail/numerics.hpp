#ifndef PASV_DETAIL_NUMERICS_HPP
#define PASV_DETAIL_NUMERICS_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

// Internal numeric helpers shared by the closed-form Wigner evaluators.

namespace pasv::detail {

/// log |u_k|^2 for the Hermite-type sequence
///   u_0 = 1,  u_1 = a,  u_{k+1} = a u_k - k b u_{k-1},
/// with a = 2z, b = 2 this is H_k(z); with a = 2E, b = 2G it is the
/// polynomial G^{k/2} H_k(E/sqrt(G)), well defined for any real G.
///
/// The recurrence is carried as mantissa pairs under a shared power-of-two
/// scale so magnitudes up to ~exp(1e4) never overflow. out[k] receives
/// log |u_k|^2; -inf where u_k vanishes.
inline void hermite_like_log_abs_sq(std::complex<double> a, double b, int m,
                                    double* out) {
    out[0] = 0.0;
    std::complex<double> prev{1.0, 0.0};
    double log_scale = 0.0;
    if (m == 0) return;
    std::complex<double> cur = a;
    out[1] = 2.0 * (std::log(std::abs(cur)) + log_scale);
    constexpr double renorm_limit = 0x1p+400;
    constexpr double renorm_factor = 0x1p-400;
    constexpr double renorm_log = 400.0 * 0.693147180559945309; // 400 ln 2
    for (int k = 1; k < m; ++k) {
        const std::complex<double> next = a * cur - static_cast<double>(k) * b * prev;
        prev = cur;
        cur = next;
        const double mag = std::abs(cur);
        if (mag > renorm_limit) {
            prev *= renorm_factor;
            cur *= renorm_factor;
            log_scale += renorm_log;
        } else if (mag > 0.0 && mag < renorm_factor &&
                   std::abs(prev) < renorm_factor) {
            prev *= renorm_limit;
            cur *= renorm_limit;
            log_scale -= renorm_log;
        }
        out[k + 1] = 2.0 * (std::log(std::abs(cur)) + log_scale);
    }
}

inline void hermite_like_log_abs_sq(std::complex<double> a, double b, int m,
                                    std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(m) + 1);
    hermite_like_log_abs_sq(a, b, m, out.data());
}

/// Pairwise (cascade) summation; deterministic and O(eps log n) stable.
inline double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& x) {
    return pairwise_sum(x.data(), x.size());
}

/// Laguerre polynomial L_m(x) by the standard three-term recurrence.
inline double laguerre(int m, double x) {
    if (m == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 - x;
    for (int k = 1; k < m; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace pasv::detail

#endif
