#include "pasv/pasv_core.hpp"

#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "pasv/detail/numerics.hpp"
#include "pasv/errors.hpp"
#include "pasv/polymath.hpp"

namespace pasv {

namespace {

using poly::PolyDegree;

double legendre_at_zeta(int n, double zeta) {
    return poly::legendre(PolyDegree{n}, zeta);
}

} // namespace

PasvParams::PasvParams(double r_, int m_) : r(r_), m(m_) {
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::domain_error("PasvParams: squeezing parameter must be finite and >= 0");
    if (m < 0 || m > max_photons_added)
        throw std::domain_error("PasvParams: photon-added count " + std::to_string(m) +
                                " outside supported range [0, " +
                                std::to_string(max_photons_added) + "]");
}

BetaPair beta_pair(const PasvParams& s, PhasePoint pt) {
    if (!(s.r > 0.0))
        throw std::domain_error("beta_pair: defined only for r > 0");
    const std::complex<double> beta{pt.q * std::exp(-s.r) / std::sqrt(2.0),
                                    pt.p * std::exp(s.r) / std::sqrt(2.0)};
    const double coth_r = 1.0 / std::tanh(s.r);
    const std::complex<double> beta_bar =
        std::complex<double>{0.0, -1.0} * beta * std::sqrt(2.0 * coth_r);
    return {beta, beta_bar};
}

double norm_factor_sq_inv(const PasvParams& s) {
    const double zeta = s.zeta();
    return std::exp(poly::log_factorial(s.m) + s.m * std::log(zeta)) *
           legendre_at_zeta(s.m, zeta);
}

double mean_photon(const PasvParams& s) {
    const double zeta = s.zeta();
    return (s.m + 1.0) * zeta * legendre_at_zeta(s.m + 1, zeta) /
               legendre_at_zeta(s.m, zeta) -
           1.0;
}

double second_factorial_moment(const PasvParams& s) {
    const double zeta = s.zeta();
    const double pm = legendre_at_zeta(s.m, zeta);
    const double ratio2 = legendre_at_zeta(s.m + 2, zeta) / pm;
    const double ratio1 = legendre_at_zeta(s.m + 1, zeta) / pm;
    return (s.m + 1.0) * zeta * ((s.m + 2.0) * zeta * ratio2 - 4.0 * ratio1) + 2.0;
}

double mandel_q(const PasvParams& s) {
    if (s.m == 0 && s.r == 0.0)
        throw std::domain_error("mandel_q: undefined for the vacuum (<n> = 0)");
    const double n_mean = mean_photon(s);
    return second_factorial_moment(s) / n_mean - n_mean;
}

double q_sign_change(int m, Interval bracket) {
    if (!(bracket.lo < bracket.hi))
        throw std::domain_error("q_sign_change: empty bracket");
    auto f = [m](double r) { return mandel_q(PasvParams{r, m}); };
    double flo = f(bracket.lo);
    double fhi = f(bracket.hi);
    if (flo == 0.0) return bracket.lo;
    if (fhi == 0.0) return bracket.hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw bracket_error("q_sign_change: Q has the same sign at both bracket ends");
    double lo = bracket.lo, hi = bracket.hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if (std::abs(fmid) < 1e-10) return mid;
        if ((fmid > 0.0) == (fhi > 0.0)) {
            hi = mid;
            fhi = fmid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

double wigner_fock_limit(int m, PhasePoint pt) {
    const double u = pt.q * pt.q + pt.p * pt.p;
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    return sign / std::numbers::pi * std::exp(-u) * detail::laguerre(m, 2.0 * u);
}

} // namespace

double wigner(const PasvParams& s, PhasePoint pt) {
    if (!std::isfinite(pt.q) || !std::isfinite(pt.p))
        throw std::domain_error("wigner: nonfinite phase-space point");
    if (s.r < squeeze_epsilon) return wigner_fock_limit(s.m, pt);

    const int m = s.m;
    const auto bp = beta_pair(s, pt);
    const double coth_r = 1.0 / std::tanh(s.r);
    const double two_beta_sq = 2.0 * std::norm(bp.beta);

    // Common log prefactor e^{-2|beta|^2} sinh^m r / (pi 2^m P_m(cosh r)).
    const double log_pref = -two_beta_sq + m * std::log(std::sinh(s.r)) -
                            m * std::numbers::ln2 -
                            std::log(legendre_at_zeta(m, s.zeta())) -
                            std::log(std::numbers::pi);

    std::vector<double> h_log_sq;
    detail::hermite_like_log_abs_sq(2.0 * bp.beta_bar, 2.0, m, h_log_sq);

    const double log_two_coth = std::log(2.0 * coth_r);
    std::vector<double> terms(static_cast<std::size_t>(m) + 1);
    for (int l = 0; l <= m; ++l) {
        const double log_mag = log_pref + poly::log_factorial(m) + l * log_two_coth -
                               poly::log_factorial(l) -
                               2.0 * poly::log_factorial(m - l) +
                               h_log_sq[static_cast<std::size_t>(m - l)];
        terms[static_cast<std::size_t>(l)] =
            (l % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag);
    }
    return detail::pairwise_sum(terms);
}

} // namespace pasv
