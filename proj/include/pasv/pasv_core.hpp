#ifndef PASV_PASV_CORE_HPP
#define PASV_PASV_CORE_HPP

#include <cmath>
#include <complex>

namespace pasv {

/// Below this squeezing the closed-form Wigner expression (which carries
/// coth r) is abandoned for the exact Fock-state limit.
inline constexpr double squeeze_epsilon = 1e-8;

/// The state a^{dag m} S(r)|0> (normalized): squeezing parameter r and
/// photon-added count m.
struct PasvParams {
    double r = 0.0;
    int m = 0;

    static constexpr int max_photons_added = 32;

    PasvParams(double r_, int m_);

    /// cosh r, the argument the Legendre-polynomial moment formulas run on.
    double zeta() const { return std::cosh(r); }
};

/// Phase-space point; alpha = (q + i p)/sqrt(2).
struct PhasePoint {
    double q = 0.0;
    double p = 0.0;

    std::complex<double> alpha() const {
        return {q / std::sqrt(2.0), p / std::sqrt(2.0)};
    }
};

/// beta = alpha cosh r - alpha* sinh r (= (q e^{-r} + i p e^{r})/sqrt(2))
/// and beta_bar = -i beta sqrt(2 coth r). Defined only for r > 0.
struct BetaPair {
    std::complex<double> beta;
    std::complex<double> beta_bar;
};

BetaPair beta_pair(const PasvParams& s, PhasePoint pt);

/// Squared norm of the unnormalized state a^{dag m} S(r)|0>, i.e. the
/// inverse square of the normalization constant:
///   N^{-2} = m! cosh^m(r) P_m(cosh r).
double norm_factor_sq_inv(const PasvParams& s);

/// Mean photon number (m+1) zeta P_{m+1}(zeta)/P_m(zeta) - 1, zeta = cosh r.
double mean_photon(const PasvParams& s);

/// Second factorial moment <a^{dag 2} a^2>.
double second_factorial_moment(const PasvParams& s);

/// Mandel Q = <a^{dag 2} a^2>/<n> - <n>. Undefined (throws) for the vacuum
/// (m = 0, r = 0) where <n> = 0.
double mandel_q(const PasvParams& s);

struct Interval {
    double lo;
    double hi;
};

/// Bisected root of mandel_q in r for fixed m. The bracket must straddle a
/// sign change; the returned r* satisfies |Q(r*)| < 1e-10.
double q_sign_change(int m, Interval bracket);

/// Wigner function W(q, p) of the ideal state. For r below squeeze_epsilon
/// the exact Fock-state form ((-1)^m/pi) e^{-(q^2+p^2)} L_m(2(q^2+p^2)) is
/// used; otherwise the closed Hermite-polynomial sum, evaluated with
/// log-space coefficients and pairwise accumulation.
double wigner(const PasvParams& s, PhasePoint pt);

} // namespace pasv

#endif
