#include "pasv/thermal_channel.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pasv/detail/numerics.hpp"
#include "pasv/errors.hpp"
#include "pasv/polymath.hpp"

namespace pasv {

namespace {

constexpr int kMaxM = PasvParams::max_photons_added;

} // namespace

ChannelParams::ChannelParams(double kt_, double nbar_) : kt(kt_), nbar(nbar_) {
    if (!(kt >= 0.0) || !std::isfinite(kt))
        throw std::domain_error("ChannelParams: decay time must be finite and >= 0");
    if (!(nbar >= 0.0) || !std::isfinite(nbar))
        throw std::domain_error("ChannelParams: thermal photon number must be finite and >= 0");
}

KrausCoefficients kraus_coefficients(const ChannelParams& ch) {
    const double T = -std::expm1(-2.0 * ch.kt);
    const double denom = ch.nbar * T + 1.0;
    return {T, ch.nbar * T / denom, (ch.nbar + 1.0) * T / denom,
            -ch.kt - std::log1p(ch.nbar * T)};
}

EvolutionCoefficients evolution_coefficients(const PasvParams& s, const ChannelParams& ch,
                                             PhasePoint pt) {
    if (ch.kt == 0.0)
        throw std::domain_error(
            "evolution_coefficients: identity channel (kt = 0) has no finite "
            "coefficients; evaluate the ideal-state Wigner function instead");
    if (s.r < squeeze_epsilon)
        throw std::domain_error("evolution_coefficients: requires r > 1e-8");

    const double T = -std::expm1(-2.0 * ch.kt);
    const double tau = (2.0 * ch.nbar + 1.0) * T;
    const double x2 = std::exp(-2.0 * ch.kt);
    const double cosh2r = std::cosh(2.0 * s.r);
    const double sinh2r = std::sinh(2.0 * s.r);
    const double coth_r = 1.0 / std::tanh(s.r);
    const double cosh_r = std::cosh(s.r);

    EvolutionCoefficients c{};
    c.A = 2.0 * x2 / tau + 2.0 * cosh2r;
    c.B = 2.0 * std::exp(-ch.kt) * pt.alpha() / tau;
    c.C = c.A * c.A - 4.0 * sinh2r * sinh2r;
    c.D = std::complex<double>{0.0, 1.0} * std::sqrt(2.0 * coth_r) *
          (std::conj(c.B) * std::sinh(s.r) - c.B * cosh_r);
    c.E = (c.A * c.D - 2.0 * std::conj(c.D) * sinh2r) / c.C;
    c.F = 8.0 / c.C * (c.A * cosh2r * coth_r - 4.0 * cosh_r * cosh_r * sinh2r);
    c.G = 1.0 - 16.0 / c.C * x2 / tau * cosh_r * cosh_r;
    return c;
}

EvolvedWigner::EvolvedWigner(const PasvParams& s, const ChannelParams& ch) {
    if (ch.kt <= 0.0)
        throw std::domain_error("EvolvedWigner: requires kt > 0 (use wigner() at kt = 0)");
    if (s.r < squeeze_epsilon)
        throw std::domain_error("EvolvedWigner: requires r > 1e-8");

    m_ = s.m;
    const double T = -std::expm1(-2.0 * ch.kt);
    const double tau = (2.0 * ch.nbar + 1.0) * T;
    inv_tau_ = 1.0 / tau;
    decay_ = std::exp(-ch.kt);
    sinh_r_ = std::sinh(s.r);
    cosh_r_ = std::cosh(s.r);
    coth_r_ = cosh_r_ / sinh_r_;
    sinh2r_ = std::sinh(2.0 * s.r);
    const double cosh2r = std::cosh(2.0 * s.r);
    const double x2 = decay_ * decay_;

    a_ = 2.0 * x2 / tau + 2.0 * cosh2r;
    c_ = a_ * a_ - 4.0 * sinh2r_ * sinh2r_;
    f_ = 8.0 / c_ * (a_ * cosh2r * coth_r_ - 4.0 * cosh_r_ * cosh_r_ * sinh2r_);
    g_ = 1.0 - 16.0 / c_ * x2 / tau * cosh_r_ * cosh_r_;

    log_pref_ = std::numbers::ln2 + m_ * std::log(sinh_r_) + poly::log_factorial(m_) -
                m_ * std::numbers::ln2 -
                std::log(poly::legendre(poly::PolyDegree{m_}, s.zeta())) -
                std::log(std::numbers::pi) - 0.5 * std::log(c_) - std::log(tau);
    log_two_coth_ = std::log(2.0 * coth_r_);
    log_f_ = std::log(f_);
}

double EvolvedWigner::operator()(double q, double p) const {
    if (!std::isfinite(q) || !std::isfinite(p))
        throw std::domain_error("EvolvedWigner: nonfinite phase-space point");

    const std::complex<double> alpha{q / std::sqrt(2.0), p / std::sqrt(2.0)};
    const std::complex<double> b = 2.0 * decay_ * alpha * inv_tau_;
    const std::complex<double> d = std::complex<double>{0.0, 1.0} *
                                   std::sqrt(2.0 * coth_r_) *
                                   (std::conj(b) * sinh_r_ - b * cosh_r_);
    const std::complex<double> e = (a_ * d - 2.0 * std::conj(d) * sinh2r_) / c_;

    const double exponent = -2.0 * std::norm(alpha) * inv_tau_ + a_ / c_ * std::norm(b) +
                            sinh2r_ / c_ * 2.0 * (b * b).real();
    const double log_pref = log_pref_ + exponent;

    // |G^{j/2} H_j(E/sqrt G)|^2 via the polynomial recurrence in (E, G);
    // stays finite where G crosses zero (which happens exactly at the m = 1
    // threshold time).
    std::array<double, kMaxM + 1> h_log_sq;
    detail::hermite_like_log_abs_sq(2.0 * e, 2.0 * g_, m_, h_log_sq.data());

    std::array<double, (kMaxM + 1) * (kMaxM + 2) / 2> terms;
    std::size_t n_terms = 0;
    for (int l = 0; l <= m_; ++l)
        for (int k = 0; k + l <= m_; ++k) {
            const int j = m_ - l - k;
            const double log_mag = log_pref + l * log_two_coth_ +
                                   (k == 0 ? 0.0 : k * log_f_) -
                                   poly::log_factorial(l) - poly::log_factorial(k) -
                                   2.0 * poly::log_factorial(j) + h_log_sq[j];
            terms[n_terms++] = (l % 2 == 0 ? 1.0 : -1.0) * std::exp(log_mag);
        }
    return detail::pairwise_sum(terms.data(), n_terms);
}

double wigner_evolved(const PasvParams& s, const ChannelParams& ch, PhasePoint pt) {
    if (!std::isfinite(pt.q) || !std::isfinite(pt.p))
        throw std::domain_error("wigner_evolved: nonfinite phase-space point");
    if (ch.kt == 0.0) return wigner(s, pt);
    return EvolvedWigner{s, ch}(pt);
}

double wigner_evolved_m1(const PasvParams& s, const ChannelParams& ch, PhasePoint pt) {
    if (s.m != 1)
        throw std::invalid_argument("wigner_evolved_m1: state must have m = 1");
    if (ch.kt <= 0.0)
        throw std::domain_error("wigner_evolved_m1: requires kt > 0");

    const auto c = evolution_coefficients(s, ch, pt);
    const double T = -std::expm1(-2.0 * ch.kt);
    const double tau = (2.0 * ch.nbar + 1.0) * T;
    const double coth_r = 1.0 / std::tanh(s.r);
    const double sinh2r = std::sinh(2.0 * s.r);

    const double exponent = c.A / c.C * std::norm(c.B) -
                            2.0 * std::norm(pt.alpha()) / tau +
                            sinh2r / c.C * 2.0 * (c.B * c.B).real();
    return (4.0 * std::norm(c.E) + c.F - 2.0 * coth_r) /
           (std::numbers::pi * std::sqrt(c.C) * tau * coth_r) * std::exp(exponent);
}

double threshold_time_m1(double nbar) {
    if (!(nbar >= 0.0) || !std::isfinite(nbar))
        throw std::domain_error("threshold_time_m1: thermal photon number must be >= 0");
    return 0.5 * std::log1p(1.0 / (2.0 * nbar + 1.0));
}

double threshold_time_numeric(const PasvParams& s, double nbar, const GridSpec& grid) {
    const auto grid_min = [&](double kt) {
        const EvolvedWigner w{s, ChannelParams{kt, nbar}};
        const WignerGrid values = evaluate_grid(w, grid);
        double mn = values.values.front();
        for (const double v : values.values) mn = std::min(mn, v);
        return mn;
    };

    double lo = 1e-4;
    double hi = 2.0;
    if (!(grid_min(lo) < 0.0))
        throw bracket_error(
            "threshold_time_numeric: Wigner minimum already nonnegative at kt = 1e-4");
    if (!(grid_min(hi) > 0.0))
        throw bracket_error("threshold_time_numeric: Wigner minimum still negative at kt = 2");
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (grid_min(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace pasv
