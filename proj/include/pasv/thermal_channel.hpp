#ifndef PASV_THERMAL_CHANNEL_HPP
#define PASV_THERMAL_CHANNEL_HPP

#include <complex>

#include "pasv/pasv_core.hpp"
#include "pasv/scan.hpp"

namespace pasv {

/// Dimensionless decay time kt = kappa*t and mean thermal photon number
/// nbar of the environment.
struct ChannelParams {
    double kt = 0.0;
    double nbar = 0.0;

    ChannelParams(double kt_, double nbar_);
};

/// T = 1 - e^{-2kt}, Gamma_+ = nbar T/(nbar T + 1),
/// Gamma_- = (nbar+1) T/(nbar T + 1), Gamma_0 = ln(e^{-kt}/(nbar T + 1)).
struct KrausCoefficients {
    double T;
    double gamma_plus;
    double gamma_minus;
    double gamma_zero;
};

KrausCoefficients kraus_coefficients(const ChannelParams& ch);

/// Point-dependent bookkeeping of the evolved Wigner function:
///   A = 2 e^{-2kt}/((2nbar+1)T) + 2 cosh 2r
///   B = 2 e^{-kt} alpha / ((2nbar+1)T)
///   C = A^2 - 4 sinh^2 2r              (> 0)
///   D = i sqrt(2 coth r) (B* sinh r - B cosh r)
///   E = (A D - 2 D* sinh 2r)/C
///   F = (8/C)(A cosh 2r coth r - 4 cosh^2 r sinh 2r)
///   G = 1 - 16 e^{-2kt} cosh^2 r/(C (2nbar+1) T)   (in [0, 1); hits 0
///       exactly at the m=1 threshold time)
struct EvolutionCoefficients {
    double A;
    std::complex<double> B;
    double C;
    std::complex<double> D;
    std::complex<double> E;
    double F;
    double G;
};

/// Requires kt > 0 (the identity channel has no finite coefficients; use the
/// ideal-state Wigner) and r above squeeze_epsilon.
EvolutionCoefficients evolution_coefficients(const PasvParams& s, const ChannelParams& ch,
                                             PhasePoint pt);

/// Grid-friendly evaluator of the evolved Wigner function: the
/// point-independent coefficients (A, C, F, G, prefactor logs) are hoisted
/// at construction, only B, D, E and the Hermite-type sum vary per point.
/// Requires kt > 0 and r above squeeze_epsilon.
class EvolvedWigner {
public:
    EvolvedWigner(const PasvParams& s, const ChannelParams& ch);

    double operator()(double q, double p) const;
    double operator()(PhasePoint pt) const { return (*this)(pt.q, pt.p); }

private:
    int m_;
    double inv_tau_;
    double decay_;      // e^{-kt}
    double coth_r_;
    double sinh_r_;
    double cosh_r_;
    double sinh2r_;
    double a_;
    double c_;
    double f_;
    double g_;
    double log_pref_;   // point-independent part of the log prefactor
    double log_two_coth_;
    double log_f_;
};

/// Time-evolved Wigner function of the state in the thermal channel.
/// kt = 0 delegates to the ideal-state wigner(); kt > 0 evaluates the closed
/// double sum over Hermite-type terms with log-space coefficients.
double wigner_evolved(const PasvParams& s, const ChannelParams& ch, PhasePoint pt);

/// Closed single-photon-added form; must equal wigner_evolved for m = 1.
double wigner_evolved_m1(const PasvParams& s, const ChannelParams& ch, PhasePoint pt);

/// Decay time at which the m = 1 Wigner function loses all negativity:
/// kt_c = (1/2) ln((2nbar+2)/(2nbar+1)). Independent of r.
double threshold_time_m1(double nbar);

/// Numeric counterpart: bisects the zero crossing of the grid-global Wigner
/// minimum over kt in (1e-4, 2.0], to 1e-6. Works for any m.
double threshold_time_numeric(const PasvParams& s, double nbar, const GridSpec& grid);

} // namespace pasv

#endif
