#ifndef PASV_FOCK_ORACLE_HPP
#define PASV_FOCK_ORACLE_HPP

#include <complex>
#include <span>
#include <vector>

#include "pasv/pasv_core.hpp"
#include "pasv/scan.hpp"
#include "pasv/thermal_channel.hpp"

// Truncated Fock-basis brute force: state construction, channel evolution by
// Kraus map and by master-equation integration, and displaced-parity Wigner
// evaluation. Everything here is the independent path the closed forms are
// certified against.

namespace pasv::fock {

using cdouble = std::complex<double>;

/// Dense square complex matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim) {}

    static Matrix identity(int dim);

    int dim() const { return dim_; }
    cdouble& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * dim_ + j]; }
    const cdouble& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }
    std::vector<cdouble>& data() { return a_; }
    const std::vector<cdouble>& data() const { return a_; }

private:
    int dim_ = 0;
    std::vector<cdouble> a_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix adjoint(const Matrix& a);
cdouble trace(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

/// exp(K) by Taylor series under scaling-and-squaring. Multiplications are
/// band-limited while the growing bandwidth allows, which makes the banded
/// generators (displacement, squeezing) cheap at large cutoffs.
Matrix matrix_exponential(const Matrix& k);

Matrix annihilation(int cutoff);
Matrix creation(int cutoff);
Matrix parity(int cutoff);

/// Truncated displacement operator exp(alpha a^dag - alpha* a).
Matrix displacement(cdouble alpha, int cutoff);

/// Pure state in the number basis.
struct FockVector {
    std::vector<cdouble> amp;

    int cutoff() const { return static_cast<int>(amp.size()); }
    double norm_sq() const;
    /// Population in the top `margin` levels (cutoff-adequacy measure).
    double tail_mass(int margin = 8) const;
};

cdouble inner_product(const FockVector& a, const FockVector& b);
double mean_photon(const FockVector& v);
double second_factorial_moment(const FockVector& v);

struct FockDensity {
    Matrix rho;

    int cutoff() const { return rho.dim(); }
};

FockDensity pure_density(const FockVector& v);
double hermiticity_defect(const FockDensity& rho);

inline constexpr double default_tail_tol = 1e-20;

/// Squeezed vacuum S(r)|0> amplitudes by the even-rung recurrence. Throws
/// cutoff_error when the top-of-basis tail mass exceeds tail_tol.
FockVector squeezed_vacuum(double r, int cutoff, double tail_tol = default_tail_tol);

/// Doubles the cutoff (64 -> 128 -> ...) until the tail test passes.
FockVector squeezed_vacuum_auto(double r, int min_cutoff = 64, int max_cutoff = 512,
                                double tail_tol = default_tail_tol);

struct AddPhotonsResult {
    FockVector state;     // normalized
    double norm_sq;       // squared norm before normalization
};

/// Applies a^dag m times. norm_sq is the closed-form target
/// m! cosh^m r P_m(cosh r) when applied to S(r)|0>. The top m + 8 levels of
/// the input must carry less than tail_tol population (headroom).
AddPhotonsResult add_photons(const FockVector& v, int m,
                             double tail_tol = default_tail_tol);

/// Kraus operator M_{k,l} = e^{(kt+Gamma_0)/2}
///   sqrt(Gamma_-^k Gamma_+^l e^{-2 l Gamma_0} / (k! l!)) e^{Gamma_0 n} a^{dag l} a^k
/// on the truncated space, built by operator composition.
Matrix kraus_operator(int k, int l, const ChannelParams& ch, int cutoff);

/// Kraus-map evolution, summed over shells k+l = s with early exit once a
/// shell's trace contribution drops below 1e-12. The result is rescaled to
/// unit trace. Throws convergence_error if max_shell shells do not converge.
FockDensity evolve_kraus(const FockDensity& rho, const ChannelParams& ch, int max_shell = 256);

/// Classical fourth-order fixed-step integration of the thermal-channel
/// master equation in kt. steps = 0 picks max(1000, 1000*kt) plus a
/// stability margin; the run is repeated at half the step and the two
/// results must agree to 1e-9 (convergence certificate).
FockDensity evolve_master(const FockDensity& rho, const ChannelParams& ch, long steps = 0);

/// Displaced-parity Wigner value (1/pi) Tr[rho D(alpha) P D(alpha)^dag],
/// normalized so that the double integral over (q, p) is 1.
double wigner_fock(const FockDensity& rho, PhasePoint pt);

/// As above with a precomputed displaced-parity operator.
double wigner_fock_cached(const FockDensity& rho, const Matrix& displaced_parity);

/// Displaced-parity operators D(alpha) P D(alpha)^dag for a batch of points,
/// built in parallel; reused across states sharing a grid and cutoff.
class DisplacedParityCache {
public:
    DisplacedParityCache(const GridSpec& spec, int cutoff);
    DisplacedParityCache(std::span<const PhasePoint> points, int cutoff);

    int cutoff() const { return cutoff_; }
    std::size_t size() const { return ops_.size(); }
    const Matrix& operator[](std::size_t index) const { return ops_[index]; }

private:
    void build(const std::vector<PhasePoint>& points);

    int cutoff_;
    std::vector<Matrix> ops_;
};

} // namespace pasv::fock

#endif
