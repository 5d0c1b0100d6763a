#ifndef PASV_VALIDATE_INTERNAL_HPP
#define PASV_VALIDATE_INTERNAL_HPP

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pasv/errors.hpp"
#include "pasv/fock_oracle.hpp"
#include "pasv/parallel.hpp"
#include "pasv/pasv_core.hpp"
#include "pasv/scan.hpp"
#include "pasv/validate.hpp"

// Helpers shared by the invariant suite and the acceptance criteria runner.

namespace pasv::validate_detail {

using cdouble = std::complex<double>;

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

class Checker {
public:
    explicit Checker(std::vector<CheckResult>& out) : out_(out) {}

    void run(const std::string& name, double tolerance,
             const std::function<void(CheckResult&)>& fn) {
        CheckResult r;
        r.name = name;
        r.tolerance = tolerance;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            r.passed = true;
            fn(r);
            if (r.measured > r.tolerance) r.passed = false;
        } catch (const std::exception& e) {
            r.passed = false;
            r.measured = std::numeric_limits<double>::infinity();
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out_.push_back(std::move(r));
    }

private:
    std::vector<CheckResult>& out_;
};

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline double rel_err(cdouble got, cdouble want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

/// Smallest power-of-two cutoff from 64 whose squeezed-vacuum tail passes
/// tail_tol. Oracle-grid comparisons need far less than the strict
/// norm-check tail bound, so they run at 1e-12.
inline int oracle_cutoff(double r, double tail_tol = 1e-12) {
    for (int c = 64; c <= 256; c *= 2) {
        try {
            (void)fock::squeezed_vacuum(r, c, tail_tol);
            return c;
        } catch (const cutoff_error&) {
        }
    }
    return 256;
}

struct OracleWorkspace {
    GridSpec oracle_grid = GridSpec::square(3.0, 21);
    std::map<int, fock::DisplacedParityCache> caches;

    const fock::DisplacedParityCache& cache(int cutoff) {
        auto it = caches.find(cutoff);
        if (it == caches.end())
            it = caches.emplace(cutoff, fock::DisplacedParityCache(oracle_grid, cutoff)).first;
        return it->second;
    }

    fock::FockVector state(double r, int m, int cutoff) const {
        return fock::add_photons(fock::squeezed_vacuum(r, cutoff, 1e-12), m, 1e-12).state;
    }

    WignerGrid oracle_wigner_grid(const fock::FockDensity& rho) {
        const auto& c = cache(rho.cutoff());
        WignerGrid grid{oracle_grid, std::vector<double>(c.size())};
        const long count = static_cast<long>(c.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static)
#endif
        for (long i = 0; i < count; ++i)
            grid.values[static_cast<std::size_t>(i)] =
                fock::wigner_fock_cached(rho, c[static_cast<std::size_t>(i)]);
        return grid;
    }
};

inline double grid_max_abs_diff(const WignerGrid& a, const WignerGrid& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

inline double grid_min(const WignerGrid& g) {
    double mn = g.values.front();
    for (const double v : g.values) mn = std::min(mn, v);
    return mn;
}

/// <q^2> and <p^2> of a pure state.
inline std::pair<double, double> quad_variances(const fock::FockVector& v) {
    const double n_mean = fock::mean_photon(v);
    cdouble a2{0.0, 0.0};
    for (std::size_t n = 0; n + 2 < v.amp.size(); ++n)
        a2 += std::conj(v.amp[n]) * v.amp[n + 2] *
              std::sqrt(static_cast<double>((n + 1) * (n + 2)));
    const double base = n_mean + 0.5;
    return {base + a2.real(), base - a2.real()};
}

/// Window wide enough that the state's mass outside it stays below ~1e-7,
/// sampled finely enough for the narrow quadrature.
inline GridSpec adaptive_window(double var_q, double var_p) {
    const double sigma = std::sqrt(std::max(var_q, var_p));
    const double w = std::ceil(2.0 * (5.2 * sigma + 2.0)) / 2.0;
    const double narrow = std::sqrt(std::min(var_q, var_p));
    int n = static_cast<int>(std::ceil(2.0 * w / std::min(0.05, narrow / 6.0))) + 1;
    n = std::clamp(n | 1, 401, 1001);
    return GridSpec::square(w, n);
}

inline GridSpec adaptive_window_for_state(const PasvParams& s) {
    const auto v =
        fock::add_photons(fock::squeezed_vacuum_auto(s.r, 64, 512, 1e-12), s.m, 1e-12).state;
    const auto [vq, vp] = quad_variances(v);
    return adaptive_window(vq, vp);
}

inline GridSpec adaptive_window_for_evolved(const PasvParams& s, const ChannelParams& ch) {
    const auto v =
        fock::add_photons(fock::squeezed_vacuum_auto(s.r, 64, 512, 1e-12), s.m, 1e-12).state;
    auto [vq, vp] = quad_variances(v);
    const double x2 = std::exp(-2.0 * ch.kt);
    const double tau = (2.0 * ch.nbar + 1.0) * -std::expm1(-2.0 * ch.kt);
    vq = x2 * vq + 0.5 * tau;
    vp = x2 * vp + 0.5 * tau;
    return adaptive_window(vq, vp);
}

/// Shifted Cholesky probe: true iff lambda_min(rho) >= -shift up to roundoff.
inline bool psd_within(const fock::Matrix& rho, double shift) {
    const int n = rho.dim();
    fock::Matrix a = rho;
    for (int i = 0; i < n; ++i) a(i, i) += shift;
    for (int j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(a(j, k));
        if (d < -1e-14) return false;
        d = std::sqrt(std::max(d, 0.0));
        a(j, j) = d;
        for (int i = j + 1; i < n; ++i) {
            cdouble v = a(i, j);
            for (int k = 0; k < j; ++k) v -= a(i, k) * std::conj(a(j, k));
            a(i, j) = (d > 0.0) ? v / d : cdouble{0.0, 0.0};
        }
    }
    return true;
}

} // namespace pasv::validate_detail

#endif
