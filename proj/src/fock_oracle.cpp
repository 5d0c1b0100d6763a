#include "pasv/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pasv/detail/numerics.hpp"
#include "pasv/errors.hpp"
#include "pasv/parallel.hpp"
#include "pasv/polymath.hpp"

namespace pasv::fock {

namespace {

double norm1(const Matrix& a) {
    const int n = a.dim();
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) col += std::abs(a(i, j));
        best = std::max(best, col);
    }
    return best;
}

int bandwidth(const Matrix& a) {
    const int n = a.dim();
    int bw = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (a(i, j) != cdouble{0.0, 0.0}) bw = std::max(bw, std::abs(i - j));
    return bw;
}

/// a * b touching only the bands |i-k| <= bwa, |k-j| <= bwb.
Matrix band_multiply(const Matrix& a, int bwa, const Matrix& b, int bwb) {
    const int n = a.dim();
    const int bwc = std::min(bwa + bwb, n - 1);
    Matrix c(n);
    for (int i = 0; i < n; ++i) {
        const int j_lo = std::max(0, i - bwc);
        const int j_hi = std::min(n - 1, i + bwc);
        for (int j = j_lo; j <= j_hi; ++j) {
            const int k_lo = std::max({0, i - bwa, j - bwb});
            const int k_hi = std::min({n - 1, i + bwa, j + bwb});
            cdouble acc{0.0, 0.0};
            for (int k = k_lo; k <= k_hi; ++k) acc += a(i, k) * b(k, j);
            c(i, j) = acc;
        }
    }
    return c;
}

} // namespace

Matrix Matrix::identity(int dim) {
    Matrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    return band_multiply(a, a.dim() - 1, b, b.dim() - 1);
}

Matrix adjoint(const Matrix& a) {
    const int n = a.dim();
    Matrix c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c(i, j) = std::conj(a(j, i));
    return c;
}

cdouble trace(const Matrix& a) {
    cdouble t{0.0, 0.0};
    for (int i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        d = std::max(d, std::abs(a.data()[k] - b.data()[k]));
    return d;
}

Matrix matrix_exponential(const Matrix& k) {
    const int n = k.dim();
    const int bw_k = bandwidth(k);
    const double nrm = norm1(k);

    int s = 0;
    double scaled = nrm;
    while (scaled > 1.0) {
        scaled *= 0.5;
        ++s;
    }
    const double scale = std::ldexp(1.0, -s);

    Matrix k_scaled = k;
    for (auto& v : k_scaled.data()) v *= scale;

    // Taylor sum to machine precision at ||K|| <= 1; terms keep a growing
    // bandwidth, so the early multiplications stay narrow.
    Matrix p = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    int term_bw = 0;
    constexpr int taylor_order = 24;
    for (int j = 1; j <= taylor_order; ++j) {
        term = band_multiply(term, term_bw, k_scaled, bw_k);
        term_bw = std::min(term_bw + bw_k, n - 1);
        const double inv = 1.0 / j;
        for (auto& v : term.data()) v *= inv;
        for (std::size_t idx = 0; idx < p.data().size(); ++idx)
            p.data()[idx] += term.data()[idx];
    }

    int p_bw = std::min(term_bw, n - 1);
    for (int i = 0; i < s; ++i) {
        p = band_multiply(p, p_bw, p, p_bw);
        p_bw = std::min(2 * p_bw, n - 1);
    }
    return p;
}

Matrix annihilation(int cutoff) {
    Matrix a(cutoff);
    for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

Matrix creation(int cutoff) { return adjoint(annihilation(cutoff)); }

Matrix parity(int cutoff) {
    Matrix p(cutoff);
    for (int n = 0; n < cutoff; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return p;
}

Matrix displacement(cdouble alpha, int cutoff) {
    Matrix k(cutoff);
    for (int n = 1; n < cutoff; ++n) {
        const double root = std::sqrt(static_cast<double>(n));
        k(n, n - 1) = alpha * root;
        k(n - 1, n) = -std::conj(alpha) * root;
    }
    return matrix_exponential(k);
}

double FockVector::norm_sq() const {
    long double acc = 0.0L;
    for (const cdouble& c : amp) acc += static_cast<long double>(std::norm(c));
    return static_cast<double>(acc);
}

double FockVector::tail_mass(int margin) const {
    const int n = cutoff();
    long double acc = 0.0L;
    for (int i = std::max(0, n - margin); i < n; ++i)
        acc += static_cast<long double>(std::norm(amp[static_cast<std::size_t>(i)]));
    return static_cast<double>(acc);
}

cdouble inner_product(const FockVector& a, const FockVector& b) {
    const std::size_t n = std::min(a.amp.size(), b.amp.size());
    cdouble acc{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(a.amp[i]) * b.amp[i];
    return acc;
}

double mean_photon(const FockVector& v) {
    long double acc = 0.0L;
    for (std::size_t n = 0; n < v.amp.size(); ++n)
        acc += static_cast<long double>(n) * std::norm(v.amp[n]);
    return static_cast<double>(acc);
}

double second_factorial_moment(const FockVector& v) {
    long double acc = 0.0L;
    for (std::size_t n = 0; n < v.amp.size(); ++n)
        acc += static_cast<long double>(n) * (static_cast<long double>(n) - 1.0L) *
               std::norm(v.amp[n]);
    return static_cast<double>(acc);
}

FockDensity pure_density(const FockVector& v) {
    const int n = v.cutoff();
    FockDensity d{Matrix(n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d.rho(i, j) = v.amp[i] * std::conj(v.amp[j]);
    return d;
}

double hermiticity_defect(const FockDensity& rho) {
    const int n = rho.cutoff();
    double d = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            d = std::max(d, std::abs(rho.rho(i, j) - std::conj(rho.rho(j, i))));
    return d;
}

FockVector squeezed_vacuum(double r, int cutoff, double tail_tol) {
    if (cutoff < 32)
        throw std::domain_error("squeezed_vacuum: cutoff must be at least 32");
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::domain_error("squeezed_vacuum: squeezing must be finite and >= 0");

    FockVector v{std::vector<cdouble>(static_cast<std::size_t>(cutoff))};
    const double th = std::tanh(r);
    double c = 1.0 / std::sqrt(std::cosh(r));
    for (int k = 0; 2 * k < cutoff; ++k) {
        v.amp[static_cast<std::size_t>(2 * k)] = c;
        c *= th * std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
    }
    const double tail = v.tail_mass();
    if (tail > tail_tol)
        throw cutoff_error("squeezed_vacuum: tail mass " + std::to_string(tail) +
                           " at cutoff " + std::to_string(cutoff) +
                           " exceeds tolerance; increase the cutoff");
    return v;
}

FockVector squeezed_vacuum_auto(double r, int min_cutoff, int max_cutoff, double tail_tol) {
    for (int c = min_cutoff; c <= max_cutoff; c *= 2) {
        try {
            return squeezed_vacuum(r, c, tail_tol);
        } catch (const cutoff_error&) {
            if (2 * c > max_cutoff) throw;
        }
    }
    throw cutoff_error("squeezed_vacuum_auto: no adequate cutoff up to " +
                       std::to_string(max_cutoff));
}

AddPhotonsResult add_photons(const FockVector& v, int m, double tail_tol) {
    if (m < 0) throw std::domain_error("add_photons: negative photon count");
    if (v.tail_mass(m + 8) > tail_tol)
        throw cutoff_error("add_photons: insufficient cutoff headroom for " +
                           std::to_string(m) + " photon additions");

    FockVector w = v;
    for (int step = 0; step < m; ++step) {
        for (int n = w.cutoff() - 1; n >= 1; --n)
            w.amp[static_cast<std::size_t>(n)] =
                std::sqrt(static_cast<double>(n)) * w.amp[static_cast<std::size_t>(n) - 1];
        w.amp[0] = 0.0;
    }
    const double norm_sq = w.norm_sq();
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& c : w.amp) c *= inv;
    return {std::move(w), norm_sq};
}

Matrix kraus_operator(int k, int l, const ChannelParams& ch, int cutoff) {
    if (k < 0 || l < 0) throw std::domain_error("kraus_operator: negative indices");
    if (!(ch.kt > 0.0)) throw std::domain_error("kraus_operator: requires kt > 0");

    const auto kc = kraus_coefficients(ch);
    double log_c = 0.5 * (ch.kt + kc.gamma_zero) - 0.5 * poly::log_factorial(k) -
                   0.5 * poly::log_factorial(l) - l * kc.gamma_zero;
    if (k > 0) log_c += 0.5 * k * std::log(kc.gamma_minus);
    if (l > 0) log_c += 0.5 * l * std::log(kc.gamma_plus);
    const double c = std::exp(log_c);

    Matrix a_pow = Matrix::identity(cutoff);
    const Matrix a = annihilation(cutoff);
    for (int i = 0; i < k; ++i) a_pow = multiply(a_pow, a);
    Matrix adag_pow = Matrix::identity(cutoff);
    const Matrix adag = creation(cutoff);
    for (int i = 0; i < l; ++i) adag_pow = multiply(adag_pow, adag);

    Matrix m = multiply(adag_pow, a_pow);
    for (int i = 0; i < cutoff; ++i) {
        const double damp = c * std::exp(kc.gamma_zero * i);
        for (int j = 0; j < cutoff; ++j) m(i, j) *= damp;
    }
    return m;
}

FockDensity evolve_kraus(const FockDensity& rho, const ChannelParams& ch, int max_shell) {
    const int n = rho.cutoff();
    const auto kc = kraus_coefficients(ch);
    const double log_gm = kc.gamma_minus > 0.0 ? std::log(kc.gamma_minus) : 0.0;
    const double log_gp = kc.gamma_plus > 0.0 ? std::log(kc.gamma_plus) : 0.0;

    FockDensity out{Matrix(n)};
    std::vector<double> u(static_cast<std::size_t>(n));
    bool converged = false;
    for (int s = 0; s <= max_shell; ++s) {
        double shell_trace = 0.0;
        for (int k = 0; k <= s; ++k) {
            const int l = s - k;
            if (k > 0 && kc.gamma_minus == 0.0) continue;
            if (l > 0 && kc.gamma_plus == 0.0) continue;

            // (M rho M^dag)_{ij} = u_i u_j rho_{i-l+k, j-l+k}; the Kraus
            // element magnitudes u are assembled in log space.
            const double log_c2 = ch.kt + kc.gamma_zero + (k > 0 ? k * log_gm : 0.0) +
                                  (l > 0 ? l * log_gp : 0.0) - 2.0 * l * kc.gamma_zero -
                                  poly::log_factorial(k) - poly::log_factorial(l);
            const int i_lo = l;
            const int i_hi = std::min(n - 1, n - 1 + l - k);
            if (i_lo > i_hi) continue;
            for (int i = i_lo; i <= i_hi; ++i) {
                const int src = i - l + k;
                u[static_cast<std::size_t>(i)] =
                    std::exp(0.5 * log_c2 + kc.gamma_zero * i +
                             0.5 * (poly::log_factorial(i) -
                                    2.0 * poly::log_factorial(i - l) +
                                    poly::log_factorial(src)));
            }
            for (int i = i_lo; i <= i_hi; ++i) {
                const int si = i - l + k;
                for (int j = i_lo; j <= i_hi; ++j)
                    out.rho(i, j) += u[static_cast<std::size_t>(i)] *
                                     u[static_cast<std::size_t>(j)] * rho.rho(si, j - l + k);
                shell_trace += u[static_cast<std::size_t>(i)] *
                               u[static_cast<std::size_t>(i)] * rho.rho(si, si).real();
            }
        }
        if (s > 0 && std::abs(shell_trace) < 1e-12) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw convergence_error("evolve_kraus: shell sum not converged within " +
                                std::to_string(max_shell) + " shells");

    const double tr = trace(out.rho).real();
    const double inv = 1.0 / tr;
    for (auto& v : out.rho.data()) v *= inv;
    return out;
}

namespace {

/// d rho / d(kt) of the thermal master equation, elementwise.
void master_rhs(const Matrix& rho, double nbar, const std::vector<double>& root,
                Matrix& out) {
    const int n = rho.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            cdouble acc = -((nbar + 1.0) * (i + j) + nbar * (i + j + 2.0)) * rho(i, j);
            if (i + 1 < n && j + 1 < n)
                acc += 2.0 * (nbar + 1.0) * root[static_cast<std::size_t>(i) + 1] *
                       root[static_cast<std::size_t>(j) + 1] * rho(i + 1, j + 1);
            if (i > 0 && j > 0)
                acc += 2.0 * nbar * root[static_cast<std::size_t>(i)] *
                       root[static_cast<std::size_t>(j)] * rho(i - 1, j - 1);
            out(i, j) = acc;
        }
}

Matrix rk4_run(const Matrix& rho0, double kt, double nbar, long steps) {
    const int n = rho0.dim();
    std::vector<double> root(static_cast<std::size_t>(n) + 1);
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = std::sqrt(static_cast<double>(i));

    const double h = kt / static_cast<double>(steps);
    Matrix rho = rho0;
    Matrix k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (long step = 0; step < steps; ++step) {
        master_rhs(rho, nbar, root, k1);
        for (std::size_t idx = 0; idx < tmp.data().size(); ++idx)
            tmp.data()[idx] = rho.data()[idx] + 0.5 * h * k1.data()[idx];
        master_rhs(tmp, nbar, root, k2);
        for (std::size_t idx = 0; idx < tmp.data().size(); ++idx)
            tmp.data()[idx] = rho.data()[idx] + 0.5 * h * k2.data()[idx];
        master_rhs(tmp, nbar, root, k3);
        for (std::size_t idx = 0; idx < tmp.data().size(); ++idx)
            tmp.data()[idx] = rho.data()[idx] + h * k3.data()[idx];
        master_rhs(tmp, nbar, root, k4);
        for (std::size_t idx = 0; idx < rho.data().size(); ++idx)
            rho.data()[idx] += h / 6.0 *
                               (k1.data()[idx] + 2.0 * k2.data()[idx] +
                                2.0 * k3.data()[idx] + k4.data()[idx]);
    }
    return rho;
}

} // namespace

FockDensity evolve_master(const FockDensity& rho, const ChannelParams& ch, long steps) {
    if (ch.kt == 0.0) return rho;
    const int n = rho.cutoff();
    const long stability = static_cast<long>(std::ceil(ch.kt * 4.0 * n * (ch.nbar + 1.0)));
    const long auto_steps =
        std::max({1000L, static_cast<long>(std::ceil(1000.0 * ch.kt)), stability});
    if (steps == 0)
        steps = auto_steps;
    else if (static_cast<double>(steps) < 1000.0 * ch.kt)
        throw std::domain_error("evolve_master: needs at least 1000 steps per unit kt");

    const Matrix coarse = rk4_run(rho.rho, ch.kt, ch.nbar, steps);
    const Matrix fine = rk4_run(rho.rho, ch.kt, ch.nbar, 2 * steps);
    const double diff = max_abs_diff(coarse, fine);
    if (diff > 1e-9)
        throw convergence_error("evolve_master: halving the step changes the result by " +
                                std::to_string(diff) + " (> 1e-9); increase steps");
    return {fine};
}

double wigner_fock_cached(const FockDensity& rho, const Matrix& displaced_parity) {
    // 1/pi, not 2/pi: with alpha = (q+ip)/sqrt(2) and dq dp normalization the
    // vacuum peak is 1/pi.
    const int n = rho.cutoff();
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            acc += (rho.rho(i, j) * displaced_parity(j, i)).real();
    return acc / std::numbers::pi;
}

namespace {

Matrix displaced_parity_op(cdouble alpha, int cutoff) {
    const Matrix d = displacement(alpha, cutoff);
    // D Pi is D with alternating column signs; one dense product finishes
    // D Pi D^dag.
    Matrix dp = d;
    for (int i = 0; i < cutoff; ++i)
        for (int j = 1; j < cutoff; j += 2) dp(i, j) = -dp(i, j);
    return multiply(dp, adjoint(d));
}

} // namespace

double wigner_fock(const FockDensity& rho, PhasePoint pt) {
    if (!std::isfinite(pt.q) || !std::isfinite(pt.p))
        throw std::domain_error("wigner_fock: nonfinite phase-space point");
    const double tr = trace(rho.rho).real();
    if (std::abs(tr - 1.0) > 1e-8)
        throw std::invalid_argument("wigner_fock: density matrix is not trace-normalized");
    const auto bp_alpha = PhasePoint{pt.q, pt.p}.alpha();
    return wigner_fock_cached(rho, displaced_parity_op(bp_alpha, rho.cutoff()));
}

DisplacedParityCache::DisplacedParityCache(const GridSpec& spec, int cutoff)
    : cutoff_(cutoff) {
    spec.validate();
    std::vector<PhasePoint> points;
    points.reserve(static_cast<std::size_t>(spec.nq) * spec.np);
    for (int i = 0; i < spec.nq; ++i)
        for (int j = 0; j < spec.np; ++j) points.push_back({spec.q(i), spec.p(j)});
    build(points);
}

DisplacedParityCache::DisplacedParityCache(std::span<const PhasePoint> points, int cutoff)
    : cutoff_(cutoff) {
    build(std::vector<PhasePoint>(points.begin(), points.end()));
}

void DisplacedParityCache::build(const std::vector<PhasePoint>& points) {
    ops_.resize(points.size());
    const auto count = static_cast<long>(points.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic)
#endif
    for (long idx = 0; idx < count; ++idx)
        ops_[static_cast<std::size_t>(idx)] =
            displaced_parity_op(points[static_cast<std::size_t>(idx)].alpha(), cutoff_);
}

} // namespace pasv::fock
