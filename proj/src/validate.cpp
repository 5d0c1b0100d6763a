#include "pasv/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <random>

#include "pasv/detail/numerics.hpp"
#include "pasv/errors.hpp"
#include "pasv/fock_oracle.hpp"
#include "pasv/oracles.hpp"
#include "pasv/pasv_core.hpp"
#include "pasv/polymath.hpp"
#include "pasv/scan.hpp"
#include "pasv/thermal_channel.hpp"
#include "validate_internal.hpp"

namespace pasv {

namespace {

using namespace validate_detail;
using poly::PolyDegree;

// ---------------------------------------------------------------------------
// polymath invariants

void check_polymath(Checker& check, const ValidateOptions& opt) {
    check.run("polymath/hermite-recurrence-vs-explicit-sum", 1e-10, [&](CheckResult& r) {
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> u(-5.0, 5.0);
        const int samples = opt.quick ? 25 : 100;
        for (int trial = 0; trial < samples; ++trial) {
            cdouble z{u(rng), u(rng)};
            while (std::abs(z) > 5.0) z = {u(rng), u(rng)};
            for (int n = 0; n <= 15; ++n) {
                const cdouble got = poly::hermite(PolyDegree{n}, z);
                const cdouble want = oracle::hermite_explicit_sum(n, z);
                r.measured = std::max(r.measured, rel_err(got, want));
            }
        }
        r.detail = "n <= 15, " + std::to_string(samples) + " random z in |z| <= 5";
    });

    check.run("polymath/hermite-derivative-relation", 1e-6, [&](CheckResult& r) {
        // central differences carried in long double so the second-difference
        // cancellation stays below the tolerance
        const auto hermite_ld = [](int m, long double x) {
            long double prev = 1.0L, cur = 2.0L * x;
            if (m == 0) return prev;
            for (int k = 1; k < m; ++k) {
                const long double next = 2.0L * x * cur - 2.0L * k * prev;
                prev = cur;
                cur = next;
            }
            return cur;
        };
        const long double h = 1e-4L;
        for (int m = 1; m <= 10; ++m)
            for (int l = 1; l <= std::min(2, m); ++l)
                for (const double x : {0.35, 1.1, 2.3}) {
                    long double fd;
                    if (l == 1)
                        fd = (hermite_ld(m, x + h) - hermite_ld(m, x - h)) / (2.0L * h);
                    else
                        fd = (hermite_ld(m, x + h) - 2.0L * hermite_ld(m, x) +
                              hermite_ld(m, x - h)) /
                             (h * h);
                    const double exact =
                        std::exp(poly::log_factorial(m) - poly::log_factorial(m - l)) *
                        std::pow(2.0, l) *
                        poly::hermite(PolyDegree{m - l}, {x, 0.0}).real();
                    r.measured = std::max(r.measured, rel_err(static_cast<double>(fd), exact));
                }
        r.detail = "l = 1,2 central differences, m <= 10";
    });

    check.run("polymath/legendre-product-form-identity", opt.tol_identity,
              [&](CheckResult& r) {
        for (int n = 0; n <= 10; ++n)
            for (const double x : {1.0, 1.1, 1.5, 2.0, 5.0, 10.0}) {
                const double a = poly::legendre_product_form(PolyDegree{n}, x);
                const double b = poly::legendre(PolyDegree{n}, x);
                r.measured = std::max(r.measured, rel_err(a, b));
            }
        r.detail = "n <= 10, x in {1, 1.1, 1.5, 2, 5, 10}";
    });

    check.run("polymath/generating-function-identity", 1e-9, [&](CheckResult& r) {
        for (int m = 0; m <= (opt.quick ? 4 : 8); ++m)
            for (const double rr : {0.1, 0.5, 1.0, 2.0}) {
                const double x = std::cosh(rr);
                const double s2 = x * x - 1.0;
                const double got =
                    poly::generating_derivative(PolyDegree{m}, x / std::sqrt(s2));
                const double want =
                    std::exp(m * std::numbers::ln2 + poly::log_factorial(m) -
                             0.5 * m * std::log(s2)) *
                    poly::legendre(PolyDegree{m}, x);
                r.measured = std::max(r.measured, rel_err(got, want));
            }
        r.detail = "cross derivative vs 2^m m! (x^2-1)^{-m/2} P_m(x)";
    });

    check.run("polymath/hermite-parity-origin", 0.0, [&](CheckResult& r) {
        for (int m = 0; m <= 16; ++m) {
            const double got = poly::hermite(PolyDegree{m}, {0.0, 0.0}).real();
            double want = 0.0;
            if (m % 2 == 0) {
                const int j = m / 2;
                want = ((j % 2 == 0) ? 1.0 : -1.0) *
                       std::round(std::exp(poly::log_factorial(m) - poly::log_factorial(j)));
            }
            r.measured = std::max(r.measured, std::abs(got - want));
        }
        r.detail = "H_m(0) = (-1)^{m/2} m!/(m/2)! for even m, else 0 (exact)";
    });

    check.run("polymath/gaussian-derivative-identity", 1e-10, [&](CheckResult& r) {
        const cdouble es[] = {{0.3, 0.0}, {1.0, 1.0}, {-0.7, 0.2}};
        for (int m = 0; m <= 6; ++m)
            for (const double g : {0.5, 1.0, 2.0})
                for (const cdouble& e : es) {
                    const cdouble got = poly::gaussian_double_derivative(PolyDegree{m}, g, e);
                    const cdouble want = std::pow(g, 0.5 * m) *
                                         poly::hermite(PolyDegree{m}, e / std::sqrt(g));
                    r.measured = std::max(r.measured, rel_err(got, want));
                }
        r.detail = "series derivative vs g^{m/2} H_m(e/sqrt g), m <= 6";
    });
}

// ---------------------------------------------------------------------------
// pasv_core invariants

void check_pasv_core(Checker& check, const ValidateOptions& opt, OracleWorkspace& ws) {
    const std::vector<double> r_window = opt.quick ? std::vector<double>{0.0, 0.3}
                                                   : std::vector<double>{0.0, 0.3, 0.8, 1.2};
    const int m_max = opt.quick ? 2 : 4;

    check.run("pasv_core/normalization-fixed-window", opt.tol_quadrature,
              [&](CheckResult& r) {
        const GridSpec window = GridSpec::square(6.0, 401);
        int fails = 0;
        for (int m = 0; m <= m_max; ++m)
            for (const double rr : r_window) {
                const PasvParams s{rr, m};
                const double integral = integrate(evaluate_grid(
                    [&](double q, double p) { return wigner(s, {q, p}); }, window));
                const double dev = std::abs(integral - 1.0);
                if (dev > r.tolerance) ++fails;
                r.measured = std::max(r.measured, dev);
            }
        r.detail = "fixed [-6,6]^2/401^2 window; " + std::to_string(fails) +
                   " states lose mass past the window edge";
    });

    check.run("pasv_core/normalization-adaptive-window", opt.tol_quadrature,
              [&](CheckResult& r) {
        for (int m = 0; m <= m_max; ++m)
            for (const double rr : r_window) {
                const PasvParams s{rr, m};
                const GridSpec window = adaptive_window_for_state(s);
                const double integral = integrate(evaluate_grid(
                    [&](double q, double p) { return wigner(s, {q, p}); }, window));
                r.measured = std::max(r.measured, std::abs(integral - 1.0));
            }
        r.detail = "windows sized from the state's quadrature variances";
    });

    check.run("pasv_core/wigner-sum-realness", 1e-12, [&](CheckResult& r) {
        const PhasePoint pts[] = {{0.0, 0.0}, {0.7, -0.4}, {1.5, 1.1}};
        for (int m = 1; m <= m_max; ++m)
            for (const double rr : {0.3, 0.8})
                for (const PhasePoint& pt : pts) {
                    // Complex-route evaluation: H at beta_bar and at its
                    // conjugate computed independently, term products kept
                    // complex all the way down.
                    const PasvParams s{rr, m};
                    const auto bp = beta_pair(s, pt);
                    const cdouble bb = bp.beta_bar;
                    const cdouble bb_conj = cdouble{0.0, 1.0} * std::conj(bp.beta) *
                                            std::sqrt(2.0 / std::tanh(rr));
                    const double coth = 1.0 / std::tanh(rr);
                    cdouble sum{0.0, 0.0};
                    for (int l = 0; l <= m; ++l) {
                        const double coeff =
                            std::exp(poly::log_factorial(m) + l * std::log(2.0 * coth) -
                                     poly::log_factorial(l) -
                                     2.0 * poly::log_factorial(m - l)) *
                            ((l % 2 == 0) ? 1.0 : -1.0);
                        // |H(bb)|^2 = H(bb) H(conj bb) for real-coefficient H
                        sum += coeff * poly::hermite(PolyDegree{m - l}, bb) *
                               poly::hermite(PolyDegree{m - l}, bb_conj);
                    }
                    const double pref =
                        std::exp(-2.0 * std::norm(bp.beta)) * std::pow(std::sinh(rr), m) /
                        (std::pow(2.0, m) * poly::legendre(PolyDegree{m}, std::cosh(rr)) *
                         std::numbers::pi);
                    const cdouble w_complex = pref * sum;
                    r.measured = std::max(r.measured, std::abs(w_complex.imag()));
                    r.measured =
                        std::max(r.measured, std::abs(w_complex.real() - wigner(s, pt)));
                }
        r.detail = "imaginary residue of the complex-route sum";
    });

    check.run("pasv_core/wigner-vs-oracle", opt.tol_wigner, [&](CheckResult& r) {
        const std::vector<double> rs =
            opt.quick ? std::vector<double>{0.3} : std::vector<double>{0.1, 0.3, 0.8, 1.0};
        const int mm = opt.quick ? 2 : 3;
        for (int m = 0; m <= mm; ++m)
            for (const double rr : rs) {
                // grid-edge displaced-parity values feel the state tail, so
                // the Wigner equality needs a tighter tail bound than the
                // moment checks (r = 1.0 escalates to 256 here)
                const int cutoff = oracle_cutoff(rr, 1e-18);
                const auto rho = fock::pure_density(ws.state(rr, m, cutoff));
                const WignerGrid oracle_grid = ws.oracle_wigner_grid(rho);
                const PasvParams s{rr, m};
                const WignerGrid closed = evaluate_grid(
                    [&](double q, double p) { return wigner(s, {q, p}); }, ws.oracle_grid);
                r.measured = std::max(r.measured, grid_max_abs_diff(closed, oracle_grid));
            }
        r.detail = "21x21 grid on [-3,3]^2 vs displaced-parity oracle";
    });

    check.run("pasv_core/consecutive-norm-identity", 1e-12, [&](CheckResult& r) {
        for (int m = 0; m <= 6; ++m)
            for (const double rr : {0.0, 0.25, 0.5, 1.0, 1.5}) {
                const double ratio = norm_factor_sq_inv(PasvParams{rr, m + 1}) /
                                     norm_factor_sq_inv(PasvParams{rr, m});
                const double want = mean_photon(PasvParams{rr, m}) + 1.0;
                r.measured = std::max(r.measured, rel_err(ratio, want));
            }
        r.detail = "N^{-2}_{m+1}/N^{-2}_m = <n>_m + 1";
    });

    check.run("pasv_core/negativity-existence", 0.0, [&](CheckResult& r) {
        const GridSpec window = GridSpec::square(4.0, 201);
        double worst_min = -std::numeric_limits<double>::infinity();
        for (int m = 1; m <= m_max; ++m)
            for (const double rr : {0.1, 0.3, 0.8, 1.5}) {
                const PasvParams s{rr, m};
                const double mn = grid_min(evaluate_grid(
                    [&](double q, double p) { return wigner(s, {q, p}); }, window));
                worst_min = std::max(worst_min, mn);
            }
        r.measured = worst_min;
        r.passed = worst_min < 0.0;
        r.detail = "grid minimum must be negative for every m >= 1 (worst shown)";
    });

    check.run("pasv_core/squeezed-vacuum-closed-form", 1e-12, [&](CheckResult& r) {
        const GridSpec window = GridSpec::square(4.0, 81);
        for (const double rr : {0.0, 0.3, 0.8, 1.5}) {
            const PasvParams s{rr, 0};
            for (int i = 0; i < window.nq; ++i)
                for (int j = 0; j < window.np; ++j) {
                    const double got = wigner(s, {window.q(i), window.p(j)});
                    const double want =
                        oracle::wigner_m0_closed(rr, window.q(i), window.p(j));
                    r.measured = std::max(r.measured, std::abs(got - want));
                }
        }
        r.detail = "m = 0 equals the squeezed-vacuum Gaussian";
    });

    check.run("pasv_core/mandel-q-sign-change", 1e-8, [&](CheckResult& r) {
        const double root1 = q_sign_change(1, {0.3, 0.6});
        const double algebraic = 0.5 * std::acosh((3.0 + std::sqrt(33.0)) / 6.0);
        r.measured = std::abs(root1 - algebraic);
        if (root1 < 0.45 || root1 > 0.47) r.passed = false;
        double prev = root1;
        for (int m = 2; m <= 4; ++m) {
            const double root = q_sign_change(m, {0.1, 1.5});
            if (root <= prev) r.passed = false;
            prev = root;
        }
        r.detail = "m=1 root " + fmt(root1) +
                   " vs algebraic root of 3c^2-3c-2=0; roots increase with m";
    });
}

// ---------------------------------------------------------------------------
// thermal_channel invariants

void check_thermal(Checker& check, const ValidateOptions& opt, OracleWorkspace& ws) {
    const int m_max = opt.quick ? 2 : 3;

    check.run("thermal/t0-limit-convergence", 1e-3, [&](CheckResult& r) {
        for (int m = 0; m <= m_max; ++m) {
            const PasvParams s{0.3, m};
            const WignerGrid ideal = evaluate_grid(
                [&](double q, double p) { return wigner(s, {q, p}); }, ws.oracle_grid);
            double prev = std::numeric_limits<double>::infinity();
            for (const double kt : {1e-4, 1e-5}) {
                const EvolvedWigner w{s, ChannelParams{kt, 1.0}};
                const double dev = grid_max_abs_diff(evaluate_grid(w, ws.oracle_grid), ideal);
                if (dev >= prev) r.passed = false;
                prev = dev;
            }
            r.measured = std::max(r.measured, prev);
        }
        r.detail = "deviation decreases kt = 1e-4 -> 1e-5 and ends below 1e-3";
    });

    check.run("thermal/tinf-thermal-state", 1e-10, [&](CheckResult& r) {
        for (int m = 0; m <= m_max; ++m)
            for (const double rr : {0.3, 0.8})
                for (const double nbar : {0.0, 1.0, 2.0}) {
                    const EvolvedWigner w{PasvParams{rr, m}, ChannelParams{20.0, nbar}};
                    for (int i = 0; i < ws.oracle_grid.nq; ++i)
                        for (int j = 0; j < ws.oracle_grid.np; ++j) {
                            const double q = ws.oracle_grid.q(i);
                            const double p = ws.oracle_grid.p(j);
                            r.measured = std::max(
                                r.measured,
                                std::abs(w(q, p) - oracle::wigner_thermal(nbar, q, p)));
                        }
                }
        r.detail = "kt = 20 matches the thermal Gaussian for every m <= " +
                   std::to_string(m_max);
    });

    check.run("thermal/normalization-fixed-window", opt.tol_quadrature,
              [&](CheckResult& r) {
        const GridSpec window = GridSpec::square(6.0, 401);
        int fails = 0;
        const auto probe = [&](const PasvParams& s, const ChannelParams& ch) {
            const EvolvedWigner w{s, ch};
            const double dev = std::abs(integrate(evaluate_grid(w, window)) - 1.0);
            if (dev > r.tolerance) ++fails;
            r.measured = std::max(r.measured, dev);
        };
        for (const double kt : {0.05, 0.2, 0.5})
            for (const double nbar : {0.0, 1.0, 2.0})
                probe(PasvParams{0.3, 1}, ChannelParams{kt, nbar});
        if (!opt.quick) probe(PasvParams{0.7, 2}, ChannelParams{0.1, 1.0});
        r.detail = "fixed [-6,6]^2/401^2 window; " + std::to_string(fails) +
                   " evolved states lose mass past the window edge";
    });

    check.run("thermal/normalization-adaptive-window", opt.tol_quadrature,
              [&](CheckResult& r) {
        const auto probe = [&](const PasvParams& s, const ChannelParams& ch) {
            const GridSpec window = adaptive_window_for_evolved(s, ch);
            const EvolvedWigner w{s, ch};
            r.measured =
                std::max(r.measured, std::abs(integrate(evaluate_grid(w, window)) - 1.0));
        };
        for (const double kt : {0.05, 0.2, 0.5})
            for (const double nbar : {0.0, 1.0, 2.0})
                probe(PasvParams{0.3, 1}, ChannelParams{kt, nbar});
        if (!opt.quick) probe(PasvParams{0.7, 2}, ChannelParams{0.1, 1.0});
        r.detail = "same states, windows sized from evolved variances";
    });

    check.run("thermal/convolution-identity", 1e-4, [&](CheckResult& r) {
        const GridSpec in_window = GridSpec::square(8.0, 321);
        for (const int m : {0, 1})
            for (const double kt : {0.05, 0.2})
                for (const double nbar : {0.0, 1.0}) {
                    const PasvParams s{0.3, m};
                    const ChannelParams ch{kt, nbar};
                    const WignerGrid initial = evaluate_grid(
                        [&](double q, double p) { return wigner(s, {q, p}); }, in_window);
                    const WignerGrid convolved = convolve_thermal(initial, ch, ws.oracle_grid);
                    const WignerGrid closed =
                        evaluate_grid(EvolvedWigner{s, ch}, ws.oracle_grid);
                    r.measured = std::max(r.measured, grid_max_abs_diff(convolved, closed));
                }
        r.detail = "quadrature of the Gaussian evolution kernel vs closed form";
    });

    check.run("thermal/negativity-decay", 0.0, [&](CheckResult& r) {
        const GridSpec window = GridSpec::square(4.0, 201);
        const PasvParams s{0.3, 1};
        double prev = -std::numeric_limits<double>::infinity();
        double worst_step = -std::numeric_limits<double>::infinity();
        for (const double kt : {0.05, 0.1, 0.2, 0.5}) {
            const double mn = grid_min(evaluate_grid(EvolvedWigner{s, {kt, 1.0}}, window));
            worst_step = std::max(worst_step, prev - mn);
            prev = mn;
        }
        r.measured = worst_step;
        r.passed = worst_step < 0.0;
        r.detail = "grid minimum strictly increases across kt = 0.05..0.5";
    });

    check.run("thermal/threshold-sign-structure", 0.0, [&](CheckResult& r) {
        bool ok = true;
        for (const double rr : {0.3, 0.8})
            for (const double nbar : {0.0, 1.0}) {
                const PasvParams s{rr, 1};
                const double ktc = threshold_time_m1(nbar);
                const double below =
                    wigner_evolved(s, ChannelParams{ktc - 1e-3, nbar}, {0.0, 0.0});
                const double above =
                    wigner_evolved(s, ChannelParams{ktc + 1e-3, nbar}, {0.0, 0.0});
                ok = ok && below < 0.0 && above > 0.0;
                r.measured = std::max(r.measured, below);
            }
        r.passed = ok;
        r.detail = "W(origin) changes sign across kt_c for m = 1";
    });

    check.run("thermal/m1-closed-form-consistency", 1e-12, [&](CheckResult& r) {
        const PhasePoint pts[] = {{0.0, 0.0}, {0.5, -0.3}, {1.4, 0.9}, {-2.0, 1.3}};
        for (const double rr : {0.3, 0.8})
            for (const double kt : {0.05, 0.2, 0.7})
                for (const double nbar : {0.0, 1.0, 2.0})
                    for (const PhasePoint& pt : pts) {
                        const PasvParams s{rr, 1};
                        const ChannelParams ch{kt, nbar};
                        const double a = wigner_evolved(s, ch, pt);
                        const double b = wigner_evolved_m1(s, ch, pt);
                        r.measured = std::max(
                            r.measured,
                            std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30}));
                    }
        r.detail = "general sum vs the dedicated m = 1 formula";
    });

    check.run("thermal/coefficient-limits", 1.0, [&](CheckResult& r) {
        for (const double rr : {0.3, 1.0}) {
            const PasvParams s{rr, 1};
            const auto c = evolution_coefficients(s, ChannelParams{20.0, 1.0}, {0.8, -0.6});
            r.measured = std::max(r.measured, std::abs(c.B) / 1e-8);
            r.measured = std::max(r.measured, std::abs(c.C - 4.0) / 1e-10);
            r.measured = std::max(r.measured, std::abs(c.G - 1.0) / 1e-10);
            r.measured = std::max(r.measured, rel_err(c.F, 4.0 / std::tanh(rr)) / 1e-12);
            for (const double kt : {0.01, 0.1, 0.3, 0.7, 1.5}) {
                const auto cc =
                    evolution_coefficients(s, ChannelParams{kt, 1.0}, {0.8, -0.6});
                if (!(cc.C > 0.0) || cc.G < -1e-12 || cc.G > 1.0) r.passed = false;
            }
        }
        r.detail = "kt = 20: |B| <= 1e-8 (carries e^{-kt}), C -> 4 and G -> 1 to 1e-10, "
                   "F -> 4 coth r to 1e-12; C > 0, G in [0,1] (worst ratio to bound)";
    });
}

// ---------------------------------------------------------------------------
// fock_oracle invariants

void check_fock(Checker& check, const ValidateOptions& opt) {
    check.run("fock_oracle/channel-duality", 1e-8, [&](CheckResult& r) {
        std::mt19937 rng(7);
        std::uniform_int_distribution<int> m_dist(0, 3);
        std::uniform_real_distribution<double> r_dist(0.05, opt.quick ? 0.5 : 1.0);
        std::uniform_real_distribution<double> kt_dist(0.02, 0.5);
        std::uniform_real_distribution<double> nbar_dist(0.0, 2.0);
        const int tuples = opt.quick ? 3 : 10;
        for (int t = 0; t < tuples; ++t) {
            const int m = m_dist(rng);
            const double rr = r_dist(rng);
            const ChannelParams ch{kt_dist(rng), nbar_dist(rng)};
            const int cutoff = oracle_cutoff(rr);
            const auto rho = fock::pure_density(
                fock::add_photons(fock::squeezed_vacuum(rr, cutoff, 1e-12), m, 1e-12).state);
            const auto via_kraus = fock::evolve_kraus(rho, ch);
            const auto via_master = fock::evolve_master(rho, ch);
            r.measured =
                std::max(r.measured, fock::max_abs_diff(via_kraus.rho, via_master.rho));
        }
        r.detail = std::to_string(tuples) + " random (m, r, kt, nbar) tuples";
    });

    check.run("fock_oracle/state-integrity", 1.0, [&](CheckResult& r) {
        const auto rho0 = fock::pure_density(
            fock::add_photons(fock::squeezed_vacuum(0.5, 64, 1e-12), 2, 1e-12).state);
        const ChannelParams ch{0.2, 1.0};
        for (const auto& evolved : {fock::evolve_kraus(rho0, ch),
                                    fock::evolve_master(rho0, ch)}) {
            const double trace_defect = std::abs(fock::trace(evolved.rho).real() - 1.0);
            const double herm = fock::hermiticity_defect(evolved);
            r.measured = std::max(r.measured, trace_defect / 1e-10);
            r.measured = std::max(r.measured, herm / 1e-12);
            if (!psd_within(evolved.rho, 1e-10)) r.passed = false;
        }
        r.detail = "trace drift <= 1e-10, hermiticity <= 1e-12, lambda_min >= -1e-10 "
                   "(worst ratio to its bound)";
    });

    check.run("fock_oracle/displacement-unitarity", 1e-10, [&](CheckResult& r) {
        const cdouble alphas[] = {
            {4.0, 0.0}, {0.0, 4.0}, {2.8, 2.8}, {1.0, 1.0}, {-2.0, 3.0}};
        for (const cdouble& alpha : alphas) {
            const auto d = fock::displacement(alpha, 64);
            const auto prod = fock::multiply(d, fock::adjoint(d));
            for (int i = 0; i < 32; ++i)
                for (int j = 0; j < 32; ++j) {
                    const cdouble want = (i == j) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
                    r.measured = std::max(r.measured, std::abs(prod(i, j) - want));
                }
        }
        r.detail = "D D^dag = 1 on the lower half space, |alpha| <= 4, cutoff 64";
    });

    check.run("fock_oracle/parity-relation-origin", 1e-15, [&](CheckResult& r) {
        fock::FockDensity rho{fock::Matrix(48)};
        double norm = 0.0;
        for (int n = 0; n < 48; ++n) norm += std::pow(0.6, n);
        for (int n = 0; n < 48; ++n) rho.rho(n, n) = std::pow(0.6, n) / norm;
        double alt = 0.0;
        for (int n = 0; n < 48; ++n)
            alt += ((n % 2 == 0) ? 1.0 : -1.0) * rho.rho(n, n).real();
        const double got = fock::wigner_fock(rho, {0.0, 0.0});
        r.measured = std::abs(got - alt / std::numbers::pi);
        r.detail = "Fock-diagonal state at origin equals (1/pi) sum (-1)^n rho_nn";
    });

    check.run("fock_oracle/kraus-completeness", 1e-8, [&](CheckResult& r) {
        // Each M_{k,l} has a single band at offset l - k, so M^dag M is
        // diagonal: accumulate |M_{n-k+l, n}|^2 directly.
        const int cutoff = 64;
        for (const double kt : {0.1, 0.3})
            for (const double nbar : {0.0, 1.0}) {
                const ChannelParams ch{kt, nbar};
                double prev_defect = std::numeric_limits<double>::infinity();
                for (const int k_max : {16, 32, 48}) {
                    std::vector<double> diag(cutoff, 0.0);
                    for (int k = 0; k <= k_max; ++k)
                        for (int l = 0; l <= k_max - k; ++l) {
                            const auto mk = fock::kraus_operator(k, l, ch, cutoff);
                            for (int n = 0; n < cutoff; ++n) {
                                const int i = n - k + l;
                                if (i >= 0 && i < cutoff)
                                    diag[static_cast<std::size_t>(n)] += std::norm(mk(i, n));
                            }
                        }
                    const int block = std::max(8, cutoff - k_max - 8);
                    double defect = 0.0;
                    for (int n = 0; n < block; ++n)
                        defect = std::max(defect, std::abs(diag[static_cast<std::size_t>(n)] - 1.0));
                    if (defect > prev_defect + 1e-12) r.passed = false;
                    prev_defect = defect;
                }
                r.measured = std::max(r.measured, prev_defect);
            }
        r.detail = "sum M^dag M -> 1 on the lower (N - K - 8) block as the shell "
                   "count K grows";
    });

    check.run("fock_oracle/cutoff-robustness", 1e-10, [&](CheckResult& r) {
        for (const double rr : {0.1, 0.3})
            for (int m = 0; m <= 3; ++m) {
                const auto a = fock::add_photons(fock::squeezed_vacuum(rr, 64, 1e-6), m, 1e-6);
                const auto b = fock::add_photons(fock::squeezed_vacuum(rr, 128, 1e-6), m, 1e-6);
                r.measured = std::max(r.measured, rel_err(a.norm_sq, b.norm_sq));
                r.measured = std::max(r.measured, rel_err(fock::mean_photon(a.state),
                                                          fock::mean_photon(b.state)));
                const PhasePoint pts[] = {{0.0, 0.0}, {1.0, 0.5}, {-0.8, 1.2}};
                const auto rho_a = fock::pure_density(a.state);
                const auto rho_b = fock::pure_density(b.state);
                for (const PhasePoint& pt : pts)
                    r.measured = std::max(r.measured,
                                          std::abs(fock::wigner_fock(rho_a, pt) -
                                                   fock::wigner_fock(rho_b, pt)));
            }
        if (!opt.quick)
            for (const double rr : {0.7, 1.0})
                for (int m = 0; m <= 3; ++m) {
                    const auto a = fock::add_photons(fock::squeezed_vacuum(rr, 128, 1e-6), m, 1e-6);
                    const auto b = fock::add_photons(fock::squeezed_vacuum(rr, 256, 1e-6), m, 1e-6);
                    r.measured = std::max(r.measured, rel_err(a.norm_sq, b.norm_sq));
                    r.measured = std::max(r.measured, rel_err(fock::mean_photon(a.state),
                                                              fock::mean_photon(b.state)));
                }
        r.detail = "doubling the cutoff leaves oracle numbers unchanged";
    });
}

// ---------------------------------------------------------------------------
// scan invariants

void check_scan(Checker& check, const ValidateOptions&) {
    check.run("scan/quadrature-convergence", 1e-7, [&](CheckResult& r) {
        const PasvParams s{0.3, 1};
        const auto f = [&](double q, double p) { return wigner(s, {q, p}); };
        const double coarse = integrate(evaluate_grid(f, GridSpec::square(6.0, 201)));
        const double fine = integrate(evaluate_grid(f, GridSpec::square(6.0, 401)));
        r.measured = std::abs(fine - coarse);
        r.detail = "halving the spacing moves the integral by < 1e-7";
    });

    check.run("scan/parallel-determinism", 0.0, [&](CheckResult& r) {
        const PasvParams s{0.3, 2};
        const auto f = [&](double q, double p) { return wigner(s, {q, p}); };
        const GridSpec window = GridSpec::square(4.0, 101);
        const GridSpec padded = GridSpec::square(7.0, 141);
        const WignerGrid conv_in = evaluate_grid_serial(f, padded);
        const char* saved = std::getenv("PASV_WORKERS");
        const std::string saved_copy = saved ? saved : "";
        setenv("PASV_WORKERS", "1", 1);
        const WignerGrid one = evaluate_grid(f, window);
        const WignerGrid conv_one =
            convolve_thermal(conv_in, ChannelParams{0.2, 1.0}, GridSpec::square(2.0, 11));
        setenv("PASV_WORKERS", "3", 1);
        const WignerGrid many = evaluate_grid(f, window);
        const WignerGrid conv_many =
            convolve_thermal(conv_in, ChannelParams{0.2, 1.0}, GridSpec::square(2.0, 11));
        if (saved)
            setenv("PASV_WORKERS", saved_copy.c_str(), 1);
        else
            unsetenv("PASV_WORKERS");
        for (std::size_t i = 0; i < one.values.size(); ++i)
            r.measured = std::max(r.measured, std::abs(one.values[i] - many.values[i]));
        for (std::size_t i = 0; i < conv_one.values.size(); ++i)
            r.measured =
                std::max(r.measured, std::abs(conv_one.values[i] - conv_many.values[i]));
        r.detail = "1 worker vs 3 workers, bit-exact (grid evaluation and convolution)";
    });

    check.run("scan/convolution-vs-direct", 1e-12, [&](CheckResult& r) {
        const PasvParams s{0.3, 1};
        const WignerGrid initial =
            evaluate_grid([&](double q, double p) { return wigner(s, {q, p}); },
                          GridSpec::square(7.0, 141));
        const ChannelParams ch{0.1, 1.0};
        const GridSpec out = GridSpec::square(2.0, 9);
        r.measured = grid_max_abs_diff(convolve_thermal(initial, ch, out),
                                       convolve_thermal_direct(initial, ch, out));
        r.detail = "separable kernel vs naive double-loop reference";
    });

    check.run("scan/export-round-trip", 0.0, [&](CheckResult& r) {
        const PasvParams s{0.3, 1};
        const WignerGrid grid =
            evaluate_grid([&](double q, double p) { return wigner(s, {q, p}); },
                          GridSpec::square(3.0, 21));
        const auto dir = std::filesystem::temp_directory_path();
        const auto csv = dir / "pasv_validate_roundtrip.csv";
        const auto json = dir / "pasv_validate_roundtrip.json";
        export_grid(grid, ExportFormat::csv, csv);
        export_grid(grid, ExportFormat::json, json, {{"r", 0.3}, {"m", 1}});
        const WignerGrid from_csv = import_grid_csv(csv);
        const WignerGrid from_json = import_grid_json(json);
        for (std::size_t i = 0; i < grid.values.size(); ++i) {
            r.measured = std::max(r.measured, std::abs(grid.values[i] - from_csv.values[i]));
            r.measured = std::max(r.measured, std::abs(grid.values[i] - from_json.values[i]));
        }
        std::filesystem::remove(csv);
        std::filesystem::remove(json);
        r.detail = "17-significant-digit CSV and JSON reproduce values bit-exactly";
    });

    check.run("scan/gaussian-has-no-negativity", 0.0, [&](CheckResult& r) {
        for (const double rr : {0.0, 0.5, 1.0}) {
            const PasvParams s{rr, 0};
            const auto report = negativity(
                evaluate_grid([&](double q, double p) { return wigner(s, {q, p}); },
                              GridSpec::square(5.0, 201)));
            r.measured = std::max(r.measured, report.negative_volume);
            if (report.min_value <= 0.0) r.passed = false;
        }
        r.detail = "m = 0 grids: min > 0 and zero negative volume";
    });
}

} // namespace

std::vector<CheckResult> run_invariant_checks(const ValidateOptions& opt) {
    std::vector<CheckResult> results;
    validate_detail::Checker check(results);
    validate_detail::OracleWorkspace ws;
    check_polymath(check, opt);
    check_pasv_core(check, opt, ws);
    check_thermal(check, opt, ws);
    check_fock(check, opt);
    check_scan(check, opt);
    return results;
}

void print_results(std::ostream& os, const std::vector<CheckResult>& results) {
    for (const auto& r : results) {
        std::string head = (r.passed ? "[PASS] " : "[FAIL] ") + r.name;
        if (head.size() < 52) head.resize(52, ' ');
        os << head << " measured=" << validate_detail::fmt(r.measured)
           << " tol=" << validate_detail::fmt(r.tolerance) << " ("
           << validate_detail::fmt(r.seconds) << "s)";
        if (!r.detail.empty()) os << "  -- " << r.detail;
        os << '\n';
    }
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

} // namespace pasv
