#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pasv/detail/numerics.hpp"
#include "pasv/errors.hpp"
#include "pasv/fock_oracle.hpp"
#include "pasv/oracles.hpp"
#include "pasv/pasv_core.hpp"
#include "pasv/polymath.hpp"
#include "pasv/scan.hpp"
#include "pasv/thermal_channel.hpp"
#include "pasv/validate.hpp"
#include "validate_internal.hpp"

namespace pasv {

namespace {

using namespace validate_detail;
using poly::PolyDegree;

struct ChannelTuple {
    int m;
    double r;
    double kt;
    double nbar;
};

std::vector<ChannelTuple> channel_tuples(bool quick) {
    const std::vector<int> ms = quick ? std::vector<int>{0, 1} : std::vector<int>{0, 1, 2};
    const std::vector<double> rs = quick ? std::vector<double>{0.3}
                                         : std::vector<double>{0.3, 0.7};
    const std::vector<double> kts = quick ? std::vector<double>{0.05, 0.2}
                                          : std::vector<double>{0.05, 0.1, 0.2, 0.5};
    const std::vector<double> nbars = quick ? std::vector<double>{0.0, 1.0}
                                            : std::vector<double>{0.0, 1.0, 2.0};
    std::vector<ChannelTuple> tuples;
    for (const int m : ms)
        for (const double r : rs)
            for (const double kt : kts)
                for (const double nbar : nbars) tuples.push_back({m, r, kt, nbar});
    return tuples;
}

} // namespace

std::vector<CheckResult> run_acceptance_criteria(const ValidateOptions& opt) {
    std::vector<CheckResult> results;
    Checker check(results);
    OracleWorkspace ws;

    // 1. Pre-normalization norm of a^{dag m} S(r)|0> vs m! cosh^m r P_m(cosh r).
    check.run("01-normalization-identity", 1e-10, [&](CheckResult& r) {
        const auto t0 = std::chrono::steady_clock::now();
        for (int m = 0; m <= 6; ++m)
            for (const double rr : {0.0, 0.25, 0.5, 1.0, 1.5}) {
                const auto sv = fock::squeezed_vacuum_auto(rr, 64, 1024);
                const auto added = fock::add_photons(sv, m);
                const double want = norm_factor_sq_inv(PasvParams{rr, m});
                r.measured = std::max(r.measured, rel_err(added.norm_sq, want));
            }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > 5.0) r.passed = false;
        r.detail = "m <= 6, r in {0, 0.25, 0.5, 1.0, 1.5} (relative); budget 5s";
    });

    // 2. Mandel-Q sign change: m = 1 root in [0.45, 0.47]; roots grow with m.
    check.run("02-mandel-q-threshold", 0.0, [&](CheckResult& r) {
        const double root1 = q_sign_change(1, {0.3, 0.6});
        bool ok = root1 >= 0.45 && root1 <= 0.47;
        ok = ok && std::abs(mandel_q(PasvParams{root1, 1})) < 1e-10;
        std::string roots = "roots:" + fmt(root1);
        double prev = root1;
        for (int m = 2; m <= 4; ++m) {
            const double root = q_sign_change(m, {0.1, 1.5});
            ok = ok && root > prev;
            prev = root;
            roots += " " + fmt(root);
        }
        r.passed = ok;
        r.measured = root1;
        r.tolerance = 0.47;
        r.detail = roots + " (m = 1..4, strictly increasing)";
    });

    // 3. Ideal-state Wigner closed form vs displaced-parity oracle.
    check.run("03-wigner-vs-oracle", opt.tol_wigner, [&](CheckResult& r) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<double> rs =
            opt.quick ? std::vector<double>{0.3} : std::vector<double>{0.1, 0.3, 0.8};
        for (int m = 0; m <= (opt.quick ? 2 : 3); ++m)
            for (const double rr : rs) {
                const int cutoff = oracle_cutoff(rr);
                const auto rho = fock::pure_density(ws.state(rr, m, cutoff));
                const WignerGrid from_oracle = ws.oracle_wigner_grid(rho);
                const PasvParams s{rr, m};
                const WignerGrid closed = evaluate_grid(
                    [&](double q, double p) { return wigner(s, {q, p}); }, ws.oracle_grid);
                r.measured = std::max(r.measured, grid_max_abs_diff(closed, from_oracle));
            }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > 60.0) r.passed = false;
        r.detail = "21x21 on [-3,3]^2, m <= 3, r in {0.1, 0.3, 0.8}; budget 60s";
    });

    // 4. Exact origin values: W(0,0) = 1/pi (m = 0) and -1/pi (m = 1).
    check.run("04-fixed-origin-values", 1e-14, [&](CheckResult& r) {
        const double inv_pi = 1.0 / std::numbers::pi;
        for (const double rr : {0.0, 0.3, 0.8}) {
            r.measured =
                std::max(r.measured, std::abs(wigner(PasvParams{rr, 0}, {0, 0}) - inv_pi));
            r.measured =
                std::max(r.measured, std::abs(wigner(PasvParams{rr, 1}, {0, 0}) + inv_pi));
        }
        r.detail = "both signs of 1/pi at the phase-space origin";
    });

    // 5 & 6. Channel tuples: evolved closed form vs Kraus-evolved oracle, and
    // Kraus map vs fourth-order master integration (computed in one pass).
    double master_worst = 0.0;
    std::string master_detail;
    check.run("05-evolved-wigner-vs-channel-oracle", opt.tol_evolved, [&](CheckResult& r) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto tuples = channel_tuples(opt.quick);
        for (const auto& t : tuples) {
            // the bath heats the state into the upper half of a 64-level
            // space, where the truncated displacement loses accuracy; 128
            // keeps the oracle comfortably below the 1e-6 tolerance
            const int cutoff = std::max(128, oracle_cutoff(t.r));
            const auto rho0 = fock::pure_density(ws.state(t.r, t.m, cutoff));
            const ChannelParams ch{t.kt, t.nbar};
            const auto via_kraus = fock::evolve_kraus(rho0, ch);
            const WignerGrid from_oracle = ws.oracle_wigner_grid(via_kraus);
            const WignerGrid closed =
                evaluate_grid(EvolvedWigner{PasvParams{t.r, t.m}, ch}, ws.oracle_grid);
            r.measured = std::max(r.measured, grid_max_abs_diff(closed, from_oracle));

            const auto via_master = fock::evolve_master(rho0, ch);
            master_worst =
                std::max(master_worst, fock::max_abs_diff(via_kraus.rho, via_master.rho));
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (elapsed > 600.0) r.passed = false;
        r.detail = std::to_string(tuples.size()) +
                   " (m, r, kt, nbar) tuples, 21x21 grids; budget 600s";
        master_detail = "same " + std::to_string(tuples.size()) +
                        " tuples, max-abs density-matrix distance";
    });
    check.run("06-kraus-vs-master-consistency", 1e-8, [&](CheckResult& r) {
        r.measured = master_worst;
        r.detail = master_detail + " (computed jointly with criterion 5)";
    });

    // 7. Threshold time: closed form, numeric scan, r-independence.
    check.run("07-threshold-closed-vs-numeric", 1e-5, [&](CheckResult& r) {
        if (std::abs(threshold_time_m1(0.0) - 0.5 * std::numbers::ln2) > 1e-12)
            r.passed = false;
        const GridSpec window = GridSpec::square(4.0, 201);
        const std::vector<double> nbars =
            opt.quick ? std::vector<double>{0.0, 1.0} : std::vector<double>{0.0, 1.0, 5.0};
        for (const double nbar : nbars) {
            const double numeric = threshold_time_numeric(PasvParams{0.3, 1}, nbar, window);
            r.measured = std::max(r.measured, std::abs(numeric - threshold_time_m1(nbar)));
        }
        const std::vector<double> rs =
            opt.quick ? std::vector<double>{0.3, 0.8} : std::vector<double>{0.3, 0.8, 1.5};
        for (const double rr : rs) {
            const double numeric = threshold_time_numeric(PasvParams{rr, 1}, 1.0, window);
            r.measured = std::max(r.measured, std::abs(numeric - threshold_time_m1(1.0)));
        }
        r.detail = "closed form at nbar = 0 equals (ln 2)/2 to 1e-12; grid scan "
                   "agrees across nbar and is r-independent";
    });

    // 8. Long- and short-time limits of the evolved Wigner function.
    check.run("08-long-and-short-time-limits", 1e-10, [&](CheckResult& r) {
        for (int m = 0; m <= 3; ++m)
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
        double short_time = 0.0;
        for (int m = 0; m <= 3; ++m) {
            const PasvParams s{0.3, m};
            const EvolvedWigner w{s, ChannelParams{1e-5, 1.0}};
            for (int i = 0; i < ws.oracle_grid.nq; ++i)
                for (int j = 0; j < ws.oracle_grid.np; ++j) {
                    const double q = ws.oracle_grid.q(i);
                    const double p = ws.oracle_grid.p(j);
                    short_time = std::max(short_time, std::abs(w(q, p) - wigner(s, {q, p})));
                }
        }
        if (short_time > 1e-3) r.passed = false;
        r.detail = "kt = 20 thermal Gaussian to 1e-10; kt = 1e-5 ideal state to 1e-3 "
                   "(short-time dev " + fmt(short_time) + ")";
    });

    // 9. Appendix identities, each at its own tolerance (worst ratio shown).
    check.run("09-appendix-identities", 1.0, [&](CheckResult& r) {
        double a12 = 0.0;
        for (int n = 0; n <= 10; ++n)
            for (const double x : {1.0, 1.1, 1.5, 2.0, 5.0, 10.0})
                a12 = std::max(a12, rel_err(poly::legendre_product_form(PolyDegree{n}, x),
                                            poly::legendre(PolyDegree{n}, x)));
        double gen = 0.0;
        for (int m = 0; m <= 8; ++m)
            for (const double rr : {0.1, 0.5, 1.0, 2.0}) {
                const double x = std::cosh(rr);
                const double s2 = x * x - 1.0;
                gen = std::max(
                    gen, rel_err(poly::generating_derivative(PolyDegree{m}, x / std::sqrt(s2)),
                                 std::exp(m * std::numbers::ln2 + poly::log_factorial(m) -
                                          0.5 * m * std::log(s2)) *
                                     poly::legendre(PolyDegree{m}, x)));
            }
        double b10 = 0.0;
        const cdouble es[] = {{0.3, 0.0}, {1.0, 1.0}, {-0.7, 0.2}};
        for (int m = 0; m <= 6; ++m)
            for (const double g : {0.5, 1.0, 2.0})
                for (const cdouble& e : es)
                    b10 = std::max(
                        b10, rel_err(poly::gaussian_double_derivative(PolyDegree{m}, g, e),
                                     std::pow(g, 0.5 * m) *
                                         poly::hermite(PolyDegree{m}, e / std::sqrt(g))));
        r.measured = std::max({a12 / 1e-12, gen / 1e-9, b10 / 1e-10});
        r.detail = "product-form " + fmt(a12) + " (tol 1e-12), generating " + fmt(gen) +
                   " (tol 1e-9), Gaussian-derivative " + fmt(b10) + " (tol 1e-10)";
    });

    // 10. Negative volume shrinks with decay time and with bath occupation.
    // Past the closed-form threshold the m = 1 function is positive
    // everywhere, so the volume bottoms out at exactly zero there; strict
    // decrease is required up to that point.
    check.run("10-monotone-decoherence", 0.0, [&](CheckResult& r) {
        const GridSpec window = GridSpec::square(4.0, 201);
        const PasvParams s{0.3, 1};
        double worst = -std::numeric_limits<double>::infinity();
        std::string trail = "kt:";
        double prev = std::numeric_limits<double>::infinity();
        for (const double kt : {0.05, 0.1, 0.2, 0.5}) {
            const double nv =
                negativity(evaluate_grid(EvolvedWigner{s, {kt, 1.0}}, window))
                    .negative_volume;
            if (kt > threshold_time_m1(1.0))
                worst = std::max(worst, std::abs(nv)); // must be exactly zero
            else
                worst = std::max(worst, nv - prev);    // must strictly decrease
            prev = nv;
            trail += " " + fmt(nv);
        }
        prev = std::numeric_limits<double>::infinity();
        trail += "; nbar:";
        for (const double nbar : {0.0, 1.0, 2.0, 5.0}) {
            const double nv =
                negativity(evaluate_grid(EvolvedWigner{s, {0.05, nbar}}, window))
                    .negative_volume;
            if (0.05 > threshold_time_m1(nbar))
                worst = std::max(worst, std::abs(nv));
            else
                worst = std::max(worst, nv - prev);
            prev = nv;
            trail += " " + fmt(nv);
        }
        r.measured = worst;
        r.passed = worst <= 0.0;
        r.detail = "strict decrease up to kt_c, exactly zero beyond (" + trail + ")";
    });

    // 11. Normalization on the fixed [-6,6]^2/401^2 window for every state
    // family the criteria touch.
    check.run("11-normalization-fixed-window", opt.tol_quadrature, [&](CheckResult& r) {
        const GridSpec window = GridSpec::square(6.0, 401);
        int fails = 0;
        int total = 0;
        const auto probe_ideal = [&](const PasvParams& s) {
            const double integral = integrate(evaluate_grid(
                [&](double q, double p) { return wigner(s, {q, p}); }, window));
            ++total;
            if (std::abs(integral - 1.0) > r.tolerance) ++fails;
            r.measured = std::max(r.measured, std::abs(integral - 1.0));
        };
        const auto probe_evolved = [&](const PasvParams& s, const ChannelParams& ch) {
            const double integral = integrate(evaluate_grid(EvolvedWigner{s, ch}, window));
            ++total;
            if (std::abs(integral - 1.0) > r.tolerance) ++fails;
            r.measured = std::max(r.measured, std::abs(integral - 1.0));
        };
        for (int m = 0; m <= (opt.quick ? 2 : 4); ++m)
            for (const double rr : {0.0, 0.3, 0.8, 1.2}) probe_ideal(PasvParams{rr, m});
        for (const double kt : {0.05, 0.2})
            for (const double nbar : {0.0, 1.0})
                probe_evolved(PasvParams{0.3, 1}, ChannelParams{kt, nbar});
        if (!opt.quick) probe_evolved(PasvParams{0.7, 2}, ChannelParams{0.1, 1.0});
        r.detail = std::to_string(fails) + "/" + std::to_string(total) +
                   " grids miss 1 +- 1e-6 on this window (mass beyond the "
                   "window edge; worst shown)";
    });

    // Qualitative structure notes: extremum location by photon count.
    // measured <= 0 encodes: argmin distance from the origin is 0 for
    // m = 1, 3 and exceeds 0.1 for m = 2.
    check.run("12-structure-qualitative", 0.0, [&](CheckResult& r) {
        const GridSpec window = GridSpec::square(4.0, 201);
        std::string detail = "argmin distance from origin:";
        for (const int m : {1, 3}) {
            const PasvParams s{0.3, m};
            const auto report = negativity(evaluate_grid(
                [&](double q, double p) { return wigner(s, {q, p}); }, window));
            const double dist = std::hypot(report.argmin.q, report.argmin.p);
            r.measured = std::max(r.measured, dist);
            detail += " m" + std::to_string(m) + "=" + fmt(dist);
        }
        const auto report2 = negativity(evaluate_grid(
            [&](double q, double p) { return wigner(PasvParams{0.3, 2}, {q, p}); }, window));
        const double off_origin = std::hypot(report2.argmin.q, report2.argmin.p);
        r.measured = std::max(r.measured, 0.1 - off_origin);
        r.detail = detail + " m2=" + fmt(off_origin) + " (m2 must exceed 0.1)";
    });

    return results;
}

} // namespace pasv
