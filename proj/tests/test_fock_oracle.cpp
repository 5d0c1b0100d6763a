#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "pasv/errors.hpp"
#include "pasv/fock_oracle.hpp"
#include "pasv/pasv_core.hpp"
#include "pasv/polymath.hpp"
#include "pasv/thermal_channel.hpp"

using namespace pasv;
using fock::Matrix;
using cdouble = std::complex<double>;

namespace {

fock::FockVector annihilate(const fock::FockVector& v) {
    fock::FockVector w{std::vector<cdouble>(v.amp.size())};
    for (std::size_t n = 0; n + 1 < v.amp.size(); ++n)
        w.amp[n] = std::sqrt(static_cast<double>(n + 1)) * v.amp[n + 1];
    const double norm = std::sqrt(w.norm_sq());
    for (auto& c : w.amp) c /= norm;
    return w;
}

} // namespace

TEST_CASE("ladder operators") {
    const int n = 16;
    const Matrix a = fock::annihilation(n);
    const Matrix adag = fock::creation(n);
    const Matrix comm_lhs = fock::multiply(a, adag);
    const Matrix comm_rhs = fock::multiply(adag, a);
    for (int i = 0; i < n - 1; ++i) {
        const cdouble c = comm_lhs(i, i) - comm_rhs(i, i);
        CHECK(std::abs(c - cdouble{1.0, 0.0}) < 1e-14);
    }
}

TEST_CASE("squeezed vacuum amplitudes") {
    const auto vac = fock::squeezed_vacuum(0.0, 32);
    CHECK(vac.amp[0] == cdouble{1.0, 0.0});
    for (std::size_t i = 1; i < vac.amp.size(); ++i) CHECK(vac.amp[i] == cdouble{0.0, 0.0});

    const auto sv = fock::squeezed_vacuum(0.4, 64);
    CHECK(sv.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t n = 1; n < sv.amp.size(); n += 2) CHECK(sv.amp[n] == cdouble{0.0, 0.0});

    CHECK_THROWS_AS(fock::squeezed_vacuum(0.3, 16), std::domain_error);
}

TEST_CASE("squeezed vacuum matches the matrix-exponential oracle") {
    // apply exp(r/2 (adag^2 - a^2)) to |0> by scaling-and-squaring
    const double r = 0.8;
    const int cutoff = 128;
    Matrix gen(cutoff);
    const Matrix a = fock::annihilation(cutoff);
    const Matrix sq = fock::multiply(a, a);
    const Matrix sq_dag = fock::adjoint(sq);
    for (std::size_t i = 0; i < gen.data().size(); ++i)
        gen.data()[i] = 0.5 * r * (sq_dag.data()[i] - sq.data()[i]);
    const Matrix s_op = fock::matrix_exponential(gen);

    const auto sv = fock::squeezed_vacuum(r, cutoff);
    const cdouble ratio_recurrence = sv.amp[2] / sv.amp[0];
    const cdouble ratio_expm = s_op(2, 0) / s_op(0, 0);
    CHECK(std::abs(ratio_recurrence - ratio_expm) < 1e-10);
}

TEST_CASE("squeezing obeys the Bogoliubov relation") {
    // S^dag adag S = adag cosh r + a sinh r on a block where the truncated
    // conjugation is still faithful
    const double r = 0.4;
    const int cutoff = 128;
    Matrix gen(cutoff);
    const Matrix a = fock::annihilation(cutoff);
    const Matrix sq = fock::multiply(a, a);
    const Matrix sq_dag = fock::adjoint(sq);
    for (std::size_t i = 0; i < gen.data().size(); ++i)
        gen.data()[i] = 0.5 * r * (sq_dag.data()[i] - sq.data()[i]);
    const Matrix s_op = fock::matrix_exponential(gen);

    const Matrix lhs = fock::multiply(fock::adjoint(s_op),
                                      fock::multiply(fock::creation(cutoff), s_op));
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
            cdouble want{0.0, 0.0};
            if (i == j + 1) want = std::sqrt(static_cast<double>(j + 1)) * std::cosh(r);
            if (i + 1 == j) want = std::sqrt(static_cast<double>(j)) * std::sinh(r);
            CHECK(std::abs(lhs(i, j) - want) < 1e-10);
        }
}

TEST_CASE("tail-mass escalation") {
    CHECK_THROWS_AS(fock::squeezed_vacuum(1.5, 256), cutoff_error);
    const auto sv = fock::squeezed_vacuum_auto(1.5);
    CHECK(sv.cutoff() == 512);
    CHECK(sv.tail_mass() < 1e-20);
    CHECK_THROWS_AS(fock::squeezed_vacuum_auto(1.5, 64, 256), cutoff_error);
}

TEST_CASE("add photons") {
    fock::FockVector vac{std::vector<cdouble>(64)};
    vac.amp[0] = 1.0;
    for (const int m : {1, 3, 5}) {
        const auto added = fock::add_photons(vac, m);
        CHECK(added.norm_sq ==
              doctest::Approx(std::exp(poly::log_factorial(m))).epsilon(1e-12));
        CHECK(std::abs(added.state.amp[static_cast<std::size_t>(m)] - cdouble{1.0, 0.0}) <
              1e-12);
    }
    // norm against the closed form m! cosh^m r P_m(cosh r)
    const auto added = fock::add_photons(fock::squeezed_vacuum_auto(0.5), 3);
    const double want = norm_factor_sq_inv(PasvParams{0.5, 3});
    CHECK(added.norm_sq == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("adding and subtracting one photon give the same state") {
    const auto sv = fock::squeezed_vacuum_auto(0.6);
    const auto added = fock::add_photons(sv, 1).state;
    const auto subtracted = annihilate(sv);
    CHECK(std::abs(fock::inner_product(subtracted, added)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("kraus operator structure") {
    const int cutoff = 32;
    // zero-temperature no-jump term is diagonal e^{-kt n}
    const double kt = 0.1;
    const auto m00 = fock::kraus_operator(0, 0, ChannelParams{kt, 0.0}, cutoff);
    for (int i = 0; i < cutoff; ++i)
        CHECK(std::abs(m00(i, i) - std::exp(-kt * i)) < 1e-14);

    // single lower off-diagonal of e^{Gamma_0 n} a, built elementwise
    const ChannelParams ch{0.1, 1.0};
    const auto kc = kraus_coefficients(ch);
    const auto m10 = fock::kraus_operator(1, 0, ch, cutoff);
    const double c = std::exp(0.5 * (ch.kt + kc.gamma_zero)) * std::sqrt(kc.gamma_minus);
    for (int n = 1; n < cutoff; ++n) {
        const double want = c * std::exp(kc.gamma_zero * (n - 1)) * std::sqrt(n);
        CHECK(std::abs(m10(n - 1, n) - want) < 1e-13);
        CHECK(std::abs(m10(n, n)) == 0.0);
    }
}

TEST_CASE("kraus completeness on the lower block") {
    const int cutoff = 64;
    const int k_max = 32;
    const ChannelParams ch{0.1, 1.0};
    Matrix sum(cutoff);
    for (int k = 0; k <= k_max; ++k)
        for (int l = 0; l <= k_max - k; ++l) {
            const auto mk = fock::kraus_operator(k, l, ch, cutoff);
            const auto prod = fock::multiply(fock::adjoint(mk), mk);
            for (std::size_t i = 0; i < sum.data().size(); ++i)
                sum.data()[i] += prod.data()[i];
        }
    const int block = cutoff - k_max - 8;
    for (int i = 0; i < block; ++i)
        for (int j = 0; j < block; ++j) {
            const cdouble want = (i == j) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
            CHECK(std::abs(sum(i, j) - want) < 1e-8);
        }
}

TEST_CASE("kraus evolution limits") {
    const auto rho0 = fock::pure_density(
        fock::add_photons(fock::squeezed_vacuum(0.3, 64), 1).state);

    // near-identity channel
    const auto short_time = fock::evolve_kraus(rho0, ChannelParams{1e-12, 1.0});
    CHECK(fock::max_abs_diff(short_time.rho, rho0.rho) < 1e-8);

    // long-time thermal fixed point p_n = nbar^n/(nbar+1)^{n+1}
    const auto late = fock::evolve_kraus(rho0, ChannelParams{20.0, 1.0});
    for (int n = 0; n <= 15; ++n)
        CHECK(late.rho(n, n).real() ==
              doctest::Approx(std::pow(0.5, n + 1)).epsilon(1e-8));
    CHECK(std::abs(late.rho(0, 2)) < 1e-10);
    CHECK(std::abs(fock::trace(late.rho) - cdouble{1.0, 0.0}) < 1e-12);
}

TEST_CASE("master equation evolution") {
    const auto rho0 = fock::pure_density(
        fock::add_photons(fock::squeezed_vacuum(0.3, 64), 1).state);
    const auto unchanged = fock::evolve_master(rho0, ChannelParams{0.0, 1.0});
    CHECK(fock::max_abs_diff(unchanged.rho, rho0.rho) == 0.0);

    // photon-loss decay of |1><1|: p_1(t) = e^{-2 kt}
    fock::FockVector one{std::vector<cdouble>(32)};
    one.amp[1] = 1.0;
    const double kt = 0.3;
    const auto decayed = fock::evolve_master(fock::pure_density(one), ChannelParams{kt, 0.0});
    CHECK(decayed.rho(1, 1).real() == doctest::Approx(std::exp(-2.0 * kt)).epsilon(1e-9));
    CHECK(decayed.rho(0, 0).real() ==
          doctest::Approx(-std::expm1(-2.0 * kt)).epsilon(1e-9));

    CHECK_THROWS_AS(fock::evolve_master(rho0, ChannelParams{1.0, 0.5}, 500),
                    std::domain_error);
}

TEST_CASE("kraus and master evolution agree") {
    struct Tuple {
        int m;
        double r, kt, nbar;
    };
    const Tuple tuples[] = {{1, 0.3, 0.2, 1.0}, {3, 0.5, 0.35, 0.7}, {0, 0.4, 0.1, 2.0}};
    for (const auto& t : tuples) {
        const auto rho0 = fock::pure_density(
            fock::add_photons(fock::squeezed_vacuum(t.r, 64, 1e-12), t.m, 1e-12).state);
        const ChannelParams ch{t.kt, t.nbar};
        const auto via_kraus = fock::evolve_kraus(rho0, ch);
        const auto via_master = fock::evolve_master(rho0, ch);
        CHECK(fock::max_abs_diff(via_kraus.rho, via_master.rho) < 1e-8);
        CHECK(std::abs(fock::trace(via_master.rho).real() - 1.0) < 1e-10);
        CHECK(fock::hermiticity_defect(via_master) < 1e-12);
    }
}

TEST_CASE("displacement operator") {
    const Matrix d0 = fock::displacement({0.0, 0.0}, 32);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j)
            CHECK(d0(i, j) == ((i == j) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0}));

    const Matrix d = fock::displacement({2.0, 1.0}, 64);
    const Matrix prod = fock::multiply(d, fock::adjoint(d));
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) {
            const cdouble want = (i == j) ? cdouble{1.0, 0.0} : cdouble{0.0, 0.0};
            CHECK(std::abs(prod(i, j) - want) < 1e-10);
        }

    // D(alpha)|0> is the coherent state
    const cdouble alpha{0.7, -0.4};
    const Matrix da = fock::displacement(alpha, 64);
    double log_fact = 0.0;
    for (int n = 0; n < 8; ++n) {
        if (n > 0) log_fact += std::log(static_cast<double>(n));
        cdouble want = std::exp(-0.5 * std::norm(alpha) - 0.5 * log_fact);
        for (int k = 0; k < n; ++k) want *= alpha;
        CHECK(std::abs(da(n, 0) - want) < 1e-12);
    }
}

TEST_CASE("wigner from displaced parity") {
    fock::FockVector vac{std::vector<cdouble>(64)};
    vac.amp[0] = 1.0;
    const auto rho_vac = fock::pure_density(vac);
    CHECK(fock::wigner_fock(rho_vac, {0.0, 0.0}) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));

    fock::FockVector one{std::vector<cdouble>(64)};
    one.amp[1] = 1.0;
    CHECK(fock::wigner_fock(fock::pure_density(one), {0.0, 0.0}) ==
          doctest::Approx(-1.0 / std::numbers::pi).epsilon(1e-12));

    fock::FockVector unnormalized{std::vector<cdouble>(64)};
    unnormalized.amp[0] = 2.0;
    CHECK_THROWS_AS(fock::wigner_fock(fock::pure_density(unnormalized), {0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("displaced-parity cache matches direct evaluation") {
    const GridSpec spec = GridSpec::square(2.0, 3);
    const fock::DisplacedParityCache cache(spec, 64);
    const auto rho = fock::pure_density(
        fock::add_photons(fock::squeezed_vacuum(0.3, 64), 1).state);
    std::size_t idx = 0;
    for (int i = 0; i < spec.nq; ++i)
        for (int j = 0; j < spec.np; ++j, ++idx) {
            const double direct = fock::wigner_fock(rho, {spec.q(i), spec.p(j)});
            CHECK(fock::wigner_fock_cached(rho, cache[idx]) ==
                  doctest::Approx(direct).epsilon(1e-13));
        }
}
