#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "pasv/errors.hpp"
#include "pasv/oracles.hpp"
#include "pasv/pasv_core.hpp"
#include "pasv/scan.hpp"
#include "pasv/thermal_channel.hpp"

using namespace pasv;

TEST_CASE("grid spec validation") {
    CHECK_THROWS_AS((GridSpec{1.0, -1.0, -1.0, 1.0, 11, 11}.validate()), std::domain_error);
    CHECK_THROWS_AS((GridSpec{-1.0, 1.0, -1.0, 1.0, 2, 11}.validate()), std::domain_error);
    const GridSpec s = GridSpec::square(3.0, 7);
    CHECK(s.q(0) == -3.0);
    CHECK(s.q(6) == doctest::Approx(3.0));
    CHECK(s.dq() == doctest::Approx(1.0));
}

TEST_CASE("evaluate grid basics") {
    const GridSpec spec{0.0, 1.0, 0.0, 1.0, 3, 3};
    const auto grid =
        evaluate_grid([](double, double) { return 1.0 / std::numbers::pi; }, spec);
    for (const double v : grid.values) CHECK(v == 1.0 / std::numbers::pi);

    const auto serial =
        evaluate_grid_serial([](double q, double p) { return q * 2.0 + p; }, spec);
    const auto parallel =
        evaluate_grid([](double q, double p) { return q * 2.0 + p; }, spec);
    for (std::size_t i = 0; i < serial.values.size(); ++i)
        CHECK(serial.values[i] == parallel.values[i]);
}

TEST_CASE("evaluate grid propagates point errors with coordinates") {
    const GridSpec spec = GridSpec::square(1.0, 5);
    try {
        evaluate_grid(
            [](double q, double p) -> double {
                if (q > 0.4 && p > 0.4) throw std::domain_error("bad point");
                return 0.0;
            },
            spec);
        FAIL("expected a domain_error");
    } catch (const std::domain_error& e) {
        const std::string what = e.what();
        CHECK(what.find("q=") != std::string::npos);
        CHECK(what.find("bad point") != std::string::npos);
    }
}

TEST_CASE("parallel evaluation is bit-exact for any worker count") {
    const PasvParams s{0.3, 2};
    const auto f = [&](double q, double p) { return wigner(s, {q, p}); };
    const GridSpec spec = GridSpec::square(4.0, 81);
    const char* saved = std::getenv("PASV_WORKERS");
    const std::string saved_copy = saved ? saved : "";
    setenv("PASV_WORKERS", "1", 1);
    const auto one = evaluate_grid(f, spec);
    setenv("PASV_WORKERS", "4", 1);
    const auto four = evaluate_grid(f, spec);
    if (saved)
        setenv("PASV_WORKERS", saved_copy.c_str(), 1);
    else
        unsetenv("PASV_WORKERS");
    for (std::size_t i = 0; i < one.values.size(); ++i)
        CHECK(one.values[i] == four.values[i]);
}

TEST_CASE("trapezoid integration") {
    WignerGrid zeros{GridSpec::square(2.0, 5), std::vector<double>(25, 0.0)};
    CHECK(integrate(zeros) == 0.0);

    const PasvParams gauss{0.4, 0};
    const auto grid = evaluate_grid(
        [&](double q, double p) { return wigner(gauss, {q, p}); }, GridSpec::square(6.0, 401));
    CHECK(integrate(grid) == doctest::Approx(1.0).epsilon(1e-6));

    const PasvParams added{0.3, 3};
    const auto grid3 = evaluate_grid(
        [&](double q, double p) { return wigner(added, {q, p}); }, GridSpec::square(7.0, 467));
    CHECK(integrate(grid3) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("negativity report") {
    const PasvParams gauss{0.5, 0};
    const auto gauss_report = negativity(evaluate_grid(
        [&](double q, double p) { return wigner(gauss, {q, p}); }, GridSpec::square(5.0, 101)));
    CHECK(gauss_report.min_value > 0.0);
    CHECK(gauss_report.negative_volume == 0.0);

    const PasvParams one{0.3, 1};
    const auto report = negativity(evaluate_grid(
        [&](double q, double p) { return wigner(one, {q, p}); }, GridSpec::square(4.0, 201)));
    CHECK(report.min_value == doctest::Approx(-1.0 / std::numbers::pi).epsilon(1e-12));
    CHECK(report.argmin.q == 0.0);
    CHECK(report.argmin.p == 0.0);
    CHECK(report.negative_volume > 0.0);
    // [-4,4]^2 is the plotting window, not the normalization window
    CHECK(report.total_integral == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("negative volume shrinks with decay time") {
    const PasvParams s{0.3, 1};
    const GridSpec window = GridSpec::square(4.0, 101);
    const double early =
        negativity(evaluate_grid(EvolvedWigner{s, {0.05, 1.0}}, window)).negative_volume;
    const double late =
        negativity(evaluate_grid(EvolvedWigner{s, {0.1, 1.0}}, window)).negative_volume;
    CHECK(early > late);
    CHECK(late > 0.0);
    // past the closed-form threshold the function is positive everywhere
    const double beyond =
        negativity(evaluate_grid(EvolvedWigner{s, {0.2, 1.0}}, window)).negative_volume;
    CHECK(beyond == 0.0);
}

TEST_CASE("thermal convolution") {
    const PasvParams s{0.3, 0};
    const ChannelParams ch{0.2, 0.0};
    const auto initial = evaluate_grid(
        [&](double q, double p) { return wigner(s, {q, p}); }, GridSpec::square(8.0, 321));

    CHECK_THROWS_AS(convolve_thermal(initial, ChannelParams{0.0, 1.0}), std::domain_error);

    const GridSpec out = GridSpec::square(2.0, 11);
    const auto evolved = convolve_thermal(initial, ch, out);
    for (int i = 0; i < out.nq; ++i)
        for (int j = 0; j < out.np; ++j) {
            const double want =
                oracle::wigner_evolved_m0_closed(0.3, ch.kt, ch.nbar, out.q(i), out.p(j));
            CHECK(evolved.at(i, j) == doctest::Approx(want).epsilon(1e-4));
        }

    // separable fast path vs the naive reference
    const auto narrow_in = evaluate_grid(
        [&](double q, double p) { return wigner(s, {q, p}); }, GridSpec::square(7.0, 141));
    const auto direct = convolve_thermal_direct(narrow_in, ch, out);
    const auto separable = convolve_thermal(narrow_in, ch, out);
    for (std::size_t i = 0; i < direct.values.size(); ++i)
        CHECK(separable.values[i] == doctest::Approx(direct.values[i]).epsilon(1e-12));
}

TEST_CASE("thermal convolution rejects clipped input") {
    const PasvParams s{0.3, 1};
    const auto clipped = evaluate_grid(
        [&](double q, double p) { return wigner(s, {q, p}); }, GridSpec::square(1.5, 31));
    CHECK_THROWS_AS(convolve_thermal(clipped, ChannelParams{0.05, 1.0}), padding_error);
}

TEST_CASE("delta-like input spreads to the thermal kernel width") {
    // narrow vacuum Gaussian, long time: the result is the bath Gaussian
    const PasvParams s{0.0, 0};
    const auto initial = evaluate_grid(
        [&](double q, double p) { return wigner(s, {q, p}); }, GridSpec::square(6.0, 241));
    const ChannelParams ch{3.0, 1.0};
    const GridSpec out = GridSpec::square(2.0, 9);
    const auto evolved = convolve_thermal(initial, ch, out);
    for (int i = 0; i < out.nq; ++i)
        for (int j = 0; j < out.np; ++j)
            CHECK(evolved.at(i, j) ==
                  doctest::Approx(oracle::wigner_thermal(1.0, out.q(i), out.p(j)))
                      .epsilon(5e-3));
}

TEST_CASE("export and import") {
    const PasvParams s{0.3, 1};
    const auto grid = evaluate_grid(
        [&](double q, double p) { return wigner(s, {q, p}); }, GridSpec::square(2.0, 5));
    const auto dir = std::filesystem::temp_directory_path();
    const auto csv_path = dir / "pasv_test_grid.csv";
    const auto json_path = dir / "pasv_test_grid.json";

    export_grid(grid, ExportFormat::csv, csv_path);
    const auto from_csv = import_grid_csv(csv_path);
    REQUIRE(from_csv.values.size() == grid.values.size());
    for (std::size_t i = 0; i < grid.values.size(); ++i)
        CHECK(from_csv.values[i] == grid.values[i]);
    CHECK(from_csv.spec.nq == grid.spec.nq);

    export_grid(grid, ExportFormat::json, json_path, {{"r", 0.3}, {"m", 1.0}});
    const auto from_json = import_grid_json(json_path);
    for (std::size_t i = 0; i < grid.values.size(); ++i)
        CHECK(from_json.values[i] == grid.values[i]);

    const auto report = negativity(grid);
    const auto report_path = dir / "pasv_test_report.json";
    export_report(report, ExportFormat::json, report_path);
    std::ifstream in(report_path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    for (const char* key :
         {"min_value", "argmin_q", "argmin_p", "negative_volume", "total_integral"})
        CHECK(text.find(key) != std::string::npos);

    std::filesystem::remove(csv_path);
    std::filesystem::remove(json_path);
    std::filesystem::remove(report_path);

    CHECK_THROWS_AS(import_grid_csv(dir / "pasv_does_not_exist.csv"), std::runtime_error);
}

TEST_CASE("csv export is byte-stable") {
    const PasvParams s{0.5, 2};
    const auto grid = evaluate_grid(
        [&](double q, double p) { return wigner(s, {q, p}); }, GridSpec::square(3.0, 9));
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "pasv_stable_a.csv";
    const auto b = dir / "pasv_stable_b.csv";
    export_grid(grid, ExportFormat::csv, a);
    export_grid(grid, ExportFormat::csv, b);
    std::ifstream fa(a), fb(b);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().starts_with("q,p,w\n"));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}
