// pasv-lab: photon-added squeezed vacuum analysis front end.
//
// Subcommands: wigner (phase-space grids, ideal or thermal-channel evolved),
// qparam (Mandel-Q sweeps and sign-change roots), threshold (decoherence
// time, closed form and grid scan), validate (full numeric check suite).
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
// contract failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pasv/errors.hpp"
#include "pasv/fock_oracle.hpp"
#include "pasv/pasv_core.hpp"
#include "pasv/scan.hpp"
#include "pasv/thermal_channel.hpp"
#include "pasv/validate.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct WignerConfig {
    double r = 0.3;
    int m = 1;
    double kt = 0.0;
    double nbar = 1.0;
    double q_min = -4.0, q_max = 4.0, p_min = -4.0, p_max = 4.0;
    int nq = 201, np = 201;
    std::string out = "wigner.csv";
    std::string format = "csv";
    std::string report_path;
};

struct QparamConfig {
    std::vector<int> ms = {0, 1, 2, 3, 4};
    double r_min = 0.0;
    double r_max = 1.5;
    int steps = 151;
    std::string out = "qparam.csv";
};

struct ThresholdConfig {
    int m = 1;
    double nbar = 0.0;
    double r = 0.3;
    bool numeric = false;
};

struct ValidateConfig {
    pasv::ValidateOptions options;
    std::string report_path;
};

std::string usage_problem(const WignerConfig& cfg) {
    if (!(cfg.r >= 0.0)) return "--r must be >= 0";
    if (cfg.m < 0 || cfg.m > pasv::PasvParams::max_photons_added)
        return "--m must be in [0, 32]";
    if (!(cfg.kt >= 0.0)) return "--kt must be >= 0";
    if (!(cfg.nbar >= 0.0)) return "--nbar must be >= 0";
    if (cfg.kt > 0.0 && cfg.r < pasv::squeeze_epsilon)
        return "the evolved Wigner function needs --r > 1e-8 when --kt > 0";
    if (!(cfg.q_min < cfg.q_max) || !(cfg.p_min < cfg.p_max))
        return "grid bounds must be ordered";
    if (cfg.nq < 3 || cfg.np < 3) return "grid needs at least 3 points per axis";
    if (cfg.format != "csv" && cfg.format != "json")
        return "--format must be csv or json";
    return {};
}

int cmd_wigner(const WignerConfig& cfg) {
    if (const std::string problem = usage_problem(cfg); !problem.empty()) {
        std::cerr << "pasv-lab wigner: " << problem << '\n';
        return kExitUsage;
    }
    const pasv::GridSpec spec{cfg.q_min, cfg.q_max, cfg.p_min, cfg.p_max, cfg.nq, cfg.np};
    const pasv::PasvParams state{cfg.r, cfg.m};

    pasv::WignerGrid grid;
    if (cfg.kt > 0.0) {
        const pasv::EvolvedWigner w{state, pasv::ChannelParams{cfg.kt, cfg.nbar}};
        grid = pasv::evaluate_grid(w, spec);
    } else {
        grid = pasv::evaluate_grid(
            [&](double q, double p) { return pasv::wigner(state, {q, p}); }, spec);
    }
    const pasv::NegativityReport report = pasv::negativity(grid);

    const auto format =
        cfg.format == "csv" ? pasv::ExportFormat::csv : pasv::ExportFormat::json;
    std::vector<std::pair<std::string, double>> metadata{
        {"r", cfg.r}, {"m", static_cast<double>(cfg.m)}};
    if (cfg.kt > 0.0) {
        metadata.emplace_back("kt", cfg.kt);
        metadata.emplace_back("nbar", cfg.nbar);
    }
    pasv::export_grid(grid, format, cfg.out, metadata);
    if (!cfg.report_path.empty()) {
        const auto rep_format = cfg.report_path.ends_with(".csv")
                                    ? pasv::ExportFormat::csv
                                    : pasv::ExportFormat::json;
        pasv::export_report(report, rep_format, cfg.report_path);
    }

    std::cout << "grid " << cfg.nq << "x" << cfg.np << " -> " << cfg.out << '\n'
              << "min " << report.min_value << " at (q=" << report.argmin.q
              << ", p=" << report.argmin.p << ")\n"
              << "negative volume " << report.negative_volume << '\n'
              << "integral " << report.total_integral << '\n';
    return 0;
}

int cmd_qparam(const QparamConfig& cfg) {
    if (!(cfg.r_min >= 0.0) || !(cfg.r_max > cfg.r_min) || cfg.steps < 2) {
        std::cerr << "pasv-lab qparam: need 0 <= r-min < r-max and at least 2 steps\n";
        return kExitUsage;
    }
    for (const int m : cfg.ms)
        if (m < 0 || m > pasv::PasvParams::max_photons_added) {
            std::cerr << "pasv-lab qparam: --m must be in [0, 32]\n";
            return kExitUsage;
        }

    std::ofstream out(cfg.out);
    if (!out) {
        std::cerr << "pasv-lab qparam: cannot open '" << cfg.out << "'\n";
        return kExitNumerical;
    }
    out.precision(17);
    out << "r,m,q\n";
    const double dr = (cfg.r_max - cfg.r_min) / (cfg.steps - 1);
    for (const int m : cfg.ms) {
        double prev_r = 0.0, prev_q = 0.0;
        bool have_prev = false;
        double root = -1.0;
        for (int i = 0; i < cfg.steps; ++i) {
            const double r = cfg.r_min + i * dr;
            if (m == 0 && r == 0.0) continue; // Q undefined for the vacuum
            const double q = pasv::mandel_q(pasv::PasvParams{r, m});
            out << r << ',' << m << ',' << q << '\n';
            if (have_prev && root < 0.0 && ((prev_q < 0.0) != (q < 0.0)))
                root = pasv::q_sign_change(m, {prev_r, r});
            prev_r = r;
            prev_q = q;
            have_prev = true;
        }
        if (root >= 0.0) {
            out << "# q-root m=" << m << " r=" << root << '\n';
            std::cout << "m=" << m << ": Q crosses zero at r=" << root << '\n';
        } else {
            std::cout << "m=" << m << ": no sign change in [" << cfg.r_min << ", "
                      << cfg.r_max << "]\n";
        }
    }
    std::cout << "curve -> " << cfg.out << '\n';
    return 0;
}

int cmd_threshold(const ThresholdConfig& cfg) {
    if (!(cfg.nbar >= 0.0) || !(cfg.r > 0.0) || cfg.m < 1 ||
        cfg.m > pasv::PasvParams::max_photons_added) {
        std::cerr << "pasv-lab threshold: need --nbar >= 0, --r > 0, --m in [1, 32]\n";
        return kExitUsage;
    }
    if (cfg.m != 1 && !cfg.numeric) {
        std::cerr << "pasv-lab threshold: no closed form for m >= 2; pass --numeric\n";
        return kExitUsage;
    }

    if (cfg.m == 1) {
        const double closed = pasv::threshold_time_m1(cfg.nbar);
        std::cout << "kt_c(closed, m=1) = " << closed << '\n';
        if (cfg.numeric) {
            const double numeric = pasv::threshold_time_numeric(
                pasv::PasvParams{cfg.r, 1}, cfg.nbar, pasv::GridSpec::square(4.0, 201));
            std::cout << "kt_c(grid scan)   = " << numeric << '\n'
                      << "difference        = " << std::abs(numeric - closed) << '\n';
        }
    } else {
        const double numeric = pasv::threshold_time_numeric(
            pasv::PasvParams{cfg.r, cfg.m}, cfg.nbar, pasv::GridSpec::square(4.0, 201));
        std::cout << "kt_c(grid scan, m=" << cfg.m << ") = " << numeric
                  << "   (no closed form for m >= 2)\n";
    }
    return 0;
}

int cmd_validate(const ValidateConfig& cfg) {
    auto results = pasv::run_invariant_checks(cfg.options);
    const auto acceptance = pasv::run_acceptance_criteria(cfg.options);
    results.insert(results.end(), acceptance.begin(), acceptance.end());
    pasv::print_results(std::cout, results);

    int failures = 0;
    for (const auto& r : results)
        if (!r.passed) ++failures;
    std::cout << results.size() - failures << "/" << results.size() << " checks passed\n";

    if (!cfg.report_path.empty()) {
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const auto& r : results)
            doc.push_back({{"name", r.name},
                           {"passed", r.passed},
                           {"measured", r.measured},
                           {"tolerance", r.tolerance},
                           {"detail", r.detail},
                           {"seconds", r.seconds}});
        std::ofstream out(cfg.report_path);
        if (!out) {
            std::cerr << "pasv-lab validate: cannot open '" << cfg.report_path << "'\n";
            return kExitNumerical;
        }
        out << doc.dump(2) << '\n';
    }
    return failures == 0 ? 0 : kExitValidation;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Photon-added squeezed vacuum: Wigner functions, photon "
                 "statistics and thermal-channel decoherence"};
    app.require_subcommand(1);

    WignerConfig wig;
    auto* wigner_cmd = app.add_subcommand(
        "wigner", "Sample the Wigner function on a grid and report negativity");
    wigner_cmd->add_option("--r,--squeezing", wig.r, "Squeezing parameter r >= 0");
    wigner_cmd->add_option("--m,--photons-added", wig.m, "Number of added photons");
    wigner_cmd->add_option("--kt,--decay-time", wig.kt,
                           "Dimensionless decay time (0 = no channel)");
    wigner_cmd->add_option("--nbar,--thermal-nbar", wig.nbar,
                           "Mean thermal photon number of the bath");
    wigner_cmd->add_option("--qmin", wig.q_min, "Grid lower q bound");
    wigner_cmd->add_option("--qmax", wig.q_max, "Grid upper q bound");
    wigner_cmd->add_option("--pmin", wig.p_min, "Grid lower p bound");
    wigner_cmd->add_option("--pmax", wig.p_max, "Grid upper p bound");
    wigner_cmd->add_option("--nq", wig.nq, "Grid points along q");
    wigner_cmd->add_option("--np", wig.np, "Grid points along p");
    wigner_cmd->add_option("--out", wig.out, "Output file for the grid");
    wigner_cmd->add_option("--format", wig.format, "Grid file format: csv or json");
    wigner_cmd->add_option("--report", wig.report_path,
                           "Also write the negativity report here (.json or .csv)");

    QparamConfig qp;
    auto* qparam_cmd =
        app.add_subcommand("qparam", "Mandel Q parameter as a function of r");
    qparam_cmd->add_option("--m,--photons-added", qp.ms,
                           "Photon-added counts to sweep (repeatable)");
    qparam_cmd->add_option("--r-min", qp.r_min, "Lower end of the r sweep");
    qparam_cmd->add_option("--r-max", qp.r_max, "Upper end of the r sweep");
    qparam_cmd->add_option("--steps", qp.steps, "Number of sample points");
    qparam_cmd->add_option("--out", qp.out, "Output CSV path");

    ThresholdConfig th;
    auto* threshold_cmd = app.add_subcommand(
        "threshold", "Decay time at which the Wigner function loses negativity");
    threshold_cmd->add_option("--m,--photons-added", th.m, "Number of added photons");
    threshold_cmd->add_option("--nbar,--thermal-nbar", th.nbar,
                              "Mean thermal photon number of the bath");
    threshold_cmd->add_option("--r,--squeezing", th.r,
                              "Squeezing parameter for the grid scan");
    threshold_cmd->add_flag("--numeric", th.numeric,
                            "Also bisect the grid-minimum zero crossing");

    ValidateConfig val;
    auto* validate_cmd = app.add_subcommand(
        "validate", "Run the full numeric validation suite");
    validate_cmd->add_flag("--quick", val.options.quick,
                           "Reduced sweeps (m <= 2, single r), about a minute");
    validate_cmd->add_option("--tol-wigner", val.options.tol_wigner,
                             "Ideal-state Wigner vs oracle tolerance");
    validate_cmd->add_option("--tol-evolved", val.options.tol_evolved,
                             "Evolved Wigner vs channel oracle tolerance");
    validate_cmd->add_option("--tol-identity", val.options.tol_identity,
                             "Polynomial identity tolerance");
    validate_cmd->add_option("--tol-quadrature", val.options.tol_quadrature,
                             "Grid normalization tolerance");
    validate_cmd->add_option("--report", val.report_path, "Write a JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (wigner_cmd->parsed()) return cmd_wigner(wig);
        if (qparam_cmd->parsed()) return cmd_qparam(qp);
        if (threshold_cmd->parsed()) return cmd_threshold(th);
        if (validate_cmd->parsed()) return cmd_validate(val);
    } catch (const std::exception& e) {
        std::cerr << "pasv-lab: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}
