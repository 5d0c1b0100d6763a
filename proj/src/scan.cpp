#include "pasv/scan.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pasv/detail/numerics.hpp"
#include "pasv/errors.hpp"
#include "pasv/thermal_channel.hpp"

namespace pasv {

namespace {

double trapezoid_weight(int i, int n, double h) {
    return (i == 0 || i == n - 1) ? 0.5 * h : h;
}

} // namespace

void GridSpec::validate() const {
    if (!(q_min < q_max) || !(p_min < p_max))
        throw std::domain_error("GridSpec: window bounds must be ordered");
    if (nq < 3 || np < 3)
        throw std::domain_error("GridSpec: need at least 3 points per axis");
    if (!std::isfinite(q_min) || !std::isfinite(q_max) || !std::isfinite(p_min) ||
        !std::isfinite(p_max))
        throw std::domain_error("GridSpec: nonfinite window");
}

double integrate(const WignerGrid& grid) {
    const GridSpec& s = grid.spec;
    const double dq = s.dq();
    const double dp = s.dp();
    std::vector<double> weighted(grid.values.size());
    for (int i = 0; i < s.nq; ++i) {
        const double wq = trapezoid_weight(i, s.nq, dq);
        for (int j = 0; j < s.np; ++j)
            weighted[static_cast<std::size_t>(i) * s.np + j] =
                wq * trapezoid_weight(j, s.np, dp) * grid.at(i, j);
    }
    return detail::pairwise_sum(weighted);
}

NegativityReport negativity(const WignerGrid& grid) {
    const GridSpec& s = grid.spec;
    NegativityReport report;
    report.min_value = grid.values.front();
    report.argmin = {s.q(0), s.p(0)};
    for (int i = 0; i < s.nq; ++i)
        for (int j = 0; j < s.np; ++j)
            if (grid.at(i, j) < report.min_value) {
                report.min_value = grid.at(i, j);
                report.argmin = {s.q(i), s.p(j)};
            }

    const double dq = s.dq();
    const double dp = s.dp();
    std::vector<double> masked(grid.values.size(), 0.0);
    for (int i = 0; i < s.nq; ++i) {
        const double wq = trapezoid_weight(i, s.nq, dq);
        for (int j = 0; j < s.np; ++j) {
            const double v = grid.at(i, j);
            if (v < 0.0)
                masked[static_cast<std::size_t>(i) * s.np + j] =
                    -v * wq * trapezoid_weight(j, s.np, dp);
        }
    }
    report.negative_volume = detail::pairwise_sum(masked);
    report.total_integral = integrate(grid);
    return report;
}

namespace {

struct ConvolutionSetup {
    double decay;   // e^{-kt}
    double tau;     // (2 nbar + 1)(1 - e^{-2 kt})
};

ConvolutionSetup convolution_setup(const WignerGrid& initial, const ChannelParams& ch,
                                   const GridSpec& out_spec) {
    if (!(ch.kt > 0.0))
        throw std::domain_error("convolve_thermal: requires kt > 0");
    initial.spec.validate();
    out_spec.validate();
    const double decay = std::exp(-ch.kt);
    const double tau = (2.0 * ch.nbar + 1.0) * -std::expm1(-2.0 * ch.kt);

    // Kernel mass escaping the input window, for the worst output point.
    // One-sided 1D mass beyond a margin d is erfc(d * e^{-kt} / sqrt(tau))/2.
    // The neglected contribution is bounded by that fraction times the
    // integrand magnitude at the window edge, so a state that has already
    // decayed there is fine even under a very wide kernel.
    const GridSpec& in = initial.spec;
    double leak = 0.0;
    const auto side = [&](double in_edge, double out_edge) {
        const double margin = in_edge - out_edge / decay;
        leak += 0.5 * std::erfc(margin * decay / std::sqrt(tau));
    };
    side(in.q_max, out_spec.q_max);
    side(-in.q_min, -out_spec.q_min);
    side(in.p_max, out_spec.p_max);
    side(-in.p_min, -out_spec.p_min);

    double boundary_max = 0.0;
    for (int i = 0; i < in.nq; ++i) {
        boundary_max = std::max(boundary_max, std::abs(initial.at(i, 0)));
        boundary_max = std::max(boundary_max, std::abs(initial.at(i, in.np - 1)));
    }
    for (int j = 0; j < in.np; ++j) {
        boundary_max = std::max(boundary_max, std::abs(initial.at(0, j)));
        boundary_max = std::max(boundary_max, std::abs(initial.at(in.nq - 1, j)));
    }

    if (leak * boundary_max > 1e-8)
        throw padding_error(
            "convolve_thermal: kernel leakage past the input window (fraction " +
            std::to_string(leak) + ", boundary magnitude " + std::to_string(boundary_max) +
            ") exceeds 1e-8; widen the input grid");
    return {decay, tau};
}

std::vector<double> kernel_matrix(const GridSpec& in, const GridSpec& out,
                                  bool along_q, double decay, double tau) {
    const int n_out = along_q ? out.nq : out.np;
    const int n_in = along_q ? in.nq : in.np;
    const double h = along_q ? in.dq() : in.dp();
    std::vector<double> k(static_cast<std::size_t>(n_out) * n_in);
    for (int a = 0; a < n_out; ++a) {
        const double c_out = along_q ? out.q(a) : out.p(a);
        for (int i = 0; i < n_in; ++i) {
            const double c_in = along_q ? in.q(i) : in.p(i);
            const double d = c_out - decay * c_in;
            k[static_cast<std::size_t>(a) * n_in + i] =
                std::exp(-d * d / tau) * trapezoid_weight(i, n_in, h);
        }
    }
    return k;
}

} // namespace

WignerGrid convolve_thermal(const WignerGrid& initial, const ChannelParams& ch,
                            const GridSpec& out_spec) {
    const auto [decay, tau] = convolution_setup(initial, ch, out_spec);
    const GridSpec& in = initial.spec;

    const std::vector<double> kq = kernel_matrix(in, out_spec, true, decay, tau);
    const std::vector<double> kp = kernel_matrix(in, out_spec, false, decay, tau);

    // Separable kernel: contract the p axis first, then the q axis.
    std::vector<double> partial(static_cast<std::size_t>(in.nq) * out_spec.np);
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static)
#endif
    for (int i = 0; i < in.nq; ++i)
        for (int b = 0; b < out_spec.np; ++b) {
            double acc = 0.0;
            for (int j = 0; j < in.np; ++j)
                acc += initial.at(i, j) * kp[static_cast<std::size_t>(b) * in.np + j];
            partial[static_cast<std::size_t>(i) * out_spec.np + b] = acc;
        }

    WignerGrid out{out_spec,
                   std::vector<double>(static_cast<std::size_t>(out_spec.nq) * out_spec.np)};
    const double norm = 1.0 / (std::numbers::pi * tau);
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static)
#endif
    for (int a = 0; a < out_spec.nq; ++a)
        for (int b = 0; b < out_spec.np; ++b) {
            double acc = 0.0;
            for (int i = 0; i < in.nq; ++i)
                acc += kq[static_cast<std::size_t>(a) * in.nq + i] *
                       partial[static_cast<std::size_t>(i) * out_spec.np + b];
            out.at(a, b) = norm * acc;
        }
    return out;
}

WignerGrid convolve_thermal(const WignerGrid& initial, const ChannelParams& ch) {
    return convolve_thermal(initial, ch, initial.spec);
}

WignerGrid convolve_thermal_direct(const WignerGrid& initial, const ChannelParams& ch,
                                   const GridSpec& out_spec) {
    const auto [decay, tau] = convolution_setup(initial, ch, out_spec);
    const GridSpec& in = initial.spec;
    const double norm = 1.0 / (std::numbers::pi * tau);

    WignerGrid out{out_spec,
                   std::vector<double>(static_cast<std::size_t>(out_spec.nq) * out_spec.np)};
    for (int a = 0; a < out_spec.nq; ++a)
        for (int b = 0; b < out_spec.np; ++b) {
            double acc = 0.0;
            for (int i = 0; i < in.nq; ++i) {
                const double dq_term = out_spec.q(a) - decay * in.q(i);
                const double wq = trapezoid_weight(i, in.nq, in.dq());
                for (int j = 0; j < in.np; ++j) {
                    const double dp_term = out_spec.p(b) - decay * in.p(j);
                    acc += initial.at(i, j) * wq * trapezoid_weight(j, in.np, in.dp()) *
                           std::exp(-(dq_term * dq_term + dp_term * dp_term) / tau);
                }
            }
            out.at(a, b) = norm * acc;
        }
    return out;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::ordered_json spec_to_json(const GridSpec& s) {
    return {{"q_min", s.q_min}, {"q_max", s.q_max}, {"p_min", s.p_min},
            {"p_max", s.p_max}, {"nq", s.nq},       {"np", s.np}};
}

GridSpec spec_from_json(const nlohmann::ordered_json& j) {
    GridSpec s{j.at("q_min").get<double>(), j.at("q_max").get<double>(),
               j.at("p_min").get<double>(), j.at("p_max").get<double>(),
               j.at("nq").get<int>(),       j.at("np").get<int>()};
    s.validate();
    return s;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace

void export_grid(const WignerGrid& grid, ExportFormat format,
                 const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, double>>& metadata) {
    auto out = open_output(path);
    if (format == ExportFormat::csv) {
        out << "q,p,w\n";
        for (int i = 0; i < grid.spec.nq; ++i)
            for (int j = 0; j < grid.spec.np; ++j)
                out << format_double(grid.spec.q(i)) << ',' << format_double(grid.spec.p(j))
                    << ',' << format_double(grid.at(i, j)) << '\n';
    } else {
        nlohmann::ordered_json doc;
        doc["spec"] = spec_to_json(grid.spec);
        doc["values"] = grid.values;
        doc["metadata"] = nlohmann::ordered_json::object();
        for (const auto& [key, value] : metadata) doc["metadata"][key] = value;
        out << doc.dump(2) << '\n';
    }
    if (!out.good())
        throw std::runtime_error("write failure on '" + path.string() + "'");
}

void export_report(const NegativityReport& report, ExportFormat format,
                   const std::filesystem::path& path) {
    auto out = open_output(path);
    if (format == ExportFormat::csv) {
        out << "min_value,argmin_q,argmin_p,negative_volume,total_integral\n"
            << format_double(report.min_value) << ',' << format_double(report.argmin.q) << ','
            << format_double(report.argmin.p) << ',' << format_double(report.negative_volume)
            << ',' << format_double(report.total_integral) << '\n';
    } else {
        const nlohmann::ordered_json doc{{"min_value", report.min_value},
                                         {"argmin_q", report.argmin.q},
                                         {"argmin_p", report.argmin.p},
                                         {"negative_volume", report.negative_volume},
                                         {"total_integral", report.total_integral}};
        out << doc.dump(2) << '\n';
    }
    if (!out.good())
        throw std::runtime_error("write failure on '" + path.string() + "'");
}

WignerGrid import_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    std::string line;
    if (!std::getline(in, line) || line != "q,p,w")
        throw std::runtime_error("'" + path.string() + "': missing q,p,w header");

    std::vector<double> qs, ps, ws;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double q, p, w;
        char c1, c2;
        if (!(row >> q >> c1 >> p >> c2 >> w) || c1 != ',' || c2 != ',')
            throw std::runtime_error("'" + path.string() + "': malformed row '" + line + "'");
        qs.push_back(q);
        ps.push_back(p);
        ws.push_back(w);
    }
    if (ws.empty()) throw std::runtime_error("'" + path.string() + "': no data rows");

    // Row-major: p cycles fastest; the first q change marks the row length.
    int np = static_cast<int>(ws.size());
    for (std::size_t k = 1; k < qs.size(); ++k)
        if (qs[k] != qs[0]) {
            np = static_cast<int>(k);
            break;
        }
    const int nq = static_cast<int>(ws.size()) / np;
    if (static_cast<std::size_t>(nq) * np != ws.size())
        throw std::runtime_error("'" + path.string() + "': ragged grid");
    GridSpec spec{qs.front(), qs.back(), ps.front(), ps[static_cast<std::size_t>(np) - 1],
                  nq, np};
    spec.validate();
    return {spec, std::move(ws)};
}

WignerGrid import_grid_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    nlohmann::ordered_json doc;
    in >> doc;
    WignerGrid grid{spec_from_json(doc.at("spec")),
                    doc.at("values").get<std::vector<double>>()};
    if (grid.values.size() != static_cast<std::size_t>(grid.spec.nq) * grid.spec.np)
        throw std::runtime_error("'" + path.string() + "': value count does not match spec");
    return grid;
}

} // namespace pasv
