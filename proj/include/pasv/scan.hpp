#ifndef PASV_SCAN_HPP
#define PASV_SCAN_HPP

#include <atomic>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pasv/parallel.hpp"
#include "pasv/pasv_core.hpp"

namespace pasv {

struct ChannelParams; // thermal_channel.hpp

/// Rectangular uniform (q, p) sampling window.
struct GridSpec {
    double q_min = -4.0;
    double q_max = 4.0;
    double p_min = -4.0;
    double p_max = 4.0;
    int nq = 201;
    int np = 201;

    void validate() const;

    double dq() const { return (q_max - q_min) / (nq - 1); }
    double dp() const { return (p_max - p_min) / (np - 1); }
    double q(int i) const { return q_min + i * dq(); }
    double p(int j) const { return p_min + j * dp(); }

    /// Symmetric square window [-w, w]^2 with n points per axis.
    static GridSpec square(double w, int n) { return {-w, w, -w, w, n, n}; }
};

/// Sampled real-valued Wigner function, row-major over q then p.
struct WignerGrid {
    GridSpec spec;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * spec.np + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * spec.np + j]; }
};

/// Grid minimum, its location, and the mass of the negative region.
struct NegativityReport {
    double min_value = 0.0;
    PhasePoint argmin{};
    double negative_volume = 0.0;
    double total_integral = 0.0;
};

/// Single-thread reference evaluation: values[i][j] = f(q_i, p_j).
template <class F>
WignerGrid evaluate_grid_serial(F&& f, const GridSpec& spec) {
    spec.validate();
    WignerGrid grid{spec, std::vector<double>(static_cast<std::size_t>(spec.nq) * spec.np)};
    for (int i = 0; i < spec.nq; ++i) {
        const double qi = spec.q(i);
        for (int j = 0; j < spec.np; ++j) grid.at(i, j) = f(qi, spec.p(j));
    }
    return grid;
}

/// Row-parallel evaluation. Every cell is written independently, so the
/// result is bit-identical to the serial reference for any worker count.
/// Domain errors from f are re-thrown with the grid coordinate attached.
template <class F>
WignerGrid evaluate_grid(F&& f, const GridSpec& spec) {
    spec.validate();
    WignerGrid grid{spec, std::vector<double>(static_cast<std::size_t>(spec.nq) * spec.np)};
    std::atomic<bool> failed{false};
    std::string first_error;
#ifdef _OPENMP
#pragma omp parallel for num_threads(worker_count()) schedule(static)
#endif
    for (int i = 0; i < spec.nq; ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        const double qi = spec.q(i);
        for (int j = 0; j < spec.np; ++j) {
            try {
                grid.at(i, j) = f(qi, spec.p(j));
            } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical(pasv_evaluate_grid_error)
#endif
                {
                    if (!failed.exchange(true))
                        first_error = "evaluate_grid at (q=" + std::to_string(qi) +
                                      ", p=" + std::to_string(spec.p(j)) + "): " + e.what();
                }
                break;
            }
        }
    }
    if (failed) throw std::domain_error(first_error);
    return grid;
}

/// Trapezoid-rule double integral of the grid.
double integrate(const WignerGrid& grid);

/// Minimum, argmin and masked-quadrature negative volume.
NegativityReport negativity(const WignerGrid& grid);

/// Thermal-channel evolution of a sampled Wigner function by quadrature of
/// the Gaussian convolution kernel, evaluated on out_spec. The input window
/// must be padded so the kernel mass falling outside it stays below 1e-8
/// for every output point.
WignerGrid convolve_thermal(const WignerGrid& initial, const ChannelParams& ch,
                            const GridSpec& out_spec);
WignerGrid convolve_thermal(const WignerGrid& initial, const ChannelParams& ch);

/// Naive direct-quadrature reference for convolve_thermal (single thread).
WignerGrid convolve_thermal_direct(const WignerGrid& initial, const ChannelParams& ch,
                                   const GridSpec& out_spec);

enum class ExportFormat { csv, json };

/// Writes `q,p,w` rows (CSV, 17 significant digits) or a JSON document with
/// the grid spec, flat values and a metadata block. Byte-stable across runs.
void export_grid(const WignerGrid& grid, ExportFormat format,
                 const std::filesystem::path& path,
                 const std::vector<std::pair<std::string, double>>& metadata = {});

void export_report(const NegativityReport& report, ExportFormat format,
                   const std::filesystem::path& path);

WignerGrid import_grid_csv(const std::filesystem::path& path);
WignerGrid import_grid_json(const std::filesystem::path& path);

} // namespace pasv

#endif
