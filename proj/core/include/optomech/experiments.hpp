#pragma once

#include "optomech/model.hpp"
#include "optomech/response.hpp"
#include "optomech/steady_state.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace optomech {

// Everything needed to bit-reproduce a sweep (the axis is stored alongside).
struct ConfigSnapshot {
    SystemParams params;
    DriveConfig drive;
    SolverOptions solver;

    bool operator==(const ConfigSnapshot&) const = default;
};

struct PointDiagnostics {
    double residual = 0.0;
    int branch_count = 0;
    bool ok = true;
    std::string message;
};

struct Column {
    std::string name;
    std::vector<double> values;
};

struct SweepResult {
    std::string label;
    std::string axis_name;
    std::vector<double> axis_values;
    std::vector<Column> columns;   // each sized like axis_values
    ConfigSnapshot config;
    // One entry per axis point for power sweeps; a single entry for spectra
    // (one steady-state solve serves the whole grid).
    std::vector<PointDiagnostics> diagnostics;

    // Throws std::out_of_range for an unknown name.
    const std::vector<double>& column(std::string_view name) const;
    bool has_column(std::string_view name) const noexcept;
};

// Column names.
namespace col {
inline constexpr std::string_view t_re = "t_re";
inline constexpr std::string_view t_im = "t_im";
inline constexpr std::string_view abs_t = "abs_t";
inline constexpr std::string_view abs_t2 = "abs_t2";
inline constexpr std::string_view phase_t = "phase_t";
inline constexpr std::string_view tau_g_t = "tau_g_t";
inline constexpr std::string_view tau_g_r = "tau_g_r";
inline constexpr std::string_view n_1 = "n_1";
inline constexpr std::string_view n_2 = "n_2";
inline constexpr std::string_view gamma_eff = "gamma_eff";
}  // namespace col

inline constexpr std::string_view kAxisDeltaP = "delta_p_rad_s";
inline constexpr std::string_view kAxisPLeft = "p_left_w";

// Broad window [-3 kappa_1, 3 kappa_1] (4001 points) plus dense windows of
// 2001 points and width 20 gamma around the mechanical sideband nearest
// Delta_p = 0, for gamma = gamma_eff and, when smaller, the net mechanical
// damping estimate (needed for blue-sideband gain windows).
ProbeGrid default_probe_grid(const SystemParams& params, const DriveConfig& drive,
                             const SteadyState& steady);

// Just the dense windows of default_probe_grid.
std::vector<ProbeGrid> refinement_windows(const SystemParams& params, const DriveConfig& drive,
                                          const SteadyState& steady);

// Logarithmic, 200 points per decade over [1 nW, 20 uW]; both ends included.
std::vector<double> default_power_grid();
std::vector<double> log_power_grid(double p_min, double p_max, int points_per_decade);

// One steady-state solve, then t over the grid. Columns t_re, t_im, abs_t,
// abs_t2, phase_t.
SweepResult spectrum_sweep(const SystemParams& params, const DriveConfig& drive,
                           const ProbeGrid& grid, const SolverOptions& opts = {});

// For each left pump power: re-solve, then tau_g at Delta_p = 0. Columns
// tau_g_t or tau_g_r, n_1, n_2, gamma_eff. Points whose solve fails become
// NaN and are flagged in diagnostics; the sweep continues.
SweepResult power_sweep_delay(const SystemParams& params, const DriveConfig& drive_template,
                              std::span<const double> powers, Channel which,
                              const SolverOptions& opts = {});

// Single-cavity reference: its own cubic steady-state solve and the
// self-energy form of the transmission,
//   t = 1 - kappa_e1 / (kappa_1 + i(D - delta) + Sigma),
//   Sigma = -i G^2 omega_m / (omega_m^2 - delta^2 - i delta gamma_m
//                             + i G^2 omega_m / (kappa_1 - i D - i delta)),
// which shares no code with the two-mode path. Requires p_right == 0.
SweepResult single_mode_oracle_spectrum(const SystemParams& params, const DriveConfig& drive,
                                        const ProbeGrid& grid);

enum class FigureId { fig2, fig3, fig4, fig5 };

FigureId parse_figure_id(std::string_view id);  // throws UsageError
std::string_view to_string(FigureId id) noexcept;

struct FigureOverrides {
    std::optional<ProbeGrid> grid;              // replaces the default spectrum grid
    std::optional<std::vector<double>> powers;  // replaces the fig4 power grid
    SolverOptions solver;
    double p_probe = 1e-9;
};

// Drive configurations of the four figure-level scenarios; one SweepResult
// per panel, labelled for use as a file stem.
//   fig2: red/red, P_R = 0.1 uW, P_L in {0, 0.1, 1, 10} uW
//   fig3: red/red, P_L = 10 uW, P_R = 0.1 uW
//   fig4: P_L sweep of tau_g at Delta_p = 0: (a) P_R = 0.1 uW, (b) P_R = 0,
//         (c) kappa_e1 = 0.6 kappa_1 with P_R = 0, (d) reflection, P_R = 0.1 uW
//   fig5: blue/red, P_L = P_R = 0.1 uW
std::vector<SweepResult> run_figure(FigureId id, const SystemParams& params,
                                    const FigureOverrides& overrides = {});

}  // namespace optomech
