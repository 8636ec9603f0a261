#include "optomech/experiments.hpp"

#include "optomech/errors.hpp"
#include "optomech/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace optomech {

namespace {

constexpr double kMicroWatt = 1e-6;
constexpr std::size_t kBroadPoints = 4001;
constexpr std::size_t kDensePoints = 2001;
constexpr double kDenseWidthInLinewidths = 20.0;

// Callers reserve r.columns first: the returned reference must survive later pushes.
std::vector<double>& add_column(SweepResult& r, std::string_view name, std::size_t n) {
    r.columns.push_back({std::string(name), std::vector<double>(n)});
    return r.columns.back().values;
}

PointDiagnostics diagnostics_of(const SteadyState& s) {
    return {s.residual, s.branch_count, true, {}};
}

void fill_spectrum_columns(SweepResult& r, const std::vector<cdouble>& t) {
    const std::size_t n = t.size();
    r.columns.reserve(r.columns.size() + 5);
    auto& re = add_column(r, col::t_re, n);
    auto& im = add_column(r, col::t_im, n);
    auto& mag = add_column(r, col::abs_t, n);
    auto& mag2 = add_column(r, col::abs_t2, n);
    auto& phase = add_column(r, col::phase_t, n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = t[i].real();
        im[i] = t[i].imag();
        mag[i] = std::abs(t[i]);
        mag2[i] = std::norm(t[i]);
        phase[i] = principal_phase(t[i]);
    }
}

SweepResult spectrum_shell(const SystemParams& params, const DriveConfig& drive,
                           const ProbeGrid& grid, const SolverOptions& opts) {
    SweepResult r;
    r.axis_name = std::string(kAxisDeltaP);
    r.axis_values = grid.detunings();
    r.config = {params, drive, opts};
    return r;
}

}  // namespace

const std::vector<double>& SweepResult::column(std::string_view name) const {
    for (const auto& c : columns) {
        if (c.name == name) return c.values;
    }
    throw std::out_of_range("SweepResult has no column '" + std::string(name) + "'");
}

bool SweepResult::has_column(std::string_view name) const noexcept {
    return std::any_of(columns.begin(), columns.end(),
                       [&](const Column& c) { return c.name == name; });
}

std::vector<ProbeGrid> refinement_windows(const SystemParams& params, const DriveConfig& drive,
                                          const SteadyState& steady) {
    std::vector<ProbeGrid> windows;
    // Mechanical sideband closest to Delta_p = 0 (delta = +/- omega_m).
    const double center = (drive.delta_1 >= 0.0 ? params.omega_m : -params.omega_m) - drive.delta_1;
    auto add_window = [&](double width) {
        const double half = 0.5 * kDenseWidthInLinewidths * width;
        windows.push_back(ProbeGrid::linspace(center - half, center + half, kDensePoints));
    };

    const double gamma_m = params.gamma_m();
    const auto lw = effective_linewidth(params, steady);
    add_window(lw.gamma_eff);

    // Red-detuned pumps damp the resonator, blue-detuned ones anti-damp it.
    const double c2 = params.g_2 * params.g_2 * steady.n_2 / (params.kappa_2 * gamma_m);
    const double s1 = steady.delta_1_eff >= 0.0 ? 1.0 : -1.0;
    const double s2 = steady.delta_2_eff >= 0.0 ? 1.0 : -1.0;
    const double gamma_net =
        std::max(gamma_m * std::abs(1.0 + s1 * lw.cooperativity_1 + s2 * c2), 1e-3 * gamma_m);
    if (gamma_net < lw.gamma_eff) add_window(gamma_net);
    return windows;
}

ProbeGrid default_probe_grid(const SystemParams& params, const DriveConfig& drive,
                             const SteadyState& steady) {
    std::vector<ProbeGrid> parts = refinement_windows(params, drive, steady);
    parts.push_back(ProbeGrid::linspace(-3.0 * params.kappa_1, 3.0 * params.kappa_1, kBroadPoints));
    return ProbeGrid::merge(parts);
}

std::vector<double> log_power_grid(double p_min, double p_max, int points_per_decade) {
    if (!(p_min > 0.0) || !(p_max >= p_min) || points_per_decade < 1) {
        throw InvalidParameter("power grid needs 0 < p_min <= p_max and points_per_decade >= 1");
    }
    std::vector<double> powers;
    for (int i = 0;; ++i) {
        const double p = p_min * std::pow(10.0, static_cast<double>(i) / points_per_decade);
        if (p >= p_max * (1.0 - 1e-12)) break;
        powers.push_back(p);
    }
    powers.push_back(p_max);
    return powers;
}

std::vector<double> default_power_grid() {
    return log_power_grid(1e-9, 20e-6, 200);
}

SweepResult spectrum_sweep(const SystemParams& params, const DriveConfig& drive,
                           const ProbeGrid& grid, const SolverOptions& opts) {
    const SteadyState steady = solve_steady_state(params, drive, opts);
    SweepResult r = spectrum_shell(params, drive, grid, opts);
    std::vector<cdouble> t(grid.size());
    const auto& dp = grid.detunings();
    for (std::size_t i = 0; i < dp.size(); ++i) {
        t[i] = transmission(params, steady, delta_probe_to_delta(dp[i], drive.delta_1));
    }
    fill_spectrum_columns(r, t);
    r.diagnostics.push_back(diagnostics_of(steady));
    return r;
}

SweepResult power_sweep_delay(const SystemParams& params, const DriveConfig& drive_template,
                              std::span<const double> powers, Channel which,
                              const SolverOptions& opts) {
    if (powers.empty()) throw InvalidParameter("power sweep needs at least one power");
    for (double p : powers) {
        if (!(p >= 0.0)) throw InvalidParameter("power sweep powers must be >= 0");
    }
    SweepResult r;
    r.axis_name = std::string(kAxisPLeft);
    r.axis_values.assign(powers.begin(), powers.end());
    r.config = {params, drive_template, opts};

    const std::size_t n = powers.size();
    r.columns.reserve(4);
    auto& tau = add_column(r, which == Channel::transmission ? col::tau_g_t : col::tau_g_r, n);
    auto& n1 = add_column(r, col::n_1, n);
    auto& n2 = add_column(r, col::n_2, n);
    auto& gamma_eff = add_column(r, col::gamma_eff, n);
    r.diagnostics.resize(n);

    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n; ++i) {
        DriveConfig drive = drive_template;
        drive.p_left = powers[i];
        try {
            const SteadyState s = solve_steady_state(params, drive, opts);
            n1[i] = s.n_1;
            n2[i] = s.n_2;
            gamma_eff[i] = effective_linewidth(params, s).gamma_eff;
            r.diagnostics[i] = diagnostics_of(s);
            tau[i] = group_delay(params, s, delta_probe_to_delta(0.0, drive.delta_1), which);
        } catch (const ConvergenceError& e) {
            tau[i] = n1[i] = n2[i] = gamma_eff[i] = nan;
            r.diagnostics[i] = {e.best_residual(), 0, false, e.what()};
        } catch (const DegenerateAmplitude& e) {
            tau[i] = nan;
            r.diagnostics[i].ok = false;
            r.diagnostics[i].message = e.what();
        }
    }
    return r;
}

SweepResult single_mode_oracle_spectrum(const SystemParams& params, const DriveConfig& drive,
                                        const ProbeGrid& grid) {
    validate(params);
    validate(drive, params);
    if (drive.p_right != 0.0) {
        throw InvalidParameter("single-mode reference requires p_right == 0");
    }
    const double kappa = params.kappa_1;
    const double kappa_e = params.kappa_e1;
    const double om = params.omega_m;
    const double gamma = params.gamma_m();
    const double hbar_omega = PhysConstants::hbar * (params.omega_1 - drive.delta_1);
    const double source = kappa_e * 2.0 * drive.p_left * kappa / hbar_omega;

    // n ((Delta - beta n)^2 + kappa^2) = source, beta = 2 g^2 / omega_m.
    // The lowest non-negative root is the one reached from zero power.
    const double beta = 2.0 * params.g_1 * params.g_1 / om;
    const double delta = drive.delta_1;
    double n = source / (kappa * kappa + delta * delta);
    if (beta > 0.0 && source > 0.0) {
        const auto roots = numeric::real_cubic_roots(beta * beta, -2.0 * delta * beta,
                                                     kappa * kappa + delta * delta, -source);
        auto it = std::find_if(roots.begin(), roots.end(), [](double x) { return x >= 0.0; });
        if (it == roots.end()) throw Error("single-mode reference: no non-negative photon number");
        n = *it;
    }
    const double detuning = delta - beta * n;
    const double g2n = params.g_1 * params.g_1 * n;

    SweepResult r = spectrum_shell(params, drive, grid, SolverOptions{});
    const auto& dp = grid.detunings();
    std::vector<cdouble> t(dp.size());
    const cdouble i_unit(0.0, 1.0);
    for (std::size_t k = 0; k < dp.size(); ++k) {
        const double d = delta_probe_to_delta(dp[k], delta);
        const cdouble chi_inv((om - d) * (om + d), -d * gamma);
        const cdouble lower(kappa, -(detuning + d));
        const cdouble sigma = -i_unit * g2n * om / (chi_inv + i_unit * g2n * om / lower);
        t[k] = 1.0 - kappa_e / (cdouble(kappa, detuning - d) + sigma);
    }
    fill_spectrum_columns(r, t);
    r.diagnostics.push_back({0.0, 1, true, "single-mode closed form"});
    return r;
}

FigureId parse_figure_id(std::string_view id) {
    if (id == "fig2") return FigureId::fig2;
    if (id == "fig3") return FigureId::fig3;
    if (id == "fig4") return FigureId::fig4;
    if (id == "fig5") return FigureId::fig5;
    throw UsageError("unknown figure '" + std::string(id) + "' (expected fig2, fig3, fig4 or fig5)");
}

std::string_view to_string(FigureId id) noexcept {
    switch (id) {
        case FigureId::fig2: return "fig2";
        case FigureId::fig3: return "fig3";
        case FigureId::fig4: return "fig4";
        case FigureId::fig5: return "fig5";
    }
    return "unknown";
}

std::vector<SweepResult> run_figure(FigureId id, const SystemParams& params,
                                    const FigureOverrides& ov) {
    validate(params);
    const double wm = params.omega_m;

    auto spectrum_panel = [&](const SystemParams& p, const DriveConfig& drive, std::string label) {
        const SteadyState steady = solve_steady_state(p, drive, ov.solver);
        const ProbeGrid grid = ov.grid ? *ov.grid : default_probe_grid(p, drive, steady);
        SweepResult r = spectrum_sweep(p, drive, grid, ov.solver);
        r.label = std::move(label);
        return r;
    };
    auto delay_panel = [&](const SystemParams& p, const DriveConfig& drive, Channel which,
                           std::string label) {
        const std::vector<double> powers = ov.powers ? *ov.powers : default_power_grid();
        SweepResult r = power_sweep_delay(p, drive, powers, which, ov.solver);
        r.label = std::move(label);
        return r;
    };

    std::vector<SweepResult> panels;
    switch (id) {
        case FigureId::fig2: {
            const std::array<std::pair<double, const char*>, 4> powers{{
                {0.0, "fig2_PL0uW"},
                {0.1 * kMicroWatt, "fig2_PL0.1uW"},
                {1.0 * kMicroWatt, "fig2_PL1uW"},
                {10.0 * kMicroWatt, "fig2_PL10uW"},
            }};
            for (const auto& [p_left, label] : powers) {
                const DriveConfig drive{p_left, 0.1 * kMicroWatt, ov.p_probe, wm, wm};
                panels.push_back(spectrum_panel(params, drive, label));
            }
            break;
        }
        case FigureId::fig3: {
            const DriveConfig drive{10.0 * kMicroWatt, 0.1 * kMicroWatt, ov.p_probe, wm, wm};
            panels.push_back(spectrum_panel(params, drive, "fig3_PL10uW"));
            break;
        }
        case FigureId::fig4: {
            const DriveConfig with_right{0.0, 0.1 * kMicroWatt, ov.p_probe, wm, wm};
            const DriveConfig no_right{0.0, 0.0, ov.p_probe, wm, wm};
            SystemParams over_coupled = params;
            over_coupled.kappa_e1 = 0.6 * params.kappa_1;
            panels.push_back(delay_panel(params, with_right, Channel::transmission, "fig4a_PR0.1uW"));
            panels.push_back(delay_panel(params, no_right, Channel::transmission, "fig4b_PR0uW"));
            panels.push_back(delay_panel(over_coupled, no_right, Channel::transmission,
                                         "fig4c_ke0.6_PR0uW"));
            panels.push_back(delay_panel(params, with_right, Channel::reflection,
                                         "fig4d_reflection_PR0.1uW"));
            break;
        }
        case FigureId::fig5: {
            const DriveConfig drive{0.1 * kMicroWatt, 0.1 * kMicroWatt, ov.p_probe, -wm, wm};
            panels.push_back(spectrum_panel(params, drive, "fig5_PL0.1uW_PR0.1uW"));
            break;
        }
    }
    return panels;
}

}  // namespace optomech
