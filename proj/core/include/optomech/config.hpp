#pragma once

// Run configuration: a sectioned key = value text format.
//
//   # comment
//   [system]
//   omega_m_hz = 4e9
//   g_1_hz = 71
//   [drive]
//   p_left_w = 1e-5
//
// Frequencies carry an `_hz` suffix and are ordinary frequencies; the 2 pi
// factor is applied once, when the RunConfig is resolved into SystemParams.
// Powers carry `_w`. Unknown sections or keys are an error.

#include "optomech/experiments.hpp"
#include "optomech/model.hpp"
#include "optomech/response.hpp"
#include "optomech/steady_state.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace optomech {

enum class OutputFormat { csv, json };

enum class Profile { nominal, none };

// [system] as written in the file. Unset entries fall back to the nominal
// device profile (or are required when profile = none).
struct SystemInputs {
    Profile profile = Profile::nominal;
    std::optional<double> omega_1_hz, omega_2_hz;
    std::optional<double> kappa_1_hz, kappa_2_hz;
    std::optional<double> kappa_e1_hz, kappa_e2_hz;  // default 0.2 kappa_1, 0.42 kappa_2
    std::optional<double> omega_m_hz;
    std::optional<double> q_m;
    std::optional<double> g_1_hz, g_2_hz;

    bool operator==(const SystemInputs&) const = default;
};

struct DriveInputs {
    double p_left_w = 1e-6;
    double p_right_w = 1e-7;
    double p_probe_w = 1e-9;
    std::optional<double> delta_1_hz, delta_2_hz;  // default omega_m (red sideband)

    bool operator==(const DriveInputs&) const = default;
};

struct GridInputs {
    std::optional<double> delta_p_min_hz, delta_p_max_hz;  // default -/+ 3 kappa_1
    int points = 4001;
    bool refine = true;

    bool operator==(const GridInputs&) const = default;
};

struct SweepInputs {
    double p_min_w = 1e-9;
    double p_max_w = 20e-6;
    int points_per_decade = 200;
    Channel channel = Channel::transmission;

    bool operator==(const SweepInputs&) const = default;
};

struct RunConfig {
    SystemInputs system;
    DriveInputs drive_inputs;
    GridInputs grid;
    SweepInputs sweep;
    SolverOptions solver;
    OutputFormat format = OutputFormat::csv;
    std::optional<std::string> output_dir;

    // Resolved, validated values in rad/s.
    SystemParams params;
    DriveConfig drive;

    // Human-readable provenance, e.g. for defaulted couplings.
    std::vector<std::string> notes;

    bool operator==(const RunConfig&) const = default;
};

// Throws ConfigError naming the key and the violated constraint.
RunConfig parse_config(std::string_view text);

// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

// Spectrum grid requested by the config, refined around the steady state
// when grid.refine is set.
ProbeGrid probe_grid_for(const RunConfig& config, const SteadyState& steady);

std::vector<double> power_grid_for(const RunConfig& config);

std::string_view to_string(OutputFormat f) noexcept;
std::string_view to_string(Channel c) noexcept;
std::string_view to_string(CouplingSign s) noexcept;

}  // namespace optomech
