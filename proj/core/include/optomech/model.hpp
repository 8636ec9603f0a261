#pragma once

// Domain types shared by every module: device constants, drive settings,
// probe grids and unit conversions.
//
// Unit convention: every frequency-like quantity is an angular rate in rad/s.
// Ordinary frequencies (Hz) only appear at the configuration boundary and are
// converted with hz_to_rad().

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace optomech {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct PhysConstants {
    static constexpr double hbar = 1.054571817e-34;  // J s, CODATA 2018
};

constexpr double hz_to_rad(double hz) noexcept { return kTwoPi * hz; }
constexpr double rad_to_hz(double rad_per_s) noexcept { return rad_per_s / kTwoPi; }

// Fixed constants of the two-cavity device. Plain aggregate; call validate()
// before use (all library entry points do).
struct SystemParams {
    double omega_1 = 0.0;   // optical cavity 1 resonance
    double omega_2 = 0.0;   // optical cavity 2 resonance
    double kappa_1 = 0.0;   // total linewidths
    double kappa_2 = 0.0;
    double kappa_e1 = 0.0;  // external (waveguide) decay rates
    double kappa_e2 = 0.0;
    double omega_m = 0.0;   // mechanical frequency
    double q_m = 0.0;       // mechanical quality factor
    double g_1 = 0.0;       // single-photon optomechanical couplings
    double g_2 = 0.0;

    double gamma_m() const noexcept { return omega_m / q_m; }

    // omega_m above both optical linewidths (good-cavity limit). A violation
    // is reported by the CLI as a warning only.
    bool resolved_sideband() const noexcept { return omega_m > kappa_1 && omega_m > kappa_2; }

    bool operator==(const SystemParams&) const = default;
};

// Throws InvalidParameter naming the offending field. Couplings may be zero
// (decoupled cavity); every other rate must be strictly positive.
void validate(const SystemParams& params);

struct DriveConfig {
    double p_left = 0.0;    // W, pump on cavity 1
    double p_right = 0.0;   // W, pump on cavity 2
    double p_probe = 0.0;   // W, weak probe on cavity 1
    double delta_1 = 0.0;   // omega_1 - omega_L
    double delta_2 = 0.0;   // omega_2 - omega_R

    double omega_left(const SystemParams& p) const noexcept { return p.omega_1 - delta_1; }
    double omega_right(const SystemParams& p) const noexcept { return p.omega_2 - delta_2; }

    bool operator==(const DriveConfig&) const = default;
};

void validate(const DriveConfig& drive, const SystemParams& params);

// Ordered probe-cavity detunings (omega_p - omega_1). Strictly increasing and
// non-empty by construction.
class ProbeGrid {
public:
    explicit ProbeGrid(std::vector<double> detunings);

    static ProbeGrid linspace(double lo, double hi, std::size_t points);

    // Sorted union of several grids; coincident points are kept once.
    static ProbeGrid merge(std::span<const ProbeGrid> grids);

    const std::vector<double>& detunings() const noexcept { return detunings_; }
    std::size_t size() const noexcept { return detunings_.size(); }
    double front() const noexcept { return detunings_.front(); }
    double back() const noexcept { return detunings_.back(); }

    bool operator==(const ProbeGrid&) const = default;

private:
    std::vector<double> detunings_;
};

// |E| = sqrt(2 P kappa / (hbar omega)) for a laser of angular frequency omega.
double drive_amplitude(double power, double kappa, double omega_laser);

// Probe-pump detuning delta = omega_p - omega_L from the probe-cavity
// detuning Delta_p = omega_p - omega_1.
constexpr double delta_probe_to_delta(double delta_p, double delta_1) noexcept {
    return delta_p + delta_1;
}

// Nominal frequencies and linewidths of the silicon optomechanical-crystal
// device (omega_1 = 2pi x 205.3 THz, ... , Q_m = 87e3).
//
// kappa_2 is taken as 2pi x 1.73 GHz. Set kappa_2 = 1.73e9 rad/s explicitly
// to use the literal reading without the 2pi.
//
// g_1 = 2pi x 71 Hz and g_2 = 2pi x 10 Hz are calibration defaults, not
// measured values. They are sized for the drive normalisation of
// drive_amplitude(), which carries an extra factor 2 kappa relative to the
// photon-flux convention, and place the blue/red amplification peak near
// |t| = 1.3.
SystemParams nominal_params();

}  // namespace optomech
