#pragma once

// Linear probe response around a solved steady state.
//
// All functions take the probe-pump detuning delta = omega_p - omega_L
// (see delta_probe_to_delta) and never form absolute optical frequency
// differences.

#include "optomech/model.hpp"
#include "optomech/steady_state.hpp"

#include <complex>
#include <optional>

namespace optomech {

using cdouble = std::complex<double>;

enum class Channel { transmission, reflection };

struct ResponsePoint {
    double delta_p = 0.0;
    cdouble t;
    cdouble r;
    double phase_t = 0.0;  // arg(t) in (-pi, pi]
    std::optional<double> group_delay_t;
    std::optional<double> group_delay_r;
};

struct EffectiveLinewidth {
    double cooperativity_1 = 0.0;  // g1^2 n1 / (kappa_1 gamma_m)
    double gamma_eff = 0.0;        // gamma_m (1 + C1)
};

// d(delta) = sum_k 2 D_k g_k^2 n_k / ((kappa_k - i delta)^2 + D_k^2)
//            - (omega_m^2 - delta^2 - i delta gamma_m) / omega_m,
// with D_k the effective detunings.
cdouble mech_denominator(const SystemParams& params, const SteadyState& steady, double delta);

// Upper-sideband intracavity amplitude a_{1+}. Requires drive.p_probe > 0.
cdouble upper_sideband(const SystemParams& params, const DriveConfig& drive,
                       const SteadyState& steady, double delta);

// t = (E_p - sqrt(kappa_e1) a_{1+}) / E_p; independent of the probe power.
cdouble transmission(const SystemParams& params, const SteadyState& steady, double delta);

// r = sqrt(kappa_e1) a_{1+} / E_p, so that r + t = 1.
cdouble reflection(const SystemParams& params, const SteadyState& steady, double delta);

// arg(t) folded into (-pi, pi].
double principal_phase(cdouble z) noexcept;

// Default finite-difference step: gamma_eff / 50, clamped below by
// 1e3 * eps * omega_m.
double default_delay_step(const SystemParams& params, const SteadyState& steady);

// tau_g = d arg(s) / d omega_p = Im[s'/s] with a central difference of the
// given step. Throws DegenerateAmplitude if |s(delta)| < 1e-15.
double group_delay(const SystemParams& params, const SteadyState& steady, double delta,
                   Channel which, double step);
double group_delay(const SystemParams& params, const SteadyState& steady, double delta,
                   Channel which);

EffectiveLinewidth effective_linewidth(const SystemParams& params, const SteadyState& steady);

ResponsePoint evaluate_point(const SystemParams& params, const DriveConfig& drive,
                             const SteadyState& steady, double delta_p, bool with_delay);

}  // namespace optomech
