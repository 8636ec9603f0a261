#include "optomech/response.hpp"

#include "optomech/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace optomech {

namespace {

constexpr cdouble kI{0.0, 1.0};

// (kappa - i delta)^2 + D^2 = (kappa + i(D - delta)) (kappa - i(D + delta)),
// factored so that delta ~ D does not cancel.
cdouble lorentz_denominator(double kappa, double detuning, double delta) {
    return cdouble(kappa, detuning - delta) * cdouble(kappa, -(detuning + delta));
}

// Bracket of the transmission: kappa_e1/c - (1/d) i g1^2 n1 kappa_e1 / c^2.
cdouble cavity_emission(const SystemParams& p, const SteadyState& s, double delta) {
    const cdouble c(p.kappa_1, s.delta_1_eff - delta);
    const cdouble d = mech_denominator(p, s, delta);
    const double coupling = p.g_1 * p.g_1 * s.n_1;
    return p.kappa_e1 / c - kI * (coupling * p.kappa_e1) / (d * c * c);
}

cdouble channel_amplitude(const SystemParams& p, const SteadyState& s, double delta, Channel which) {
    return which == Channel::transmission ? transmission(p, s, delta) : reflection(p, s, delta);
}

}  // namespace

cdouble mech_denominator(const SystemParams& p, const SteadyState& s, double delta) {
    const cdouble optical =
        2.0 * s.delta_1_eff * p.g_1 * p.g_1 * s.n_1 /
            lorentz_denominator(p.kappa_1, s.delta_1_eff, delta) +
        2.0 * s.delta_2_eff * p.g_2 * p.g_2 * s.n_2 /
            lorentz_denominator(p.kappa_2, s.delta_2_eff, delta);
    const cdouble mechanical((p.omega_m - delta) * (p.omega_m + delta), -delta * p.gamma_m());
    return optical - mechanical / p.omega_m;
}

cdouble upper_sideband(const SystemParams& p, const DriveConfig& drive, const SteadyState& s,
                       double delta) {
    if (!(drive.p_probe > 0.0)) {
        throw InvalidParameter("upper_sideband: probe power must be > 0");
    }
    const double omega_probe = drive.omega_left(p) + delta;
    const double e_p = drive_amplitude(drive.p_probe, p.kappa_1, omega_probe);
    const double source = std::sqrt(p.kappa_e1) * e_p;
    const cdouble c(p.kappa_1, s.delta_1_eff - delta);
    const cdouble d = mech_denominator(p, s, delta);
    return source / c - kI * (p.g_1 * p.g_1 * s.n_1 * source) / (d * c * c);
}

cdouble transmission(const SystemParams& p, const SteadyState& s, double delta) {
    return 1.0 - cavity_emission(p, s, delta);
}

cdouble reflection(const SystemParams& p, const SteadyState& s, double delta) {
    return cavity_emission(p, s, delta);
}

double principal_phase(cdouble z) noexcept {
    const double phi = std::arg(z);
    return phi == -std::numbers::pi ? std::numbers::pi : phi;
}

EffectiveLinewidth effective_linewidth(const SystemParams& p, const SteadyState& s) {
    EffectiveLinewidth lw;
    lw.cooperativity_1 = p.g_1 * p.g_1 * s.n_1 / (p.kappa_1 * p.gamma_m());
    lw.gamma_eff = p.gamma_m() * (1.0 + lw.cooperativity_1);
    return lw;
}

double default_delay_step(const SystemParams& p, const SteadyState& s) {
    const double floor = 1e3 * std::numeric_limits<double>::epsilon() * p.omega_m;
    return std::max(effective_linewidth(p, s).gamma_eff / 50.0, floor);
}

double group_delay(const SystemParams& p, const SteadyState& s, double delta, Channel which,
                   double step) {
    if (!(step > 0.0)) {
        throw InvalidParameter("group_delay: step must be > 0");
    }
    const cdouble center = channel_amplitude(p, s, delta, which);
    if (std::abs(center) < 1e-15) {
        throw DegenerateAmplitude("group_delay: amplitude vanishes, phase undefined");
    }
    const cdouble plus = channel_amplitude(p, s, delta + step, which);
    const cdouble minus = channel_amplitude(p, s, delta - step, which);
    const cdouble derivative = (plus - minus) / (2.0 * step);
    return (derivative / center).imag();
}

double group_delay(const SystemParams& p, const SteadyState& s, double delta, Channel which) {
    return group_delay(p, s, delta, which, default_delay_step(p, s));
}

ResponsePoint evaluate_point(const SystemParams& p, const DriveConfig& drive,
                             const SteadyState& s, double delta_p, bool with_delay) {
    const double delta = delta_probe_to_delta(delta_p, drive.delta_1);
    ResponsePoint pt;
    pt.delta_p = delta_p;
    pt.r = reflection(p, s, delta);
    pt.t = 1.0 - pt.r;
    pt.phase_t = principal_phase(pt.t);
    if (with_delay) {
        pt.group_delay_t = group_delay(p, s, delta, Channel::transmission);
        pt.group_delay_r = group_delay(p, s, delta, Channel::reflection);
    }
    return pt;
}

}  // namespace optomech
