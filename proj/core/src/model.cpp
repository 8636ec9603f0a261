#include "optomech/model.hpp"

#include "optomech/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace optomech {

namespace {

void require_positive(double value, const char* name) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidParameter(std::string(name) + " must be finite and > 0 (got " +
                               std::to_string(value) + ")");
    }
}

void require_non_negative(double value, const char* name) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw InvalidParameter(std::string(name) + " must be finite and >= 0 (got " +
                               std::to_string(value) + ")");
    }
}

}  // namespace

void validate(const SystemParams& p) {
    require_positive(p.omega_1, "omega_1");
    require_positive(p.omega_2, "omega_2");
    require_positive(p.kappa_1, "kappa_1");
    require_positive(p.kappa_2, "kappa_2");
    require_positive(p.kappa_e1, "kappa_e1");
    require_positive(p.kappa_e2, "kappa_e2");
    require_positive(p.omega_m, "omega_m");
    require_positive(p.q_m, "q_m");
    require_non_negative(p.g_1, "g_1");
    require_non_negative(p.g_2, "g_2");
    if (p.kappa_e1 > p.kappa_1) {
        throw InvalidParameter("kappa_e1 must not exceed kappa_1");
    }
    if (p.kappa_e2 > p.kappa_2) {
        throw InvalidParameter("kappa_e2 must not exceed kappa_2");
    }
}

void validate(const DriveConfig& d, const SystemParams& p) {
    require_non_negative(d.p_left, "p_left");
    require_non_negative(d.p_right, "p_right");
    require_non_negative(d.p_probe, "p_probe");
    if (!std::isfinite(d.delta_1) || !std::isfinite(d.delta_2)) {
        throw InvalidParameter("pump detunings must be finite");
    }
    if (!(d.omega_left(p) > 0.0)) {
        throw InvalidParameter("left pump frequency omega_1 - delta_1 must be positive");
    }
    if (!(d.omega_right(p) > 0.0)) {
        throw InvalidParameter("right pump frequency omega_2 - delta_2 must be positive");
    }
}

ProbeGrid::ProbeGrid(std::vector<double> detunings) : detunings_(std::move(detunings)) {
    if (detunings_.empty()) {
        throw InvalidParameter("probe grid must not be empty");
    }
    for (std::size_t i = 0; i < detunings_.size(); ++i) {
        if (!std::isfinite(detunings_[i])) {
            throw InvalidParameter("probe grid contains a non-finite detuning");
        }
        if (i > 0 && !(detunings_[i] > detunings_[i - 1])) {
            throw InvalidParameter("probe grid must be strictly increasing (index " +
                                   std::to_string(i) + ")");
        }
    }
}

ProbeGrid ProbeGrid::linspace(double lo, double hi, std::size_t points) {
    if (points == 0) {
        throw InvalidParameter("probe grid must not be empty");
    }
    if (points == 1) {
        return ProbeGrid({lo});
    }
    std::vector<double> v(points);
    const double span = hi - lo;
    const auto last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        v[i] = lo + span * (static_cast<double>(i) / last);
    }
    v.back() = hi;
    return ProbeGrid(std::move(v));
}

ProbeGrid ProbeGrid::merge(std::span<const ProbeGrid> grids) {
    std::vector<double> all;
    for (const auto& g : grids) {
        all.insert(all.end(), g.detunings().begin(), g.detunings().end());
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    return ProbeGrid(std::move(all));
}

double drive_amplitude(double power, double kappa, double omega_laser) {
    if (!(kappa > 0.0)) {
        throw InvalidParameter("drive_amplitude: kappa must be > 0");
    }
    if (!(omega_laser > 0.0)) {
        throw InvalidParameter("drive_amplitude: laser frequency must be > 0");
    }
    if (!(power >= 0.0)) {
        throw InvalidParameter("drive_amplitude: power must be >= 0");
    }
    return std::sqrt(2.0 * power * kappa / (PhysConstants::hbar * omega_laser));
}

SystemParams nominal_params() {
    SystemParams p;
    p.omega_1 = hz_to_rad(205.3e12);
    p.omega_2 = hz_to_rad(194.1e12);
    p.kappa_1 = hz_to_rad(520e6);
    p.kappa_2 = hz_to_rad(1.73e9);
    p.kappa_e1 = 0.2 * p.kappa_1;
    p.kappa_e2 = 0.42 * p.kappa_2;
    p.omega_m = hz_to_rad(4e9);
    p.q_m = 87e3;
    p.g_1 = hz_to_rad(71.0);
    p.g_2 = hz_to_rad(10.0);
    return p;
}

}  // namespace optomech
