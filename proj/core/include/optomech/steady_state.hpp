#pragma once

#include "optomech/model.hpp"

#include <array>
#include <vector>

namespace optomech {

// Sign of the cross term in the static mechanical displacement. `plus`
// (g1 n1 + g2 n2) follows from the mechanical equation of motion; `minus`
// reproduces the (g1 n1 - g2 n2) variant of the coupled photon-number
// equations for comparison.
enum class CouplingSign { plus, minus };

struct SolverOptions {
    double tol = 1e-12;       // max relative residual of the photon-number equations
    int max_iter = 10000;     // damped fixed-point iterations
    int scan_resolution = 256;
    CouplingSign coupling_sign = CouplingSign::plus;

    bool operator==(const SolverOptions&) const = default;
};

struct SteadyState {
    double n_1 = 0.0;          // intracavity pump photon numbers
    double n_2 = 0.0;
    double q_s = 0.0;          // static dimensionless displacement
    double delta_1_eff = 0.0;  // Delta_k - g_k q_s
    double delta_2_eff = 0.0;
    double residual = 0.0;
    int branch_count = 1;
};

// Right-hand sides of the self-consistent photon-number equations evaluated
// at (n1, n2).
std::array<double, 2> photon_number_map(const SystemParams& params, const DriveConfig& drive,
                                        double n1, double n2,
                                        CouplingSign sign = CouplingSign::plus);

// max_k |n_k - F_k(n)| / max(n_k, F_k(n)); zero where both vanish.
double relative_residual(const SystemParams& params, const DriveConfig& drive, double n1,
                         double n2, CouplingSign sign = CouplingSign::plus);

// Self-consistent pump photon numbers and displacement.
//
// Damped fixed-point iteration (alpha = 0.5) from the undressed Lorentzian
// photon numbers, then Newton polish on the 2x2 residual. If the system is
// multistable the branch reached by ramping both pumps up from zero power is
// returned. Throws ConvergenceError if no candidate meets opts.tol.
SteadyState solve_steady_state(const SystemParams& params, const DriveConfig& drive,
                               const SolverOptions& opts = {});

// Every fixed point found by an exhaustive scan of the static displacement
// (which determines n1 and n2 uniquely), refined by bracketing root finding.
// Sorted by n_1. grid_resolution >= 16.
std::vector<SteadyState> scan_branches(const SystemParams& params, const DriveConfig& drive,
                                       int grid_resolution,
                                       CouplingSign sign = CouplingSign::plus);

}  // namespace optomech
