#include "optomech/steady_state.hpp"

#include "optomech/errors.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

namespace optomech {

namespace {

// Static-displacement form of the self-consistency problem. With
// X = (2/omega_m)(g1 n1 +/- g2 n2) every photon number is the Lorentzian
// n_k = A_k / (kappa_k^2 + (Delta_k - g_k X)^2), so fixed points in (n1, n2)
// correspond one-to-one with roots of X - X(n(X)).
struct Model {
    double a1 = 0.0, a2 = 0.0;  // kappa_ek |E_k|^2
    double g1 = 0.0, g2 = 0.0;
    double k1 = 0.0, k2 = 0.0;
    double d1 = 0.0, d2 = 0.0;
    double omega_m = 1.0;
    double sigma = 1.0;

    Model(const SystemParams& p, const DriveConfig& drive, CouplingSign sign, double scale = 1.0)
        : g1(p.g_1), g2(p.g_2), k1(p.kappa_1), k2(p.kappa_2), d1(drive.delta_1),
          d2(drive.delta_2), omega_m(p.omega_m),
          sigma(sign == CouplingSign::plus ? 1.0 : -1.0) {
        const double e1 = drive_amplitude(drive.p_left, p.kappa_1, drive.omega_left(p));
        const double e2 = drive_amplitude(drive.p_right, p.kappa_2, drive.omega_right(p));
        a1 = scale * p.kappa_e1 * e1 * e1;
        a2 = scale * p.kappa_e2 * e2 * e2;
    }

    double displacement(double n1, double n2) const {
        return 2.0 / omega_m * (g1 * n1 + sigma * g2 * n2);
    }
    double f1(double x) const {
        const double u = d1 - g1 * x;
        return a1 / (k1 * k1 + u * u);
    }
    double f2(double x) const {
        const double u = d2 - g2 * x;
        return a2 / (k2 * k2 + u * u);
    }
    double df1(double x) const {
        const double u = d1 - g1 * x;
        const double den = k1 * k1 + u * u;
        return 2.0 * a1 * g1 * u / (den * den);
    }
    double df2(double x) const {
        const double u = d2 - g2 * x;
        const double den = k2 * k2 + u * u;
        return 2.0 * a2 * g2 * u / (den * den);
    }
    double root_function(double x) const {
        return x - 2.0 / omega_m * (g1 * f1(x) + sigma * g2 * f2(x));
    }

    double x_lo() const { return sigma < 0.0 ? -2.0 / omega_m * g2 * a2 / (k2 * k2) : 0.0; }
    double x_hi() const {
        double hi = 2.0 / omega_m * g1 * a1 / (k1 * k1);
        if (sigma > 0.0) hi += 2.0 / omega_m * g2 * a2 / (k2 * k2);
        return hi;
    }
};

double rel_err(double n, double f) {
    const double scale = std::max(std::abs(n), std::abs(f));
    return scale == 0.0 ? 0.0 : std::abs(n - f) / scale;
}

double residual_of(const Model& m, double n1, double n2) {
    const double x = m.displacement(n1, n2);
    return std::max(rel_err(n1, m.f1(x)), rel_err(n2, m.f2(x)));
}

SteadyState make_state(const Model& m, const DriveConfig& drive, double n1, double n2) {
    SteadyState s;
    s.n_1 = n1;
    s.n_2 = n2;
    s.q_s = m.displacement(n1, n2);
    s.delta_1_eff = drive.delta_1 - m.g1 * s.q_s;
    s.delta_2_eff = drive.delta_2 - m.g2 * s.q_s;
    s.residual = residual_of(m, n1, n2);
    return s;
}

std::vector<double> scan_points(const Model& m, int resolution) {
    const double lo = m.x_lo();
    const double hi = m.x_hi();
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(resolution) + 512);
    for (int i = 0; i <= resolution; ++i) {
        xs.push_back(lo + (hi - lo) * (static_cast<double>(i) / resolution));
    }
    // The Lorentzians are sharp compared with [lo, hi] when the drive is
    // strong: sample geometrically around each cavity resonance X = Delta/g.
    auto add_resonance = [&](double g, double a, double delta, double kappa) {
        if (g <= 0.0 || a <= 0.0) return;
        const double center = delta / g;
        const double width = kappa / g;
        auto push = [&](double x) {
            if (x > lo && x < hi) xs.push_back(x);
        };
        push(center);
        for (double s = 1e-3; s < 1e6; s *= 1.25) {
            push(center + s * width);
            push(center - s * width);
        }
    };
    add_resonance(m.g1, m.a1, m.d1, m.k1);
    add_resonance(m.g2, m.a2, m.d2, m.k2);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

std::vector<double> displacement_roots(const Model& m, int resolution) {
    const double lo = m.x_lo();
    const double hi = m.x_hi();
    if (!(hi > lo)) {
        return {lo};
    }
    const auto xs = scan_points(m, resolution);
    std::vector<double> fs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = m.root_function(xs[i]);

    auto f = [&m](double x) { return m.root_function(x); };
    std::vector<double> roots;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (fs[i] == 0.0) {
            roots.push_back(xs[i]);
            continue;
        }
        if (i + 1 < xs.size() && fs[i + 1] != 0.0 && std::signbit(fs[i]) != std::signbit(fs[i + 1])) {
            std::uintmax_t iters = 200;
            const auto bracket = boost::math::tools::toms748_solve(
                f, xs[i], xs[i + 1], fs[i], fs[i + 1],
                boost::math::tools::eps_tolerance<double>(), iters);
            const double fa = std::abs(f(bracket.first));
            const double fb = std::abs(f(bracket.second));
            roots.push_back(fa <= fb ? bracket.first : bracket.second);
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> distinct;
    for (double r : roots) {
        if (distinct.empty() ||
            std::abs(r - distinct.back()) > 1e-12 * std::max({std::abs(r), std::abs(distinct.back()),
                                                               std::numeric_limits<double>::min()})) {
            distinct.push_back(r);
        }
    }
    return distinct;
}

struct Candidate {
    double n1 = 0.0, n2 = 0.0, residual = std::numeric_limits<double>::infinity();
};

Candidate newton_polish(const Model& m, Candidate c, double tol) {
    const double c1 = 2.0 * m.g1 / m.omega_m;
    const double c2 = 2.0 * m.sigma * m.g2 / m.omega_m;
    for (int it = 0; it < 100 && c.residual > tol; ++it) {
        const double x = m.displacement(c.n1, c.n2);
        const double g1 = c.n1 - m.f1(x);
        const double g2 = c.n2 - m.f2(x);
        const double j11 = 1.0 - m.df1(x) * c1;
        const double j12 = -m.df1(x) * c2;
        const double j21 = -m.df2(x) * c1;
        const double j22 = 1.0 - m.df2(x) * c2;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        Candidate next;
        next.n1 = std::max(0.0, c.n1 - (j22 * g1 - j12 * g2) / det);
        next.n2 = std::max(0.0, c.n2 - (j11 * g2 - j21 * g1) / det);
        next.residual = residual_of(m, next.n1, next.n2);
        if (!(next.residual < c.residual)) break;
        c = next;
    }
    return c;
}

Candidate damped_fixed_point(const Model& m, const SolverOptions& opts) {
    constexpr double alpha = 0.5;
    constexpr int stagnation_window = 50;
    double n1 = m.f1(0.0);
    double n2 = m.f2(0.0);
    Candidate best{n1, n2, residual_of(m, n1, n2)};
    int last_improvement = 0;
    for (int it = 0; it < opts.max_iter && best.residual > opts.tol; ++it) {
        const double x = m.displacement(n1, n2);
        n1 = (1.0 - alpha) * n1 + alpha * m.f1(x);
        n2 = (1.0 - alpha) * n2 + alpha * m.f2(x);
        const double res = residual_of(m, n1, n2);
        if (!std::isfinite(res)) break;
        if (res < best.residual) {
            best = {n1, n2, res};
            last_improvement = it;
        } else if (it - last_improvement > stagnation_window) {
            break;
        }
    }
    return newton_polish(m, best, opts.tol);
}

// Follow the branch connected to zero power by ramping both pumps together.
double continuation_root(const SystemParams& params, const DriveConfig& drive,
                         const SolverOptions& opts) {
    constexpr int steps = 200;
    double x_prev = 0.0;
    for (int i = 1; i <= steps; ++i) {
        const Model m(params, drive, opts.coupling_sign, static_cast<double>(i) / steps);
        const auto roots = displacement_roots(m, opts.scan_resolution);
        if (roots.empty()) continue;
        x_prev = *std::min_element(roots.begin(), roots.end(), [&](double a, double b) {
            return std::abs(a - x_prev) < std::abs(b - x_prev);
        });
    }
    return x_prev;
}

void check_options(const SolverOptions& opts) {
    if (!(opts.tol > 0.0)) throw InvalidParameter("solver tol must be > 0");
    if (opts.max_iter < 1) throw InvalidParameter("solver max_iter must be >= 1");
    if (opts.scan_resolution < 16) throw InvalidParameter("scan resolution must be >= 16");
}

}  // namespace

std::array<double, 2> photon_number_map(const SystemParams& params, const DriveConfig& drive,
                                        double n1, double n2, CouplingSign sign) {
    validate(params);
    validate(drive, params);
    const Model m(params, drive, sign);
    const double x = m.displacement(n1, n2);
    return {m.f1(x), m.f2(x)};
}

double relative_residual(const SystemParams& params, const DriveConfig& drive, double n1,
                         double n2, CouplingSign sign) {
    validate(params);
    validate(drive, params);
    return residual_of(Model(params, drive, sign), n1, n2);
}

std::vector<SteadyState> scan_branches(const SystemParams& params, const DriveConfig& drive,
                                       int grid_resolution, CouplingSign sign) {
    validate(params);
    validate(drive, params);
    if (grid_resolution < 16) throw InvalidParameter("grid_resolution must be >= 16");
    const Model m(params, drive, sign);
    std::vector<SteadyState> out;
    for (double x : displacement_roots(m, grid_resolution)) {
        out.push_back(make_state(m, drive, m.f1(x), m.f2(x)));
    }
    std::sort(out.begin(), out.end(),
              [](const SteadyState& a, const SteadyState& b) { return a.n_1 < b.n_1; });
    const int count = static_cast<int>(out.size());
    for (auto& s : out) s.branch_count = count;
    return out;
}

SteadyState solve_steady_state(const SystemParams& params, const DriveConfig& drive,
                               const SolverOptions& opts) {
    validate(params);
    validate(drive, params);
    check_options(opts);

    const Model m(params, drive, opts.coupling_sign);
    if (m.a1 == 0.0 && m.a2 == 0.0) {
        return make_state(m, drive, 0.0, 0.0);
    }

    const Candidate fp = damped_fixed_point(m, opts);
    const auto branches = scan_branches(params, drive, opts.scan_resolution, opts.coupling_sign);
    const int branch_count = std::max<int>(1, static_cast<int>(branches.size()));

    Candidate chosen = fp;
    if (branches.size() > 1) {
        const double x = continuation_root(params, drive, opts);
        Candidate cont{m.f1(x), m.f2(x), 0.0};
        cont.residual = residual_of(m, cont.n1, cont.n2);
        cont = newton_polish(m, cont, opts.tol);
        const double x_fp = m.displacement(fp.n1, fp.n2);
        const bool same_branch =
            fp.residual <= opts.tol &&
            std::abs(x_fp - x) <= 1e-9 * std::max(std::abs(x), std::numeric_limits<double>::min());
        if (!same_branch) chosen = cont;
    } else if (fp.residual > opts.tol && branches.size() == 1) {
        Candidate scanned{branches.front().n_1, branches.front().n_2, branches.front().residual};
        scanned = newton_polish(m, scanned, opts.tol);
        if (scanned.residual < chosen.residual) chosen = scanned;
    }

    if (!(chosen.residual <= opts.tol)) {
        std::ostringstream msg;
        msg << "steady state did not converge: best relative residual " << chosen.residual
            << " > tol " << opts.tol;
        throw ConvergenceError(msg.str(), chosen.residual);
    }
    SteadyState s = make_state(m, drive, chosen.n1, chosen.n2);
    s.branch_count = branch_count;
    return s;
}

}  // namespace optomech
