#include "oracles.hpp"

#include "optomech/errors.hpp"
#include "optomech/experiments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace optomech;

namespace {

constexpr double uW = 1e-6;

DriveConfig red_red(const SystemParams& p, double p_left, double p_right) {
    return {p_left, p_right, 1e-9, p.omega_m, p.omega_m};
}

std::size_t index_of(const std::vector<double>& axis, double x) {
    return static_cast<std::size_t>(std::find(axis.begin(), axis.end(), x) - axis.begin());
}

}  // namespace

TEST_CASE("spectrum sweep columns") {
    const SystemParams p = nominal_params();
    const DriveConfig d = red_red(p, 1 * uW, 0.1 * uW);
    const ProbeGrid grid = ProbeGrid::linspace(-1e8, 1e8, 101);
    const SweepResult r = spectrum_sweep(p, d, grid);
    CHECK(r.axis_name == kAxisDeltaP);
    CHECK(r.axis_values == grid.detunings());
    CHECK(r.config.params == p);
    CHECK(r.config.drive == d);
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].residual <= 1e-10);
    for (auto name : {col::t_re, col::t_im, col::abs_t, col::abs_t2, col::phase_t}) {
        REQUIRE(r.has_column(name));
        CHECK(r.column(name).size() == grid.size());
    }
    CHECK_FALSE(r.has_column("missing"));
    CHECK_THROWS_AS(r.column("missing"), std::out_of_range);
    const SteadyState s = solve_steady_state(p, d);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cdouble t = transmission(p, s, delta_probe_to_delta(grid.detunings()[i], d.delta_1));
        CHECK(r.column(col::t_re)[i] == t.real());
        CHECK(r.column(col::t_im)[i] == t.imag());
        CHECK(r.column(col::abs_t2)[i] == doctest::Approx(r.column(col::abs_t)[i] * r.column(col::abs_t)[i]));
    }
}

TEST_CASE("default probe grid") {
    const SystemParams p = nominal_params();
    const DriveConfig d = red_red(p, 1 * uW, 0.1 * uW);
    const SteadyState s = solve_steady_state(p, d);
    const ProbeGrid g = default_probe_grid(p, d, s);
    CHECK(g.front() == doctest::Approx(-3 * p.kappa_1));
    CHECK(g.back() == doctest::Approx(3 * p.kappa_1));
    CHECK(g.size() > 6000);
    CHECK(std::find(g.detunings().begin(), g.detunings().end(), 0.0) != g.detunings().end());
    const auto windows = refinement_windows(p, d, s);
    REQUIRE(!windows.empty());
    const double gamma_eff = effective_linewidth(p, s).gamma_eff;
    CHECK(windows[0].size() == 2001);
    CHECK(windows[0].back() - windows[0].front() == doctest::Approx(20 * gamma_eff));
}

TEST_CASE("power grid") {
    const auto g = default_power_grid();
    CHECK(g.front() == 1e-9);
    CHECK(g.back() == 20e-6);
    CHECK(std::is_sorted(g.begin(), g.end()));
    CHECK(g.size() == 862);
    CHECK(g[200] == doctest::Approx(1e-8).epsilon(1e-12));
    CHECK_THROWS_AS(log_power_grid(0.0, 1.0, 10), InvalidParameter);
}

TEST_CASE("single-mode reduction") {
    SystemParams p = nominal_params();
    p.g_2 = 0.0;
    for (double pl : {0.0, 0.1 * uW, 1 * uW, 10 * uW}) {
        CAPTURE(pl);
        const DriveConfig d = red_red(p, pl, 0.0);
        const SteadyState s = solve_steady_state(p, d);
        const ProbeGrid grid = ProbeGrid::linspace(-10.0 * effective_linewidth(p, s).gamma_eff,
                                                   10.0 * effective_linewidth(p, s).gamma_eff, 4001);
        const SweepResult two = spectrum_sweep(p, d, grid);
        const SweepResult one = single_mode_oracle_spectrum(p, d, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const cdouble a(two.column(col::t_re)[i], two.column(col::t_im)[i]);
            const cdouble b(one.column(col::t_re)[i], one.column(col::t_im)[i]);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
        CHECK(worst < 1e-10);
    }
    const DriveConfig d = red_red(p, 1 * uW, 0.1 * uW);
    CHECK_THROWS_AS(single_mode_oracle_spectrum(p, d, ProbeGrid::linspace(0, 1, 2)), InvalidParameter);
}

TEST_CASE("single-mode reference without pump is the bare Lorentzian") {
    const SystemParams p = nominal_params();
    const DriveConfig d = red_red(p, 0.0, 0.0);
    const ProbeGrid grid = ProbeGrid::linspace(-3 * p.kappa_1, 3 * p.kappa_1, 301);
    const SweepResult r = single_mode_oracle_spectrum(p, d, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cdouble t = oracle::bare_transmission(p.kappa_1, p.kappa_e1, d.delta_1,
                                                    delta_probe_to_delta(grid.detunings()[i], d.delta_1));
        CHECK(r.column(col::t_re)[i] == doctest::Approx(t.real()).epsilon(1e-14));
        CHECK(r.column(col::t_im)[i] == doctest::Approx(t.imag()).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("window depth grows with cooperativity") {
    SystemParams p = nominal_params();
    p.g_2 = 0.0;
    const ProbeGrid centre({0.0});
    // C1 is linear in n1, which is close to linear in P_L at these powers.
    const double c_per_watt = [&] {
        const SteadyState s = solve_steady_state(p, red_red(p, 1 * uW, 0.0));
        return effective_linewidth(p, s).cooperativity_1 / (1 * uW);
    }();
    double previous = 0.0;
    int steps = 0;
    for (double c = 0.1; c <= 100.0 * 1.0001; c *= std::pow(10.0, 1.0 / 40.0)) {
        const DriveConfig d = red_red(p, c / c_per_watt, 0.0);
        const SweepResult r = single_mode_oracle_spectrum(p, d, centre);
        const double depth = r.column(col::abs_t)[0];
        CHECK(depth > previous);
        previous = depth;
        ++steps;
    }
    CHECK(steps == 121);
}

TEST_CASE("delay sweep") {
    const SystemParams p = nominal_params();
    const std::vector<double> powers = {0.0, 1e-8, 1e-7, 1e-6};
    SUBCASE("zero power reproduces the empty shifted cavity") {
        for (double pr : {0.0, 0.1 * uW}) {
            const DriveConfig d = red_red(p, 0.0, pr);
            const SweepResult r = power_sweep_delay(p, d, powers, Channel::transmission);
            REQUIRE(r.column(col::tau_g_t).size() == powers.size());
            const SteadyState s = solve_steady_state(p, d);
            CHECK(r.column(col::n_1)[0] == 0.0);
            CHECK(r.column(col::tau_g_t)[0] ==
                  doctest::Approx(oracle::bare_group_delay(p.kappa_1, p.kappa_e1, s.delta_1_eff, d.delta_1))
                      .epsilon(1e-6));
            CHECK(r.column(col::gamma_eff)[0] == p.gamma_m());
        }
    }
    SUBCASE("columns and diagnostics") {
        const SweepResult r = power_sweep_delay(p, red_red(p, 0, 0.1 * uW), powers, Channel::reflection);
        CHECK(r.axis_name == kAxisPLeft);
        CHECK(r.has_column(col::tau_g_r));
        CHECK_FALSE(r.has_column(col::tau_g_t));
        CHECK(r.diagnostics.size() == powers.size());
        for (const auto& dg : r.diagnostics) CHECK(dg.ok);
        for (std::size_t i = 1; i < powers.size(); ++i) CHECK(r.column(col::tau_g_r)[i] < 0.0);
        CHECK(std::is_sorted(r.column(col::n_1).begin(), r.column(col::n_1).end()));
    }
    SUBCASE("failed points become NaN and the sweep continues") {
        SystemParams critical = p;
        critical.kappa_e1 = critical.kappa_1;
        const SweepResult r = power_sweep_delay(critical, red_red(critical, 0, 0), powers, Channel::transmission);
        CHECK_FALSE(r.diagnostics[0].ok);
        CHECK(std::isnan(r.column(col::tau_g_t)[0]));
        CHECK(r.diagnostics[1].ok);
        CHECK(std::isfinite(r.column(col::tau_g_t)[1]));
    }
    SUBCASE("preconditions") {
        const DriveConfig d = red_red(p, 0, 0);
        CHECK_THROWS_AS(power_sweep_delay(p, d, std::vector<double>{}, Channel::transmission), InvalidParameter);
        CHECK_THROWS_AS(power_sweep_delay(p, d, std::vector<double>{-1.0}, Channel::transmission), InvalidParameter);
    }
}

TEST_CASE("figure scenarios") {
    const SystemParams p = nominal_params();
    FigureOverrides ov;
    ov.powers = std::vector<double>{1e-8, 1e-7, 1e-6};

    SUBCASE("fig2") {
        const auto panels = run_figure(FigureId::fig2, p, ov);
        REQUIRE(panels.size() == 4);
        const char* labels[] = {"fig2_PL0uW", "fig2_PL0.1uW", "fig2_PL1uW", "fig2_PL10uW"};
        const double pl[] = {0.0, 0.1 * uW, 1 * uW, 10 * uW};
        double previous = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(panels[k].label == labels[k]);
            CHECK(panels[k].config.drive.delta_1 == p.omega_m);
            CHECK(panels[k].config.drive.delta_2 == p.omega_m);
            CHECK(panels[k].config.drive.p_left == pl[k]);
            CHECK(panels[k].config.drive.p_right == 0.1 * uW);
            const auto& axis = panels[k].axis_values;
            const double centre = panels[k].column(col::abs_t)[index_of(axis, 0.0)];
            CHECK(centre > previous);
            previous = centre;
        }
    }
    SUBCASE("fig3 has positive phase slope at the centre") {
        const auto panels = run_figure(FigureId::fig3, p, ov);
        REQUIRE(panels.size() == 1);
        const auto& axis = panels[0].axis_values;
        const std::size_t i = index_of(axis, 0.0);
        REQUIRE(i < axis.size());
        const auto& phase = panels[0].column(col::phase_t);
        CHECK((phase[i + 1] - phase[i - 1]) / (axis[i + 1] - axis[i - 1]) > 0.0);
    }
    SUBCASE("fig4") {
        const auto panels = run_figure(FigureId::fig4, p, ov);
        REQUIRE(panels.size() == 4);
        CHECK(panels[0].config.drive.p_right == 0.1 * uW);
        CHECK(panels[1].config.drive.p_right == 0.0);
        CHECK(panels[2].config.params.kappa_e1 == doctest::Approx(0.6 * p.kappa_1));
        CHECK(panels[2].config.drive.p_right == 0.0);
        CHECK(panels[3].has_column(col::tau_g_r));
        CHECK(panels[0].axis_values == *ov.powers);
    }
    SUBCASE("fig5") {
        const auto panels = run_figure(FigureId::fig5, p, ov);
        REQUIRE(panels.size() == 1);
        CHECK(panels[0].config.drive.delta_1 == -p.omega_m);
        CHECK(panels[0].config.drive.delta_2 == p.omega_m);
        const auto& mag = panels[0].column(col::abs_t);
        CHECK(*std::max_element(mag.begin(), mag.end()) > 1.0);
    }
    SUBCASE("custom grid override") {
        ov.grid = ProbeGrid::linspace(-1e6, 1e6, 11);
        const auto panels = run_figure(FigureId::fig3, p, ov);
        CHECK(panels[0].axis_values.size() == 11);
    }
}

TEST_CASE("figure ids") {
    CHECK(parse_figure_id("fig4") == FigureId::fig4);
    CHECK(to_string(FigureId::fig5) == "fig5");
    CHECK_THROWS_AS(parse_figure_id("fig6"), UsageError);
}

TEST_CASE("determinism") {
    const SystemParams p = nominal_params();
    const auto a = run_figure(FigureId::fig2, p);
    const auto b = run_figure(FigureId::fig2, p);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].axis_values == b[k].axis_values);
        for (std::size_t c = 0; c < a[k].columns.size(); ++c) {
            CHECK(a[k].columns[c].values == b[k].columns[c].values);
        }
    }
}
