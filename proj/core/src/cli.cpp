#include "optomech/cli.hpp"

#include "optomech/config.hpp"
#include "optomech/errors.hpp"
#include "optomech/experiments.hpp"
#include "optomech/output.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace optomech {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config_path;
    std::string format;
    std::string output;
    std::string channel;
    std::string figure;
    std::string out_dir;
};

RunConfig load_config(const std::string& path) {
    if (path.empty()) return parse_config("");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

OutputFormat resolve_format(const std::string& flag, const RunConfig& config) {
    if (flag.empty()) return config.format;
    return flag == "json" ? OutputFormat::json : OutputFormat::csv;
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(path, "cannot open for writing");
    file << text;
    file.flush();
    if (!file) throw IoError(path, "write failed");
}

void emit(const SweepResult& r, OutputFormat format, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        emit_sweep(r, format, out);
    } else {
        emit_sweep(r, format, fs::path(path));
    }
}

void warn_about(const RunConfig& config, std::ostream& err) {
    for (const auto& note : config.notes) err << "note: " << note << '\n';
    if (!config.params.resolved_sideband()) {
        err << "warning: omega_m does not exceed both cavity linewidths; the system is outside the "
               "resolved-sideband regime\n";
    }
}

std::string steady_state_text(const SteadyState& s, const RunConfig& config, OutputFormat format) {
    std::ostringstream out;
    if (format == OutputFormat::json) {
        nlohmann::ordered_json doc = {
            {"n_1", s.n_1},
            {"n_2", s.n_2},
            {"q_s", s.q_s},
            {"delta_1_eff_rad_s", s.delta_1_eff},
            {"delta_2_eff_rad_s", s.delta_2_eff},
            {"residual", s.residual},
            {"branch_count", s.branch_count},
            {"gamma_eff_rad_s", effective_linewidth(config.params, s).gamma_eff},
        };
        out << doc.dump(1) << '\n';
        return out.str();
    }
    out << "# p_left_w=" << format_double(config.drive.p_left) << '\n';
    out << "# p_right_w=" << format_double(config.drive.p_right) << '\n';
    out << "# delta_1_rad_s=" << format_double(config.drive.delta_1) << '\n';
    out << "# delta_2_rad_s=" << format_double(config.drive.delta_2) << '\n';
    out << "n_1,n_2,q_s,delta_1_eff_rad_s,delta_2_eff_rad_s,residual,branch_count,gamma_eff_rad_s\n";
    out << format_double(s.n_1) << ',' << format_double(s.n_2) << ',' << format_double(s.q_s) << ','
        << format_double(s.delta_1_eff) << ',' << format_double(s.delta_2_eff) << ','
        << format_double(s.residual) << ',' << s.branch_count << ','
        << format_double(effective_linewidth(config.params, s).gamma_eff) << '\n';
    return out.str();
}

fs::path figure_directory(const Options& o, const RunConfig& config) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
    if (config.output_dir) return *config.output_dir;
    return ".";
}

int cmd_steady_state(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig config = load_config(o.config_path);
    warn_about(config, err);
    const SteadyState s = solve_steady_state(config.params, config.drive, config.solver);
    write_text(steady_state_text(s, config, resolve_format(o.format, config)), o.output, out);
    return kExitOk;
}

int cmd_spectrum(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig config = load_config(o.config_path);
    warn_about(config, err);
    const SteadyState s = solve_steady_state(config.params, config.drive, config.solver);
    SweepResult r = spectrum_sweep(config.params, config.drive, probe_grid_for(config, s), config.solver);
    r.label = "spectrum";
    emit(r, resolve_format(o.format, config), o.output, out);
    return kExitOk;
}

int cmd_delay_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    RunConfig config = load_config(o.config_path);
    if (!o.channel.empty()) {
        config.sweep.channel = o.channel == "reflection" ? Channel::reflection : Channel::transmission;
    }
    warn_about(config, err);
    const auto powers = power_grid_for(config);
    SweepResult r = power_sweep_delay(config.params, config.drive, powers, config.sweep.channel,
                                      config.solver);
    r.label = "delay_sweep_" + std::string(to_string(config.sweep.channel));
    emit(r, resolve_format(o.format, config), o.output, out);

    std::size_t failed = 0;
    for (const auto& d : r.diagnostics) failed += d.ok ? 0 : 1;
    if (failed > 0) {
        err << "error: " << failed << " of " << r.diagnostics.size()
            << " sweep points failed (NaN in output)\n";
        return kExitSolver;
    }
    return kExitOk;
}

int cmd_figure(const Options& o, std::ostream& out, std::ostream& err) {
    const FigureId id = parse_figure_id(o.figure);
    const RunConfig config = load_config(o.config_path);
    warn_about(config, err);
    const OutputFormat format = resolve_format(o.format, config);

    FigureOverrides ov;
    ov.solver = config.solver;
    ov.p_probe = config.drive.p_probe;
    ov.powers = power_grid_for(config);
    const auto panels = run_figure(id, config.params, ov);

    const fs::path dir = figure_directory(o, config);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());

    int code = kExitOk;
    for (const auto& panel : panels) {
        const fs::path file = dir / (panel.label + (format == OutputFormat::csv ? ".csv" : ".json"));
        emit_sweep(panel, format, file);
        out << file.string() << '\n';
        for (const auto& d : panel.diagnostics) {
            if (!d.ok) {
                err << "error: " << panel.label << ": " << d.message << '\n';
                code = kExitSolver;
            }
        }
    }
    return code;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
    const RunConfig config = load_config(o.config_path);
    warn_about(config, err);
    out << serialize_config(config);
    return kExitOk;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-cavity optomechanically induced transparency simulator", "omit"};
    app.require_subcommand(1);
    Options o;

    const std::vector<std::string> formats{"csv", "json"};
    auto add_common = [&](CLI::App* sub, bool with_output) {
        sub->add_option("--format", o.format, "Output format (default from config: csv)")
            ->check(CLI::IsMember(formats));
        if (with_output) sub->add_option("-o,--output", o.output, "Write data to this file instead of stdout");
    };

    auto* steady = app.add_subcommand("steady-state", "Solve the pump steady state");
    steady->add_option("config", o.config_path, "Config file");
    add_common(steady, true);

    auto* spectrum = app.add_subcommand("spectrum", "Probe transmission spectrum");
    spectrum->add_option("config", o.config_path, "Config file");
    add_common(spectrum, true);

    auto* delay = app.add_subcommand("delay-sweep", "Group delay at zero probe detuning versus left pump power");
    delay->add_option("config", o.config_path, "Config file");
    delay->add_option("--channel", o.channel, "transmission or reflection (default from config)")
        ->check(CLI::IsMember({"transmission", "reflection"}));
    add_common(delay, true);

    auto* figure = app.add_subcommand("figure", "Run a figure scenario, one file per panel");
    figure->add_option("id", o.figure, "fig2, fig3, fig4 or fig5")->required();
    figure->add_option("config", o.config_path, "Config file");
    figure->add_option("--out-dir", o.out_dir,
                       std::string("Output directory (overrides ") + kOutputDirEnv + " and [output] directory)");
    add_common(figure, false);

    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a config, print it resolved");
    validate_cmd->add_option("config", o.config_path, "Config file")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kExitUsage;
    }

    try {
        if (steady->parsed()) return cmd_steady_state(o, out, err);
        if (spectrum->parsed()) return cmd_spectrum(o, out, err);
        if (delay->parsed()) return cmd_delay_sweep(o, out, err);
        if (figure->parsed()) return cmd_figure(o, out, err);
        if (validate_cmd->parsed()) return cmd_validate(o, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidParameter& e) {
        err << "invalid parameter: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConvergenceError& e) {
        err << "solver failure: " << e.what() << " (best residual " << format_double(e.best_residual())
            << ")\n";
        return kExitSolver;
    } catch (const DegenerateAmplitude& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIo;
    }
    err << app.help();
    return kExitUsage;
}

}  // namespace optomech
