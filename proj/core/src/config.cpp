#include "optomech/config.hpp"

#include "optomech/errors.hpp"
#include "optomech/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace optomech {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, std::string_view text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
    }
    if (!std::isfinite(v)) throw ConfigError(key, "value must be finite");
    return v;
}

int parse_int(const std::string& key, std::string_view text) {
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key, "expected an integer, got '" + std::string(text) + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, std::string_view text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError(key, "expected true or false, got '" + std::string(text) + "'");
}

template <class Enum>
Enum parse_enum(const std::string& key, std::string_view text,
                std::initializer_list<std::pair<std::string_view, Enum>> choices) {
    std::string allowed;
    for (const auto& [name, value] : choices) {
        if (text == name) return value;
        allowed += allowed.empty() ? "" : "|";
        allowed += name;
    }
    throw ConfigError(key, "expected one of " + allowed + ", got '" + std::string(text) + "'");
}

void require_positive(const std::string& key, double v) {
    if (!(v > 0.0)) throw ConfigError(key, "must be > 0 (got " + format_double(v) + ")");
}

void require_non_negative(const std::string& key, double v) {
    if (!(v >= 0.0)) throw ConfigError(key, "must be >= 0 (got " + format_double(v) + ")");
}

using Setter = std::function<void(RunConfig&, const std::string&, std::string_view)>;

Setter opt_double(std::optional<double> SystemInputs::*field) {
    return [field](RunConfig& c, const std::string& key, std::string_view v) {
        c.system.*field = parse_double(key, v);
    };
}

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"system.profile",
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.system.profile = parse_enum<Profile>(k, v, {{"nominal", Profile::nominal}, {"none", Profile::none}});
         }},
        {"system.omega_1_hz", opt_double(&SystemInputs::omega_1_hz)},
        {"system.omega_2_hz", opt_double(&SystemInputs::omega_2_hz)},
        {"system.kappa_1_hz", opt_double(&SystemInputs::kappa_1_hz)},
        {"system.kappa_2_hz", opt_double(&SystemInputs::kappa_2_hz)},
        {"system.kappa_e1_hz", opt_double(&SystemInputs::kappa_e1_hz)},
        {"system.kappa_e2_hz", opt_double(&SystemInputs::kappa_e2_hz)},
        {"system.omega_m_hz", opt_double(&SystemInputs::omega_m_hz)},
        {"system.q_m", opt_double(&SystemInputs::q_m)},
        {"system.g_1_hz", opt_double(&SystemInputs::g_1_hz)},
        {"system.g_2_hz", opt_double(&SystemInputs::g_2_hz)},
        {"drive.p_left_w",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.drive_inputs.p_left_w = parse_double(k, v); }},
        {"drive.p_right_w",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.drive_inputs.p_right_w = parse_double(k, v); }},
        {"drive.p_probe_w",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.drive_inputs.p_probe_w = parse_double(k, v); }},
        {"drive.delta_1_hz",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.drive_inputs.delta_1_hz = parse_double(k, v); }},
        {"drive.delta_2_hz",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.drive_inputs.delta_2_hz = parse_double(k, v); }},
        {"grid.delta_p_min_hz",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.grid.delta_p_min_hz = parse_double(k, v); }},
        {"grid.delta_p_max_hz",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.grid.delta_p_max_hz = parse_double(k, v); }},
        {"grid.points",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.grid.points = parse_int(k, v); }},
        {"grid.refine",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.grid.refine = parse_bool(k, v); }},
        {"sweep.p_min_w",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.sweep.p_min_w = parse_double(k, v); }},
        {"sweep.p_max_w",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.sweep.p_max_w = parse_double(k, v); }},
        {"sweep.points_per_decade",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.sweep.points_per_decade = parse_int(k, v); }},
        {"sweep.channel",
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.sweep.channel = parse_enum<Channel>(
                 k, v, {{"transmission", Channel::transmission}, {"reflection", Channel::reflection}});
         }},
        {"solver.tol",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.solver.tol = parse_double(k, v); }},
        {"solver.max_iter",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.solver.max_iter = parse_int(k, v); }},
        {"solver.scan_resolution",
         [](RunConfig& c, const std::string& k, std::string_view v) { c.solver.scan_resolution = parse_int(k, v); }},
        {"solver.coupling_sign",
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.solver.coupling_sign = parse_enum<CouplingSign>(
                 k, v, {{"plus", CouplingSign::plus}, {"minus", CouplingSign::minus}});
         }},
        {"output.format",
         [](RunConfig& c, const std::string& k, std::string_view v) {
             c.format = parse_enum<OutputFormat>(k, v, {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}});
         }},
        {"output.directory",
         [](RunConfig& c, const std::string& k, std::string_view v) {
             if (v.empty()) throw ConfigError(k, "must not be empty");
             c.output_dir = std::string(v);
         }},
    };
    return table;
}

const std::set<std::string, std::less<>> kSections = {"system", "drive", "grid", "sweep", "solver", "output"};

void resolve_system(RunConfig& c) {
    const SystemInputs& in = c.system;
    struct Entry {
        const char* key;
        const std::optional<double>& value;
        bool coupling;
    };
    const Entry entries[] = {
        {"system.omega_1_hz", in.omega_1_hz, false}, {"system.omega_2_hz", in.omega_2_hz, false},
        {"system.kappa_1_hz", in.kappa_1_hz, false}, {"system.kappa_2_hz", in.kappa_2_hz, false},
        {"system.kappa_e1_hz", in.kappa_e1_hz, false}, {"system.kappa_e2_hz", in.kappa_e2_hz, false},
        {"system.omega_m_hz", in.omega_m_hz, false}, {"system.q_m", in.q_m, false},
        {"system.g_1_hz", in.g_1_hz, true}, {"system.g_2_hz", in.g_2_hz, true},
    };
    for (const auto& e : entries) {
        if (!e.value) {
            if (in.profile == Profile::none) {
                throw ConfigError(e.key, "missing required key (profile = none)");
            }
            continue;
        }
        if (e.coupling) {
            require_non_negative(e.key, *e.value);
        } else {
            require_positive(e.key, *e.value);
        }
    }

    SystemParams p = nominal_params();
    if (in.omega_1_hz) p.omega_1 = hz_to_rad(*in.omega_1_hz);
    if (in.omega_2_hz) p.omega_2 = hz_to_rad(*in.omega_2_hz);
    if (in.kappa_1_hz) p.kappa_1 = hz_to_rad(*in.kappa_1_hz);
    if (in.kappa_2_hz) p.kappa_2 = hz_to_rad(*in.kappa_2_hz);
    p.kappa_e1 = in.kappa_e1_hz ? hz_to_rad(*in.kappa_e1_hz) : 0.2 * p.kappa_1;
    p.kappa_e2 = in.kappa_e2_hz ? hz_to_rad(*in.kappa_e2_hz) : 0.42 * p.kappa_2;
    if (in.omega_m_hz) p.omega_m = hz_to_rad(*in.omega_m_hz);
    if (in.q_m) p.q_m = *in.q_m;
    if (in.g_1_hz) p.g_1 = hz_to_rad(*in.g_1_hz);
    if (in.g_2_hz) p.g_2 = hz_to_rad(*in.g_2_hz);

    if (p.kappa_e1 > p.kappa_1) {
        throw ConfigError("system.kappa_e1_hz", "must not exceed kappa_1_hz (" +
                                                    format_double(rad_to_hz(p.kappa_e1)) + " > " +
                                                    format_double(rad_to_hz(p.kappa_1)) + ")");
    }
    if (p.kappa_e2 > p.kappa_2) {
        throw ConfigError("system.kappa_e2_hz", "must not exceed kappa_2_hz (" +
                                                    format_double(rad_to_hz(p.kappa_e2)) + " > " +
                                                    format_double(rad_to_hz(p.kappa_2)) + ")");
    }
    try {
        validate(p);
    } catch (const InvalidParameter& e) {
        throw ConfigError("system", e.what());
    }
    c.params = p;

    if (!in.g_1_hz || !in.g_2_hz) {
        c.notes.push_back(
            "g_1/g_2 taken from the calibration profile (2pi x 71 Hz, 2pi x 10 Hz); these are "
            "calibration defaults, not measured couplings");
    }
    if (!in.kappa_2_hz) {
        c.notes.push_back("kappa_2 defaulted to 2pi x 1.73 GHz");
    }
}

void resolve_rest(RunConfig& c) {
    const DriveInputs& d = c.drive_inputs;
    require_non_negative("drive.p_left_w", d.p_left_w);
    require_non_negative("drive.p_right_w", d.p_right_w);
    require_non_negative("drive.p_probe_w", d.p_probe_w);
    c.drive.p_left = d.p_left_w;
    c.drive.p_right = d.p_right_w;
    c.drive.p_probe = d.p_probe_w;
    c.drive.delta_1 = d.delta_1_hz ? hz_to_rad(*d.delta_1_hz) : c.params.omega_m;
    c.drive.delta_2 = d.delta_2_hz ? hz_to_rad(*d.delta_2_hz) : c.params.omega_m;
    try {
        validate(c.drive, c.params);
    } catch (const InvalidParameter& e) {
        throw ConfigError("drive", e.what());
    }

    if (c.grid.points < 1) throw ConfigError("grid.points", "must be >= 1");
    if (c.grid.delta_p_min_hz && c.grid.delta_p_max_hz &&
        !(*c.grid.delta_p_min_hz < *c.grid.delta_p_max_hz)) {
        throw ConfigError("grid.delta_p_max_hz", "must exceed grid.delta_p_min_hz");
    }

    require_positive("sweep.p_min_w", c.sweep.p_min_w);
    if (!(c.sweep.p_max_w >= c.sweep.p_min_w)) {
        throw ConfigError("sweep.p_max_w", "must be >= sweep.p_min_w");
    }
    if (c.sweep.points_per_decade < 1) throw ConfigError("sweep.points_per_decade", "must be >= 1");

    require_positive("solver.tol", c.solver.tol);
    if (c.solver.max_iter < 1) throw ConfigError("solver.max_iter", "must be >= 1");
    if (c.solver.scan_resolution < 16) throw ConfigError("solver.scan_resolution", "must be >= 16");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig c;
    std::string section;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where, "unterminated section header");
            const auto name = trim(line.substr(1, line.size() - 2));
            if (!kSections.contains(name)) {
                throw ConfigError(std::string(name), "unknown section (" + where + ")");
            }
            section = std::string(name);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (section.empty()) {
            throw ConfigError(std::string(key), "key outside of any [section] (" + where + ")");
        }
        const std::string full = section + "." + std::string(key);
        const auto it = setters().find(full);
        if (it == setters().end()) throw ConfigError(full, "unknown key (" + where + ")");
        if (!seen.insert(full).second) throw ConfigError(full, "duplicate key (" + where + ")");
        it->second(c, full, value);
    }
    resolve_system(c);
    resolve_rest(c);
    return c;
}

std::string serialize_config(const RunConfig& c) {
    std::ostringstream out;
    auto put = [&](const char* key, double v) { out << key << " = " << format_double(v) << '\n'; };
    auto put_opt = [&](const char* key, const std::optional<double>& v) {
        if (v) put(key, *v);
    };

    out << "[system]\n";
    out << "profile = " << (c.system.profile == Profile::nominal ? "nominal" : "none") << '\n';
    put_opt("omega_1_hz", c.system.omega_1_hz);
    put_opt("omega_2_hz", c.system.omega_2_hz);
    put_opt("kappa_1_hz", c.system.kappa_1_hz);
    put_opt("kappa_2_hz", c.system.kappa_2_hz);
    put_opt("kappa_e1_hz", c.system.kappa_e1_hz);
    put_opt("kappa_e2_hz", c.system.kappa_e2_hz);
    put_opt("omega_m_hz", c.system.omega_m_hz);
    put_opt("q_m", c.system.q_m);
    put_opt("g_1_hz", c.system.g_1_hz);
    put_opt("g_2_hz", c.system.g_2_hz);

    out << "\n[drive]\n";
    put("p_left_w", c.drive_inputs.p_left_w);
    put("p_right_w", c.drive_inputs.p_right_w);
    put("p_probe_w", c.drive_inputs.p_probe_w);
    put_opt("delta_1_hz", c.drive_inputs.delta_1_hz);
    put_opt("delta_2_hz", c.drive_inputs.delta_2_hz);

    out << "\n[grid]\n";
    put_opt("delta_p_min_hz", c.grid.delta_p_min_hz);
    put_opt("delta_p_max_hz", c.grid.delta_p_max_hz);
    out << "points = " << c.grid.points << '\n';
    out << "refine = " << (c.grid.refine ? "true" : "false") << '\n';

    out << "\n[sweep]\n";
    put("p_min_w", c.sweep.p_min_w);
    put("p_max_w", c.sweep.p_max_w);
    out << "points_per_decade = " << c.sweep.points_per_decade << '\n';
    out << "channel = " << to_string(c.sweep.channel) << '\n';

    out << "\n[solver]\n";
    put("tol", c.solver.tol);
    out << "max_iter = " << c.solver.max_iter << '\n';
    out << "scan_resolution = " << c.solver.scan_resolution << '\n';
    out << "coupling_sign = " << to_string(c.solver.coupling_sign) << '\n';

    out << "\n[output]\n";
    out << "format = " << to_string(c.format) << '\n';
    if (c.output_dir) out << "directory = " << *c.output_dir << '\n';
    return out.str();
}

ProbeGrid probe_grid_for(const RunConfig& c, const SteadyState& steady) {
    const double lo = c.grid.delta_p_min_hz ? hz_to_rad(*c.grid.delta_p_min_hz) : -3.0 * c.params.kappa_1;
    const double hi = c.grid.delta_p_max_hz ? hz_to_rad(*c.grid.delta_p_max_hz) : 3.0 * c.params.kappa_1;
    ProbeGrid broad = ProbeGrid::linspace(lo, hi, static_cast<std::size_t>(c.grid.points));
    if (!c.grid.refine) return broad;

    std::vector<double> points = broad.detunings();
    for (const auto& w : refinement_windows(c.params, c.drive, steady)) {
        for (double x : w.detunings()) {
            if (x >= lo && x <= hi) points.push_back(x);
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return ProbeGrid(std::move(points));
}

std::vector<double> power_grid_for(const RunConfig& c) {
    return log_power_grid(c.sweep.p_min_w, c.sweep.p_max_w, c.sweep.points_per_decade);
}

std::string_view to_string(OutputFormat f) noexcept {
    return f == OutputFormat::csv ? "csv" : "json";
}

std::string_view to_string(Channel c) noexcept {
    return c == Channel::transmission ? "transmission" : "reflection";
}

std::string_view to_string(CouplingSign s) noexcept {
    return s == CouplingSign::plus ? "plus" : "minus";
}

}  // namespace optomech
