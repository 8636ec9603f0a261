#include "optomech/output.hpp"

#include "optomech/errors.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

namespace optomech {

namespace {

using Meta = std::vector<std::pair<std::string, std::string>>;

Meta metadata(const SweepResult& r) {
    const SystemParams& p = r.config.params;
    const DriveConfig& d = r.config.drive;
    const SolverOptions& s = r.config.solver;
    Meta m = {
        {"label", r.label},
        {"axis", r.axis_name},
        {"points", std::to_string(r.axis_values.size())},
        {"omega_1_rad_s", format_double(p.omega_1)},
        {"omega_2_rad_s", format_double(p.omega_2)},
        {"kappa_1_rad_s", format_double(p.kappa_1)},
        {"kappa_2_rad_s", format_double(p.kappa_2)},
        {"kappa_e1_rad_s", format_double(p.kappa_e1)},
        {"kappa_e2_rad_s", format_double(p.kappa_e2)},
        {"omega_m_rad_s", format_double(p.omega_m)},
        {"q_m", format_double(p.q_m)},
        {"g_1_rad_s", format_double(p.g_1)},
        {"g_2_rad_s", format_double(p.g_2)},
        {"p_left_w", format_double(d.p_left)},
        {"p_right_w", format_double(d.p_right)},
        {"p_probe_w", format_double(d.p_probe)},
        {"delta_1_rad_s", format_double(d.delta_1)},
        {"delta_2_rad_s", format_double(d.delta_2)},
        {"solver_tol", format_double(s.tol)},
        {"solver_max_iter", std::to_string(s.max_iter)},
        {"solver_scan_resolution", std::to_string(s.scan_resolution)},
        {"solver_coupling_sign", std::string(to_string(s.coupling_sign))},
    };
    return m;
}

// Spectra carry one diagnostics record, power sweeps one per row.
bool per_point_diagnostics(const SweepResult& r) {
    return r.diagnostics.size() == r.axis_values.size() && r.axis_values.size() > 1;
}

void check_shape(const SweepResult& r) {
    if (r.axis_values.empty()) throw Error("sweep '" + r.label + "' has no points");
    for (const auto& c : r.columns) {
        if (c.values.size() != r.axis_values.size()) {
            throw Error("column '" + c.name + "' length does not match the axis");
        }
    }
}

void write_csv(const SweepResult& r, std::ostream& out) {
    for (const auto& [k, v] : metadata(r)) out << "# " << k << '=' << v << '\n';
    const bool per_point = per_point_diagnostics(r);
    if (!per_point) {
        for (std::size_t i = 0; i < r.diagnostics.size(); ++i) {
            const auto& d = r.diagnostics[i];
            out << "# solver_residual=" << format_double(d.residual) << '\n';
            out << "# branch_count=" << d.branch_count << '\n';
            if (!d.ok) out << "# solver_error=" << d.message << '\n';
        }
    } else {
        for (std::size_t i = 0; i < r.diagnostics.size(); ++i) {
            if (!r.diagnostics[i].ok) {
                out << "# solver_error[" << i << "]=" << r.diagnostics[i].message << '\n';
            }
        }
    }

    out << r.axis_name;
    for (const auto& c : r.columns) out << ',' << c.name;
    if (per_point) out << ",solver_residual,branch_count";
    out << '\n';
    for (std::size_t i = 0; i < r.axis_values.size(); ++i) {
        out << format_double(r.axis_values[i]);
        for (const auto& c : r.columns) out << ',' << format_double(c.values[i]);
        if (per_point) {
            out << ',' << format_double(r.diagnostics[i].residual) << ','
                << r.diagnostics[i].branch_count;
        }
        out << '\n';
    }
}

nlohmann::ordered_json number(double v) {
    // JSON has no NaN; failed points become null.
    if (!std::isfinite(v)) return nullptr;
    return v;
}

void write_json(const SweepResult& r, std::ostream& out) {
    using nlohmann::ordered_json;
    const SystemParams& p = r.config.params;
    const DriveConfig& d = r.config.drive;
    const SolverOptions& s = r.config.solver;

    ordered_json doc;
    doc["label"] = r.label;
    doc["config_snapshot"] = {
        {"params",
         {{"omega_1_rad_s", p.omega_1},
          {"omega_2_rad_s", p.omega_2},
          {"kappa_1_rad_s", p.kappa_1},
          {"kappa_2_rad_s", p.kappa_2},
          {"kappa_e1_rad_s", p.kappa_e1},
          {"kappa_e2_rad_s", p.kappa_e2},
          {"omega_m_rad_s", p.omega_m},
          {"q_m", p.q_m},
          {"g_1_rad_s", p.g_1},
          {"g_2_rad_s", p.g_2}}},
        {"drive",
         {{"p_left_w", d.p_left},
          {"p_right_w", d.p_right},
          {"p_probe_w", d.p_probe},
          {"delta_1_rad_s", d.delta_1},
          {"delta_2_rad_s", d.delta_2}}},
        {"solver",
         {{"tol", s.tol},
          {"max_iter", s.max_iter},
          {"scan_resolution", s.scan_resolution},
          {"coupling_sign", std::string(to_string(s.coupling_sign))}}},
    };
    doc["axis_name"] = r.axis_name;
    ordered_json axis = ordered_json::array();
    for (double v : r.axis_values) axis.push_back(number(v));
    doc["axis_values"] = std::move(axis);

    ordered_json columns = ordered_json::object();
    for (const auto& c : r.columns) {
        ordered_json values = ordered_json::array();
        for (double v : c.values) values.push_back(number(v));
        columns[c.name] = std::move(values);
    }
    doc["columns"] = std::move(columns);

    ordered_json diags = ordered_json::array();
    for (const auto& dg : r.diagnostics) {
        ordered_json e = {{"residual", number(dg.residual)},
                          {"branch_count", dg.branch_count},
                          {"ok", dg.ok}};
        if (!dg.ok) e["message"] = dg.message;
        diags.push_back(std::move(e));
    }
    doc["solver_diagnostics"] = std::move(diags);
    out << doc.dump(1) << '\n';
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 40> buf{};
    const auto [ptr, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

void emit_sweep(const SweepResult& result, OutputFormat format, std::ostream& out) {
    check_shape(result);
    if (format == OutputFormat::csv) {
        write_csv(result, out);
    } else {
        write_json(result, out);
    }
}

void emit_sweep(const SweepResult& result, OutputFormat format,
                const std::filesystem::path& destination) {
    // Render first so a shape error never leaves a truncated file behind.
    std::ostringstream buffer;
    emit_sweep(result, format, buffer);
    std::ofstream file(destination, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(destination.string(), "cannot open for writing");
    file << buffer.str();
    file.flush();
    if (!file) throw IoError(destination.string(), "write failed");
}

}  // namespace optomech
