#pragma once

#include "optomech/config.hpp"
#include "optomech/experiments.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace optomech {

// Locale-free decimal with 17 significant digits (exact double round-trip).
std::string format_double(double value);

// CSV: `# key=value` metadata lines (configuration snapshot, label, solver
// diagnostics), one header line, then one row per axis point. LF endings.
// JSON: one document with config, axis, columns and diagnostics.
void emit_sweep(const SweepResult& result, OutputFormat format, std::ostream& out);

// Throws IoError carrying the path when the file cannot be written.
void emit_sweep(const SweepResult& result, OutputFormat format,
                const std::filesystem::path& destination);

}  // namespace optomech
