#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nonholo/chart.hpp"

namespace nonholo {

// Chart file schema:
//   {"name": "...", "dim": D, "ambient": A (optional), "kind": "map" | "triad",
//    "exprs": [...], "params": {"name": value}, "guard": "expr" (optional)}
// Triad exprs are row-major: exprs[i*D + mu] = e^i_mu.
ChartSpec chart_spec_from_json(const nlohmann::json& j);
nlohmann::json chart_spec_to_json(const ChartSpec& spec);

// Parses JSON text. Syntax errors and expression errors raise ParseError with
// a 1-based line/column into `text`.
ChartSpec parse_chart_text(const std::string& text);

Chart parse_chart_file(const std::filesystem::path& path, const Tolerances& tol = default_tolerances());

std::string read_text_file(const std::filesystem::path& path);

}  // namespace nonholo
