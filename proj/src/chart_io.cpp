#include "nonholo/chart_io.hpp"

#include <fstream>
#include <sstream>

#include "nonholo/errors.hpp"

namespace nonholo {

namespace {

using nlohmann::json;

std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1;
  int column = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

template <class T>
T require_field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorKind::Validation, std::string("chart file lacks '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Validation, std::string("chart field '") + key + "': " + e.what());
  }
}

// Offset of the k-th string literal inside the "exprs" array, or npos.
std::size_t locate_expr(const std::string& text, std::size_t k) {
  std::size_t pos = text.find("\"exprs\"");
  if (pos == std::string::npos) return pos;
  pos = text.find('[', pos);
  if (pos == std::string::npos) return pos;
  std::size_t seen = 0;
  for (std::size_t i = pos + 1; i < text.size(); ++i) {
    if (text[i] == ']') return std::string::npos;
    if (text[i] != '"') continue;
    if (seen == k) return i + 1;
    ++seen;
    for (++i; i < text.size() && text[i] != '"'; ++i)
      if (text[i] == '\\') ++i;
  }
  return std::string::npos;
}

}  // namespace

ChartSpec chart_spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Validation, "chart file must hold a JSON object");
  ChartSpec spec;
  spec.name = j.value("name", std::string("chart"));
  spec.dim = require_field<int>(j, "dim");
  spec.ambient = j.value("ambient", 0);
  auto kind = require_field<std::string>(j, "kind");
  if (kind == "map") {
    spec.kind = ChartKind::HolonomicMap;
  } else if (kind == "triad") {
    spec.kind = ChartKind::TriadField;
  } else {
    throw Error(ErrorKind::Validation, "chart kind must be \"map\" or \"triad\", got \"" + kind + "\"");
  }
  spec.exprs = require_field<std::vector<std::string>>(j, "exprs");
  if (j.contains("params")) spec.params = j.at("params").get<std::map<std::string, double>>();
  if (j.contains("guard") && !j.at("guard").is_null()) spec.guard = j.at("guard").get<std::string>();

  if (spec.dim < 1 || spec.dim > Chart::kMaxDim)
    throw Error(ErrorKind::DimensionMismatch, "chart dim must be between 1 and 4");
  int ambient = spec.ambient ? spec.ambient : spec.dim;
  std::size_t expected = spec.kind == ChartKind::HolonomicMap
                             ? static_cast<std::size_t>(ambient)
                             : static_cast<std::size_t>(ambient * spec.dim);
  if (spec.exprs.size() != expected)
    throw Error(ErrorKind::DimensionMismatch,
                "chart of dim " + std::to_string(spec.dim) + " and kind " + kind + " needs " +
                    std::to_string(expected) + " exprs, got " + std::to_string(spec.exprs.size()));
  return spec;
}

json chart_spec_to_json(const ChartSpec& spec) {
  json j;
  j["name"] = spec.name;
  j["dim"] = spec.dim;
  if (spec.ambient != 0 && spec.ambient != spec.dim) j["ambient"] = spec.ambient;
  j["kind"] = spec.kind == ChartKind::HolonomicMap ? "map" : "triad";
  j["exprs"] = spec.exprs;
  j["params"] = spec.params;
  if (spec.guard) j["guard"] = *spec.guard;
  return j;
}

ChartSpec parse_chart_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, column] = line_column(text, offset);
    std::string token = offset < text.size() ? std::string(1, text[offset]) : std::string();
    throw ParseError("malformed chart JSON", line, column, token);
  }
  ChartSpec spec = chart_spec_from_json(j);

  SymbolTable symbols = SymbolTable::coordinates(spec.dim, spec.params);
  auto check = [&](const std::string& expr, std::size_t offset) {
    try {
      Expression::parse(expr, symbols);
    } catch (const ParseError& e) {
      if (offset == std::string::npos) throw;
      auto [line, column] = line_column(text, offset);
      throw ParseError(std::string(e.what()).substr(0, std::string(e.what()).find(" at line")),
                       line + e.line() - 1, e.line() == 1 ? column + e.column() - 1 : e.column(),
                       e.token());
    }
  };
  for (std::size_t k = 0; k < spec.exprs.size(); ++k) check(spec.exprs[k], locate_expr(text, k));
  if (spec.guard) {
    std::size_t pos = text.find("\"guard\"");
    if (pos != std::string::npos) pos = text.find('"', text.find(':', pos));
    check(*spec.guard, pos == std::string::npos ? pos : pos + 1);
  }
  return spec;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Chart parse_chart_file(const std::filesystem::path& path, const Tolerances& tol) {
  return Chart(parse_chart_text(read_text_file(path)), tol);
}

}  // namespace nonholo
