#include "chartensor/table_io.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace chartensor {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

const char* value_column(ChartKind kind) { return kind == ChartKind::kScatter ? "y" : "height"; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

std::string table_csv(const DataTable& table, const Provenance& provenance) {
  std::string out;
  out += "# chart_type: ";
  out += to_string(table.kind);
  out += '\n';
  for (const auto& [k, v] : provenance) out += "# " + k + ": " + v + "\n";
  out += "x,";
  out += value_column(table.kind);
  out += '\n';
  for (const auto& r : table.rows) out += num(r.x) + "," + num(r.y) + "\n";
  return out;
}

std::string table_json(const DataTable& table, const Provenance& provenance) {
  nlohmann::ordered_json j;
  j["chart_type"] = to_string(table.kind);
  auto& prov = j["provenance"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : provenance) prov[k] = v;
  j["columns"] = {"x", value_column(table.kind)};
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) rows.push_back({r.x, r.y});
  return j.dump(2) + "\n";
}

DataTable parse_table_csv(const std::string& text) {
  DataTable t;
  bool have_kind = false, have_header = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (body.rfind("chart_type:", 0) == 0) {
        t.kind = parse_chart_kind(trim(body.substr(11)));
        have_kind = true;
      }
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      fail(ErrorKind::kParse, "table line " + std::to_string(lineno) + ": expected two columns");
    }
    const std::string a = trim(line.substr(0, comma)), b = trim(line.substr(comma + 1));
    if (!have_header) {
      if (a != "x" || (b != "y" && b != "height"))
        fail(ErrorKind::kParse, "table header must be 'x,y' or 'x,height'");
      if (!have_kind) t.kind = b == "y" ? ChartKind::kScatter : ChartKind::kBar;
      have_header = true;
      continue;
    }
    try {
      std::size_t pa = 0, pb = 0;
      const double x = std::stod(a, &pa), y = std::stod(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing");
      t.rows.push_back({x, y});
    } catch (const std::logic_error&) {
      fail(ErrorKind::kParse, "table line " + std::to_string(lineno) + ": not a number");
    }
  }
  if (!have_header) fail(ErrorKind::kParse, "table has no header line");
  return t;
}

}  // namespace chartensor
