#include "emforms/report.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "emforms/errors.hpp"

namespace emforms {

void RunReport::check(const std::string& name, double measured, double tolerance) {
  assertions.push_back({name, tolerance, measured,
                        std::isfinite(measured) && std::abs(measured) <= tolerance});
}

void RunReport::check_flag(const std::string& name, bool pass, double measured,
                           double tolerance) {
  assertions.push_back({name, tolerance, measured, pass});
}

bool RunReport::passed() const {
  for (const Assertion& a : assertions)
    if (!a.pass) return false;
  return true;
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["scenario"] = scenario;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  nlohmann::json ts = nlohmann::json::array();
  for (const Table& t : tables) {
    nlohmann::json tj;
    tj["name"] = t.name;
    tj["columns"] = t.columns;
    tj["rows"] = t.rows;
    ts.push_back(tj);
  }
  j["tables"] = ts;
  nlohmann::json as = nlohmann::json::array();
  for (const Assertion& a : assertions)
    as.push_back({{"name", a.name},
                  {"tolerance", a.tolerance},
                  {"measured", a.measured},
                  {"pass", a.pass}});
  j["assertions"] = as;
  j["passed"] = passed();
  j["wall_time_s"] = wall_time_s;
  return j.dump(2) + "\n";
}

std::vector<std::string> write_tables_csv(const RunReport& report, const std::string& dir) {
  std::vector<std::string> paths;
  for (const Table& t : report.tables) {
    const std::string path = dir + "/" + t.name + ".csv";
    std::ofstream out(path);
    if (!out) throw ValidationError(path, "cannot write table file");
    out.precision(17);
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      out << t.columns[i] << (i + 1 < t.columns.size() ? "," : "\n");
    for (const auto& row : t.rows)
      for (std::size_t i = 0; i < row.size(); ++i) out << row[i] << (i + 1 < row.size() ? "," : "\n");
    paths.push_back(path);
  }
  return paths;
}

}  // namespace emforms
