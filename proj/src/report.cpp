#include <frobkit/report.hpp>

#include <cstdio>

#include <json.hpp>

namespace frobkit {

std::string report_json_line(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["check_id"] = r.check_id;
  j["family_id"] = r.family_id;
  j["n_points"] = r.n_points;
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tolerance;
  j["passed"] = r.passed;
  j["status"] = r.status();
  j["seed"] = r.seed;
  j["elapsed_ms"] = r.elapsed_ms;
  return j.dump();
}

std::string report_jsonl(const std::vector<CheckReport>& reports) {
  std::string out;
  for (const auto& r : reports) {
    out += report_json_line(r);
    out += '\n';
  }
  return out;
}

std::string report_table(const std::vector<CheckReport>& reports) {
  std::string out = "family                              check          points  max residual  tolerance  status\n";
  char line[192];
  for (const auto& r : reports) {
    if (r.applicable) {
      std::snprintf(line, sizeof line, "%-34s  %-13s  %6d  %12.3e  %9.0e  %s\n", r.family_id.c_str(),
                    r.check_id.c_str(), r.n_points, r.max_residual, r.tolerance, r.status().c_str());
    } else {
      std::snprintf(line, sizeof line, "%-34s  %-13s  %6s  %12s  %9s  %s\n", r.family_id.c_str(),
                    r.check_id.c_str(), "-", "-", "-", "n/a");
    }
    out += line;
  }
  return out;
}

}  // namespace frobkit
