#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace frobkit {

// One verification sweep over one family. For a check that does not apply
// to the family (no closed ODE, no printed chart, ...) `applicable` is
// false and the row renders with status "n/a".
struct CheckReport {
  std::string check_id;
  std::string family_id;
  int n_points = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  bool applicable = true;
  std::uint64_t seed = 0;
  std::int64_t elapsed_ms = 0;

  std::string status() const { return applicable ? (passed ? "pass" : "fail") : "n/a"; }
};

// Single JSON object, fixed key order, no trailing newline. elapsed_ms is
// the only field allowed to differ between two runs of the same config.
std::string report_json_line(const CheckReport& r);

// One report per line, trailing newline after each.
std::string report_jsonl(const std::vector<CheckReport>& reports);

// Aligned human-readable table for terminal output.
std::string report_table(const std::vector<CheckReport>& reports);

}  // namespace frobkit
