#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <frobkit/families.hpp>
#include <frobkit/report.hpp>

namespace frobkit {

struct RunConfig {
  std::vector<std::string> family_ids{"all"};
  int points_per_family = 100;
  std::uint64_t seed = 42;
  double tol_axiom = 1e-8;
  double tol_flat = 1e-9;
  double tol_wdvv = 1e-9;
  int jet_order = 3;
  // Extra constant sets drawn per family on top of the deterministic ones.
  int random_sets = 2;
};

// Throws InvalidConfig unless points_per_family >= 1, every tolerance > 0,
// jet_order >= 2 and random_sets >= 0.
void validate(const RunConfig& cfg);

struct RunResult {
  std::vector<CheckReport> reports;
  // True iff every applicable check passed.
  bool all_passed = true;
};

// All six checks for one family: axioms, flat-map, ode, pencil, wdvv,
// wdvv-cmatch. Checks the family has no data for come back non-applicable.
std::vector<CheckReport> family_checks(const FamilySpec& fam, const RunConfig& cfg);

// Full sweep over cfg.family_ids ("all" expands to the registry). Families
// run in a parallel pool; reports are ordered by (family_id, check_id), so
// output does not depend on scheduling.
RunResult run_verify(const RunConfig& cfg);

// Pencil rows only, same ordering contract.
RunResult run_pencil(const RunConfig& cfg);

}  // namespace frobkit
