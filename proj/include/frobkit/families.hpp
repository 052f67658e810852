#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <frobkit/geometry.hpp>
#include <frobkit/rng.hpp>
#include <frobkit/structures.hpp>

namespace frobkit {

// Named constants C1..C8; unset slots stay zero.
struct ConstantSet {
  std::array<double, 8> v{};
  double C(int i) const { return v[static_cast<std::size_t>(i - 1)]; }
  double& C(int i) { return v[static_cast<std::size_t>(i - 1)]; }
};

// Axis-aligned sampling window plus an optional acceptance predicate for
// cuts the box cannot express.
struct SampleBox {
  Vecd lo;
  Vecd hi;
  std::function<bool(const Vecd&)> accept;
};

// Vector field of the form M x + t in the target coordinates.
struct AffineField {
  Matd M;
  Vecd t;
};

enum class OdeKind { none, entries3, exp4, rational4 };

struct FamilySpec {
  std::string id;
  int n = 2;
  double d = 0.0;
  ConstantSet constants;
  GeneratingData gdata;
  SampleBox u_box;

  std::optional<CoordinateMap> flat_map;
  // Expected constant metric in the target coordinates; absent means the
  // flat-map check can only assert constancy.
  std::optional<Matd> eta_flat;
  std::optional<AffineField> euler_flat;
  std::optional<ScalarField> prepotential;

  OdeKind ode = OdeKind::none;
  // entries3: closed Hankel entries [F1 F2 F3](z).
  std::function<std::array<Jet, 3>(const Jet&)> entries3;
  // exp4: slope and drift of the splitting f = w h1(z) + h2(z).
  std::function<Jet(const Jet&)> h1, h2;
  // rational4: pole data of the splitting f = C3 - A(z)/(2 B(z) + w).
  std::function<Jet(const Jet&)> poleA, poleB;
  std::pair<double, double> z_window{0.0, 0.0};
  std::pair<double, double> w_window{0.0, 0.0};

  // Alternate constant sets that satisfy the same branch conditions.
  std::vector<ConstantSet> alt_constants;
  std::function<ConstantSet(SplitMix64&)> sample_constants;
  std::function<FamilySpec(const ConstantSet&)> rebind;
};

const std::vector<FamilySpec>& registry();
const FamilySpec& find_family(const std::string& id);

// Resolves ids, with "all" expanding to the whole registry. Throws
// UnknownFamily on anything unrecognized.
std::vector<const FamilySpec*> select_families(const std::vector<std::string>& ids);

// Copy of fam whose metric data is polluted by a lowest-degree term that no
// admissible branch contains, so curvature-derived residuals must blow up.
FamilySpec perturbed(const FamilySpec& fam);

// Rejection sampling inside the window; throws NoConvergence if the
// predicate keeps refusing.
Vecd sample_point(const SampleBox& box, SplitMix64& rng);

// Worst residual of the defining relations of the family's branch at the
// given reduced variables. For entries3 the result also covers agreement
// between the closed entries and the ones generated by f.
double ode_residual(const FamilySpec& fam, double z, double w = 0.0);

Vecd eval_flat_map(const FamilySpec& fam, const Vecd& u);
double eval_prepotential(const FamilySpec& fam, const Vecd& x);

// One-line-per-family machine-readable catalog.
std::string registry_json();

}  // namespace frobkit
