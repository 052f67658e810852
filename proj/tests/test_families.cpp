#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include <json.hpp>

#include <frobkit/errors.hpp>
#include <frobkit/families.hpp>
#include <frobkit/fd.hpp>
#include <frobkit/geometry.hpp>
#include <frobkit/lambert.hpp>
#include <frobkit/rng.hpp>

using namespace frobkit;

namespace {

ChartFrame frame_at(const FamilySpec& fam, const Vecd& u) {
  return build_frame(BlockStructure::single(fam.n), fam.gdata, u, 3);
}

double worst_axiom_residual(const FamilySpec& fam, int pts, uint64_t seed) {
  SplitMix64 rng(seed);
  double worst = 0.0;
  for (int k = 0; k < pts; ++k) {
    Vecd u = sample_point(fam.u_box, rng);
    worst = std::max(worst, axiom_residuals(frame_at(fam, u)).max_abs());
  }
  return worst;
}

}  // namespace

TEST_CASE("lambert scalar against bisection") {
  auto residual = [](double w, double x) { return w * std::exp(w) - x; };
  const double xs[] = {-0.36, -0.3, -0.1, 0.0,   0.5,    1.0,
                       2.0,   10.0, 1e3,  2.5e5, 9.9e5, 1e6};
  for (double x : xs) {
    double w = lambert_w(x);
    CHECK(std::fabs(residual(w, x)) <= 1e-12 * std::max(1.0, std::fabs(x)));

    double lo = -1.0, hi = 800.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (residual(mid, x) > 0.0 ? hi : lo) = mid;
    }
    CHECK(w == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-10));
  }
}

TEST_CASE("lambert identity and domain edges") {
  for (double t = -0.999; t < 4.0; t += 0.37) {
    double x = t * std::exp(t);
    CHECK(lambert_w(x) == doctest::Approx(t).epsilon(1e-11));
  }
  CHECK(lambert_w(-std::exp(-1.0)) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(lambert_w(-0.5), DomainError);
  double close = -std::exp(-1.0) + 1e-6;
  double w = lambert_w(close);
  CHECK(std::fabs(w * std::exp(w) - close) <= 1e-12);
}

TEST_CASE("lambert jet ring identity") {
  SplitMix64 rng(101);
  for (int rep = 0; rep < 20; ++rep) {
    double v0 = rng.uniform(-0.3, 3.0);
    double v1 = rng.uniform(0.4, 1.6);
    Jet x = jet_var(0, v0, 2, 3) * jet_var(1, v1, 2, 3);
    if (x.value() <= -std::exp(-1.0) + 0.02) continue;
    Jet w = lambert_w(x);
    Jet back = w * exp(w) - x;
    for (double c : back.coeffs()) CHECK(std::fabs(c) <= 1e-11);
  }

  FdOracle fd;
  auto scalar = [](const std::vector<double>& v) {
    return lambert_w(v[0] * v[0] + v[1]);
  };
  std::vector<double> at{0.7, 0.9};
  Jet x = jet_var(0, 0.7, 2, 3);
  Jet y = jet_var(1, 0.9, 2, 3);
  Jet w = lambert_w(x * x + y);
  CHECK(extract_partial(w, {1, 0}) ==
        doctest::Approx(fd.partial(scalar, at, {1, 0})).epsilon(1e-6));
  CHECK(extract_partial(w, {1, 1}) ==
        doctest::Approx(fd.partial(scalar, at, {1, 1})).epsilon(1e-5));
}

TEST_CASE("catalog shape") {
  const auto& reg = registry();
  CHECK(reg.size() == 31);
  std::set<std::string> ids;
  for (const auto& fam : reg) {
    CHECK(ids.insert(fam.id).second);
    CHECK((fam.n >= 2 && fam.n <= 4));
    CHECK(fam.u_box.lo.size() == fam.n);
    if (fam.d != 0.0) CHECK(fam.gdata.C1 == 0.0);
    if (fam.prepotential) CHECK(fam.eta_flat.has_value());
    CHECK(fam.alt_constants.size() == 2);
    CHECK(bool(fam.sample_constants));
    CHECK(bool(fam.rebind));
  }
  CHECK(find_family("dim2-d0").n == 2);
  CHECK_THROWS_AS(find_family("nope"), UnknownFamily);
  CHECK(select_families({"all"}).size() == reg.size());
  CHECK(select_families({"dim2-d0", "dim4-rational-d0"}).size() == 2);

  auto parsed = nlohmann::json::parse(registry_json());
  CHECK(parsed.size() == reg.size());
  CHECK(parsed[0].contains("ode"));
}

TEST_CASE("every family satisfies the structure equations") {
  for (const auto& fam : registry()) {
    CAPTURE(fam.id);
    double worst =
        worst_axiom_residual(fam, 5, derive_seed(42, fam.id, "axioms"));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("alternate and resampled constants stay flat") {
  for (const auto& fam : registry()) {
    CAPTURE(fam.id);
    for (std::size_t s = 0; s < fam.alt_constants.size(); ++s) {
      FamilySpec alt = fam.rebind(fam.alt_constants[s]);
      double worst = worst_axiom_residual(
          alt, 2, derive_seed(42, fam.id, "axioms-alt", s));
      CHECK(worst < 1e-8);
    }
    SplitMix64 rng(derive_seed(42, fam.id, "constants"));
    FamilySpec rnd = fam.rebind(fam.sample_constants(rng));
    double worst =
        worst_axiom_residual(rnd, 2, derive_seed(42, fam.id, "axioms-rnd"));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("flat charts straighten the metric") {
  for (const auto& fam : registry()) {
    if (!fam.flat_map) continue;
    CAPTURE(fam.id);
    SplitMix64 rng(derive_seed(42, fam.id, "flat"));
    Matd first;
    for (int k = 0; k < 5; ++k) {
      Vecd u = sample_point(fam.u_box, rng);
      Pushforward pf = pushforward_frame(*fam.flat_map, frame_at(fam, u));
      if (k == 0) {
        first = pf.eta_flat;
      } else {
        CHECK((pf.eta_flat - first).cwiseAbs().maxCoeff() < 1e-9);
      }
      if (fam.eta_flat) {
        CHECK((pf.eta_flat - *fam.eta_flat).cwiseAbs().maxCoeff() < 1e-8);
      }
      if (fam.euler_flat) {
        Vecd expect = fam.euler_flat->M * pf.x + fam.euler_flat->t;
        CHECK((pf.E_flat - expect).cwiseAbs().maxCoeff() < 1e-8);
      }
      Vecd e_expect = Vecd::Zero(fam.n);
      e_expect[0] = 1.0;
      CHECK((pf.e_flat - e_expect).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
}

TEST_CASE("prepotentials satisfy associativity and match the product") {
  for (const auto& fam : registry()) {
    if (!fam.prepotential) continue;
    CAPTURE(fam.id);
    SplitMix64 rng(derive_seed(42, fam.id, "wdvv"));
    for (int k = 0; k < 4; ++k) {
      Vecd u = sample_point(fam.u_box, rng);
      Vecd x = eval_flat_map(fam, u);
      CHECK(wdvv_residual(*fam.prepotential, *fam.eta_flat, x) < 1e-9);

      Pushforward pf = pushforward_frame(*fam.flat_map, frame_at(fam, u));
      Tensor3<double> cF =
          product_from_prepotential(*fam.prepotential, *fam.eta_flat, pf.x);
      double worst = 0.0;
      for (int a = 0; a < fam.n; ++a)
        for (int b = 0; b < fam.n; ++b)
          for (int c = 0; c < fam.n; ++c)
            worst = std::max(worst,
                             std::fabs(cF(a, b, c) - pf.c_flat(a, b, c)));
      CHECK(worst < 1e-7);
    }
  }
}

TEST_CASE("branch relations hold on the reduced windows") {
  for (const auto& fam : registry()) {
    if (fam.ode == OdeKind::none) continue;
    CAPTURE(fam.id);
    double tol = fam.n == 3 ? 1e-12 : 1e-10;
    double worst = 0.0;
    for (int i = 0; i <= 12; ++i) {
      double z = fam.z_window.first +
                 (fam.z_window.second - fam.z_window.first) * i / 12.0;
      if (fam.n == 3) {
        worst = std::max(worst, ode_residual(fam, z));
      } else {
        for (int j = 0; j <= 4; ++j) {
          double w = fam.w_window.first +
                     (fam.w_window.second - fam.w_window.first) * j / 4.0;
          worst = std::max(worst, ode_residual(fam, z, w));
        }
      }
    }
    CHECK(worst < tol);
  }
}

TEST_CASE("perturbed data trips the structure equations") {
  for (const auto& fam : registry()) {
    CAPTURE(fam.id);
    FamilySpec bad = perturbed(fam);
    SplitMix64 rng(derive_seed(42, fam.id, "neg"));
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      Vecd u = sample_point(bad.u_box, rng);
      worst = std::max(worst, axiom_residuals(frame_at(bad, u)).max_abs());
    }
    CHECK(worst > 1e-3);
  }
}

TEST_CASE("window sampling respects the predicate") {
  const auto& fam = find_family("dim3-example-d2-C2one");
  SplitMix64 rng(7);
  for (int k = 0; k < 50; ++k) {
    Vecd u = sample_point(fam.u_box, rng);
    for (int i = 0; i < 3; ++i) {
      CHECK(u[i] >= fam.u_box.lo[i]);
      CHECK(u[i] <= fam.u_box.hi[i]);
    }
    CHECK(fam.u_box.accept(u));
  }

  SampleBox impossible;
  impossible.lo = Vecd::Zero(1);
  impossible.hi = Vecd::Ones(1);
  impossible.accept = [](const Vecd&) { return false; };
  CHECK_THROWS_AS(sample_point(impossible, rng), NoConvergence);
}
