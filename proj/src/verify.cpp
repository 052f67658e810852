#include <frobkit/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <utility>

#include <frobkit/errors.hpp>
#include <frobkit/geometry.hpp>

namespace frobkit {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count();
}

// Primary constants get the full point budget; each alternate or freshly
// sampled constant set gets a quarter of it.
int side_budget(int points) { return std::max(3, points / 4); }

std::vector<FamilySpec> constant_variants(const FamilySpec& fam, const RunConfig& cfg,
                                          SplitMix64& rng) {
  std::vector<FamilySpec> out;
  if (!fam.rebind) return out;
  for (const auto& cs : fam.alt_constants) out.push_back(fam.rebind(cs));
  if (fam.sample_constants)
    for (int s = 0; s < cfg.random_sets; ++s) out.push_back(fam.rebind(fam.sample_constants(rng)));
  return out;
}

CheckReport make_report(const char* check, const FamilySpec& fam, double tol,
                        const RunConfig& cfg) {
  CheckReport r;
  r.check_id = check;
  r.family_id = fam.id;
  r.tolerance = tol;
  r.seed = derive_seed(cfg.seed, fam.id, check);
  return r;
}

CheckReport check_axioms(const FamilySpec& fam, const RunConfig& cfg) {
  auto t0 = Clock::now();
  CheckReport r = make_report("axioms", fam, cfg.tol_axiom, cfg);
  SplitMix64 rng(r.seed);
  auto sweep = [&](const FamilySpec& f, int pts) {
    BlockStructure bs = BlockStructure::single(f.n);
    for (int k = 0; k < pts; ++k) {
      Vecd u = sample_point(f.u_box, rng);
      ChartFrame fr = build_frame(bs, f.gdata, u, cfg.jet_order);
      r.max_residual = std::max(r.max_residual, axiom_residuals(fr).max_abs());
      ++r.n_points;
    }
  };
  sweep(fam, cfg.points_per_family);
  for (const auto& v : constant_variants(fam, cfg, rng))
    sweep(v, side_budget(cfg.points_per_family));
  r.passed = r.max_residual <= r.tolerance;
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_ode(const FamilySpec& fam, const RunConfig& cfg) {
  auto t0 = Clock::now();
  CheckReport r = make_report("ode", fam, fam.n == 3 ? 1e-12 : 1e-10, cfg);
  r.applicable = fam.ode != OdeKind::none;
  if (r.applicable) {
    SplitMix64 rng(r.seed);
    auto sweep = [&](const FamilySpec& f, int pts) {
      for (int k = 0; k < pts; ++k) {
        double z = rng.uniform(f.z_window.first, f.z_window.second);
        double w = f.n == 4 ? rng.uniform(f.w_window.first, f.w_window.second) : 0.0;
        r.max_residual = std::max(r.max_residual, ode_residual(f, z, w));
        ++r.n_points;
      }
    };
    sweep(fam, 50);
    for (const auto& v : constant_variants(fam, cfg, rng)) sweep(v, side_budget(50));
    r.passed = r.max_residual <= r.tolerance;
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_flat_map(const FamilySpec& fam, const RunConfig& cfg) {
  auto t0 = Clock::now();
  CheckReport r = make_report("flat-map", fam, cfg.tol_flat, cfg);
  r.applicable = static_cast<bool>(fam.flat_map);
  if (r.applicable) {
    SplitMix64 rng(r.seed);
    const int pts = 50;
    BlockStructure bs = BlockStructure::single(fam.n);
    std::vector<Matd> etas;
    etas.reserve(pts);
    Vecd e0;
    double printed = 0.0, euler = 0.0, edrift = 0.0;
    for (int k = 0; k < pts; ++k) {
      Vecd u = sample_point(fam.u_box, rng);
      ChartFrame fr = build_frame(bs, fam.gdata, u, cfg.jet_order);
      Pushforward pf = pushforward_frame(*fam.flat_map, fr);
      etas.push_back(pf.eta_flat);
      if (fam.eta_flat)
        printed = std::max(printed, (pf.eta_flat - *fam.eta_flat).cwiseAbs().maxCoeff());
      if (fam.euler_flat) {
        Vecd expect = fam.euler_flat->M * pf.x + fam.euler_flat->t;
        euler = std::max(euler, (pf.E_flat - expect).cwiseAbs().maxCoeff());
      }
      if (k == 0)
        e0 = pf.e_flat;
      else
        edrift = std::max(edrift, (pf.e_flat - e0).cwiseAbs().maxCoeff());
      r.n_points++;
    }
    Matd mean = Matd::Zero(fam.n, fam.n);
    for (const auto& m : etas) mean += m;
    mean /= static_cast<double>(pts);
    Matd var = Matd::Zero(fam.n, fam.n);
    for (const auto& m : etas) var += (m - mean).cwiseAbs2();
    double sd = (var / static_cast<double>(pts)).cwiseSqrt().maxCoeff();
    r.max_residual = std::max({sd, printed, euler, edrift});
    r.passed = r.max_residual <= r.tolerance;
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_wdvv(const FamilySpec& fam, const RunConfig& cfg) {
  auto t0 = Clock::now();
  CheckReport r = make_report("wdvv", fam, cfg.tol_wdvv, cfg);
  r.applicable = fam.prepotential && fam.flat_map && fam.eta_flat;
  if (r.applicable) {
    SplitMix64 rng(r.seed);
    auto sweep = [&](const FamilySpec& f, int pts) {
      for (int k = 0; k < pts; ++k) {
        Vecd u = sample_point(f.u_box, rng);
        Vecd x = eval_flat_map(f, u);
        r.max_residual = std::max(r.max_residual, wdvv_residual(*f.prepotential, *f.eta_flat, x));
        ++r.n_points;
      }
    };
    sweep(fam, 20);
    for (const auto& v : constant_variants(fam, cfg, rng)) sweep(v, side_budget(20));
    r.passed = r.max_residual <= r.tolerance;
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_wdvv_cmatch(const FamilySpec& fam, const RunConfig& cfg) {
  auto t0 = Clock::now();
  CheckReport r = make_report("wdvv-cmatch", fam, 1e-7, cfg);
  r.applicable = fam.prepotential && fam.flat_map && fam.eta_flat;
  if (r.applicable) {
    SplitMix64 rng(r.seed);
    BlockStructure bs = BlockStructure::single(fam.n);
    const int pts = 20;
    for (int k = 0; k < pts; ++k) {
      Vecd u = sample_point(fam.u_box, rng);
      ChartFrame fr = build_frame(bs, fam.gdata, u, cfg.jet_order);
      Pushforward pf = pushforward_frame(*fam.flat_map, fr);
      Tensor3<double> c3 = product_from_prepotential(*fam.prepotential, *fam.eta_flat, pf.x);
      for (int a = 0; a < fam.n; ++a)
        for (int i = 0; i < fam.n; ++i)
          for (int j = 0; j < fam.n; ++j)
            r.max_residual = std::max(r.max_residual, std::abs(c3(a, i, j) - pf.c_flat(a, i, j)));
      ++r.n_points;
    }
    r.passed = r.max_residual <= r.tolerance;
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

CheckReport check_pencil(const FamilySpec& fam, const RunConfig& cfg) {
  auto t0 = Clock::now();
  CheckReport r = make_report("pencil", fam, 1e-8, cfg);
  SplitMix64 rng(r.seed);
  BlockStructure bs = BlockStructure::single(fam.n);
  auto sweep = [&](const FamilySpec& f, int pts) {
    // The Euler multiplication operator degenerates at u^1 = 0, so the
    // pencil sweep pins the first coordinate to a window clear of it.
    SampleBox box = f.u_box;
    box.lo[0] = 0.5;
    box.hi[0] = 2.0;
    for (int k = 0; k < pts; ++k) {
      Vecd u = sample_point(box, rng);
      ChartFrame fr = build_frame(bs, f.gdata, u, cfg.jet_order);
      PencilResiduals pr = flat_pencil_residual(fr);
      r.max_residual =
          std::max({r.max_residual, pr.curvature_g1, pr.curvature_g2, pr.linearity});
      ++r.n_points;
    }
  };
  sweep(fam, 20);
  for (const auto& v : constant_variants(fam, cfg, rng)) sweep(v, side_budget(20));
  r.passed = r.max_residual <= r.tolerance;
  r.elapsed_ms = ms_since(t0);
  return r;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (cfg.points_per_family < 1) throw InvalidConfig("points_per_family must be >= 1");
  if (!(cfg.tol_axiom > 0.0) || !(cfg.tol_flat > 0.0) || !(cfg.tol_wdvv > 0.0))
    throw InvalidConfig("tolerances must be positive");
  if (cfg.jet_order < 2) throw InvalidConfig("jet_order must be >= 2");
  if (cfg.random_sets < 0) throw InvalidConfig("random_sets must be >= 0");
}

std::vector<CheckReport> family_checks(const FamilySpec& fam, const RunConfig& cfg) {
  std::vector<CheckReport> out;
  out.push_back(check_axioms(fam, cfg));
  out.push_back(check_flat_map(fam, cfg));
  out.push_back(check_ode(fam, cfg));
  out.push_back(check_pencil(fam, cfg));
  out.push_back(check_wdvv(fam, cfg));
  out.push_back(check_wdvv_cmatch(fam, cfg));
  return out;
}

namespace {

RunResult run_pool(const RunConfig& cfg,
                   std::vector<CheckReport> (*per_family)(const FamilySpec&, const RunConfig&)) {
  validate(cfg);
  std::vector<const FamilySpec*> fams = select_families(cfg.family_ids);
  std::vector<std::future<std::vector<CheckReport>>> jobs;
  jobs.reserve(fams.size());
  for (const FamilySpec* f : fams)
    jobs.push_back(std::async(std::launch::async, per_family, std::cref(*f), std::cref(cfg)));
  RunResult res;
  for (auto& j : jobs)
    for (auto& r : j.get()) res.reports.push_back(std::move(r));
  std::sort(res.reports.begin(), res.reports.end(), [](const CheckReport& a, const CheckReport& b) {
    return std::tie(a.family_id, a.check_id) < std::tie(b.family_id, b.check_id);
  });
  for (const auto& r : res.reports)
    if (r.applicable && !r.passed) res.all_passed = false;
  return res;
}

std::vector<CheckReport> pencil_only(const FamilySpec& fam, const RunConfig& cfg) {
  return {check_pencil(fam, cfg)};
}

}  // namespace

RunResult run_verify(const RunConfig& cfg) { return run_pool(cfg, &family_checks); }

RunResult run_pencil(const RunConfig& cfg) { return run_pool(cfg, &pencil_only); }

}  // namespace frobkit
