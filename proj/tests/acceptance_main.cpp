// Acceptance gate: one line per criterion, exit code = number of failures.
// argv[1] is the path to the frobkit CLI binary (used by the determinism
// criterion); without it that criterion is reported as FAIL.

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include <frobkit/families.hpp>
#include <frobkit/geometry.hpp>
#include <frobkit/jet.hpp>
#include <frobkit/lambert.hpp>
#include <frobkit/painleve.hpp>
#include <frobkit/verify.hpp>

using namespace frobkit;

namespace {

int failures = 0;

void report(int index, bool ok, const char* name, const std::string& detail) {
  std::printf("%-4s %2d  %-28s %s\n", ok ? "PASS" : "FAIL", index, name, detail.c_str());
  if (!ok) ++failures;
}

double wall_seconds(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

bool rows_pass(const RunResult& res, const std::string& check, double* worst,
               const std::function<bool(const CheckReport&)>& want = nullptr) {
  bool all = true;
  for (const auto& r : res.reports) {
    if (r.check_id != check || !r.applicable) continue;
    if (want && !want(r)) continue;
    *worst = std::max(*worst, r.max_residual);
    all = all && r.passed;
  }
  return all;
}

// ---- criterion 2: polluted generating data must break flatness ----

bool negative_control(std::string& detail) {
  double weakest = 1e300;
  for (const auto& fam : registry()) {
    FamilySpec bad = perturbed(fam);
    SplitMix64 rng(derive_seed(42, fam.id, "acceptance-negctl"));
    BlockStructure bs = BlockStructure::single(bad.n);
    double best = 0.0;
    for (int k = 0; k < 10; ++k) {
      Vecd u = sample_point(bad.u_box, rng);
      ChartFrame fr = build_frame(bs, bad.gdata, u, 3);
      AxiomResiduals ax = axiom_residuals(fr);
      best = std::max({best, ax.curvature, ax.nabla_c_symmetry});
    }
    weakest = std::min(weakest, best);
    if (best <= 1e-3) {
      detail = fmt("family %s only reaches %.2e", fam.id.c_str(), best);
      return false;
    }
  }
  detail = fmt("weakest family still shows %.2e > 1e-3", weakest);
  return true;
}

// ---- criteria 6 and 7: golden trajectory and rotation coefficients ----

bool golden_trajectory(std::string& detail) {
  Trajectory traj;
  double secs = wall_seconds([&] { traj = integrate({2.0, 1.0, 1.0, 1.0}, 3.0, 1e-4); });
  double drift = 0.0;
  for (const auto& s : traj.states)
    drift = std::max(drift,
                     std::fabs(s.F12 * s.F12 + s.F13 * s.F13 + s.F23 * s.F23 - traj.R2));
  double worst = 0.0;
  for (const auto& s : sigma_eval(traj))
    worst = std::max(worst, sigma_pvi_residual(s.z, s.sigma, s.dsigma, s.d2sigma, traj.R2));
  double tol = 1e-7 * std::max(1.0, traj.R2 * traj.R2);
  detail = fmt("drift %.2e, sigma residual %.2e (tol %.0e), %.2fs", drift, worst, tol, secs);
  return drift < 1e-9 && worst < tol && secs < 5.0;
}

bool rotation_coefficients(std::string& detail) {
  Trajectory traj = integrate({2.0, 1.0, 1.0, 1.0}, 3.0, 1e-4);
  auto curves = trajectory_curves(traj);
  BetaField field = beta_field_from_F(curves[0], curves[1], curves[2]);
  SplitMix64 rng(derive_seed(42, "acceptance", "darboux"));
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    double u1 = rng.uniform(-1.0, 1.0);
    double u2 = u1 + rng.uniform(0.4, 1.5);
    double z = rng.uniform(2.05, 2.95);
    Vecd u(3);
    u << u1, u2, u1 + z * (u2 - u1);
    auto r = darboux_egorov_residual(field, u);
    worst = std::max({worst, r[0], r[1], r[2]});
  }
  detail = fmt("worst system residual %.2e at 20 triples", worst);
  return worst < 1e-7;
}

// ---- criterion 9: jets against a finite-difference oracle ----

bool jets_vs_fd(std::string& detail) {
  SplitMix64 rng(derive_seed(42, "acceptance", "jets"));
  double worst_rel = 0.0;
  const int evals = 1000;
  for (int k = 0; k < evals; ++k) {
    double a0 = rng.uniform(1.5, 2.5);
    double a1 = rng.uniform(-0.5, 0.5);
    double a2 = rng.uniform(-0.5, 0.5);
    int pick = static_cast<int>(rng.uniform(0.0, 7.0));
    double p = rng.uniform(0.8, 1.9);
    auto apply = [&](const Jet& u) {
      switch (pick) {
        case 0: return exp(0.7 * u);
        case 1: return log(u);
        case 2: return sinh(u);
        case 3: return cosh(u);
        case 4: return sqrt(u);
        case 5: return reciprocal(u);
        default: return pow(u, p);
      }
    };
    double x0 = rng.uniform(-0.4, 0.4), x1 = rng.uniform(-0.4, 0.4);
    auto scalar = [&](double y0, double y1) {
      return apply(Jet(a0 + a1 * y0 + a2 * y1)).value();
    };
    Jet u = a0 + a1 * jet_var(0, x0, 2, 2) + a2 * jet_var(1, x1, 2, 2);
    Jet f = apply(u);

    double h = 1e-6;
    double d0 = (scalar(x0 + h, x1) - scalar(x0 - h, x1)) / (2.0 * h);
    double d1 = (scalar(x0, x1 + h) - scalar(x0, x1 - h)) / (2.0 * h);
    double hh = 1e-4;
    double d01 = (scalar(x0 + hh, x1 + hh) - scalar(x0 + hh, x1 - hh) -
                  scalar(x0 - hh, x1 + hh) + scalar(x0 - hh, x1 - hh)) /
                 (4.0 * hh * hh);
    auto rel = [](double got, double ref) {
      return std::fabs(got - ref) / std::max(1.0, std::fabs(ref));
    };
    worst_rel = std::max({worst_rel, rel(extract_partial(f, {1, 0}), d0),
                          rel(extract_partial(f, {0, 1}), d1),
                          rel(extract_partial(f, {1, 1}), d01)});
  }

  // dense random cubics: jet partials must reproduce the closed form exactly
  double worst_poly = 0.0;
  for (int k = 0; k < 200; ++k) {
    double c[4][4];
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j + i <= 3; ++j) c[i][j] = rng.uniform(-2.0, 2.0);
    double x0 = rng.uniform(-1.0, 1.0), x1 = rng.uniform(-1.0, 1.0);
    Jet X0 = jet_var(0, x0, 2, 3), X1 = jet_var(1, x1, 2, 3);
    Jet pjet(0.0);
    for (int i = 0; i <= 3; ++i)
      for (int j = 0; j + i <= 3; ++j) {
        Jet t(c[i][j]);
        for (int a = 0; a < i; ++a) t = t * X0;
        for (int b = 0; b < j; ++b) t = t * X1;
        pjet = pjet + t;
      }
    auto fall = [](int n, int m) {
      double r = 1.0;
      for (int t = 0; t < m; ++t) r *= n - t;
      return r;
    };
    for (int di = 0; di <= 3; ++di)
      for (int dj = 0; dj + di <= 3; ++dj) {
        double ref = 0.0;
        for (int i = di; i <= 3; ++i)
          for (int j = dj; j + i <= 3; ++j)
            ref += c[i][j] * fall(i, di) * fall(j, dj) * std::pow(x0, i - di) *
                   std::pow(x1, j - dj);
        double got = extract_partial(pjet, {di, dj});
        worst_poly =
            std::max(worst_poly, std::fabs(got - ref) / std::max(1.0, std::fabs(ref)));
      }
  }
  detail = fmt("worst relative gap %.2e over %d evals; polynomial gap %.2e", worst_rel,
               evals, worst_poly);
  return worst_rel < 1e-5 && worst_poly < 1e-13;
}

// ---- criterion 10: defining identity of the W function on a log grid ----

bool lambert_grid(std::string& detail) {
  const int pts = 10000;
  const double shift = 1.0 / std::exp(1.0);
  const double lo = 1e-6, hi = 1e6 + shift;
  double worst = 0.0;
  for (int k = 0; k < pts; ++k) {
    double t = lo * std::pow(hi / lo, static_cast<double>(k) / (pts - 1));
    double x = -shift + t;
    double w = lambert_w(x);
    double defect = std::fabs(w * std::exp(w) - x) / std::max(1.0, std::fabs(x));
    worst = std::max(worst, defect);
  }
  double a = 0.0, b = 1.0;
  for (int it = 0; it < 200; ++it) {
    double m = 0.5 * (a + b);
    (m * std::exp(m) < 1.0 ? a : b) = m;
  }
  double gap = std::fabs(lambert_w(1.0) - 0.5 * (a + b));
  detail = fmt("worst identity defect %.2e on %d points; bisection gap %.2e", worst, pts, gap);
  return worst <= 1e-12 && gap <= 1e-12;
}

// ---- criterion 11: byte-identical CLI reports modulo timing ----

std::string strip_timing(const std::string& s) {
  std::string out;
  const std::string key = "\"elapsed_ms\":";
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t hit = s.find(key, pos);
    if (hit == std::string::npos) {
      out.append(s, pos, std::string::npos);
      break;
    }
    hit += key.size();
    out.append(s, pos, hit - pos);
    out += 'X';
    while (hit < s.size() && (std::isdigit(static_cast<unsigned char>(s[hit])) || s[hit] == '-'))
      ++hit;
    pos = hit;
  }
  return out;
}

bool run_cli(const std::string& cmd, std::string& out, int& rc) {
  out.clear();
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return false;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return true;
}

bool cli_determinism(const char* cli, std::string& detail) {
  if (!cli) {
    detail = "no CLI path given on the command line";
    return false;
  }
  std::string cmd = std::string(cli) + " verify --families all --seed 42 2>/dev/null";
  std::string r1, r2;
  int rc1 = -1, rc2 = -1;
  if (!run_cli(cmd, r1, rc1) || !run_cli(cmd, r2, rc2)) {
    detail = "could not launch the CLI";
    return false;
  }
  std::size_t lines = static_cast<std::size_t>(std::count(r1.begin(), r1.end(), '\n'));
  bool same = strip_timing(r1) == strip_timing(r2);
  detail = fmt("two runs: %zu report lines, exit %d/%d, %s", lines, rc1, rc2,
               same ? "identical modulo timing" : "DIFFER");
  return same && rc1 == 0 && rc2 == 0 && lines > 0;
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;

  RunConfig cfg;  // defaults: 100 points, seed 42
  RunResult res;
  double verify_secs = wall_seconds([&] { res = run_verify(cfg); });

  double worst;
  std::string detail;

  worst = 0.0;
  bool ok1 = rows_pass(res, "axioms", &worst) && verify_secs < 30.0;
  report(1, ok1, "axiom residual sweep",
         fmt("%zu families x 100+ points, worst %.2e (tol 1e-8), sweep %.1fs", registry().size(),
             worst, verify_secs));

  bool ok2 = negative_control(detail);
  report(2, ok2, "pollution control", detail);

  worst = 0.0;
  bool ok3 = rows_pass(res, "flat-map", &worst);
  report(3, ok3, "flat chart constancy", fmt("50 points per chart, worst %.2e (tol 1e-9)", worst));

  worst = 0.0;
  bool ok4 = rows_pass(res, "wdvv", &worst);
  double worst_c = 0.0;
  ok4 = rows_pass(res, "wdvv-cmatch", &worst_c) && ok4;
  report(4, ok4, "associativity of prepotentials",
         fmt("worst %.2e (tol 1e-9); product match %.2e (tol 1e-7)", worst, worst_c));

  worst = 0.0;
  bool ok5 = rows_pass(res, "ode", &worst);
  report(5, ok5, "closed-form branch equations",
         fmt("worst %.2e (tol 1e-12 dim3 / 1e-10 dim4)", worst));

  bool ok6 = golden_trajectory(detail);
  report(6, ok6, "golden trajectory", detail);

  bool ok7 = rotation_coefficients(detail);
  report(7, ok7, "rotation-coefficient system", detail);

  worst = 0.0;
  bool ok8 = rows_pass(res, "pencil", &worst, [](const CheckReport& r) {
    return r.family_id == "dim2-d0" || r.family_id == "dim3-linear-d0" ||
           r.family_id.rfind("dim3-rational", 0) == 0;
  });
  report(8, ok8, "metric pencil", fmt("named families, worst %.2e (tol 1e-8)", worst));

  bool ok9 = jets_vs_fd(detail);
  report(9, ok9, "jet derivatives vs oracle", detail);

  bool ok10 = lambert_grid(detail);
  report(10, ok10, "product-log identity", detail);

  bool ok11 = cli_determinism(cli, detail);
  report(11, ok11, "report determinism", detail);

  std::printf("%d of 11 criteria passed\n", 11 - failures);
  return failures;
}
