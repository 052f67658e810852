#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <frobkit/errors.hpp>
#include <frobkit/families.hpp>
#include <frobkit/painleve.hpp>
#include <frobkit/verify.hpp>

namespace {

using frobkit::CheckReport;
using frobkit::RunConfig;
using frobkit::RunResult;

// key = value lines, # comments, unknown keys rejected. Applied before flag
// parsing, so flags win; FROBKIT_SEED sits between flags and this file.
void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw frobkit::InvalidConfig("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = line.substr(0, line.find('#'));
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw frobkit::InvalidConfig("config line " + std::to_string(lineno) + " is not key = value");
    auto trim = [&](std::string t) {
      t.erase(t.begin(), std::find_if(t.begin(), t.end(), notspace));
      t.erase(std::find_if(t.rbegin(), t.rend(), notspace).base(), t.end());
      return t;
    };
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    try {
      if (key == "families") {
        cfg.family_ids.clear();
        std::stringstream ss(val);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.family_ids.push_back(trim(item));
      } else if (key == "points") {
        cfg.points_per_family = std::stoi(val);
      } else if (key == "seed") {
        cfg.seed = std::stoull(val);
      } else if (key == "tol_axiom") {
        cfg.tol_axiom = std::stod(val);
      } else if (key == "tol_flat") {
        cfg.tol_flat = std::stod(val);
      } else if (key == "tol_wdvv") {
        cfg.tol_wdvv = std::stod(val);
      } else if (key == "jet_order") {
        cfg.jet_order = std::stoi(val);
      } else if (key == "random_sets") {
        cfg.random_sets = std::stoi(val);
      } else {
        throw frobkit::InvalidConfig("unknown config key: " + key);
      }
    } catch (const std::invalid_argument&) {
      throw frobkit::InvalidConfig("bad value for config key " + key + ": " + val);
    } catch (const std::out_of_range&) {
      throw frobkit::InvalidConfig("bad value for config key " + key + ": " + val);
    }
  }
}

void apply_env_seed(RunConfig& cfg) {
  const char* env = std::getenv("FROBKIT_SEED");
  if (!env || !*env) return;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') throw frobkit::InvalidConfig("FROBKIT_SEED is not an integer");
  cfg.seed = v;
}

// The config file must be applied before CLI11 assigns flag values, so the
// path is pre-scanned from raw argv.
std::string prescan_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return argv[i + 1];
    if (a.rfind("--config=", 0) == 0) return a.substr(9);
  }
  return {};
}

void emit_reports(const RunResult& res, const std::string& out_path) {
  std::string jsonl = frobkit::report_jsonl(res.reports);
  std::fputs(jsonl.c_str(), stdout);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw frobkit::InvalidConfig("cannot open output file: " + out_path);
    out << jsonl;
  }
  int applicable = 0, passed = 0;
  for (const auto& r : res.reports) {
    applicable += r.applicable;
    passed += r.applicable && r.passed;
  }
  std::fprintf(stderr, "%d checks, %d applicable, %d passed%s\n",
               static_cast<int>(res.reports.size()), applicable, passed,
               res.all_passed ? "" : ", FAILURES above");
}

int cmd_list() {
  for (const auto& fam : frobkit::registry()) {
    nlohmann::ordered_json j;
    j["id"] = fam.id;
    j["n"] = fam.n;
    j["d"] = fam.d;
    j["constants"] = fam.constants.v;
    std::vector<std::string> checks = {"axioms", "pencil"};
    if (fam.flat_map) checks.push_back("flat-map");
    if (fam.ode != frobkit::OdeKind::none) checks.push_back("ode");
    if (fam.prepotential && fam.flat_map && fam.eta_flat) {
      checks.push_back("wdvv");
      checks.push_back("wdvv-cmatch");
    }
    j["checks"] = checks;
    std::puts(j.dump().c_str());
  }
  return 0;
}

int cmd_painleve(const std::vector<double>& s0v, double z_end, double step,
                 const std::string& out_path) {
  frobkit::PainleveState s0{s0v[0], s0v[1], s0v[2], s0v[3]};
  auto t0 = std::chrono::steady_clock::now();
  frobkit::Trajectory traj = frobkit::integrate(s0, z_end, step);
  double worst = 0.0;
  for (const auto& s : frobkit::sigma_eval(traj))
    worst = std::max(worst, frobkit::sigma_pvi_residual(s.z, s.sigma, s.dsigma, s.d2sigma, traj.R2));
  std::ofstream out(out_path);
  if (!out) throw frobkit::InvalidConfig("cannot open output file: " + out_path);
  out << frobkit::trajectory_csv(traj);

  CheckReport r;
  r.check_id = "sigma-pvi";
  r.family_id = "painleve";
  r.n_points = static_cast<int>(traj.states.size());
  r.max_residual = worst;
  r.tolerance = 1e-7 * std::max(1.0, traj.R2 * traj.R2);
  r.passed = r.max_residual <= r.tolerance;
  r.seed = 0;
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     std::chrono::steady_clock::now() - t0)
                     .count();
  std::puts(frobkit::report_json_line(r).c_str());
  std::fprintf(stderr, "trajectory with %d states written to %s\n", r.n_points, out_path.c_str());
  return r.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for block-Toeplitz Frobenius structures"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string out_path;
  std::string config_path;

  try {
    config_path = prescan_config_path(argc, argv);
    if (!config_path.empty()) apply_config_file(config_path, cfg);
    apply_env_seed(cfg);
  } catch (const frobkit::InvalidConfig& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  app.add_subcommand("list", "print the family catalog, one JSON line per family");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--families", cfg.family_ids,
                    "comma-separated family ids, or 'all'")
        ->delimiter(',');
    sub->add_option("--seed", cfg.seed, "master seed for point sampling");
    sub->add_option("--out", out_path, "also write the JSON-lines report to this file");
    sub->add_option("--config", config_path, "key = value config file (already applied)");
  };

  CLI::App* verify = app.add_subcommand("verify", "run every check for the selected families");
  add_common(verify);
  verify->add_option("--points", cfg.points_per_family, "sample points per family for the axiom sweep");
  verify->add_option("--tol-axiom", cfg.tol_axiom, "axiom residual tolerance");
  verify->add_option("--tol-flat", cfg.tol_flat, "flat-map residual tolerance");
  verify->add_option("--tol-wdvv", cfg.tol_wdvv, "associativity residual tolerance");
  verify->add_option("--jet-order", cfg.jet_order, "truncation order of the coordinate jets");
  verify->add_option("--random-sets", cfg.random_sets, "extra sampled constant sets per family");

  CLI::App* pencil = app.add_subcommand("pencil", "run only the metric-pencil check");
  add_common(pencil);
  pencil->add_option("--jet-order", cfg.jet_order, "truncation order of the coordinate jets");

  std::vector<double> s0v = {2.0, 1.0, 1.0, 1.0};
  double z_end = 3.0;
  double step = 1e-4;
  std::string traj_path = "traj.csv";
  CLI::App* painleve = app.add_subcommand("painleve", "integrate the reduced system and check the sigma equation");
  painleve->add_option("--s0", s0v, "initial state z,f12,f13,f23")->delimiter(',')->expected(4);
  painleve->add_option("--z-end", z_end, "integration endpoint");
  painleve->add_option("--step", step, "integration step");
  painleve->add_option("--out", traj_path, "trajectory CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("verify")) {
      RunResult res = frobkit::run_verify(cfg);
      emit_reports(res, out_path);
      return res.all_passed ? 0 : 1;
    }
    if (app.got_subcommand("pencil")) {
      RunResult res = frobkit::run_pencil(cfg);
      emit_reports(res, out_path);
      return res.all_passed ? 0 : 1;
    }
    if (app.got_subcommand("painleve")) return cmd_painleve(s0v, z_end, step, traj_path);
  } catch (const frobkit::UnknownFamily& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const frobkit::InvalidConfig& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}
