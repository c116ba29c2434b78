// Copyright 2026 The Lockrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lockrace/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "lockrace/config_io.hpp"
#include "lockrace/equilibrium.hpp"
#include "lockrace/oracle_suite.hpp"
#include "lockrace/recursion.hpp"
#include "lockrace/simulator.hpp"

namespace lockrace::cli {

namespace {

using nlohmann::json;

// Thrown for anything the user can fix in their invocation or inputs.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Shared {
  std::size_t grid = kDefaultGridSize;
  double tol = 1e-8;
  std::size_t max_iter = 500;
  std::uint64_t seed = 1;
  std::string out;
  std::size_t workers = 1;
};

struct Manifest {
  std::string command;
  std::optional<GameConfig> config;
  std::size_t episodes = 0;
  std::vector<std::string> outputs;
};

SolverOptions solver_options(const Shared& s) {
  SolverOptions o;
  o.grid_size = s.grid;
  o.tolerance = s.tol;
  o.max_iterations = s.max_iter;
  return o;
}

GameConfig load_checked(const std::string& path) {
  try {
    return load_config(path);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw InputError("cannot open '" + path + "' for writing");
  }
  return f;
}

void emit(const std::string& text, const Shared& s, Manifest& m, std::ostream& out) {
  if (s.out.empty()) {
    out << text;
    return;
  }
  auto f = open_output(s.out);
  f << text;
  m.outputs.push_back(s.out);
}

// Sidecar so that the primary output stays byte-identical across runs.
void write_manifest(const Manifest& m, const Shared& s) {
  if (s.out.empty()) {
    return;
  }
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  json j;
  j["command"] = m.command;
  j["config"] = m.config ? config_to_json(*m.config) : json(nullptr);
  j["grid_size"] = s.grid;
  j["tolerance"] = s.tol;
  j["max_iterations"] = s.max_iter;
  j["episodes"] = m.episodes;
  j["seed"] = s.seed;
  j["outputs"] = m.outputs;
  j["tool_version"] = kVersion;
  j["wall_clock"] = stamp.str();
  auto f = open_output(s.out + ".manifest.json");
  f << j.dump(2) << '\n';
}

json solve_json(const EquilibriumResult& r) {
  json j = profile_to_json(r.profile);
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["final_update_norm"] = r.final_update_norm;
  j["damped"] = r.damped;
  return j;
}

// Returns the last iterate instead of throwing.
EquilibriumResult solve_or_last(const GameConfig& cfg, const SolverOptions& o) {
  try {
    return solve_equilibrium(cfg, o);
  } catch (const ConvergenceError& e) {
    return e.last();
  }
}

void add_shared(CLI::App* cmd, Shared& s, bool seed, bool workers) {
  cmd->add_option("--grid", s.grid, "time-grid abscissae")->check(CLI::Range(3, 1000000));
  cmd->add_option("--tol", s.tol, "fixed-point tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", s.max_iter, "fixed-point sweep limit")->check(CLI::PositiveNumber);
  cmd->add_option("--out", s.out, "output path (default stdout)");
  if (seed) {
    cmd->add_option("--seed", s.seed, "random seed");
  }
  if (workers) {
    cmd->add_option("--workers", s.workers, "worker threads")->check(CLI::Range(1, 256));
  }
}

// ---- solve ----

struct SolveArgs {
  std::string config;
  std::string dump_curves;
};

int cmd_solve(const SolveArgs& a, const Shared& s, std::ostream& out, std::ostream& err) {
  Manifest m{"solve", load_checked(a.config), 0, {}};
  const auto r = solve_or_last(*m.config, solver_options(s));
  emit(solve_json(r).dump(2) + "\n", s, m, out);
  if (!a.dump_curves.empty()) {
    auto f = open_output(a.dump_curves);
    write_curves_csv(f, r.continuation);
    m.outputs.push_back(a.dump_curves);
  }
  write_manifest(m, s);
  if (!r.converged) {
    err << "error: no convergence after " << r.iterations
        << " sweeps (update norm " << r.final_update_norm << ")\n";
    return kNonConvergence;
  }
  return kOk;
}

// ---- sweep ----

struct SweepArgs {
  std::string config;
  std::string param = "nu";
  double from = 0.0;
  double to = 0.0;
  std::size_t steps = 0;
};

int cmd_sweep(const SweepArgs& a, const Shared& s, std::ostream& out, std::ostream& err) {
  if (a.param != "nu") {
    throw InputError("unsupported sweep parameter '" + a.param + "' (only nu)");
  }
  if (a.steps < 2) {
    throw InputError("--steps must be at least 2");
  }
  if (!(a.from < a.to)) {
    throw InputError("--from must be smaller than --to");
  }
  if (!(a.from > 0.0)) {
    throw InputError("cost_factor must be positive over the whole sweep");
  }
  Manifest m{"sweep", load_checked(a.config), 0, {}};
  const GameConfig base = *m.config;

  std::vector<double> grid(a.steps);
  for (std::size_t i = 0; i < a.steps; ++i) {
    grid[i] = i + 1 == a.steps ? a.to
                               : a.from + (a.to - a.from) * static_cast<double>(i) /
                                              static_cast<double>(a.steps - 1);
  }
  std::vector<std::optional<EquilibriumResult>> results(a.steps);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < a.steps; i = next++) {
      GameConfig cfg = base;
      cfg.cost_factor = grid[i];
      results[i] = solve_or_last(cfg, solver_options(s));
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::min(s.workers, a.steps); ++w) {
    pool.emplace_back(work);
  }
  work();
  for (auto& t : pool) {
    t.join();
  }

  std::ostringstream csv;
  csv << std::setprecision(12);
  csv << "nu,player";
  for (std::size_t k = 1; k <= base.num_locks(); ++k) {
    csv << ",theta_" << k;
  }
  csv << ",converged\n";
  std::size_t failures = 0;
  for (std::size_t i = 0; i < a.steps; ++i) {
    const auto& r = *results[i];
    failures += r.converged ? 0 : 1;
    for (std::size_t p = 0; p < r.profile.size(); ++p) {
      csv << grid[i] << ',' << p + 1;
      for (double th : r.profile[p].thresholds) {
        csv << ',' << th;
      }
      csv << ',' << (r.converged ? 1 : 0) << '\n';
    }
  }
  emit(csv.str(), s, m, out);
  write_manifest(m, s);
  if (failures > 0) {
    err << "warning: " << failures << " of " << a.steps << " sweep points did not converge\n";
  }
  return kOk;
}

// ---- simulate ----

struct SimulateArgs {
  std::string config;
  std::string profile;
  bool use_solved = false;
  std::size_t episodes = 100000;
  std::string dump_episodes;
};

int cmd_simulate(const SimulateArgs& a, const Shared& s, std::ostream& out, std::ostream& err) {
  if (a.profile.empty() == !a.use_solved) {
    throw InputError("exactly one of --profile or --use-solved is required");
  }
  if (a.episodes < 2) {
    throw InputError("--episodes must be at least 2");
  }
  Manifest m{"simulate", load_checked(a.config), a.episodes, {}};
  const GameConfig& cfg = *m.config;
  StrategyProfile profile;
  if (a.use_solved) {
    const auto r = solve_or_last(cfg, solver_options(s));
    if (!r.converged) {
      err << "error: equilibrium did not converge; refusing to simulate\n";
      return kNonConvergence;
    }
    profile = r.profile;
  } else {
    try {
      profile = load_profile(a.profile);
      require_valid(profile, cfg);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
  }

  std::vector<EpisodeOutcome> episodes;
  SimulationOptions opts;
  opts.workers = s.workers;
  opts.episodes_out = a.dump_episodes.empty() ? nullptr : &episodes;
  const auto est = estimate_payoffs(profile, cfg, a.episodes, s.seed, opts);

  json j;
  j["episodes"] = est.episodes;
  j["seed"] = est.seed;
  j["profile"] = profile_to_json(profile)["players"];
  j["players"] = json::array();
  for (std::size_t p = 0; p < est.players.size(); ++p) {
    const auto& e = est.players[p];
    j["players"].push_back({{"player", p + 1},
                            {"mean", e.mean},
                            {"standard_error", e.standard_error},
                            {"mean_acceleration", e.mean_acceleration},
                            {"acceleration_standard_error", e.acceleration_standard_error}});
  }
  emit(j.dump(2) + "\n", s, m, out);
  if (!a.dump_episodes.empty()) {
    auto f = open_output(a.dump_episodes);
    write_episodes_csv(f, episodes);
    m.outputs.push_back(a.dump_episodes);
  }
  write_manifest(m, s);
  return kOk;
}

// ---- oracle suites ----

std::size_t default_instances(oracle::SuiteCase c) {
  switch (c) {
    case oracle::SuiteCase::kBangBang:
      return 50;
    case oracle::SuiteCase::kSuffix:
      return 20;
    default:
      return 100;
  }
}

json suite_summary(const std::vector<oracle::SuiteRow>& rows) {
  double worst = 0.0;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    worst = std::max(worst, r.residual);
    failed += r.passed ? 0 : 1;
  }
  return {{"instances", rows.size()}, {"failed", failed}, {"max_residual", worst},
          {"passed", failed == 0}};
}

struct OracleArgs {
  std::string which;
  std::size_t instances = 0;
  std::string dump;
};

int cmd_oracle(const OracleArgs& a, const Shared& s, std::ostream& out, std::ostream&) {
  oracle::SuiteCase which;
  try {
    which = oracle::parse_suite_case(a.which);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  Manifest m{"oracle-check", std::nullopt, 0, {}};
  const std::size_t n = a.instances > 0 ? a.instances : default_instances(which);
  const auto rows = oracle::run_suite(which, n, s.seed);

  std::ostringstream table;
  table << std::left << std::setw(10) << "case" << std::setw(10) << "instance" << std::setw(16)
        << "residual" << std::setw(6) << "status" << "detail\n";
  std::size_t failed = 0;
  for (const auto& r : rows) {
    failed += r.passed ? 0 : 1;
    table << std::left << std::setw(10) << oracle::to_string(r.which) << std::setw(10)
          << r.instance << std::setw(16) << std::setprecision(6) << r.residual << std::setw(6)
          << (r.passed ? "PASS" : "FAIL") << r.detail << '\n';
  }
  table << oracle::to_string(which) << ": " << rows.size() - failed << "/" << rows.size()
        << " passed\n";
  emit(table.str(), s, m, out);
  if (!a.dump.empty()) {
    auto f = open_output(a.dump);
    f << std::setprecision(17) << "case,instance,residual,passed\n";
    for (const auto& r : rows) {
      f << oracle::to_string(r.which) << ',' << r.instance << ',' << r.residual << ','
        << (r.passed ? 1 : 0) << '\n';
    }
    m.outputs.push_back(a.dump);
  }
  write_manifest(m, s);
  return failed == 0 ? kOk : kVerificationFailure;
}

// ---- verify ----

struct VerifyArgs {
  std::string config;
  std::size_t candidates = 400;
  std::size_t quadrature_samples = 200;
  bool inject_corruption = false;
};

constexpr double kNashGapTolerance = 1e-6;
constexpr double kQuadratureTolerance = 1e-6;

int cmd_verify(const VerifyArgs& a, const Shared& s, std::ostream& out, std::ostream& err) {
  Manifest m{"verify", load_checked(a.config), 0, {}};
  const GameConfig& cfg = *m.config;
  auto r = solve_or_last(cfg, solver_options(s));

  if (a.inject_corruption) {
    // Test hook: scale the last stored curve of player 1 so it no longer
    // solves its integral equation.
    auto& cv = r.continuation.front();
    if (cv.curves.empty()) {
      throw InputError("--inject-corruption needs at least two locks");
    }
    auto& curve = cv.curves.back();
    for (std::size_t j = 0; j < curve.size(); ++j) {
      curve.set_value(j, curve.value(j) * 1.001 + 1e-4);
    }
  }

  json report;
  json suites = json::object();
  bool ok = true;
  auto gate = [&](const std::string& name, json body, bool passed) {
    body["passed"] = passed;
    suites[name] = std::move(body);
    ok = ok && passed;
  };

  gate("convergence",
       {{"iterations", r.iterations}, {"final_update_norm", r.final_update_norm}},
       r.converged);

  const auto reports = verify_equilibrium(r, cfg, a.candidates);
  double gap = -std::numeric_limits<double>::infinity();
  bool peaked = true;
  bool strict = true;
  json per_player = json::array();
  for (const auto& d : reports) {
    gap = std::max(gap, d.gap);
    peaked = peaked && d.single_peaked;
    strict = strict && d.derivative_strictly_decreasing;
    per_player.push_back({{"player", d.player + 1},
                          {"gap", d.gap},
                          {"best_candidate", d.best_candidate},
                          {"derivative_sign_changes", d.derivative_sign_changes},
                          {"derivative_strictly_decreasing", d.derivative_strictly_decreasing},
                          {"single_peaked", d.single_peaked}});
  }
  gate("nash_gap", {{"max_gap", gap}, {"tolerance", kNashGapTolerance}, {"candidates", a.candidates},
                    {"players", per_player}},
       gap <= kNashGapTolerance);
  gate("derivative_single_peaked", {{"strictly_decreasing_everywhere", strict}}, peaked);

  double residual = 0.0;
  for (std::size_t p = 0; p < r.continuation.size(); ++p) {
    residual = std::max(residual,
                        quadrature_check(r.continuation[p], cfg, p, a.quadrature_samples, s.seed));
  }
  gate("quadrature", {{"max_residual", residual}, {"tolerance", kQuadratureTolerance}},
       residual < kQuadratureTolerance);

  for (auto which : {oracle::SuiteCase::kLemma3, oracle::SuiteCase::kLemma1,
                     oracle::SuiteCase::kBangBang, oracle::SuiteCase::kSuffix}) {
    const auto rows = oracle::run_suite(which, default_instances(which), s.seed);
    auto summary = suite_summary(rows);
    const bool passed = summary["passed"].get<bool>();
    gate("oracle_" + oracle::to_string(which), std::move(summary), passed);
  }

  // Informational only: the closed forms are large-horizon approximations.
  const auto asym = asymptotic_equilibrium(cfg);
  json info{{"branch", to_string(asym.branch)}, {"notes", asym.notes}};
  if (!asym.profile.empty()) {
    double delta = 0.0;
    for (std::size_t p = 0; p < asym.profile.size(); ++p) {
      delta = std::max(delta, std::abs(asym.profile[p].thresholds.front() -
                                       r.profile[p].thresholds.front()));
    }
    info["max_abs_delta_theta_1"] = delta;
    info["ordering_holds"] = asym.ordering_holds;
  }
  suites["asymptotic_comparison"] = std::move(info);

  report["suites"] = std::move(suites);
  report["passed"] = ok;
  emit(report.dump(2) + "\n", s, m, out);
  write_manifest(m, s);
  if (!ok) {
    for (const auto& [name, body] : report["suites"].items()) {
      if (body.contains("passed") && !body["passed"].get<bool>()) {
        err << "verify: suite '" << name << "' failed\n";
      }
    }
    return kVerificationFailure;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asymmetric-information lock race: equilibrium solver and simulator", "lockrace"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Shared shared;

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "solve for the equilibrium thresholds");
  solve_cmd->add_option("config", solve.config, "config JSON")->required();
  solve_cmd->add_option("--dump-curves", solve.dump_curves, "write continuation curves CSV");
  add_shared(solve_cmd, shared, false, false);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "solve over a parameter grid, emit CSV");
  sweep_cmd->add_option("config", sweep.config, "config JSON")->required();
  sweep_cmd->add_option("--param", sweep.param, "swept parameter (nu)");
  sweep_cmd->add_option("--from", sweep.from, "first value")->required();
  sweep_cmd->add_option("--to", sweep.to, "last value")->required();
  sweep_cmd->add_option("--steps", sweep.steps, "number of grid values")->required();
  add_shared(sweep_cmd, shared, false, true);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo payoff estimates");
  sim_cmd->add_option("config", sim.config, "config JSON")->required();
  sim_cmd->add_option("--profile", sim.profile, "profile JSON");
  sim_cmd->add_flag("--use-solved", sim.use_solved, "simulate the solved equilibrium");
  sim_cmd->add_option("--episodes", sim.episodes, "episode count");
  sim_cmd->add_option("--dump-episodes", sim.dump_episodes, "per-episode CSV");
  add_shared(sim_cmd, shared, true, true);

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "run the invariant battery");
  verify_cmd->add_option("config", verify.config, "config JSON")->required();
  verify_cmd->add_option("--candidates", verify.candidates, "deviation candidates per player")
      ->check(CLI::Range(2, 100000));
  verify_cmd->add_option("--quadrature-samples", verify.quadrature_samples,
                         "abscissae checked per curve");
  verify_cmd->add_flag("--inject-corruption", verify.inject_corruption,
                       "perturb a stored curve (test hook)");
  add_shared(verify_cmd, shared, true, false);

  OracleArgs orc;
  auto* oracle_cmd = app.add_subcommand("oracle-check", "randomized control-oracle checks");
  oracle_cmd->add_option("--case", orc.which, "bangbang|lemma1|lemma3|suffix")->required();
  oracle_cmd->add_option("--instances", orc.instances, "instance count (0: default)");
  oracle_cmd->add_option("--dump", orc.dump, "per-instance CSV");
  add_shared(oracle_cmd, shared, true, false);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("lockrace");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : storage) {
    argv.push_back(a.data());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, shared, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep, shared, out, err);
    if (*sim_cmd) return cmd_simulate(sim, shared, out, err);
    if (*verify_cmd) return cmd_verify(verify, shared, out, err);
    if (*oracle_cmd) return cmd_oracle(orc, shared, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace lockrace::cli
