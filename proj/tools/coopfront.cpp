#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "coopfront/errors.hpp"
#include "coopfront/evolve.hpp"
#include "coopfront/output.hpp"
#include "coopfront/reaction.hpp"
#include "coopfront/scenario.hpp"
#include "coopfront/semiwave.hpp"
#include "coopfront/spectral.hpp"
#include "coopfront/steady.hpp"

using namespace coop;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kValidation = 2, kNoConvergence = 3, kUndecided = 4 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoConvergence:
    case ErrorKind::TruncationUnstable:
    case ErrorKind::StabilityViolated:
    case ErrorKind::InsufficientHistory:
    case ErrorKind::Cancelled:
      return kNoConvergence;
    case ErrorKind::UndecidedAtMidpoint:
      return kUndecided;
    default:
      return kValidation;
  }
}

// Thrown by a subcommand that finished its artifacts but owes a verdict.
struct Undecided {};

struct Run {
  const Scenario& sc;
  std::string dir;
  RunManifest manifest;
  std::vector<std::pair<std::string, std::string>> pending;  // name, data

  void emit(const std::string& name, const std::string& data) { pending.emplace_back(name, data); }
};

struct SpeciesView {
  double d, alpha, beta, mu, s0;
  const SampledKernel* kernel;
  const KernelSpec* spec;
};

// Linearized growth α and self-limitation β of one species at zero density of the other.
SpeciesView species_view(const Scenario& sc, const std::string& which, const SampledKernel& k1,
                         const SampledKernel& k2) {
  const CoopParams& p = sc.params;
  if (which == "u") return {p.d1, p.r1 * p.a, 2.0 * p.r1, p.mu1, p.s10, &k1, &sc.j1};
  if (which == "v") return {p.d2, p.r2, 2.0 * p.r2, p.mu2, p.s20, &k2, &sc.j2};
  fail(ErrorKind::InvalidArgument, "species must be 'u' or 'v', got '" + which + "'");
}

std::string str_key(const json& sec, const char* key, const std::string& fallback) {
  if (!sec.contains(key)) return fallback;
  if (!sec.at(key).is_string()) fail(ErrorKind::InvalidArgument, std::string("'") + key + "' must be a string");
  return sec.at(key).get<std::string>();
}

double num_key(const json& sec, const char* key, double fallback) {
  if (!sec.contains(key)) return fallback;
  if (!sec.at(key).is_number()) fail(ErrorKind::InvalidArgument, std::string("'") + key + "' must be a number");
  return sec.at(key).get<double>();
}

std::string profile_csv(const UniformGrid& g, const std::vector<double>& a, const std::vector<double>* b,
                        const char* na, const char* nb) {
  std::vector<std::string> head{"x", na};
  if (b) head.emplace_back(nb);
  CsvTable t(head);
  for (std::size_t i = 0; i < g.size; ++i) {
    if (b)
      t.add_row({g.x(i), a[i], (*b)[i]});
    else
      t.add_row({g.x(i), a[i]});
  }
  return t.str();
}

void cmd_eig(Run& r) {
  const json& sec = r.sc.section("eig");
  auto [k1, k2] = r.sc.kernels();
  SpeciesView s = species_view(r.sc, str_key(sec, "species", "u"), k1, k2);
  double d = num_key(sec, "d", s.d), alpha = num_key(sec, "alpha", s.alpha);
  double l = num_key(sec, "l", r.sc.numerics.L);
  require(d > 0.0 && l > 0.0, "eig: d and l must be positive");
  EigenOptions o;
  o.tol = r.sc.numerics.tol_eigen;
  EigenResult e = principal_eigenvalue(d, *s.kernel, alpha, l, o);
  r.emit("eigenfunction.csv", profile_csv(e.grid, e.eigenfunction, nullptr, "phi", ""));
  r.manifest.results = {{"lambda", e.lambda}, {"d", d},     {"alpha", alpha},
                        {"l", l},             {"residual", e.residual}, {"iterations", e.iterations}};
  std::printf("lambda = %s\n", format_double(e.lambda).c_str());
  if (sec.value("threshold", false) && alpha < d) {
    ThresholdResult t = threshold_length(d, *s.kernel, alpha, num_key(sec, "threshold_tol", 1e-4), o);
    r.manifest.results["ell"] = t.ell;
    r.manifest.results["ell_bracket"] = {t.bracket.first, t.bracket.second};
    std::printf("ell = %s\n", format_double(t.ell).c_str());
  }
}

void cmd_roots(Run& r) {
  CoexistenceRoot c = coexistence_root(r.sc.params);
  CsvTable t({"u_star", "v_star", "residual_f1", "residual_f2"});
  t.add_row({c.u_star, c.v_star, c.residual_f1, c.residual_f2});
  r.emit("roots.csv", t.str());
  r.manifest.results = {{"u_star", c.u_star},
                        {"v_star", c.v_star},
                        {"residual_f1", c.residual_f1},
                        {"residual_f2", c.residual_f2}};
  std::printf("u* = %s  v* = %s  |f1| = %s  |f2| = %s\n", format_double(c.u_star).c_str(),
              format_double(c.v_star).c_str(), format_double(c.residual_f1).c_str(),
              format_double(c.residual_f2).c_str());
}

void cmd_steady(Run& r) {
  const json& sec = r.sc.section("steady");
  const Numerics& n = r.sc.numerics;
  auto [k1, k2] = r.sc.kernels();
  std::string problem = str_key(sec, "problem", "system_halfline");
  double l = num_key(sec, "l", n.L);
  json& res = r.manifest.results;
  res["problem"] = problem;
  if (problem == "scalar_bounded" || problem == "scalar_halfline") {
    SpeciesView s = species_view(r.sc, str_key(sec, "species", "u"), k1, k2);
    SteadyProfile p = problem == "scalar_bounded"
                          ? scalar_steady_bounded(s.d, *s.kernel, s.alpha, s.beta, l, n.tol_bounded)
                          : scalar_steady_halfline(s.d, *s.kernel, s.alpha, s.beta, l, n.tol_halfline);
    r.emit("steady.csv", profile_csv(p.grid, p.values, nullptr, "w", ""));
    res["positive"] = p.positive;
    res["sup"] = p.sup();
    res["iterations"] = p.iterations;
  } else if (problem == "system_bounded" || problem == "system_halfline") {
    SteadyPair p = problem == "system_bounded"
                       ? system_steady_bounded(r.sc.params, k1, k2, l, n.tol_bounded)
                       : system_steady_halfline(r.sc.params, k1, k2, l, n.tol_halfline);
    r.emit("steady.csv", profile_csv(p.u.grid, p.u.values, &p.v.values, "u", "v"));
    res["classification"] = to_string(p.classification);
    res["lambda_u"] = p.lambda_u;
    res["lambda_v"] = p.lambda_v;
    res["sup_u"] = p.u.sup();
    res["sup_v"] = p.v.sup();
    std::printf("classification = %s\n", to_string(p.classification));
  } else if (problem == "sandwich") {
    auto n_max = static_cast<std::size_t>(num_key(sec, "n_max", 50));
    SandwichSequence q = sandwich_iteration(r.sc.params, k1, k2, l, n_max, n.tol_halfline);
    CsvTable t({"n", "increment_u", "increment_v"});
    for (std::size_t i = 0; i < q.increment_u.size(); ++i)
      t.add_row({static_cast<double>(i + 1), q.increment_u[i], q.increment_v[i]});
    r.emit("sandwich.csv", t.str());
    r.emit("steady.csv", profile_csv(q.U.back().grid, q.U.back().values, &q.V.back().values, "u", "v"));
    res["converged"] = q.converged;
    res["min_step"] = q.min_step;
    res["steps"] = q.U.size();
    if (!q.converged) fail(ErrorKind::NoConvergence, "sandwich iteration did not converge");
  } else {
    fail(ErrorKind::InvalidArgument, "steady.problem '" + problem + "' is not known");
  }
}

void cmd_semiwave(Run& r) {
  const json& sec = r.sc.section("semiwave");
  const Numerics& n = r.sc.numerics;
  auto [k1, k2] = r.sc.kernels();
  SpeciesView s = species_view(r.sc, str_key(sec, "species", "u"), k1, k2);
  double d = num_key(sec, "d", s.d), alpha = num_key(sec, "alpha", s.alpha);
  double beta = num_key(sec, "beta", s.beta), mu = num_key(sec, "mu", s.mu);
  SemiWaveResult w = solve_semiwave(d, *s.kernel, alpha, beta, mu, n.L_w, n.tol_semiwave);
  r.emit("semiwave.csv", profile_csv(w.grid, w.profile, nullptr, "phi", ""));
  json& res = r.manifest.results;
  res = {{"c", w.c},       {"c_star", w.c_star}, {"c_residual", w.c_residual},
         {"d", d},         {"alpha", alpha},     {"beta", beta},
         {"mu", mu},       {"L_w", w.grid.size ? -w.grid.x(0) : 0.0}};
  if (w.c_star > 0.0) res["lambda_star"] = minimal_speed(d, s.kernel->spec, alpha).lambda_star;
  if (sec.value("bounds", false)) {
    SpeedBounds b = speed_bounds(r.sc.params, k1, k2, n.L_w, n.tol_semiwave);
    res["bounds"] = {{"c1_lo", b.c1_lo}, {"c1_hi", b.c1_hi}, {"c2_lo", b.c2_lo}, {"c2_hi", b.c2_hi}};
  }
  std::printf("c = %s\n", format_double(w.c).c_str());
}

json outcome_json(const SpeciesOutcome& o) {
  return {{"verdict", to_string(o.verdict)}, {"lambda_final", o.lambda_final},
          {"front_final", o.front_final},    {"stall_gain", o.stall_gain},
          {"sup_norm", o.sup_norm},          {"note", o.note}};
}

void write_simulation(Run& r, const SimulationResult& sim) {
  CsvTable t({"t", "s1", "s2", "s1_over_t", "s2_over_t", "sup_u", "sup_v"});
  for (const HistorySample& h : sim.history.samples) {
    double nan = std::nan("");
    t.add_row({h.t, h.s1, h.s2, h.t > 0 ? h.s1 / h.t : nan, h.t > 0 ? h.s2 / h.t : nan, h.sup_u, h.sup_v});
  }
  r.emit("trajectory.csv", t.str());
  for (std::size_t i = 0; i < sim.snapshots.size(); ++i) {
    const Snapshot& s = sim.snapshots[i];
    CsvTable f({"x", "u", "v"});
    for (std::size_t j = 0; j < s.x.size(); ++j) f.add_row({s.x[j], s.u[j], s.v[j]});
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_%03zu.csv", i);
    r.emit(name, f.str());
  }
  r.manifest.dt = sim.dt;
  r.manifest.verdicts = {{"u", outcome_json(sim.outcome.u)}, {"v", outcome_json(sim.outcome.v)}};
  json& res = r.manifest.results;
  res["steps"] = sim.steps;
  res["clamps"] = sim.clamps;
  res["box"] = {sim.box.u, sim.box.v};
  res["truncated"] = sim.truncated;
  res["s1_final"] = sim.final_state.s1;
  res["s2_final"] = sim.final_state.s2;
  res["snapshot_times"] = json::array();
  for (const Snapshot& s : sim.snapshots) res["snapshot_times"].push_back(s.t);
  const double window = 0.5;  // trailing half of the horizon
  for (int sp : {1, 2}) {
    try {
      SpeedEstimate e = estimate_speed(sim.history, window, sp);
      res[sp == 1 ? "speed_u" : "speed_v"] = {{"speed", e.speed},
                                               {"accelerated", e.accelerated},
                                               {"early_rate", e.early_rate},
                                               {"late_rate", e.late_rate}};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InsufficientHistory) throw;
      std::fprintf(stderr, "note: no speed estimate for species %d: %s\n", sp, e.what());
    }
  }
  std::printf("s1(T) = %s  s2(T) = %s  u: %s  v: %s\n", format_double(sim.final_state.s1).c_str(),
              format_double(sim.final_state.s2).c_str(), to_string(sim.outcome.u.verdict),
              to_string(sim.outcome.v.verdict));
}

void cmd_simulate(Run& r) { write_simulation(r, simulate_free_boundary(r.sc.setup())); }

void cmd_classify(Run& r) {
  SimulationResult sim = simulate_free_boundary(r.sc.setup());
  write_simulation(r, sim);
  if (sim.outcome.u.verdict == Verdict::undecided || sim.outcome.v.verdict == Verdict::undecided)
    throw Undecided{};
}

void cmd_critmu(Run& r) {
  const json& sec = r.sc.section("critmu");
  std::string which = str_key(sec, "species", "u");
  require(which == "u" || which == "v", "critmu.species must be 'u' or 'v'");
  std::pair<double, double> bracket{0.05, 50.0};
  if (sec.contains("bracket")) {
    const json& b = sec.at("bracket");
    require(b.is_array() && b.size() == 2 && b[0].is_number() && b[1].is_number(),
            "critmu.bracket must be [lo, hi]");
    bracket = {b[0].get<double>(), b[1].get<double>()};
  }
  CriticalMuOptions o;
  o.tol = num_key(sec, "tol", o.tol);
  CriticalMu c = critical_mu(r.sc.setup(), which == "u" ? Species::u : Species::v, bracket, o);
  CsvTable t({"mu_star", "bracket_lo", "bracket_hi", "ell"});
  t.add_row({c.mu_star, c.bracket.first, c.bracket.second, c.ell});
  r.emit("critmu.csv", t.str());
  r.manifest.results = {{"mu_star", c.mu_star},
                        {"bracket", {c.bracket.first, c.bracket.second}},
                        {"verdicts", {to_string(c.verdicts.first), to_string(c.verdicts.second)}},
                        {"ell", c.ell},
                        {"simulations", c.simulations}};
  std::printf("mu* = %s  bracket = [%s, %s]\n", format_double(c.mu_star).c_str(),
              format_double(c.bracket.first).c_str(), format_double(c.bracket.second).c_str());
}

using Command = void (*)(Run&);

Command lookup(const std::string& name) {
  if (name == "eig") return cmd_eig;
  if (name == "roots") return cmd_roots;
  if (name == "steady") return cmd_steady;
  if (name == "semiwave") return cmd_semiwave;
  if (name == "simulate") return cmd_simulate;
  if (name == "classify") return cmd_classify;
  if (name == "critmu") return cmd_critmu;
  return nullptr;
}

void finish(Run& r, const std::string& command, const std::string& config_text,
            std::chrono::steady_clock::time_point start) {
  RunManifest& m = r.manifest;
  m.command = command;
  m.config_hash = sha256_hex(config_text);
  m.effective_config = to_json(r.sc);
  m.versions = build_versions();
  m.test_mode = r.sc.params.test_mode;
  auto [k1, k2] = r.sc.kernels();
  m.neglected_tail_mass = {{"J1", 2.0 * k1.tail_mass}, {"J2", 2.0 * k2.tail_mass}};
  for (const auto& [name, data] : r.pending) m.files.push_back(write_artifact(r.dir, name, data));
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_artifact(r.dir, "manifest.json", m.to_json().dump(2) + "\n");
}

// Runs one command into dir; artifacts are written only after the command succeeds
// or owes nothing but a verdict.
int run_one(const std::string& command, const Scenario& sc, const std::string& config_text,
            const std::string& dir) {
  auto start = std::chrono::steady_clock::now();
  Run r{sc, dir, {}, {}};
  try {
    lookup(command)(r);
  } catch (const Undecided&) {
    finish(r, command, config_text, start);
    std::fprintf(stderr, "error: classification undecided at T = %g\n", sc.numerics.T);
    return kUndecided;
  }
  finish(r, command, config_text, start);
  return kOk;
}

const std::vector<std::string> kSweepable = {"d1", "d2", "r1", "r2", "a", "b", "q", "mu1", "mu2", "s10", "s20"};

int cmd_sweep(const json& cfg, const Scenario& sc, const std::string& out, int workers) {
  const json& sec = sc.section("sweep");
  std::string parameter = str_key(sec, "parameter", "mu1");
  std::string command = str_key(sec, "command", "simulate");
  require(std::find(kSweepable.begin(), kSweepable.end(), parameter) != kSweepable.end(),
          "sweep.parameter '" + parameter + "' is not a model parameter");
  require(command == "simulate" || command == "classify", "sweep.command must be simulate or classify");
  require(sec.contains("values") && sec.at("values").is_array() && !sec.at("values").empty(),
          "sweep.values must be a nonempty array");
  std::vector<double> values;
  for (const json& v : sec.at("values")) {
    require(v.is_number(), "sweep values must be numbers");
    values.push_back(v.get<double>());
  }

  // every point is validated before anything is written
  std::vector<std::string> texts;
  std::vector<Scenario> points;
  for (double v : values) {
    json c = cfg;
    c.erase("sweep");
    c["params"][parameter] = v;
    texts.push_back(c.dump(2) + "\n");
    points.push_back(parse_scenario(c));
  }

  std::vector<int> codes(values.size(), kOk);
  std::vector<std::string> messages(values.size());
  std::vector<std::string> dirs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "point_%02zu", i);
    dirs[i] = (fs::path(out) / name).string();
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < values.size();) {
      try {
        write_artifact(dirs[i], "config.json", texts[i]);
        codes[i] = run_one(command, points[i], texts[i], dirs[i]);
      } catch (const Error& e) {
        codes[i] = exit_code(e.kind());
        messages[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  int n = std::max(1, std::min<int>(workers, static_cast<int>(values.size())));
  for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // summary: verdicts coded 1 spreading, 0 vanishing, -1 undecided, NaN on failure
  CsvTable summary({"index", parameter, "exit_code", "s1_final", "s2_final", "speed_u", "speed_v",
                    "verdict_u", "verdict_v"});
  auto code = [](const json& v) {
    std::string s = v.get<std::string>();
    return s == "spreading" ? 1.0 : s == "vanishing" ? 0.0 : -1.0;
  };
  int worst = kOk;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double nan = std::nan("");
    std::vector<double> row{static_cast<double>(i), values[i], static_cast<double>(codes[i]), nan, nan, nan, nan,
                            nan, nan};
    if (codes[i] == kOk || codes[i] == kUndecided) {
      std::ifstream in(fs::path(dirs[i]) / "manifest.json");
      json m = json::parse(in);
      const json& res = m.at("results");
      row[3] = res.at("s1_final").get<double>();
      row[4] = res.at("s2_final").get<double>();
      if (res.contains("speed_u")) row[5] = res.at("speed_u").at("speed").get<double>();
      if (res.contains("speed_v")) row[6] = res.at("speed_v").at("speed").get<double>();
      row[7] = code(m.at("verdicts").at("u").at("verdict"));
      row[8] = code(m.at("verdicts").at("v").at("verdict"));
    } else {
      std::fprintf(stderr, "error: sweep point %zu (%s = %g): %s\n", i, parameter.c_str(), values[i],
                   messages[i].c_str());
    }
    summary.add_row(row);
    worst = std::max(worst, codes[i]);
  }
  RunManifest m;
  m.command = "sweep";
  m.config_hash = sha256_hex(cfg.dump());
  m.effective_config = to_json(sc);
  m.versions = build_versions();
  m.test_mode = sc.params.test_mode;
  m.results = {{"parameter", parameter}, {"values", values}, {"exit_codes", codes}, {"points", dirs}};
  m.files.push_back(write_artifact(out, "summary.csv", summary.str()));
  write_artifact(out, "manifest.json", m.to_json().dump(2) + "\n");
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal cooperative free-boundary solver"};
  app.require_subcommand(1);
  std::string config, out = "out";
  int workers = 1;
  bool seedless = false;
  const std::vector<std::string> names = {"eig", "roots", "steady", "semiwave", "simulate", "classify",
                                          "critmu", "sweep"};
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "scenario file (JSON)")->required();
    sub->add_option("--out", out, "artifact directory");
    sub->add_option("--workers", workers, "concurrent sweep points")->check(CLI::PositiveNumber);
    sub->add_flag("--seedless", seedless, "assert that no random numbers are drawn");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }
  std::string command = app.get_subcommands().front()->get_name();

  try {
    std::string text;
    Scenario sc = load_scenario(config, &text);
    if (command == "sweep") return cmd_sweep(json::parse(text), sc, out, workers);
    return run_one(command, sc, text, out);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNoConvergence;
  }
}
