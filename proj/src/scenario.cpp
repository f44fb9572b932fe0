#include "coopfront/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "coopfront/errors.hpp"

namespace coop {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(ErrorKind::InvalidArgument, where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail(ErrorKind::InvalidArgument, "unknown key '" + it.key() + "' in " + where);
}

double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(ErrorKind::InvalidArgument, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

KernelSpec kernel_from(const json& k, const std::string& where) {
  only_keys(k, {"family", "shape"}, where);
  if (!k.contains("family") || !k.at("family").is_string())
    fail(ErrorKind::InvalidArgument, where + ".family must be a string");
  KernelSpec spec;
  spec.family = parse_kernel_family(k.at("family").get<std::string>());
  spec.shape = number(k, "shape", 1.0);
  return spec;
}

InitialProfile profile_from(const json& j, const std::string& where) {
  only_keys(j, {"family", "amplitude"}, where);
  InitialProfile p;
  if (j.contains("family")) {
    if (!j.at("family").is_string()) fail(ErrorKind::InvalidArgument, where + ".family must be a string");
    p.family = parse_profile_family(j.at("family").get<std::string>());
  }
  p.amplitude = number(j, "amplitude", p.amplitude);
  return p;
}

json kernel_json(const KernelSpec& k) { return {{"family", to_string(k.family)}, {"shape", k.shape}}; }

}  // namespace

void Scenario::validate() const {
  params.validate();
  j1.validate();
  j2.validate();
  const Numerics& n = numerics;
  auto pos = [](double x) { return x > 0.0 && std::isfinite(x); };
  require(pos(n.h), "numerics.h must be positive");
  require(n.dt >= 0.0, "numerics.dt must be nonnegative");
  require(pos(n.T) && pos(n.L) && pos(n.L_w), "numerics T, L, L_w must be positive");
  require(n.eps_tail > 0.0 && n.eps_tail <= 1e-4, "numerics.eps_tail must lie in (0, 1e-4]");
  require(pos(n.r_max), "numerics.r_max must be positive");
  require(pos(n.tol_bounded) && pos(n.tol_halfline) && pos(n.tol_semiwave) && pos(n.tol_eigen),
          "tolerances must be positive");
  require(n.max_nodes > 0, "numerics.max_nodes must be positive");
  require(params.s10 >= 2.0 * n.h && params.s20 >= 2.0 * n.h, "s10 and s20 must be at least 2h");
  require(u0.amplitude >= 0.0 && v0.amplitude >= 0.0, "initial amplitudes must be nonnegative");
  require(pos(outputs.sample_every), "outputs.sample_every must be positive");
  for (double t : outputs.snapshot_times)
    require(t >= 0.0 && t <= n.T, "snapshot times must lie in [0, T]");
}

std::pair<SampledKernel, SampledKernel> Scenario::kernels() const {
  return {sample_kernel(j1, numerics.h, numerics.eps_tail, numerics.r_max),
          sample_kernel(j2, numerics.h, numerics.eps_tail, numerics.r_max)};
}

FreeBoundarySetup Scenario::setup() const {
  auto [k1, k2] = kernels();
  FreeBoundarySetup s;
  s.params = params;
  s.j1 = std::move(k1);
  s.j2 = std::move(k2);
  s.u0 = u0;
  s.v0 = v0;
  s.control.T = numerics.T;
  s.control.dt = numerics.dt;
  s.control.sample_every = outputs.sample_every;
  s.control.snapshot_times = outputs.snapshot_times;
  s.control.max_nodes = numerics.max_nodes;
  return s;
}

const json& Scenario::section(const std::string& name) const {
  static const json empty = json::object();
  return sections.contains(name) ? sections.at(name) : empty;
}

Scenario parse_scenario(const json& cfg) {
  only_keys(cfg,
            {"params", "kernels", "numerics", "initial", "outputs", "mode", "eig", "roots", "steady",
             "semiwave", "simulate", "classify", "critmu", "sweep"},
            "config");
  Scenario s;
  if (cfg.contains("mode")) {
    only_keys(cfg.at("mode"), {"test_mode"}, "mode");
    s.params.test_mode = cfg.at("mode").value("test_mode", false);
  }
  if (cfg.contains("params")) {
    const json& p = cfg.at("params");
    only_keys(p, {"d1", "d2", "r1", "r2", "a", "b", "q", "mu1", "mu2", "s10", "s20"}, "params");
    CoopParams& c = s.params;
    c.d1 = number(p, "d1", c.d1);
    c.d2 = number(p, "d2", c.d2);
    c.r1 = number(p, "r1", c.r1);
    c.r2 = number(p, "r2", c.r2);
    c.a = number(p, "a", c.a);
    c.b = number(p, "b", c.b);
    c.q = number(p, "q", c.q);
    c.mu1 = number(p, "mu1", c.mu1);
    c.mu2 = number(p, "mu2", c.mu2);
    c.s10 = number(p, "s10", c.s10);
    c.s20 = number(p, "s20", c.s20);
  }
  if (cfg.contains("kernels")) {
    const json& k = cfg.at("kernels");
    only_keys(k, {"J1", "J2"}, "kernels");
    if (k.contains("J1")) s.j1 = kernel_from(k.at("J1"), "kernels.J1");
    if (k.contains("J2")) s.j2 = kernel_from(k.at("J2"), "kernels.J2");
  }
  if (cfg.contains("numerics")) {
    const json& n = cfg.at("numerics");
    only_keys(n,
              {"h", "dt", "T", "L", "L_w", "eps_tail", "r_max", "tol_bounded", "tol_halfline",
               "tol_semiwave", "tol_eigen", "max_nodes"},
              "numerics");
    Numerics& x = s.numerics;
    x.h = number(n, "h", x.h);
    x.dt = number(n, "dt", x.dt);
    x.T = number(n, "T", x.T);
    x.L = number(n, "L", x.L);
    x.L_w = number(n, "L_w", x.L_w);
    x.eps_tail = number(n, "eps_tail", x.eps_tail);
    x.r_max = number(n, "r_max", x.r_max);
    x.tol_bounded = number(n, "tol_bounded", x.tol_bounded);
    x.tol_halfline = number(n, "tol_halfline", x.tol_halfline);
    x.tol_semiwave = number(n, "tol_semiwave", x.tol_semiwave);
    x.tol_eigen = number(n, "tol_eigen", x.tol_eigen);
    double mn = number(n, "max_nodes", static_cast<double>(x.max_nodes));
    require(mn >= 1.0, "numerics.max_nodes must be positive");
    x.max_nodes = static_cast<std::size_t>(mn);
  }
  if (cfg.contains("initial")) {
    const json& i = cfg.at("initial");
    only_keys(i, {"u", "v"}, "initial");
    if (i.contains("u")) s.u0 = profile_from(i.at("u"), "initial.u");
    if (i.contains("v")) s.v0 = profile_from(i.at("v"), "initial.v");
  }
  if (cfg.contains("outputs")) {
    const json& o = cfg.at("outputs");
    only_keys(o, {"snapshot_times", "sample_every"}, "outputs");
    s.outputs.sample_every = number(o, "sample_every", s.outputs.sample_every);
    if (o.contains("snapshot_times")) {
      const json& t = o.at("snapshot_times");
      if (!t.is_array()) fail(ErrorKind::InvalidArgument, "outputs.snapshot_times must be an array");
      for (const json& x : t) {
        if (!x.is_number()) fail(ErrorKind::InvalidArgument, "snapshot times must be numbers");
        s.outputs.snapshot_times.push_back(x.get<double>());
      }
    }
  }
  for (const char* name : {"eig", "roots", "steady", "semiwave", "simulate", "classify", "critmu", "sweep"})
    if (cfg.contains(name)) s.sections[name] = cfg.at(name);
  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path, std::string* raw_text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::InvalidArgument, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (raw_text) *raw_text = text;
  json cfg;
  try {
    cfg = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_scenario(cfg);
}

json to_json(const Scenario& s) {
  const CoopParams& p = s.params;
  const Numerics& n = s.numerics;
  json j;
  j["params"] = {{"d1", p.d1}, {"d2", p.d2}, {"r1", p.r1}, {"r2", p.r2}, {"a", p.a},  {"b", p.b},
                 {"q", p.q},   {"mu1", p.mu1}, {"mu2", p.mu2}, {"s10", p.s10}, {"s20", p.s20}};
  j["kernels"] = {{"J1", kernel_json(s.j1)}, {"J2", kernel_json(s.j2)}};
  j["numerics"] = {{"h", n.h},
                   {"dt", n.dt},
                   {"T", n.T},
                   {"L", n.L},
                   {"L_w", n.L_w},
                   {"eps_tail", n.eps_tail},
                   {"r_max", n.r_max},
                   {"tol_bounded", n.tol_bounded},
                   {"tol_halfline", n.tol_halfline},
                   {"tol_semiwave", n.tol_semiwave},
                   {"tol_eigen", n.tol_eigen},
                   {"max_nodes", n.max_nodes}};
  j["initial"] = {{"u", {{"family", to_string(s.u0.family)}, {"amplitude", s.u0.amplitude}}},
                  {"v", {{"family", to_string(s.v0.family)}, {"amplitude", s.v0.amplitude}}}};
  j["outputs"] = {{"snapshot_times", s.outputs.snapshot_times}, {"sample_every", s.outputs.sample_every}};
  j["mode"] = {{"test_mode", p.test_mode}};
  for (auto it = s.sections.begin(); it != s.sections.end(); ++it) j[it.key()] = it.value();
  return j;
}

}  // namespace coop
