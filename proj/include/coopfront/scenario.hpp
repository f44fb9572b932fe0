#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coopfront/evolve.hpp"
#include "coopfront/kernels.hpp"
#include "coopfront/reaction.hpp"

namespace coop {

struct Numerics {
  double h = 0.05;
  double dt = 0.0;  // 0 means dt_max
  double T = 100.0;
  double L = 150.0;
  double L_w = 40.0;
  double eps_tail = kDefaultEpsTail;
  double r_max = kDefaultRMax;
  double tol_bounded = 1e-10;
  double tol_halfline = 1e-8;
  double tol_semiwave = 1e-9;
  double tol_eigen = 1e-10;
  std::size_t max_nodes = 4000000;
};

struct Outputs {
  std::vector<double> snapshot_times;
  double sample_every = 0.5;
};

struct Scenario {
  CoopParams params;
  KernelSpec j1 = KernelSpec::laplace(1.0);
  KernelSpec j2 = KernelSpec::laplace(1.0);
  Numerics numerics;
  InitialProfile u0, v0;
  Outputs outputs;
  nlohmann::json sections = nlohmann::json::object();  // subcommand blocks

  // Throws Error(InvalidArgument or NonNormalizable) on bad input.
  void validate() const;
  std::pair<SampledKernel, SampledKernel> kernels() const;
  FreeBoundarySetup setup() const;
  const nlohmann::json& section(const std::string& name) const;
};

Scenario parse_scenario(const nlohmann::json& config);
Scenario load_scenario(const std::string& path, std::string* raw_text = nullptr);
// Effective configuration with every default filled in.
nlohmann::json to_json(const Scenario& s);

}  // namespace coop
