#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coopfront/convolution.hpp"
#include "coopfront/kernels.hpp"
#include "coopfront/reaction.hpp"
#include "coopfront/steady.hpp"

namespace coop {

enum class ProfileFamily { zero, plateau, triangular };

const char* to_string(ProfileFamily f);
ProfileFamily parse_profile_family(const std::string& name);

// Initial datum on [0, s0] vanishing at s0 and positive before it.
//   plateau     amplitude, with a linear ramp of width min(1, s0/2) down to s0
//   triangular  amplitude·(1 - x/s0)
struct InitialProfile {
  ProfileFamily family = ProfileFamily::plateau;
  double amplitude = 0.5;

  double operator()(double x, double s0) const;
};

struct SimState {
  double t = 0.0;
  double h = 0.0;
  std::vector<double> u;  // nodes x_j = j h with x_j < s1, zero beyond
  std::vector<double> v;
  double s1 = 0.0;
  double s2 = 0.0;
};

// Number of nodes x_j = j h strictly left of the front s.
std::size_t active_nodes(double s, double h);

struct Box {
  double u = 0.0;
  double v = 0.0;
};

// Smallest (K1, K2) >= (max(|u0|, u*), max(|v0|, v*)) with f1(K) <= 0 and f2(K) <= 0.
Box invariant_box(const CoopParams& p, double u0_max, double v0_max);
double lipschitz_bound(const CoopParams& p, const Box& box);
double dt_max(const CoopParams& p, const Box& box);

SimState initial_state(const CoopParams& p, double h, const InitialProfile& u0,
                       const InitialProfile& v0);

// Owns convolution scratch for repeated steps of one simulation.
class Stepper {
public:
  Stepper(const CoopParams& params, const SampledKernel& j1, const SampledKernel& j2, Box box);

  void step(SimState& state, double dt);
  // fixed domain [0, l]: no fronts, trapezoid weights at both ends
  void step_fixed(SimState& state, double dt);
  std::size_t clamps() const { return clamps_; }
  const Box& box() const { return box_; }

private:
  void advance(SimState& s, double dt, bool fixed);
  CoopParams p_;
  Convolver c1_, c2_;
  Box box_;
  std::size_t clamps_ = 0;
  std::vector<double> q_, k1_, k2_, w1_, w2_;
};

// One explicit Euler step of the free-boundary system.
SimState step(const SimState& state, const CoopParams& params, const SampledKernel& j1,
              const SampledKernel& j2, double dt);

struct HistorySample {
  double t = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double sup_u = 0.0;
  double sup_v = 0.0;
};

struct FrontHistory {
  std::vector<HistorySample> samples;

  std::size_t size() const { return samples.size(); }
  // s_i(t)/t per sample (NaN at t = 0)
  std::vector<double> ratio(int species) const;
};

enum class Verdict { spreading, vanishing, undecided };
const char* to_string(Verdict v);

struct SpeciesOutcome {
  Verdict verdict = Verdict::undecided;
  double lambda_final = 0.0;   // λ_i^p(s_i(T))
  double front_final = 0.0;
  double stall_gain = 0.0;     // s_i gain over the trailing 20% of the horizon
  double sup_norm = 0.0;
  std::string note;
};

struct Outcome {
  SpeciesOutcome u;
  SpeciesOutcome v;
};

struct ClassifyOptions {
  double stall_fraction = 0.2;
  double stall_gain = 1e-4;
  double decay = 1e-5;
};

Outcome classify(const FrontHistory& history, const SimState& final_state,
                 const CoopParams& params, const SampledKernel& j1, const SampledKernel& j2,
                 const ClassifyOptions& opts = {});

struct Snapshot {
  double t = 0.0;
  std::vector<double> x, u, v;
};

struct RunControl {
  double T = 100.0;
  double dt = 0.0;              // 0 selects dt_max (pulled slightly inside it)
  double sample_every = 0.5;
  std::vector<double> snapshot_times;
  std::size_t max_nodes = 4000000;
  // checked at every sample; true ends the run early
  std::function<bool(const SimState&)> stop;
  std::function<bool()> cancelled;
};

struct SimulationResult {
  FrontHistory history;
  SimState final_state;
  Outcome outcome;
  std::vector<Snapshot> snapshots;
  double dt = 0.0;
  std::size_t steps = 0;
  std::size_t clamps = 0;
  Box box;
  bool truncated = false;      // max_nodes reached
  bool stopped_early = false;
};

struct FreeBoundarySetup {
  CoopParams params;
  SampledKernel j1, j2;
  InitialProfile u0, v0;
  RunControl control;
};

SimulationResult simulate_free_boundary(const FreeBoundarySetup& setup);

struct FixedDomainResult {
  SteadyProfile u, v;        // final fields on the closed grid of [0, l]
  Classification classification = Classification::trivial;
  double lambda_u = 0.0, lambda_v = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
};

FixedDomainResult simulate_fixed_domain(const CoopParams& params, const SampledKernel& j1,
                                        const SampledKernel& j2, double l,
                                        const InitialProfile& u0, const InitialProfile& v0,
                                        double T, double dt = 0.0);

struct PrescribedFrontResult {
  FrontHistory history;      // t, s, sup
  UniformGrid grid;
  std::vector<double> u;     // final field on nodes left of s(T)
  double front = 0.0;
  double dt = 0.0;
};

PrescribedFrontResult simulate_prescribed_front(double d, const SampledKernel& kernel,
                                                double alpha, const Weight& k,
                                                const std::function<double(double)>& front,
                                                const InitialProfile& init, double T,
                                                double dt = 0.0);

struct SpeedEstimate {
  double speed = 0.0;
  bool accelerated = false;
  double early_rate = 0.0;  // mean speed over [T/4, T/2]
  double late_rate = 0.0;   // mean speed over [T/2, T]
};

// species 1 or 2
SpeedEstimate estimate_speed(const FrontHistory& history, double window, int species = 1);

enum class Species { u, v };

struct CriticalMuOptions {
  double tol = 0.01;               // relative bracket width
  int horizon_doublings = 3;
  ClassifyOptions classify;
};

struct CriticalMu {
  double mu_star = 0.0;
  std::pair<double, double> bracket;
  std::pair<Verdict, Verdict> verdicts;
  double tolerance = 0.0;
  double ell = 0.0;                // threshold length of the species
  std::size_t simulations = 0;
};

// Verdict of one species for a given expansion coefficient, extending the
// horizon while undecided.
Verdict mu_verdict(const FreeBoundarySetup& setup, Species species, double mu,
                   const CriticalMuOptions& opts = {}, double ell = 0.0);

CriticalMu critical_mu(const FreeBoundarySetup& setup, Species species,
                       std::pair<double, double> bracket, const CriticalMuOptions& opts = {});

}  // namespace coop
