#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "coopfront/convolution.hpp"
#include "coopfront/kernels.hpp"
#include "coopfront/reaction.hpp"

namespace coop {

enum class ProfileKind { bounded_interval, truncated_halfline };
enum class Classification { trivial, semitrivial_u, semitrivial_v, coexistence };

const char* to_string(Classification c);

struct SteadyProfile {
  UniformGrid grid;
  std::vector<double> values;
  // tail_limit - values, kept separately on the half-line where it underflows
  // the resolution of values far from the boundary
  std::vector<double> deficit;
  double tail_limit = 0.0;
  ProfileKind kind = ProfileKind::bounded_interval;
  bool positive = false;
  std::size_t iterations = 0;
  double increment = 0.0;  // last sup-norm step of the iteration

  double extent() const { return grid.back(); }
  double sup() const;
  double inf() const;
};

struct SteadyPair {
  SteadyProfile u;
  SteadyProfile v;
  Classification classification = Classification::trivial;
  double lambda_u = 0.0;  // principal eigenvalues, bounded problems only
  double lambda_v = 0.0;
};

// k(x) = k_inf + excess(x) with excess >= 0 nonincreasing.
struct Weight {
  double k_inf = 1.0;
  std::function<double(double)> excess;

  double operator()(double x) const { return excess ? k_inf + excess(x) : k_inf; }
  double excess_at(double x) const { return excess ? excess(x) : 0.0; }
  static Weight constant(double k) { return {k, {}}; }
};

enum class Start { lower, upper };

using IterateObserver =
    std::function<void(std::size_t, std::span<const double>, std::span<const double>)>;

struct SteadyOptions {
  std::size_t max_iter = 100000;
  Start start = Start::lower;
  bool check_doubling = true;
  // scalar half-line warm start: deficit relative to the new tail limit
  std::optional<std::vector<double>> initial_deficit;
  std::function<bool()> cancelled;
  IterateObserver observer;
};

inline constexpr double kBoundedTol = 1e-10;
inline constexpr double kHalflineTol = 1e-8;

SteadyProfile scalar_steady_bounded(double d, const SampledKernel& kernel, double alpha,
                                    double beta, double l, double tol = kBoundedTol,
                                    const SteadyOptions& opts = {});

SteadyProfile scalar_steady_halfline(double d, const SampledKernel& kernel, double alpha,
                                     double beta, double L, double tol = kHalflineTol,
                                     SteadyOptions opts = {.start = Start::upper});

SteadyProfile weighted_steady(double d, const SampledKernel& kernel, double alpha,
                              const Weight& k, double L, double tol = kHalflineTol,
                              SteadyOptions opts = {.start = Start::upper});

SteadyPair system_steady_bounded(const CoopParams& params, const SampledKernel& j1,
                                 const SampledKernel& j2, double l, double tol = kBoundedTol,
                                 const SteadyOptions& opts = {});

SteadyPair system_steady_halfline(const CoopParams& params, const SampledKernel& j1,
                                  const SampledKernel& j2, double L, double tol = kHalflineTol,
                                  SteadyOptions opts = {.start = Start::upper});

struct SandwichSequence {
  std::vector<SteadyProfile> U;
  std::vector<SteadyProfile> V;
  std::vector<double> increment_u;  // sup|U_{n+1} - U_n|
  std::vector<double> increment_v;  // sup|V_{n+1} - V_n|
  // most negative nodewise step, 0 when every step is nondecreasing
  double min_step = 0.0;
  bool converged = false;
};

SandwichSequence sandwich_iteration(const CoopParams& params, const SampledKernel& j1,
                                    const SampledKernel& j2, double L, std::size_t n_max = 50,
                                    double tol = kHalflineTol);

// Sampled weight of the sandwich steps: r(1 + 1/(1 + c·W(x))) for a profile W.
Weight sandwich_weight(double r, double coupling, const SteadyProfile& w);

// Damping that keeps u + F(u)/ω monotone for u in [0, top] with crowding up to k_max.
double safe_damping(double d, double alpha, double k_max, double top);

}  // namespace coop
