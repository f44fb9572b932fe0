#pragma once

#include <cstddef>
#include <vector>

#include "coopfront/convolution.hpp"
#include "coopfront/kernels.hpp"
#include "coopfront/reaction.hpp"

namespace coop {

struct DispersionResult {
  double c_star = 0.0;
  double lambda_star = 0.0;
  std::size_t evaluations = 0;
};

// h(λ) = (d·M(λ) - d + α) / λ
double dispersion(double d, const KernelSpec& spec, double alpha, double lambda);

// min over λ in (0, abscissa) of h(λ); throws ThinTailViolated when no exponential moment is finite.
DispersionResult minimal_speed(double d, const KernelSpec& spec, double alpha);

struct SemiWaveOptions {
  double rho = 0.5;              // under-relaxation of the speed update
  std::size_t max_outer = 500;
  std::size_t max_sweeps = 200000;
  bool auto_extend = true;       // grow L_w until φ(-L_w) >= 0.99 α/β
};

struct SemiWaveResult {
  double c = 0.0;
  UniformGrid grid;              // nodes on [-L_w, 0]
  std::vector<double> profile;   // φ, with φ(0) = 0
  std::vector<double> deficit;   // α/β - φ
  double beta = 0.0;
  double mu = 0.0;
  double c_residual = 0.0;
  double c_star = 0.0;           // 0 for kernels with no finite exponential moment
  std::size_t outer_iterations = 0;
  std::size_t sweeps = 0;
  bool used_bracketing = false;
};

SemiWaveResult solve_semiwave(double d, const SampledKernel& kernel, double alpha, double beta,
                              double mu, double L_w = 40.0, double tol = 1e-9,
                              const SemiWaveOptions& opts = {});

struct SpeedBounds {
  double c1_lo = 0.0, c1_hi = 0.0;
  double c2_lo = 0.0, c2_hi = 0.0;
};

SpeedBounds speed_bounds(const CoopParams& params, const SampledKernel& j1,
                         const SampledKernel& j2, double L_w = 40.0, double tol = 1e-9);

}  // namespace coop
