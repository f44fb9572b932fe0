#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "coopfront/convolution.hpp"
#include "coopfront/kernels.hpp"

namespace coop {

struct EigenOptions {
  double tol = 1e-10;
  std::size_t max_iter = 200000;
  double origin = 0.0;  // left end of Ω = (origin, origin + l)
  ConvolutionMethod method = ConvolutionMethod::automatic;
  std::function<bool()> cancelled;
};

struct EigenResult {
  double lambda = 0.0;
  std::vector<double> eigenfunction;
  UniformGrid grid;
  double residual = 0.0;
  std::size_t iterations = 0;
};

// Principal eigenvalue of d∫_Ω P(x-y)φ(y)dy - dφ + αφ on Ω = (0, l), by power
// iteration on the nonnegative matrix d·K + α·I.
EigenResult principal_eigenvalue(double d, const SampledKernel& kernel, double alpha, double l,
                                 const EigenOptions& opts = {});

struct ThresholdResult {
  double ell = 0.0;
  std::pair<double, double> bracket;
  std::pair<double, double> lambda_at_bracket;
  std::size_t evaluations = 0;
};

// Length ℓ with λ(d, P, α, (0, ℓ)) = 0; defined only when α < d.
ThresholdResult threshold_length(double d, const SampledKernel& kernel, double alpha, double tol,
                                 const EigenOptions& opts = {});

}  // namespace coop
