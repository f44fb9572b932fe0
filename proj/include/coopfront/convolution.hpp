#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "coopfront/kernels.hpp"

namespace coop {

struct UniformGrid {
  double origin = 0.0;
  double h = 0.0;
  std::size_t size = 0;

  double x(std::size_t i) const { return origin + static_cast<double>(i) * h; }
  double back() const { return x(size - 1); }
};

// Grid over [a, b] with ceil((b-a)/h)+1 nodes and endpoints included; the
// spacing is shrunk so the last node lands on b.
UniformGrid closed_grid(double a, double b, double h);

// Composite trapezoid weights, h/2 at both ends.
std::vector<double> trapezoid_weights(std::size_t n, double h);

// ∫_D P(x-y) w(y) dy by the composite trapezoid rule over the nodes of D,
// evaluated at each node of eval. Throws GridMismatch unless both grids share
// the kernel spacing and eval nodes are grid-aligned with D.
std::vector<double> convolve(const SampledKernel& kernel, const UniformGrid& domain,
                             std::span<const double> w, const UniformGrid& eval);

enum class ConvolutionMethod { automatic, serial, parallel, fft };

// Discrete self-convolution out[i] = Σ_j P((i-j)h) q[j]; callers fold the
// quadrature weights into q. Owns scratch buffers, so one instance per thread.
class Convolver {
public:
  explicit Convolver(const SampledKernel& kernel,
                     ConvolutionMethod method = ConvolutionMethod::automatic);
  ~Convolver();
  Convolver(Convolver&&) noexcept;
  Convolver& operator=(Convolver&&) noexcept;

  void apply(std::span<const double> q, std::span<double> out);
  const SampledKernel& kernel() const { return kernel_; }
  ConvolutionMethod method() const { return method_; }
  // Method automatic would pick for an input of length n.
  ConvolutionMethod resolve(std::size_t n) const;

private:
  struct FftState;
  SampledKernel kernel_;
  ConvolutionMethod method_;
  std::unique_ptr<FftState> fft_;
};

void convolve_serial(const SampledKernel& kernel, std::span<const double> q,
                     std::span<double> out);
void convolve_parallel(const SampledKernel& kernel, std::span<const double> q,
                       std::span<double> out);

}  // namespace coop
