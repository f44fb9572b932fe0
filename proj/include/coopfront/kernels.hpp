#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace coop {

enum class KernelFamily { laplace, gaussian, tent, algebraic };

const char* to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

// Even probability density on the line.
//   laplace   (σ/2) exp(-σ|x|)
//   gaussian  σ/sqrt(2π) exp(-(σx)²/2)
//   tent      (1/w) max(0, 1 - |x|/w)
//   algebraic ((p-1)/2) (1+|x|)^(-p)
struct KernelSpec {
  KernelFamily family = KernelFamily::laplace;
  double shape = 1.0;

  static KernelSpec laplace(double rate) { return {KernelFamily::laplace, rate}; }
  static KernelSpec gaussian(double rate) { return {KernelFamily::gaussian, rate}; }
  static KernelSpec tent(double half_width) { return {KernelFamily::tent, half_width}; }
  static KernelSpec algebraic(double p) { return {KernelFamily::algebraic, p}; }

  // Throws NonNormalizable for algebraic p <= 1, InvalidArgument for bad shapes.
  void validate() const;

  double density(double x) const;
  // ∫_z^∞ P(x) dx for z >= 0 (argument taken by absolute value).
  double tail_mass(double z) const;
  // ∫_z^∞ tail_mass(s) ds for z >= 0, infinite when the first moment diverges.
  double tail_integral(double z) const;
  // Smallest radius with two-sided tail mass <= eps.
  double radius_for(double eps_tail) const;
};

struct MomentReport {
  double mass = 1.0;
  bool first_moment_finite = true;
  double exp_abscissa = std::numeric_limits<double>::infinity();
};

MomentReport moment_report(const KernelSpec& spec);

// ∫ P(x) e^{λx} dx.
double exp_moment(const KernelSpec& spec, double lambda);

struct SampledKernel {
  KernelSpec spec;
  double h = 0.0;
  double eps_tail = 0.0;
  double r_max = 0.0;
  std::size_t radius_nodes = 0;   // values has 2*radius_nodes+1 entries
  double radius = 0.0;            // R = radius_nodes * h
  double tail_mass = 0.0;         // analytic one-sided mass beyond R
  double scale = 1.0;             // normalization factor applied to raw samples
  std::vector<double> values;     // P(kh) for k = -radius_nodes..radius_nodes

  double at(long k) const {
    long r = static_cast<long>(radius_nodes);
    return (k < -r || k > r) ? 0.0 : values[static_cast<std::size_t>(k + r)];
  }
  double cdf_tail(double z) const { return spec.tail_mass(z); }
  double tail_integral(double z) const { return spec.tail_integral(z); }
  double trapezoid_mass() const;
  // Same family and tolerances sampled at a different spacing.
  SampledKernel resampled(double new_h) const;
};

inline constexpr double kDefaultRMax = 50.0;
inline constexpr double kDefaultEpsTail = 1e-8;

SampledKernel sample_kernel(const KernelSpec& spec, double h, double eps_tail = kDefaultEpsTail,
                            double r_max = kDefaultRMax);

// Trapezoid sum of the samples against e^{λx}.
double exp_moment(const SampledKernel& kernel, double lambda);

}  // namespace coop
