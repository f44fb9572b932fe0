#include "coopfront/kernels.hpp"

#include <cmath>
#include <numbers>

#include "coopfront/errors.hpp"

namespace coop {

namespace {

double normal_upper(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

double normal_pdf(double t) {
  return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::laplace: return "laplace";
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::tent: return "tent";
    case KernelFamily::algebraic: return "algebraic";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "laplace") return KernelFamily::laplace;
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "tent") return KernelFamily::tent;
  if (name == "algebraic") return KernelFamily::algebraic;
  fail(ErrorKind::InvalidArgument, "unknown kernel family '" + name + "'");
}

void KernelSpec::validate() const {
  if (family == KernelFamily::algebraic) {
    if (!(shape > 1.0))
      fail(ErrorKind::NonNormalizable, "algebraic kernel needs exponent p > 1");
    return;
  }
  if (!(shape > 0.0) || !std::isfinite(shape))
    fail(ErrorKind::InvalidArgument, "kernel shape parameter must be positive");
}

double KernelSpec::density(double x) const {
  double ax = std::abs(x);
  switch (family) {
    case KernelFamily::laplace: return 0.5 * shape * std::exp(-shape * ax);
    case KernelFamily::gaussian: return shape * normal_pdf(shape * ax);
    case KernelFamily::tent: return ax >= shape ? 0.0 : (1.0 - ax / shape) / shape;
    case KernelFamily::algebraic: return 0.5 * (shape - 1.0) * std::pow(1.0 + ax, -shape);
  }
  return 0.0;
}

double KernelSpec::tail_mass(double z) const {
  double az = std::abs(z);
  switch (family) {
    case KernelFamily::laplace: return 0.5 * std::exp(-shape * az);
    case KernelFamily::gaussian: return normal_upper(shape * az);
    case KernelFamily::tent: {
      if (az >= shape) return 0.0;
      double r = (shape - az) / shape;
      return 0.5 * r * r;
    }
    case KernelFamily::algebraic: return 0.5 * std::pow(1.0 + az, 1.0 - shape);
  }
  return 0.0;
}

double KernelSpec::tail_integral(double z) const {
  double az = std::abs(z);
  switch (family) {
    case KernelFamily::laplace: return 0.5 * std::exp(-shape * az) / shape;
    case KernelFamily::gaussian: {
      double t = shape * az;
      return (normal_pdf(t) - t * normal_upper(t)) / shape;
    }
    case KernelFamily::tent: {
      if (az >= shape) return 0.0;
      double r = shape - az;
      return r * r * r / (6.0 * shape * shape);
    }
    case KernelFamily::algebraic:
      if (shape <= 2.0) return std::numeric_limits<double>::infinity();
      return 0.5 * std::pow(1.0 + az, 2.0 - shape) / (shape - 2.0);
  }
  return 0.0;
}

double KernelSpec::radius_for(double eps_tail) const {
  switch (family) {
    case KernelFamily::laplace: return std::log(1.0 / eps_tail) / shape;
    case KernelFamily::gaussian: {
      double lo = 0.0, hi = 1.0;
      while (2.0 * tail_mass(hi) > eps_tail) hi *= 2.0;
      for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        (2.0 * tail_mass(mid) > eps_tail ? lo : hi) = mid;
      }
      return hi;
    }
    case KernelFamily::tent: return shape;
    case KernelFamily::algebraic: return std::pow(eps_tail, -1.0 / (shape - 1.0)) - 1.0;
  }
  return 0.0;
}

MomentReport moment_report(const KernelSpec& spec) {
  spec.validate();
  MomentReport m;
  switch (spec.family) {
    case KernelFamily::laplace: m.exp_abscissa = spec.shape; break;
    case KernelFamily::gaussian:
    case KernelFamily::tent: break;
    case KernelFamily::algebraic:
      m.first_moment_finite = spec.shape > 2.0;
      m.exp_abscissa = 0.0;
      break;
  }
  return m;
}

double exp_moment(const KernelSpec& spec, double lambda) {
  spec.validate();
  double l = std::abs(lambda);
  if (l == 0.0) return 1.0;
  MomentReport m = moment_report(spec);
  if (l >= m.exp_abscissa)
    fail(ErrorKind::DivergentMoment, "exponential moment diverges at this lambda");
  switch (spec.family) {
    case KernelFamily::laplace: {
      double s2 = spec.shape * spec.shape;
      return s2 / (s2 - l * l);
    }
    case KernelFamily::gaussian: return std::exp(l * l / (2.0 * spec.shape * spec.shape));
    case KernelFamily::tent: {
      double t = l * spec.shape;
      if (t < 1e-3) {
        double t2 = t * t;
        return 1.0 + t2 / 12.0 + t2 * t2 / 360.0;
      }
      return 2.0 * (std::cosh(t) - 1.0) / (t * t);
    }
    case KernelFamily::algebraic: break;
  }
  fail(ErrorKind::DivergentMoment, "exponential moment diverges");
}

double SampledKernel::trapezoid_mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  s -= 0.5 * (values.front() + values.back());
  return s * h;
}

SampledKernel SampledKernel::resampled(double new_h) const {
  return sample_kernel(spec, new_h, eps_tail, r_max);
}

SampledKernel sample_kernel(const KernelSpec& spec, double h, double eps_tail, double r_max) {
  spec.validate();
  require(h > 0.0 && std::isfinite(h), "spacing h must be positive");
  require(eps_tail > 0.0 && eps_tail <= 1e-4, "eps_tail must lie in (0, 1e-4]");
  require(r_max > 0.0, "r_max must be positive");

  SampledKernel k;
  k.spec = spec;
  k.h = h;
  k.eps_tail = eps_tail;
  k.r_max = r_max;
  double r = std::min(spec.radius_for(eps_tail), r_max);
  auto nodes = static_cast<std::size_t>(std::ceil(r / h - 1e-9));
  k.radius_nodes = std::max<std::size_t>(nodes, 1);
  k.radius = static_cast<double>(k.radius_nodes) * h;
  k.tail_mass = spec.tail_mass(k.radius);

  std::size_t n = 2 * k.radius_nodes + 1;
  k.values.resize(n);
  for (std::size_t i = 0; i <= k.radius_nodes; ++i) {
    double v = spec.density(static_cast<double>(i) * h);
    k.values[k.radius_nodes + i] = v;
    k.values[k.radius_nodes - i] = v;
  }
  double raw = k.trapezoid_mass();
  k.scale = (1.0 - 2.0 * k.tail_mass) / raw;
  for (double& v : k.values) v *= k.scale;
  return k;
}

double exp_moment(const SampledKernel& kernel, double lambda) {
  MomentReport m = moment_report(kernel.spec);
  double l = std::abs(lambda);
  if (l > 0.0 && l >= m.exp_abscissa)
    fail(ErrorKind::DivergentMoment, "exponential moment diverges at this lambda");
  long r = static_cast<long>(kernel.radius_nodes);
  double s = 0.0;
  for (long k = -r; k <= r; ++k) {
    double w = (k == -r || k == r) ? 0.5 : 1.0;
    s += w * kernel.at(k) * std::exp(l * static_cast<double>(k) * kernel.h);
  }
  return s * kernel.h;
}

}  // namespace coop
