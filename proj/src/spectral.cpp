#include "coopfront/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coopfront/errors.hpp"

namespace coop {

namespace {

SampledKernel kernel_on(const SampledKernel& kernel, double h) {
  if (std::abs(kernel.h - h) <= 1e-12 * h) return kernel;
  return kernel.resampled(h);
}

}  // namespace

EigenResult principal_eigenvalue(double d, const SampledKernel& kernel, double alpha, double l,
                                 const EigenOptions& opts) {
  require(d > 0.0, "diffusion rate must be positive");
  require(l > 0.0, "interval length must be positive");
  require(opts.tol > 0.0, "tolerance must be positive");

  EigenResult res;
  res.grid = closed_grid(opts.origin, opts.origin + l, kernel.h);
  const std::size_t n = res.grid.size;
  const double h = res.grid.h;
  Convolver conv(kernel_on(kernel, h), opts.method);
  std::vector<double> w = trapezoid_weights(n, h);

  std::vector<double> x(n), q(n), y(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::sin(std::numbers::pi * (static_cast<double>(i) + 1.0) / (static_cast<double>(n) + 1.0));

  // α·I shifts every eigenvalue equally, so iterate on d·K alone: the ratio of
  // the two leading eigenvalues is further from 1 and the defect is unchanged.
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    if (opts.cancelled && opts.cancelled()) fail(ErrorKind::Cancelled, "eigenvalue solve cancelled");
    for (std::size_t i = 0; i < n; ++i) q[i] = w[i] * x[i];
    conv.apply(q, y);
    double num = 0.0, den = 0.0, top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = d * y[i];
      num += w[i] * x[i] * y[i];
      den += w[i] * x[i] * x[i];
    }
    double rho = num / den;
    double xmax = 0.0, defect = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      defect = std::max(defect, std::abs(y[i] - rho * x[i]));
      xmax = std::max(xmax, std::abs(x[i]));
      top = std::max(top, y[i]);
    }
    defect /= xmax;
    res.iterations = it;
    if (!(top > 0.0) || !std::isfinite(top))
      fail(ErrorKind::NoConvergence, "power iteration lost positivity");
    if (defect <= opts.tol) {
      res.lambda = rho + alpha - d;
      res.residual = defect;
      double s = *std::max_element(x.begin(), x.end());
      for (double& v : x) v /= s;
      res.eigenfunction = std::move(x);
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / top;
  }
  fail(ErrorKind::NoConvergence, "power iteration did not converge within the iteration cap");
}

ThresholdResult threshold_length(double d, const SampledKernel& kernel, double alpha, double tol,
                                 const EigenOptions& opts) {
  require(tol > 0.0, "tolerance must be positive");
  require(d > 0.0, "diffusion rate must be positive");
  if (alpha >= d)
    fail(ErrorKind::NoFiniteThreshold, "alpha >= d: the eigenvalue is positive on every interval");

  ThresholdResult res;
  auto lambda_at = [&](double l) {
    ++res.evaluations;
    return principal_eigenvalue(d, kernel, alpha, l, opts).lambda;
  };

  double lo = kernel.h, lam_lo = lambda_at(lo);
  while (lam_lo > 0.0 && lo > 1e-12) {
    lo *= 0.5;
    lam_lo = lambda_at(lo);
  }
  if (lam_lo > 0.0) fail(ErrorKind::NoFiniteThreshold, "eigenvalue positive at the smallest length");

  const double cap = 1e4;
  double hi = std::max(1.0, 2.0 * lo), lam_hi = lambda_at(hi);
  while (lam_hi < 0.0) {
    lo = hi;
    lam_lo = lam_hi;
    hi *= 2.0;
    if (hi > cap)
      fail(ErrorKind::NoFiniteThreshold,
           "no sign change up to length 1e4 (last eigenvalue " + std::to_string(lam_hi) + ")");
    lam_hi = lambda_at(hi);
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    double lam = lambda_at(mid);
    if (lam < 0.0) {
      lo = mid;
      lam_lo = lam;
    } else {
      hi = mid;
      lam_hi = lam;
    }
  }
  res.bracket = {lo, hi};
  res.lambda_at_bracket = {lam_lo, lam_hi};
  res.ell = 0.5 * (lo + hi);
  return res;
}

}  // namespace coop
