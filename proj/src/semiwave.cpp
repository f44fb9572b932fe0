#include "coopfront/semiwave.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "coopfront/errors.hpp"

namespace coop {

double dispersion(double d, const KernelSpec& spec, double alpha, double lambda) {
  return (d * exp_moment(spec, lambda) - d + alpha) / lambda;
}

DispersionResult minimal_speed(double d, const KernelSpec& spec, double alpha) {
  require(d > 0.0 && alpha > 0.0, "d and alpha must be positive");
  MomentReport m = moment_report(spec);
  if (!(m.exp_abscissa > 0.0))
    fail(ErrorKind::ThinTailViolated, "kernel has no finite exponential moment");
  DispersionResult res;
  auto hfun = [&](double l) {
    ++res.evaluations;
    return dispersion(d, spec, alpha, l);
  };

  double lo, hi;
  if (std::isfinite(m.exp_abscissa)) {
    lo = m.exp_abscissa * 1e-12;
    hi = m.exp_abscissa * (1.0 - 1e-12);
  } else {
    lo = 1e-12;
    hi = 1.0;
    while (hfun(2.0 * hi) < hfun(hi)) hi *= 2.0;
    hi *= 2.0;
  }
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = hfun(x1), f2 = hfun(x2);
  while (hi - lo > 1e-12 * hi) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = hfun(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = hfun(x2);
    }
  }
  res.lambda_star = 0.5 * (lo + hi);
  res.c_star = hfun(res.lambda_star);
  return res;
}

namespace {

struct Wave {
  UniformGrid grid;
  std::vector<double> w;  // deficit; w.back() = T
  std::vector<double> g;  // kernel mass to the right of 0, seen from each node
  std::vector<double> tw;
  double far_integral = 0.0;
};

Wave make_wave(const SampledKernel& kernel, double T, double L_w) {
  Wave wv;
  auto cells = static_cast<std::size_t>(std::ceil(L_w / kernel.h - 1e-9));
  cells = std::max<std::size_t>(cells, 4);
  double span = static_cast<double>(cells) * kernel.h;
  wv.grid = {-span, kernel.h, cells + 1};
  wv.w.assign(cells + 1, 0.0);
  wv.w.back() = T;
  wv.g.resize(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) wv.g[i] = kernel.cdf_tail(wv.grid.x(i));
  wv.tw = trapezoid_weights(cells + 1, kernel.h);
  wv.far_integral = kernel.tail_integral(span);
  return wv;
}

// Gauss-Seidel sweeps, right to left, on the upwind profile equation.
std::size_t relax(Wave& wv, Convolver& conv, double d, double alpha, double beta, double c,
                  double tol, std::size_t max_sweeps) {
  const double T = alpha / beta;
  const double h = wv.grid.h;
  const double omega = d + alpha + 1.0;
  const double denom = omega + c / h;
  const std::size_t n = wv.grid.size;
  std::vector<double> q(n), kw(n);
  for (std::size_t s = 1; s <= max_sweeps; ++s) {
    for (std::size_t i = 0; i < n; ++i) q[i] = wv.tw[i] * wv.w[i];
    conv.apply(q, kw);
    double change = 0.0;
    for (std::size_t k = n - 1; k-- > 0;) {
      double wi = wv.w[k];
      double f = -d * T * wv.g[k] - d * kw[k] + d * wi - c * (wv.w[k + 1] - wi) / h +
                 beta * wi * (T - wi);
      double next = wi - f / denom;
      next = std::clamp(next, 0.0, T);
      change = std::max(change, std::abs(next - wi));
      wv.w[k] = next;
    }
    if (change <= tol) return s;
  }
  fail(ErrorKind::NoConvergence, "semi-wave profile relaxation hit the sweep cap");
}

double front_integral(const Wave& wv, double T) {
  double s = 0.0;
  for (std::size_t i = 0; i < wv.grid.size; ++i) s += wv.tw[i] * (T - wv.w[i]) * wv.g[i];
  return s + T * wv.far_integral;
}

}  // namespace

SemiWaveResult solve_semiwave(double d, const SampledKernel& kernel, double alpha, double beta,
                              double mu, double L_w, double tol, const SemiWaveOptions& opts) {
  require(d > 0.0 && alpha > 0.0 && beta > 0.0, "d, alpha, beta must be positive");
  require(mu > 0.0, "mu must be positive");
  require(L_w > 0.0 && tol > 0.0, "L_w and tol must be positive");
  MomentReport m = moment_report(kernel.spec);
  if (!m.first_moment_finite)
    fail(ErrorKind::FatTailViolatesJ1, "kernel has infinite first moment: no semi-wave exists");

  const double T = alpha / beta;
  SemiWaveResult res;
  res.beta = beta;
  res.mu = mu;
  double hi = std::numeric_limits<double>::infinity();
  double c = 1.0;
  if (m.exp_abscissa > 0.0) {
    res.c_star = minimal_speed(d, kernel.spec, alpha).c_star;
    hi = res.c_star;
    // C* itself is where the profile equation degenerates; start inside
    c = 0.5 * res.c_star;
  }
  Convolver conv(kernel, ConvolutionMethod::parallel);
  const double inner = tol * 1e-3;

  double span = L_w;
  for (int extend = 0;; ++extend) {
    Wave wv = make_wave(kernel, T, span);
    double lo = 0.0, g_lo = -std::numeric_limits<double>::infinity();
    double up = hi, g_up = std::numeric_limits<double>::infinity();
    double prev_step = std::numeric_limits<double>::infinity();
    int slow = 0, side = 0;
    bool bracketing = false, done = false;
    for (std::size_t k = 1; k <= opts.max_outer; ++k) {
      res.sweeps += relax(wv, conv, d, alpha, beta, c, inner, opts.max_sweeps);
      double target = mu * front_integral(wv, T);
      double gval = c - target;
      res.outer_iterations = k;
      if (std::abs(gval) <= tol) {
        res.c_residual = std::abs(gval);
        done = true;
        break;
      }
      if (gval < 0.0) {
        lo = c;
        g_lo = gval;
      } else {
        up = c;
        g_up = gval;
      }
      double next;
      double picard = (1.0 - opts.rho) * c + opts.rho * target;
      double step = std::abs(picard - c);
      slow = step > 0.7 * prev_step ? slow + 1 : 0;
      prev_step = step;
      if (!bracketing && slow >= 3 && std::isfinite(up) && lo > 0.0) bracketing = true;
      if (bracketing) {
        // Illinois regula falsi on the increasing map c - μ I(c)
        double glo = g_lo, gup = g_up;
        if (side == -1) gup *= 0.5;
        if (side == 1) glo *= 0.5;
        next = (lo * gup - up * glo) / (gup - glo);
        side = gval < 0.0 ? -1 : 1;
        res.used_bracketing = true;
      } else {
        next = picard;
      }
      if (!(next > lo && next < up)) next = std::isfinite(up) ? 0.5 * (lo + up) : 2.0 * c;
      if (std::abs(next - c) < 1e-3 * tol) {
        // a bracket squeezed onto C* with c - μI still negative is not a root
        if (std::abs(gval) > 1e3 * tol)
          fail(ErrorKind::NoConvergence, "semi-wave speed bracket collapsed with residual " +
                                             std::to_string(std::abs(gval)));
        res.c_residual = std::abs(gval);
        done = true;
        break;
      }
      c = next;
    }
    if (!done) fail(ErrorKind::NoConvergence, "semi-wave speed iteration did not settle");

    const std::size_t n = wv.grid.size;
    if (opts.auto_extend && wv.w.front() > 0.01 * T && extend < 6) {
      span *= 2.0;
      continue;
    }
    res.c = c;
    res.grid = wv.grid;
    res.deficit = wv.w;
    res.profile.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.profile[i] = T - wv.w[i];
    res.profile.back() = 0.0;
    return res;
  }
}

SpeedBounds speed_bounds(const CoopParams& params, const SampledKernel& j1,
                         const SampledKernel& j2, double L_w, double tol) {
  params.validate();
  const CoopParams& p = params;
  struct Job {
    double d;
    const SampledKernel* k;
    double alpha, beta, mu;
  };
  const std::array<Job, 4> jobs = {{{p.d1, &j1, p.r1 * p.a, 2.0 * p.r1, p.mu1},
                                    {p.d1, &j1, p.r1 * p.a, p.r1, p.mu1},
                                    {p.d2, &j2, p.r2, 2.0 * p.r2, p.mu2},
                                    {p.d2, &j2, p.r2, p.r2, p.mu2}}};
  std::array<double, 4> c{};
  std::array<std::exception_ptr, 4> errors{};
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < 4; ++i) {
    try {
      const Job& j = jobs[static_cast<std::size_t>(i)];
      c[static_cast<std::size_t>(i)] = solve_semiwave(j.d, *j.k, j.alpha, j.beta, j.mu, L_w, tol).c;
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return {c[0], c[1], c[2], c[3]};
}

}  // namespace coop
