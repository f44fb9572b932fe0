#include "coopfront/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "coopfront/errors.hpp"
#include "coopfront/spectral.hpp"

namespace coop {

const char* to_string(Classification c) {
  switch (c) {
    case Classification::trivial: return "trivial";
    case Classification::semitrivial_u: return "semitrivial_u";
    case Classification::semitrivial_v: return "semitrivial_v";
    case Classification::coexistence: return "coexistence";
  }
  return "unknown";
}

double SteadyProfile::sup() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double SteadyProfile::inf() const {
  return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

double safe_damping(double d, double alpha, double k_max, double top) {
  return std::max(d + alpha + 1.0, d + 2.0 * k_max * top - alpha + 1.0);
}

namespace {

SampledKernel kernel_on(const SampledKernel& kernel, double h) {
  if (std::abs(kernel.h - h) <= 1e-12 * h) return kernel;
  return kernel.resampled(h);
}

void check_cancel(const SteadyOptions& opts) {
  if (opts.cancelled && opts.cancelled()) fail(ErrorKind::Cancelled, "steady solve cancelled");
}

void require_resolved(double l, double h) {
  if (l < 2.0 * h) fail(ErrorKind::GridTooCoarse, "interval shorter than two grid cells");
}

UniformGrid halfline_grid(double L, double h) {
  require(L > 0.0, "half-line truncation L must be positive");
  auto cells = static_cast<std::size_t>(std::ceil(L / h - 1e-9));
  return {0.0, h, std::max<std::size_t>(cells, 2) + 1};
}

SteadyProfile zero_profile(const UniformGrid& grid) {
  SteadyProfile p;
  p.grid = grid;
  p.values.assign(grid.size, 0.0);
  p.kind = ProfileKind::bounded_interval;
  p.positive = false;
  return p;
}

// Monotone iteration for d K_Ω u - d u + u(α - βu) = 0 on a closed grid.
SteadyProfile iterate_bounded(double d, const SampledKernel& kernel, double alpha, double beta,
                              const UniformGrid& grid, std::vector<double> u, double tol,
                              const SteadyOptions& opts) {
  const std::size_t n = grid.size;
  Convolver conv(kernel);
  std::vector<double> tw = trapezoid_weights(n, grid.h);
  std::vector<double> q(n), ku(n);
  const double omega = d + alpha + 1.0;
  SteadyProfile p;
  p.grid = grid;
  p.kind = ProfileKind::bounded_interval;
  p.tail_limit = alpha / beta;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    check_cancel(opts);
    for (std::size_t i = 0; i < n; ++i) q[i] = tw[i] * u[i];
    conv.apply(q, ku);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double f = d * ku[i] - d * u[i] + u[i] * (alpha - beta * u[i]);
      res = std::max(res, std::abs(f));
      u[i] += f / omega;
    }
    if (opts.observer) opts.observer(it, u, {});
    if (res <= tol) {
      p.values = std::move(u);
      p.iterations = it;
      p.increment = res / omega;
      p.positive = true;
      return p;
    }
  }
  fail(ErrorKind::NoConvergence, "bounded steady iteration hit the iteration cap");
}

// Deficit form of d K u - d u + u(α - k u) = 0 on [0, ∞) with u = T - w,
// T = α/k_inf, and w = 0 beyond the last node.
struct HalflineProblem {
  double d = 1.0;
  double alpha = 1.0;
  double tail = 1.0;
  std::vector<double> k;       // full weight at nodes
  std::vector<double> excess;  // k - k_inf at nodes
  std::vector<double> g0;      // kernel mass to the left of 0
};

std::vector<double> iterate_halfline(const HalflineProblem& pb, const SampledKernel& kernel,
                                     const UniformGrid& grid, std::vector<double> w, double tol,
                                     const SteadyOptions& opts, std::size_t& iterations,
                                     double& last_step) {
  const std::size_t n = grid.size;
  Convolver conv(kernel, ConvolutionMethod::parallel);
  std::vector<double> tw = trapezoid_weights(n, grid.h);
  std::vector<double> q(n), kw(n), values;
  const double T = pb.tail;
  const double omega = safe_damping(pb.d, pb.alpha, pb.k.front(), T);
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    check_cancel(opts);
    for (std::size_t i = 0; i < n; ++i) q[i] = tw[i] * w[i];
    conv.apply(q, kw);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double f = -pb.d * T * pb.g0[i] - pb.d * kw[i] + pb.d * w[i] +
                 (T - w[i]) * (pb.k[i] * w[i] - pb.excess[i] * T);
      res = std::max(res, std::abs(f));
      w[i] -= f / omega;
    }
    if (opts.observer) {
      values.resize(n);
      for (std::size_t i = 0; i < n; ++i) values[i] = T - w[i];
      opts.observer(it, values, {});
    }
    if (res <= tol) {
      iterations = it;
      last_step = res / omega;
      return w;
    }
  }
  fail(ErrorKind::NoConvergence, "half-line steady iteration hit the iteration cap");
}

HalflineProblem make_halfline(double d, const SampledKernel& kernel, double alpha, const Weight& k,
                              const UniformGrid& grid) {
  require(k.k_inf > 0.0, "weight limit k_inf must be positive");
  HalflineProblem pb;
  pb.d = d;
  pb.alpha = alpha;
  pb.tail = alpha / k.k_inf;
  pb.k.resize(grid.size);
  pb.excess.resize(grid.size);
  pb.g0.resize(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) {
    double x = grid.x(i);
    pb.excess[i] = k.excess_at(x);
    pb.k[i] = k.k_inf + pb.excess[i];
    pb.g0[i] = kernel.cdf_tail(x);
    if (pb.excess[i] < 0.0)
      fail(ErrorKind::WeightNotMonotone, "weight drops below its limit k_inf");
    if (i > 0 && pb.excess[i] > pb.excess[i - 1])
      fail(ErrorKind::WeightNotMonotone,
           "weight increases at x = " + std::to_string(x));
  }
  return pb;
}

SteadyProfile halfline_profile(const UniformGrid& grid, double T, std::vector<double> w,
                               std::size_t iterations, double step) {
  SteadyProfile p;
  p.grid = grid;
  p.kind = ProfileKind::truncated_halfline;
  p.tail_limit = T;
  p.values.resize(grid.size);
  for (std::size_t i = 0; i < grid.size; ++i) p.values[i] = T - w[i];
  p.deficit = std::move(w);
  p.positive = true;
  p.iterations = iterations;
  p.increment = step;
  return p;
}

double sup_diff_shared(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SteadyProfile solve_weighted(double d, const SampledKernel& kernel, double alpha, const Weight& k,
                             double L, double tol, const SteadyOptions& opts) {
  require(d > 0.0 && alpha > 0.0, "d and alpha must be positive");
  require(tol > 0.0, "tolerance must be positive");
  UniformGrid grid = halfline_grid(L, kernel.h);
  HalflineProblem pb = make_halfline(d, kernel, alpha, k, grid);
  const double T = pb.tail;

  std::vector<double> w0;
  if (opts.initial_deficit) {
    w0 = *opts.initial_deficit;
    require(w0.size() == grid.size, "initial deficit does not match the grid");
  } else if (opts.start == Start::upper) {
    w0.assign(grid.size, 0.0);
  } else if (pb.excess.front() > 0.0) {
    // lower solution: the constant-weight problem with k(0)
    SteadyOptions sub;
    sub.max_iter = opts.max_iter;
    sub.start = Start::upper;
    sub.check_doubling = false;
    sub.cancelled = opts.cancelled;
    SteadyProfile low = solve_weighted(d, kernel, alpha, Weight::constant(pb.k.front()), L, tol, sub);
    w0.resize(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) w0[i] = (T - low.tail_limit) + low.deficit[i];
  } else {
    // constant weight: ε times the principal eigenfunction on [0, L]
    EigenResult eig = principal_eigenvalue(d, kernel, alpha, grid.back());
    if (!(eig.lambda > 0.0))
      fail(ErrorKind::TruncationUnstable, "L too short: eigenvalue on [0, L] is not positive");
    const double beta = k.k_inf;
    double eps = std::min(0.1 * alpha / beta, 0.5 * eig.lambda / beta);
    w0.resize(grid.size);
    for (std::size_t i = 0; i < grid.size; ++i) w0[i] = T - eps * eig.eigenfunction[i];
  }

  std::size_t iterations = 0;
  double step = 0.0;
  std::vector<double> w = iterate_halfline(pb, kernel, grid, std::move(w0), tol, opts, iterations, step);
  SteadyProfile prof = halfline_profile(grid, T, std::move(w), iterations, step);

  if (opts.check_doubling) {
    SteadyOptions dbl;
    dbl.max_iter = opts.max_iter;
    dbl.start = Start::upper;
    dbl.check_doubling = false;
    dbl.cancelled = opts.cancelled;
    SteadyProfile wide = solve_weighted(d, kernel, alpha, k, 2.0 * grid.back(), tol, dbl);
    double moved = sup_diff_shared(prof.values, wide.values);
    if (moved > 10.0 * tol)
      fail(ErrorKind::TruncationUnstable,
           "doubling L moved the half-line solution by " + std::to_string(moved));
  }
  return prof;
}

}  // namespace

SteadyProfile scalar_steady_bounded(double d, const SampledKernel& kernel, double alpha,
                                    double beta, double l, double tol, const SteadyOptions& opts) {
  require(d > 0.0, "d must be positive");
  require(beta > 0.0 && l > 0.0, "beta and l must be positive");
  require(tol > 0.0, "tolerance must be positive");
  require_resolved(l, kernel.h);
  EigenResult eig = principal_eigenvalue(d, kernel, alpha, l);
  const UniformGrid& grid = eig.grid;
  if (eig.lambda <= 0.0) {
    SteadyProfile p = zero_profile(grid);
    p.tail_limit = alpha > 0.0 ? alpha / beta : 0.0;
    return p;
  }
  SampledKernel kh = kernel_on(kernel, grid.h);
  const std::size_t n = grid.size;
  std::vector<double> u(n);
  if (opts.start == Start::upper) {
    u.assign(n, alpha / beta);
  } else {
    // shrink ε until ε·φ passes the lower-solution test at every node
    Convolver conv(kh);
    std::vector<double> tw = trapezoid_weights(n, grid.h), q(n), kphi(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = tw[i] * eig.eigenfunction[i];
    conv.apply(q, kphi);
    double eps = std::min(0.1 * alpha / beta, 0.5 * eig.lambda / beta);
    for (int tries = 0; tries < 60; ++tries) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        double phi = eig.eigenfunction[i];
        double f = eps * (d * kphi[i] - d * phi + alpha * phi) - beta * eps * eps * phi * phi;
        ok = f >= 0.0;
      }
      if (ok) break;
      eps *= 0.5;
    }
    for (std::size_t i = 0; i < n; ++i) u[i] = eps * eig.eigenfunction[i];
  }
  return iterate_bounded(d, kh, alpha, beta, grid, std::move(u), tol, opts);
}

SteadyProfile scalar_steady_halfline(double d, const SampledKernel& kernel, double alpha,
                                     double beta, double L, double tol, SteadyOptions opts) {
  require(beta > 0.0, "beta must be positive");
  return solve_weighted(d, kernel, alpha, Weight::constant(beta), L, tol, opts);
}

SteadyProfile weighted_steady(double d, const SampledKernel& kernel, double alpha,
                              const Weight& k, double L, double tol, SteadyOptions opts) {
  return solve_weighted(d, kernel, alpha, k, L, tol, opts);
}

namespace {

struct SystemDamping {
  double w1, w2;
};

SystemDamping system_damping(const CoopParams& p, double us, double vs) {
  return {std::max(p.d1 + p.r1 * p.a + 1.0, p.d1 + p.r1 * (4.0 * us - p.a) + 1.0),
          std::max(p.d2 + p.r2 + 1.0, p.d2 + p.r2 * (4.0 * vs - 1.0) + 1.0)};
}

void require_same_spacing(const SampledKernel& j1, const SampledKernel& j2) {
  if (std::abs(j1.h - j2.h) > 1e-12 * j1.h)
    fail(ErrorKind::GridMismatch, "J1 and J2 are sampled on different spacings");
}

}  // namespace

SteadyPair system_steady_bounded(const CoopParams& params, const SampledKernel& j1,
                                 const SampledKernel& j2, double l, double tol,
                                 const SteadyOptions& opts) {
  params.validate();
  require(l > 0.0, "l must be positive");
  require_same_spacing(j1, j2);
  require_resolved(l, j1.h);
  const CoopParams& p = params;

  SteadyPair pair;
  pair.lambda_u = principal_eigenvalue(p.d1, j1, p.r1 * p.a, l).lambda;
  pair.lambda_v = principal_eigenvalue(p.d2, j2, p.r2, l).lambda;

  SteadyOptions sub;
  sub.max_iter = opts.max_iter;
  sub.cancelled = opts.cancelled;
  SteadyProfile th1 = scalar_steady_bounded(p.d1, j1, p.r1 * p.a, 2.0 * p.r1, l, tol, sub);
  SteadyProfile th2 = scalar_steady_bounded(p.d2, j2, p.r2, 2.0 * p.r2, l, tol, sub);
  const UniformGrid grid = th1.grid;
  const std::size_t n = grid.size;

  if (!th1.positive && !th2.positive) {
    pair.classification = Classification::trivial;
    pair.u = th1;
    pair.v = th2;
    return pair;
  }
  if (!th2.positive) {
    pair.classification = Classification::semitrivial_u;
    pair.u = th1;
    pair.v = th2;
    return pair;
  }
  if (!th1.positive) {
    pair.classification = Classification::semitrivial_v;
    pair.u = th1;
    pair.v = th2;
    return pair;
  }

  CoexistenceRoot root = coexistence_root(p);
  SystemDamping om = system_damping(p, root.u_star, root.v_star);
  std::vector<double> u, v;
  if (opts.start == Start::upper) {
    u.assign(n, root.u_star);
    v.assign(n, root.v_star);
  } else {
    u = th1.values;
    v = th2.values;
  }
  SampledKernel k1 = kernel_on(j1, grid.h), k2 = kernel_on(j2, grid.h);
  Convolver c1(k1), c2(k2);
  std::vector<double> tw = trapezoid_weights(n, grid.h);
  std::vector<double> q(n), ku(n), kv(n);
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    check_cancel(opts);
    for (std::size_t i = 0; i < n; ++i) q[i] = tw[i] * u[i];
    c1.apply(q, ku);
    for (std::size_t i = 0; i < n; ++i) q[i] = tw[i] * v[i];
    c2.apply(q, kv);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ReactionValue f = eval_reaction(p, u[i], v[i]);
      double g1 = p.d1 * ku[i] - p.d1 * u[i] + f.f1;
      double g2 = p.d2 * kv[i] - p.d2 * v[i] + f.f2;
      res = std::max({res, std::abs(g1), std::abs(g2)});
      u[i] += g1 / om.w1;
      v[i] += g2 / om.w2;
    }
    if (opts.observer) opts.observer(it, u, v);
    if (res <= tol) {
      pair.classification = Classification::coexistence;
      pair.u = th1;
      pair.v = th2;
      pair.u.values = std::move(u);
      pair.v.values = std::move(v);
      pair.u.tail_limit = root.u_star;
      pair.v.tail_limit = root.v_star;
      pair.u.iterations = pair.v.iterations = it;
      pair.u.increment = res / om.w1;
      pair.v.increment = res / om.w2;
      return pair;
    }
  }
  fail(ErrorKind::NoConvergence, "coexistence iteration hit the iteration cap");
}

namespace {

struct SystemHalflineState {
  std::vector<double> wu, wv;
  std::size_t iterations = 0;
  double step = 0.0;
};

SystemHalflineState iterate_system_halfline(const CoopParams& p, const SampledKernel& j1,
                                            const SampledKernel& j2, const UniformGrid& grid,
                                            double us, double vs, std::vector<double> wu,
                                            std::vector<double> wv, double tol,
                                            const SteadyOptions& opts) {
  const std::size_t n = grid.size;
  Convolver c1(j1, ConvolutionMethod::parallel), c2(j2, ConvolutionMethod::parallel);
  std::vector<double> tw = trapezoid_weights(n, grid.h);
  std::vector<double> g01(n), g02(n), q(n), k1w(n), k2w(n), vu, vv;
  for (std::size_t i = 0; i < n; ++i) {
    g01[i] = j1.cdf_tail(grid.x(i));
    g02[i] = j2.cdf_tail(grid.x(i));
  }
  SystemDamping om = system_damping(p, us, vs);
  const double ebs = 1.0 + p.b * vs, eqs = 1.0 + p.q * us;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    check_cancel(opts);
    for (std::size_t i = 0; i < n; ++i) q[i] = tw[i] * wu[i];
    c1.apply(q, k1w);
    for (std::size_t i = 0; i < n; ++i) q[i] = tw[i] * wv[i];
    c2.apply(q, k2w);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double u = us - wu[i], v = vs - wv[i];
      double eb = 1.0 + p.b * v, eq = 1.0 + p.q * u;
      // a - u - u/(1+bv) and 1 - v - v/(1+qu) rewritten in the deficits
      double h1 = wu[i] * (1.0 + 1.0 / eb) - p.b * us * wv[i] / (ebs * eb);
      double h2 = wv[i] * (1.0 + 1.0 / eq) - p.q * vs * wu[i] / (eqs * eq);
      double f1 = -p.d1 * us * g01[i] - p.d1 * k1w[i] + p.d1 * wu[i] + p.r1 * u * h1;
      double f2 = -p.d2 * vs * g02[i] - p.d2 * k2w[i] + p.d2 * wv[i] + p.r2 * v * h2;
      res = std::max({res, std::abs(f1), std::abs(f2)});
      wu[i] -= f1 / om.w1;
      wv[i] -= f2 / om.w2;
    }
    if (opts.observer) {
      vu.resize(n);
      vv.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        vu[i] = us - wu[i];
        vv[i] = vs - wv[i];
      }
      opts.observer(it, vu, vv);
    }
    if (res <= tol) {
      SystemHalflineState st;
      st.wu = std::move(wu);
      st.wv = std::move(wv);
      st.iterations = it;
      st.step = res / std::min(om.w1, om.w2);
      return st;
    }
  }
  fail(ErrorKind::NoConvergence, "half-line system iteration hit the iteration cap");
}

SteadyPair solve_system_halfline(const CoopParams& p, const SampledKernel& j1,
                                 const SampledKernel& j2, double L, double tol,
                                 const SteadyOptions& opts) {
  UniformGrid grid = halfline_grid(L, j1.h);
  CoexistenceRoot root = coexistence_root(p);
  const double us = root.u_star, vs = root.v_star;
  const std::size_t n = grid.size;
  std::vector<double> wu, wv;
  if (opts.start == Start::upper) {
    wu.assign(n, 0.0);
    wv.assign(n, 0.0);
  } else {
    SteadyOptions sub;
    sub.max_iter = opts.max_iter;
    sub.check_doubling = false;
    sub.cancelled = opts.cancelled;
    SteadyProfile t1 = scalar_steady_halfline(p.d1, j1, p.r1 * p.a, 2.0 * p.r1, L, tol, sub);
    SteadyProfile t2 = scalar_steady_halfline(p.d2, j2, p.r2, 2.0 * p.r2, L, tol, sub);
    wu.resize(n);
    wv.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      wu[i] = (us - t1.tail_limit) + t1.deficit[i];
      wv[i] = (vs - t2.tail_limit) + t2.deficit[i];
    }
  }
  SystemHalflineState st =
      iterate_system_halfline(p, j1, j2, grid, us, vs, std::move(wu), std::move(wv), tol, opts);
  SteadyPair pair;
  pair.classification = Classification::coexistence;
  pair.u = halfline_profile(grid, us, std::move(st.wu), st.iterations, st.step);
  pair.v = halfline_profile(grid, vs, std::move(st.wv), st.iterations, st.step);
  return pair;
}

}  // namespace

SteadyPair system_steady_halfline(const CoopParams& params, const SampledKernel& j1,
                                  const SampledKernel& j2, double L, double tol,
                                  SteadyOptions opts) {
  params.validate();
  require(tol > 0.0, "tolerance must be positive");
  require_same_spacing(j1, j2);
  SteadyPair pair = solve_system_halfline(params, j1, j2, L, tol, opts);
  if (opts.check_doubling) {
    SteadyOptions dbl;
    dbl.max_iter = opts.max_iter;
    dbl.start = Start::upper;
    dbl.cancelled = opts.cancelled;
    SteadyPair wide = solve_system_halfline(params, j1, j2, 2.0 * pair.u.extent(), tol, dbl);
    double moved = std::max(sup_diff_shared(pair.u.values, wide.u.values),
                            sup_diff_shared(pair.v.values, wide.v.values));
    if (moved > 10.0 * tol)
      fail(ErrorKind::TruncationUnstable,
           "doubling L moved the half-line pair by " + std::to_string(moved));
  }
  return pair;
}

Weight sandwich_weight(double r, double coupling, const SteadyProfile& w) {
  const double tail = w.tail_limit;
  const double k_inf = r * (1.0 + 1.0 / (1.0 + coupling * tail));
  auto deficit = std::make_shared<std::vector<double>>(w.deficit);
  auto values = std::make_shared<std::vector<double>>(w.values);
  const double h = w.grid.h;
  // r(1 + 1/(1+cW)) - r(1 + 1/(1+cW∞)) = r c (W∞ - W) / ((1+cW)(1+cW∞))
  auto excess = [=](double x) {
    double s = x / h;
    if (s < 0.0) s = 0.0;
    auto i = static_cast<std::size_t>(s);
    if (i + 1 >= deficit->size()) {
      if (i >= deficit->size()) return 0.0;
      s = static_cast<double>(i);
    }
    double t = s - static_cast<double>(i);
    double def = (*deficit)[i];
    double val = (*values)[i];
    if (t > 1e-9) {
      def = (1.0 - t) * def + t * (*deficit)[i + 1];
      val = (1.0 - t) * val + t * (*values)[i + 1];
    }
    return r * coupling * def / ((1.0 + coupling * val) * (1.0 + coupling * tail));
  };
  return {k_inf, excess};
}

SandwichSequence sandwich_iteration(const CoopParams& params, const SampledKernel& j1,
                                    const SampledKernel& j2, double L, std::size_t n_max,
                                    double tol) {
  params.validate();
  require_same_spacing(j1, j2);
  require(n_max >= 1, "n_max must be at least 1");
  const CoopParams& p = params;
  CoexistenceRoot root = coexistence_root(p);
  // inner solves run two orders tighter so increments are not solver noise
  const double inner = tol * 1e-2;

  SandwichSequence seq;
  SteadyOptions first;
  first.start = Start::upper;
  first.check_doubling = false;
  seq.U.push_back(scalar_steady_halfline(p.d1, j1, p.r1 * p.a, 2.0 * p.r1, L, inner, first));

  auto warm = [](const SteadyProfile& prev, double new_tail) {
    std::vector<double> w(prev.deficit.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (new_tail - prev.tail_limit) + prev.deficit[i];
    return w;
  };
  auto track_steps = [&](const SteadyProfile& a, const SteadyProfile& b) {
    double inc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      double step = (b.tail_limit - a.tail_limit) - (b.deficit[i] - a.deficit[i]);
      inc = std::max(inc, std::abs(step));
      seq.min_step = std::min(seq.min_step, step);
    }
    return inc;
  };
  auto check_box = [&](const SteadyProfile& prof, double top, const char* name) {
    if (prof.sup() > top + 1e-12)
      fail(ErrorKind::NoConvergence, std::string(name) + " exceeded its coexistence bound");
  };

  for (std::size_t n = 1; n <= n_max; ++n) {
    const SteadyProfile& Un = seq.U.back();
    Weight kv = sandwich_weight(p.r2, p.q, Un);
    SteadyOptions ov;
    ov.check_doubling = false;
    ov.start = Start::upper;
    if (!seq.V.empty()) ov.initial_deficit = warm(seq.V.back(), p.r2 / kv.k_inf);
    seq.V.push_back(weighted_steady(p.d2, j2, p.r2, kv, L, inner, ov));
    check_box(seq.V.back(), root.v_star, "V_n");
    if (seq.V.size() >= 2) seq.increment_v.push_back(track_steps(seq.V[seq.V.size() - 2], seq.V.back()));

    Weight ku = sandwich_weight(p.r1, p.b, seq.V.back());
    SteadyOptions ou;
    ou.check_doubling = false;
    ou.initial_deficit = warm(seq.U.back(), p.r1 * p.a / ku.k_inf);
    SteadyProfile next = weighted_steady(p.d1, j1, p.r1 * p.a, ku, L, inner, ou);
    check_box(next, root.u_star, "U_n");
    seq.increment_u.push_back(track_steps(seq.U.back(), next));
    seq.U.push_back(std::move(next));

    double inc_v = seq.increment_v.empty() ? std::numeric_limits<double>::infinity()
                                           : seq.increment_v.back();
    if (seq.increment_u.back() < tol && inc_v < tol) {
      seq.converged = true;
      break;
    }
  }
  return seq;
}

}  // namespace coop
