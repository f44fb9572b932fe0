#include "coopfront/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coopfront/errors.hpp"
#include "coopfront/spectral.hpp"

namespace coop {

const char* to_string(ProfileFamily f) {
  switch (f) {
    case ProfileFamily::zero: return "zero";
    case ProfileFamily::plateau: return "plateau";
    case ProfileFamily::triangular: return "triangular";
  }
  return "unknown";
}

ProfileFamily parse_profile_family(const std::string& name) {
  if (name == "zero") return ProfileFamily::zero;
  if (name == "plateau" || name == "constant-plateau") return ProfileFamily::plateau;
  if (name == "triangular" || name == "triangular-bump") return ProfileFamily::triangular;
  fail(ErrorKind::InvalidArgument, "unknown initial profile family '" + name + "'");
}

double InitialProfile::operator()(double x, double s0) const {
  if (x < 0.0 || x >= s0) return 0.0;
  switch (family) {
    case ProfileFamily::zero: return 0.0;
    case ProfileFamily::plateau: {
      double ramp = std::min(1.0, 0.5 * s0);
      return amplitude * std::min(1.0, (s0 - x) / ramp);
    }
    case ProfileFamily::triangular: return amplitude * (1.0 - x / s0);
  }
  return 0.0;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::spreading: return "spreading";
    case Verdict::vanishing: return "vanishing";
    case Verdict::undecided: return "undecided";
  }
  return "unknown";
}

std::size_t active_nodes(double s, double h) {
  if (s <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(s / h - 1e-9));
}

Box invariant_box(const CoopParams& p, double u0_max, double v0_max) {
  CoexistenceRoot root = coexistence_root(p);
  Box b{std::max(u0_max, root.u_star), std::max(v0_max, root.v_star)};
  // raise the corner until both reaction terms are nonpositive there
  for (int i = 0; i < 1000; ++i) {
    double ku = std::max(b.u, p.a * (1.0 + p.b * b.v) / (2.0 + p.b * b.v));
    double kv = std::max(b.v, (1.0 + p.q * ku) / (2.0 + p.q * ku));
    bool same = ku == b.u && kv == b.v;
    b = {ku, kv};
    if (same) break;
  }
  return b;
}

double lipschitz_bound(const CoopParams& p, const Box& box) {
  double du = p.r1 * std::max(p.a, 4.0 * box.u - p.a) + p.r1 * p.b * box.u * box.u;
  double dv = p.r2 * std::max(1.0, 4.0 * box.v - 1.0) + p.r2 * p.q * box.v * box.v;
  return std::max(du, dv);
}

double dt_max(const CoopParams& p, const Box& box) {
  return 0.5 / (std::max(p.d1, p.d2) + lipschitz_bound(p, box));
}

namespace {

double profile_sup(const InitialProfile& f) {
  return f.family == ProfileFamily::zero ? 0.0 : f.amplitude;
}

// Trapezoid weights for ∫_0^s with the field vanishing at the front s.
void front_weights(std::size_t m, double s, double h, std::vector<double>& w) {
  w.assign(m, h);
  if (m == 0) return;
  if (m == 1) {
    w[0] = 0.5 * s;
    return;
  }
  w[0] = 0.5 * h;
  double last = static_cast<double>(m - 1) * h;
  w[m - 1] = 0.5 * (h + (s - last));
}

double sup_of(const std::vector<double>& x, std::size_t m) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(m, x.size()); ++i) s = std::max(s, x[i]);
  return s;
}

double enforce_box(double x, double top, std::size_t& clamps) {
  if (x < -1e-12 || x > top + 1e-12)
    fail(ErrorKind::StabilityViolated,
         "field value " + std::to_string(x) + " left the invariant box [0, " + std::to_string(top) + "]");
  if (x < 0.0) {
    ++clamps;
    return 0.0;
  }
  if (x > top) {
    ++clamps;
    return top;
  }
  return x;
}

SampledKernel kernel_on(const SampledKernel& kernel, double h) {
  if (std::abs(kernel.h - h) <= 1e-12 * h) return kernel;
  return kernel.resampled(h);
}

}  // namespace

SimState initial_state(const CoopParams& p, double h, const InitialProfile& u0,
                       const InitialProfile& v0) {
  SimState s;
  s.h = h;
  s.s1 = p.s10;
  s.s2 = p.s20;
  std::size_t m1 = active_nodes(p.s10, h), m2 = active_nodes(p.s20, h);
  s.u.resize(m1 + 1, 0.0);
  s.v.resize(m2 + 1, 0.0);
  for (std::size_t j = 0; j < m1; ++j) s.u[j] = u0(static_cast<double>(j) * h, p.s10);
  for (std::size_t j = 0; j < m2; ++j) s.v[j] = v0(static_cast<double>(j) * h, p.s20);
  return s;
}

Stepper::Stepper(const CoopParams& params, const SampledKernel& j1, const SampledKernel& j2,
                 Box box)
    : p_(params), c1_(j1), c2_(j2), box_(box) {
  if (std::abs(j1.h - j2.h) > 1e-12 * j1.h)
    fail(ErrorKind::GridMismatch, "J1 and J2 are sampled on different spacings");
}

void Stepper::step(SimState& s, double dt) { advance(s, dt, false); }
void Stepper::step_fixed(SimState& s, double dt) { advance(s, dt, true); }

void Stepper::advance(SimState& s, double dt, bool fixed) {
  const double h = s.h;
  const SampledKernel& j1 = c1_.kernel();
  const SampledKernel& j2 = c2_.kernel();
  std::size_t m1, m2;
  if (fixed) {
    m1 = s.u.size();
    m2 = s.v.size();
    w1_ = trapezoid_weights(m1, h);
    w2_ = trapezoid_weights(m2, h);
  } else {
    m1 = std::min(active_nodes(s.s1, h), s.u.size());
    m2 = std::min(active_nodes(s.s2, h), s.v.size());
    front_weights(m1, s.s1, h, w1_);
    front_weights(m2, s.s2, h, w2_);
  }

  double flux1 = 0.0, flux2 = 0.0;
  q_.resize(m1);
  k1_.resize(m1);
  for (std::size_t j = 0; j < m1; ++j) q_[j] = w1_[j] * s.u[j];
  c1_.apply(q_, k1_);
  if (!fixed)
    for (std::size_t j = 0; j < m1; ++j)
      flux1 += q_[j] * j1.cdf_tail(s.s1 - static_cast<double>(j) * h);
  q_.resize(m2);
  k2_.resize(m2);
  for (std::size_t j = 0; j < m2; ++j) q_[j] = w2_[j] * s.v[j];
  c2_.apply(q_, k2_);
  if (!fixed)
    for (std::size_t j = 0; j < m2; ++j)
      flux2 += q_[j] * j2.cdf_tail(s.s2 - static_cast<double>(j) * h);

  // both updates read the old fields
  std::vector<double>& nu = w1_;
  std::vector<double>& nv = w2_;
  nu.resize(m1);
  nv.resize(m2);
  for (std::size_t i = 0; i < m1; ++i) {
    double u = s.u[i], v = i < m2 ? s.v[i] : 0.0;
    double f1 = p_.r1 * u * (p_.a - u - u / (1.0 + p_.b * v));
    nu[i] = u + dt * (p_.d1 * (k1_[i] - u) + f1);
  }
  for (std::size_t i = 0; i < m2; ++i) {
    double v = s.v[i], u = i < m1 ? s.u[i] : 0.0;
    double f2 = p_.r2 * v * (1.0 - v - v / (1.0 + p_.q * u));
    nv[i] = v + dt * (p_.d2 * (k2_[i] - v) + f2);
  }
  for (std::size_t i = 0; i < m1; ++i) s.u[i] = enforce_box(nu[i], box_.u, clamps_);
  for (std::size_t i = 0; i < m2; ++i) s.v[i] = enforce_box(nv[i], box_.v, clamps_);

  if (!fixed) {
    s.s1 += dt * p_.mu1 * flux1;
    s.s2 += dt * p_.mu2 * flux2;
    // newly covered nodes enter at 0; keep one spare node past each front
    std::size_t n1 = active_nodes(s.s1, h) + 1, n2 = active_nodes(s.s2, h) + 1;
    if (s.u.size() < n1) s.u.resize(n1, 0.0);
    if (s.v.size() < n2) s.v.resize(n2, 0.0);
  }
  s.t += dt;
}

SimState step(const SimState& state, const CoopParams& params, const SampledKernel& j1,
              const SampledKernel& j2, double dt) {
  params.validate();
  Box box = invariant_box(params, sup_of(state.u, state.u.size()), sup_of(state.v, state.v.size()));
  require(dt > 0.0, "dt must be positive");
  if (dt > dt_max(params, box) * (1.0 + 1e-12))
    fail(ErrorKind::InvalidArgument, "dt exceeds dt_max for the invariant box");
  Stepper st(params, j1, j2, box);
  SimState next = state;
  st.step(next, dt);
  return next;
}

std::vector<double> FrontHistory::ratio(int species) const {
  std::vector<double> r(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const HistorySample& s = samples[i];
    double front = species == 1 ? s.s1 : s.s2;
    r[i] = s.t > 0.0 ? front / s.t : std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

namespace {

HistorySample sample_of(const SimState& s) {
  return {s.t, s.s1, s.s2, sup_of(s.u, active_nodes(s.s1, s.h)), sup_of(s.v, active_nodes(s.s2, s.h))};
}

double front_at(const FrontHistory& h, double t, int species) {
  const auto& S = h.samples;
  auto val = [&](const HistorySample& x) { return species == 1 ? x.s1 : x.s2; };
  if (t <= S.front().t) return val(S.front());
  if (t >= S.back().t) return val(S.back());
  auto it = std::lower_bound(S.begin(), S.end(), t,
                             [](const HistorySample& x, double tt) { return x.t < tt; });
  const HistorySample& b = *it;
  const HistorySample& a = *(it - 1);
  double th = (t - a.t) / (b.t - a.t);
  return val(a) + th * (val(b) - val(a));
}

SpeciesOutcome classify_species(const FrontHistory& history, double front, double sup_final,
                                double d, const SampledKernel& kernel, double alpha,
                                int species, const ClassifyOptions& opts) {
  SpeciesOutcome o;
  o.front_final = front;
  o.sup_norm = sup_final;
  o.lambda_final = principal_eigenvalue(d, kernel, alpha, front).lambda;
  double t_end = history.samples.back().t, t0 = history.samples.front().t;
  double t_from = t_end - opts.stall_fraction * (t_end - t0);
  o.stall_gain = front - front_at(history, t_from, species);
  bool ever_alive = false;
  for (const auto& s : history.samples) ever_alive |= (species == 1 ? s.sup_u : s.sup_v) > 0.0;
  if (o.lambda_final >= 0.0 && ever_alive) {
    o.verdict = Verdict::spreading;
    o.note = "eigenvalue at the front is nonnegative";
  } else if (o.lambda_final < 0.0 && o.stall_gain < opts.stall_gain && o.sup_norm < opts.decay) {
    o.verdict = Verdict::vanishing;
    o.note = "heuristic: front stalled and sup-norm decayed with negative eigenvalue";
  } else {
    o.verdict = Verdict::undecided;
    o.note = ever_alive ? "evidence incomplete; extend T" : "species identically zero";
  }
  return o;
}

}  // namespace

Outcome classify(const FrontHistory& history, const SimState& final_state, const CoopParams& p,
                 const SampledKernel& j1, const SampledKernel& j2, const ClassifyOptions& opts) {
  require(!history.samples.empty(), "classify needs a nonempty history");
  Outcome out;
  double h = final_state.h;
  out.u = classify_species(history, final_state.s1, sup_of(final_state.u, active_nodes(final_state.s1, h)),
                           p.d1, j1, p.r1 * p.a, 1, opts);
  out.v = classify_species(history, final_state.s2, sup_of(final_state.v, active_nodes(final_state.s2, h)),
                           p.d2, j2, p.r2, 2, opts);
  return out;
}

SimulationResult simulate_free_boundary(const FreeBoundarySetup& setup) {
  const CoopParams& p = setup.params;
  p.validate();
  const RunControl& rc = setup.control;
  require(rc.T > 0.0, "horizon T must be positive");
  require(rc.sample_every > 0.0, "sample cadence must be positive");
  const double h = setup.j1.h;
  if (p.s10 < 2.0 * h || p.s20 < 2.0 * h)
    fail(ErrorKind::GridTooCoarse, "initial fronts must cover at least two grid cells");

  SimulationResult res;
  res.box = invariant_box(p, profile_sup(setup.u0), profile_sup(setup.v0));
  double limit = dt_max(p, res.box);
  double dt = rc.dt > 0.0 ? rc.dt : limit;
  if (dt > limit * (1.0 + 1e-12)) fail(ErrorKind::InvalidArgument, "dt exceeds dt_max for the invariant box");
  auto steps = static_cast<std::size_t>(std::ceil(rc.T / dt - 1e-9));
  dt = rc.T / static_cast<double>(steps);
  res.dt = dt;
  auto every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(rc.sample_every / dt)));

  Stepper st(p, setup.j1, setup.j2, res.box);
  SimState s = initial_state(p, h, setup.u0, setup.v0);
  std::vector<double> snaps = rc.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  auto take_snapshots = [&](std::size_t k) {
    while (next_snap < snaps.size() &&
           static_cast<double>(k) * dt >= snaps[next_snap] - 0.5 * dt) {
      Snapshot sn;
      sn.t = s.t;
      std::size_t n = std::max(s.u.size(), s.v.size());
      for (std::size_t i = 0; i < n; ++i) {
        sn.x.push_back(static_cast<double>(i) * h);
        sn.u.push_back(i < s.u.size() ? s.u[i] : 0.0);
        sn.v.push_back(i < s.v.size() ? s.v[i] : 0.0);
      }
      res.snapshots.push_back(std::move(sn));
      ++next_snap;
    }
  };
  res.history.samples.push_back(sample_of(s));
  take_snapshots(0);
  for (std::size_t k = 1; k <= steps; ++k) {
    if (rc.cancelled && rc.cancelled()) fail(ErrorKind::Cancelled, "simulation cancelled");
    st.step(s, dt);
    s.t = static_cast<double>(k) * dt;
    res.steps = k;
    take_snapshots(k);
    bool sample = k % every == 0 || k == steps;
    if (std::max(s.u.size(), s.v.size()) > rc.max_nodes) {
      res.truncated = true;
      res.history.samples.push_back(sample_of(s));
      break;
    }
    if (sample) {
      res.history.samples.push_back(sample_of(s));
      if (rc.stop && rc.stop(s)) {
        res.stopped_early = true;
        break;
      }
    }
  }
  res.clamps = st.clamps();
  res.outcome = classify(res.history, s, p, setup.j1, setup.j2);
  res.final_state = std::move(s);
  return res;
}

FixedDomainResult simulate_fixed_domain(const CoopParams& params, const SampledKernel& j1,
                                        const SampledKernel& j2, double l,
                                        const InitialProfile& u0, const InitialProfile& v0,
                                        double T, double dt) {
  params.validate();
  require(T > 0.0, "horizon T must be positive");
  if (l <= 2.0 * j1.h) fail(ErrorKind::GridTooCoarse, "interval shorter than two grid cells");
  UniformGrid grid = closed_grid(0.0, l, j1.h);
  SampledKernel k1 = kernel_on(j1, grid.h), k2 = kernel_on(j2, grid.h);

  FixedDomainResult res;
  Box box = invariant_box(params, profile_sup(u0), profile_sup(v0));
  double limit = dt_max(params, box);
  dt = dt > 0.0 ? std::min(dt, limit) : limit;
  auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  dt = T / static_cast<double>(steps);
  res.dt = dt;
  res.steps = steps;

  SimState s;
  s.h = grid.h;
  s.s1 = s.s2 = l;
  s.u.resize(grid.size);
  s.v.resize(grid.size);
  // the datum is positive on [0, l); evaluate with support slightly past l
  double support = l + grid.h;
  for (std::size_t i = 0; i < grid.size; ++i) {
    s.u[i] = u0(grid.x(i), support);
    s.v[i] = v0(grid.x(i), support);
  }
  Stepper st(params, k1, k2, box);
  for (std::size_t k = 1; k <= steps; ++k) st.step_fixed(s, dt);

  res.lambda_u = principal_eigenvalue(params.d1, j1, params.r1 * params.a, l).lambda;
  res.lambda_v = principal_eigenvalue(params.d2, j2, params.r2, l).lambda;
  bool pu = res.lambda_u > 0.0, pv = res.lambda_v > 0.0;
  res.classification = pu && pv ? Classification::coexistence
                       : pu     ? Classification::semitrivial_u
                       : pv     ? Classification::semitrivial_v
                                : Classification::trivial;
  for (SteadyProfile* prof : {&res.u, &res.v}) {
    prof->grid = grid;
    prof->kind = ProfileKind::bounded_interval;
  }
  res.u.values = std::move(s.u);
  res.v.values = std::move(s.v);
  res.u.positive = res.u.inf() > 0.0;
  res.v.positive = res.v.inf() > 0.0;
  return res;
}

PrescribedFrontResult simulate_prescribed_front(double d, const SampledKernel& kernel,
                                                double alpha, const Weight& k,
                                                const std::function<double(double)>& front,
                                                const InitialProfile& init, double T, double dt) {
  require(d > 0.0 && alpha > 0.0 && T > 0.0, "d, alpha, T must be positive");
  require(k.k_inf > 0.0, "weight limit must be positive");
  const double h = kernel.h;
  double s0 = front(0.0);
  require(s0 > 0.0, "prescribed front must start positive");

  double top = std::max(profile_sup(init), alpha / k.k_inf);
  double k0 = k(0.0);
  double lip = std::max(alpha, 2.0 * k0 * top - alpha);
  double limit = 0.5 / (d + lip);
  dt = dt > 0.0 ? std::min(dt, limit) : limit;
  auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
  dt = T / static_cast<double>(steps);

  PrescribedFrontResult res;
  res.dt = dt;
  std::vector<double> u(active_nodes(s0, h) + 1, 0.0), w, q, ku, kx;
  for (std::size_t j = 0; j + 1 < u.size(); ++j) u[j] = init(static_cast<double>(j) * h, s0);
  Convolver conv(kernel);
  double s = s0;
  res.history.samples.push_back({0.0, s, 0.0, sup_of(u, u.size()), 0.0});
  for (std::size_t n = 1; n <= steps; ++n) {
    std::size_t m = std::min(active_nodes(s, h), u.size());
    front_weights(m, s, h, w);
    q.resize(m);
    ku.resize(m);
    for (std::size_t j = 0; j < m; ++j) q[j] = w[j] * u[j];
    conv.apply(q, ku);
    if (kx.size() < m)
      for (std::size_t j = kx.size(); j < m; ++j) kx.push_back(k(static_cast<double>(j) * h));
    for (std::size_t i = 0; i < m; ++i) {
      double x = u[i];
      double next = x + dt * (d * (ku[i] - x) + x * (alpha - kx[i] * x));
      u[i] = std::clamp(next, 0.0, top);
    }
    double t = static_cast<double>(n) * dt;
    double sn = front(t);
    if (!(sn > s)) fail(ErrorKind::InvalidArgument, "prescribed front must be strictly increasing");
    s = sn;
    std::size_t need = active_nodes(s, h) + 1;
    if (u.size() < need) u.resize(need, 0.0);
    res.history.samples.push_back({t, s, 0.0, sup_of(u, active_nodes(s, h)), 0.0});
  }
  res.front = s;
  u.resize(active_nodes(s, h));
  res.grid = {0.0, h, u.size()};
  res.u = std::move(u);
  return res;
}

SpeedEstimate estimate_speed(const FrontHistory& history, double window, int species) {
  if (history.size() < 10) fail(ErrorKind::InsufficientHistory, "speed estimate needs at least 10 samples");
  require(window > 0.0 && window < 1.0, "window must lie in (0, 1)");
  require(species == 1 || species == 2, "species must be 1 or 2");
  const auto& S = history.samples;
  double t0 = S.front().t, t1 = S.back().t;
  double from = t1 - window * (t1 - t0);
  double st = 0.0, ss = 0.0, stt = 0.0, sts = 0.0;
  std::size_t n = 0;
  for (const auto& x : S) {
    if (x.t < from) continue;
    double y = species == 1 ? x.s1 : x.s2;
    st += x.t;
    ss += y;
    stt += x.t * x.t;
    sts += x.t * y;
    ++n;
  }
  if (n < 2) fail(ErrorKind::InsufficientHistory, "trailing window holds fewer than two samples");
  double nn = static_cast<double>(n);
  SpeedEstimate est;
  est.speed = (nn * sts - st * ss) / (nn * stt - st * st);
  double T = t1;
  double a = front_at(history, 0.25 * T, species), b = front_at(history, 0.5 * T, species);
  double c = front_at(history, T, species);
  est.early_rate = (b - a) / (0.25 * T);
  est.late_rate = (c - b) / (0.5 * T);
  est.accelerated = est.early_rate > 0.0 && est.late_rate >= 1.2 * est.early_rate;
  return est;
}

namespace {

struct SpeciesView {
  double d, alpha, s0;
  const SampledKernel* kernel;
};

SpeciesView view(const FreeBoundarySetup& setup, Species sp) {
  const CoopParams& p = setup.params;
  if (sp == Species::u) return {p.d1, p.r1 * p.a, p.s10, &setup.j1};
  return {p.d2, p.r2, p.s20, &setup.j2};
}

}  // namespace

Verdict mu_verdict(const FreeBoundarySetup& setup, Species species, double mu,
                   const CriticalMuOptions& opts, double ell) {
  FreeBoundarySetup run = setup;
  (species == Species::u ? run.params.mu1 : run.params.mu2) = mu;
  SpeciesView sv = view(run, species);
  if (ell > 0.0) {
    // spreading is certain once the front passes the threshold length
    run.control.stop = [sv, ell, species](const SimState& s) {
      double front = species == Species::u ? s.s1 : s.s2;
      return front >= ell && principal_eigenvalue(sv.d, *sv.kernel, sv.alpha, front).lambda >= 0.0;
    };
  }
  for (int k = 0; k <= opts.horizon_doublings; ++k) {
    SimulationResult r = simulate_free_boundary(run);
    Outcome o = classify(r.history, r.final_state, run.params, run.j1, run.j2, opts.classify);
    Verdict v = species == Species::u ? o.u.verdict : o.v.verdict;
    if (v != Verdict::undecided) return v;
    run.control.T *= 2.0;
  }
  return Verdict::undecided;
}

CriticalMu critical_mu(const FreeBoundarySetup& setup, Species species,
                       std::pair<double, double> bracket, const CriticalMuOptions& opts) {
  setup.params.validate();
  SpeciesView sv = view(setup, species);
  if (sv.alpha >= sv.d)
    fail(ErrorKind::NoRegime, "growth rate is not below the diffusion rate: spreading always happens");
  ThresholdResult th = threshold_length(sv.d, *sv.kernel, sv.alpha, 1e-6);
  if (sv.s0 >= th.ell)
    fail(ErrorKind::NoRegime, "initial front already exceeds the threshold length");
  require(bracket.first > 0.0 && bracket.second > bracket.first, "bracket must satisfy 0 < lo < hi");
  require(opts.tol > 0.0, "tolerance must be positive");

  CriticalMu res;
  res.ell = th.bracket.second;
  res.tolerance = opts.tol;
  auto verdict = [&](double mu) {
    ++res.simulations;
    Verdict v = mu_verdict(setup, species, mu, opts, res.ell);
    if (v == Verdict::undecided)
      fail(ErrorKind::UndecidedAtMidpoint, "verdict undecided at mu = " + std::to_string(mu));
    return v;
  };
  double lo = bracket.first, hi = bracket.second;
  if (verdict(lo) != Verdict::vanishing || verdict(hi) != Verdict::spreading)
    fail(ErrorKind::InvalidArgument, "bracket ends must give vanishing (low) and spreading (high)");
  while (hi - lo > opts.tol * 0.5 * (lo + hi)) {
    double mid = 0.5 * (lo + hi);
    (verdict(mid) == Verdict::spreading ? hi : lo) = mid;
  }
  res.bracket = {lo, hi};
  res.verdicts = {Verdict::vanishing, Verdict::spreading};
  res.mu_star = 0.5 * (lo + hi);
  return res;
}

}  // namespace coop
