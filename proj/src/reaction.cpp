#include "coopfront/reaction.hpp"

#include <cmath>

#include "coopfront/errors.hpp"

namespace coop {

void CoopParams::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  require(positive(d1) && positive(d2), "d1, d2 must be positive");
  require(positive(r1) && positive(r2), "r1, r2 must be positive");
  require(positive(a), "a must be positive");
  require(positive(mu1) && positive(mu2), "mu1, mu2 must be positive");
  require(positive(s10) && positive(s20), "initial fronts must be positive");
  if (test_mode)
    require(b >= 0.0 && q >= 0.0 && std::isfinite(b) && std::isfinite(q),
            "b, q must be nonnegative");
  else
    require(positive(b) && positive(q), "b, q must be positive (test_mode relaxes this)");
}

CoexistenceRoot coexistence_root(const CoopParams& p, bool keep_trace) {
  p.validate();
  CoexistenceRoot root;
  double u = 0.5 * p.a, v = 0.5;
  if (keep_trace) root.trace.emplace_back(u, v);
  const std::size_t cap = 100000;
  std::size_t it = 0;
  for (; it < cap; ++it) {
    double un = p.a * (1.0 + p.b * v) / (2.0 + p.b * v);
    double vn = (1.0 + p.q * u) / (2.0 + p.q * u);
    double step = std::max(std::abs(un - u), std::abs(vn - v));
    u = un;
    v = vn;
    if (keep_trace) root.trace.emplace_back(u, v);
    if (step <= 1e-15 * std::max(1.0, p.a)) break;
  }
  if (it == cap) fail(ErrorKind::NoConvergence, "coexistence fixed point did not settle");
  root.iterations = it + 1;

  // Newton on g1 = a - u - u/(1+bv), g2 = 1 - v - v/(1+qu)
  for (int k = 0; k < 3; ++k) {
    double eb = 1.0 + p.b * v, eq = 1.0 + p.q * u;
    double g1 = p.a - u - u / eb;
    double g2 = 1.0 - v - v / eq;
    double j11 = -1.0 - 1.0 / eb, j12 = u * p.b / (eb * eb);
    double j21 = v * p.q / (eq * eq), j22 = -1.0 - 1.0 / eq;
    double det = j11 * j22 - j12 * j21;
    if (det == 0.0) break;
    double du = (g1 * j22 - g2 * j12) / det;
    double dv = (j11 * g2 - j21 * g1) / det;
    u -= du;
    v -= dv;
  }
  root.u_star = u;
  root.v_star = v;
  ReactionValue f = eval_reaction(p, u, v);
  root.residual_f1 = std::abs(f.f1);
  root.residual_f2 = std::abs(f.f2);
  if (!(root.residual_f1 <= 1e-12 && root.residual_f2 <= 1e-12))
    fail(ErrorKind::NoConvergence, "coexistence root residual above 1e-12");
  return root;
}

}  // namespace coop
