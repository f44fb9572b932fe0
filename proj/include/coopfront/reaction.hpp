#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace coop {

struct CoopParams {
  double d1 = 1.0, d2 = 1.0;
  double r1 = 1.0, r2 = 1.0;
  double a = 1.0, b = 1.0, q = 1.0;
  double mu1 = 1.0, mu2 = 1.0;
  double s10 = 1.0, s20 = 1.0;
  // allows b = 0 and q = 0 for decoupled baselines
  bool test_mode = false;

  void validate() const;
};

struct ReactionValue {
  double f1 = 0.0;
  double f2 = 0.0;
};

// f1 = r1 u (a - u - u/(1+bv)), f2 = r2 v (1 - v - v/(1+qu)).
inline ReactionValue eval_reaction(const CoopParams& p, double u, double v) {
  return {p.r1 * u * (p.a - u - u / (1.0 + p.b * v)),
          p.r2 * v * (1.0 - v - v / (1.0 + p.q * u))};
}

struct CoexistenceRoot {
  double u_star = 0.0;
  double v_star = 0.0;
  double residual_f1 = 0.0;
  double residual_f2 = 0.0;
  std::size_t iterations = 0;
  // fixed-point iterates before the Newton polish, starting at (a/2, 1/2)
  std::vector<std::pair<double, double>> trace;
};

CoexistenceRoot coexistence_root(const CoopParams& params, bool keep_trace = false);

}  // namespace coop
