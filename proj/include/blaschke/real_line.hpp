#pragma once

#include <vector>

#include "blaschke/critical.hpp"

namespace blaschke {

struct RealLineState {
  double a = 0.0;
  double lambda = 0.0;
  double x1 = 0.0;            // repelling fixed point, continuation of 1
  double c_minus_real = 0.0;
  double z0_real = 0.0;
  std::vector<double> backward_chain;  // z_{-1}, z_{-2}, ... increasing toward x1; may stop short of depth
};

/// Solves f(x) = target on [lo, hi] by bisection for increasing f.
/// Throws bracket_failure when the ends do not straddle the target.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi) {
  const double flo = f(lo) - target, fhi = f(hi) - target;
  if (!(flo < 0.0 && fhi > 0.0))
    throw Error(Errc::bracket_failure, "interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                           "] does not bracket " + std::to_string(target));
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) - target < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Real dynamics for real a in (0,1), lambda >= 0. lambda = 0 uses B_a.
inline RealLineState real_line_state(double a, double lambda, int depth) {
  if (!(a > 0.0 && a < 1.0)) throw Error(Errc::invalid_params, "a: must lie in (0, 1)");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(Errc::invalid_params, "lambda: must be real >= 0");
  if (depth < 0) throw Error(Errc::invalid_params, "depth: must be >= 0");
  const MapParams p = lambda == 0.0 ? MapParams::unperturbed(a) : MapParams::perturbed(a, lambda);
  const MapEvaluator f(p);
  RealLineState s;
  s.a = a;
  s.lambda = lambda;
  s.x1 = newton_refine(1.0, NewtonTarget::fixed_point(), p).root.real();
  s.c_minus_real =
      lambda == 0.0 ? unperturbed_critical_points(a).c_minus.real() : critical_c_minus(p).real();
  s.z0_real = lambda == 0.0 ? a : detail::continue_in_lambda(a, NewtonTarget::preimage_of(0.0), p).root.real();
  auto B = [&](double x) { return f(x).real(); };
  double target = s.z0_real;
  for (int n = 1; n <= depth; ++n) {
    // the chain converges geometrically; stop once it is at x1 to rounding
    if (s.x1 - target <= 1e-14 * s.x1) break;
    const double z = bisect_increasing(B, target, s.c_minus_real, s.x1);
    if (!(z > target))
      throw Error(Errc::bracket_failure, "backward chain stalled at step " + std::to_string(n));
    s.backward_chain.push_back(z);
    target = z;
  }
  return s;
}

}  // namespace blaschke
