#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "blaschke/critical.hpp"
#include "blaschke/orbit.hpp"

namespace blaschke {

/// Radii of the straight annulus (|lambda|/(2|a|))^(1/5) < |z| < (2|lambda|/|a|)^(1/5),
/// with its geometric-mean circle.
struct StraightAnnulus {
  double r_in = 0.0;
  double r_out = 0.0;
  double r_mid = 0.0;
};

inline StraightAnnulus straight_annulus(Complex a, Complex lambda) {
  const double q = std::abs(lambda) / std::abs(a);
  return {std::pow(q / 2.0, 0.2), std::pow(2.0 * q, 0.2), std::pow(q, 0.2)};
}

struct RegionOptions {
  double r_escape = kDefaultEscapeRadius;
  int max_iter = 300;
  int n_angles = 256;
  int annulus_radii = 16;   // straight-annulus check grid: radii x angles
  int annulus_angles = 64;
  int d0_angles = 64;
  // Light mode samples coarsely and skips the inner A0 bound and the T0
  // inradius. Enough to label orbits; used per parameter pixel.
  bool light = false;

  static RegionOptions light_mode() {
    RegionOptions o;
    o.light = true;
    o.n_angles = 16;
    o.annulus_radii = 4;
    o.annulus_angles = 16;
    o.d0_angles = 16;
    return o;
  }
};

/// Measured locations of A*(inf), T0, A0 and D0 for one parameter pair.
/// Radial functions are sampled at angles 2 pi k / n.
struct StructuralRegions {
  Complex a;
  Complex lambda;
  double r_escape = kDefaultEscapeRadius;
  StraightAnnulus annulus;
  double t0_radius = 0.0;    // disk used as the T0 proxy
  double t0_inradius = 0.0;  // largest disk seen entirely inside T0
  std::vector<double> astar_boundary;
  std::vector<double> a0_inner;
  std::vector<double> a0_outer;
  Complex d0_center;
  double d0_radius = 0.0;
  double final_threshold = 0.0;  // |z| splitting A0 (below) from D0 (above)
  bool light = false;

  static double angle(std::size_t k, std::size_t n) { return 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n); }

  double a0_outer_max() const { return a0_outer.empty() ? 0.0 : *std::max_element(a0_outer.begin(), a0_outer.end()); }
  double a0_inner_min() const { return a0_inner.empty() ? 0.0 : *std::min_element(a0_inner.begin(), a0_inner.end()); }
  double astar_min() const { return astar_boundary.empty() ? 0.0 : *std::min_element(astar_boundary.begin(), astar_boundary.end()); }
  double astar_max() const { return astar_boundary.empty() ? 0.0 : *std::max_element(astar_boundary.begin(), astar_boundary.end()); }
  double astar_mean() const {
    double s = 0.0;
    for (double r : astar_boundary) s += r;
    return astar_boundary.empty() ? 0.0 : s / static_cast<double>(astar_boundary.size());
  }
};

namespace detail {

/// Walks a ray geometrically from r (where pred holds) by `factor` until pred
/// fails or `limit` is passed, then bisects the last step. Returns `limit`
/// when pred never fails.
inline double march_boundary(const std::function<bool(double)>& pred, double r, double limit, double factor,
                             int bisections = 40) {
  const bool outward = factor > 1.0;
  for (;;) {
    double next = r * factor;
    if (outward ? next >= limit : next <= limit) {
      if (pred(limit)) return limit;
      next = limit;
    } else if (pred(next)) {
      r = next;
      continue;
    }
    double good = r, bad = next;
    for (int i = 0; i < bisections; ++i) {
      const double mid = std::sqrt(good * bad);
      if (pred(mid)) good = mid;
      else bad = mid;
    }
    return 0.5 * (good + bad);
  }
}

}  // namespace detail

/// Samples the structural regions and checks the conclusions the rest of the
/// library relies on. Throws precondition_failure naming the failed check.
inline StructuralRegions locate_regions(const MapParams& p, const RegionOptions& opt = {}) {
  if (p.family != Family::PerturbedBlaschke)
    throw Error(Errc::invalid_params, "family: regions need the perturbed family");
  p.validate();
  if (!(opt.r_escape > 1.0 / std::abs(p.a))) throw Error(Errc::invalid_params, "r_escape: must exceed 1/|a|");

  const MapEvaluator f(p);
  StructuralRegions R;
  R.a = p.a;
  R.lambda = p.lambda;
  R.r_escape = opt.r_escape;
  R.light = opt.light;
  R.annulus = straight_annulus(p.a, p.lambda);
  R.t0_radius = R.annulus.r_in;
  const StraightAnnulus& sa = R.annulus;

  auto entry = [&](Complex z) {
    const OrbitTrace t = trace_orbit(f, z, R.t0_radius, R.r_escape, opt.max_iter);
    return t.escaped ? t.last_disk_visit : -2;
  };

  for (int i = 0; i < opt.annulus_radii; ++i) {
    const double r = sa.r_in * std::pow(sa.r_out / sa.r_in, (i + 0.5) / opt.annulus_radii);
    for (int k = 0; k < opt.annulus_angles; ++k) {
      const Complex z = std::polar(r, 2.0 * kPi * (k + 0.25 * i) / opt.annulus_angles);
      if (entry(z) != 1)
        throw Error(Errc::precondition_failure,
                    "straight-annulus: point " + std::to_string(z.real()) + "+" + std::to_string(z.imag()) +
                        "i does not reach T0 in one step");
    }
  }

  const std::size_t n = static_cast<std::size_t>(opt.n_angles);
  R.a0_outer.resize(n);
  R.astar_boundary.resize(n);
  if (!opt.light) R.a0_inner.resize(n);
  double t0_in = sa.r_in;
  for (std::size_t k = 0; k < n; ++k) {
    const Complex u = std::polar(1.0, StructuralRegions::angle(k, n));
    auto in_a0 = [&](double r) { return entry(r * u) == 1; };
    auto not_direct = [&](double r) { return entry(r * u) != -1; };
    if (!opt.light) {
      R.astar_boundary[k] = detail::march_boundary(not_direct, sa.r_out, R.r_escape, 1.01);
      R.a0_outer[k] = detail::march_boundary(in_a0, sa.r_mid, R.astar_boundary[k], 1.01);
      R.a0_inner[k] = detail::march_boundary(in_a0, sa.r_mid, sa.r_in * 1e-3, 0.99);
      auto in_t0 = [&](double r) { return entry(r * u) == 0; };
      t0_in = std::min(t0_in, detail::march_boundary(in_t0, sa.r_in * 1e-4, sa.r_in, 1.05));
    } else {
      R.astar_boundary[k] = detail::march_boundary(not_direct, sa.r_out, R.r_escape, 1.03, 20);
      R.a0_outer[k] = detail::march_boundary(in_a0, sa.r_mid, R.astar_boundary[k], 1.03, 20);
    }
  }
  R.t0_inradius = opt.light ? 0.0 : t0_in;

  R.d0_center = detail::continue_in_lambda(p.a, NewtonTarget::preimage_of(0.0), p).root;
  const double z0_abs = std::abs(R.d0_center);
  for (int k = 0; k < opt.d0_angles; ++k) {
    const Complex u = std::polar(1.0, 2.0 * kPi * k / opt.d0_angles);
    auto in_d0 = [&](double r) { return entry(R.d0_center + r * u) == 1; };
    R.d0_radius = std::max(R.d0_radius, detail::march_boundary(in_d0, 1e-6 * z0_abs, z0_abs, 1.1, opt.light ? 20 : 40));
  }

  if (!(R.astar_min() > sa.r_out))
    throw Error(Errc::precondition_failure, "astar-outside-annulus: A* boundary reaches the straight annulus");
  for (std::size_t k = 0; k < n; ++k)
    if (!(R.a0_outer[k] < R.astar_boundary[k]))
      throw Error(Errc::precondition_failure, "a0-inside-astar: A0 reaches the A* boundary at angle index " +
                                                  std::to_string(k));
  const double gap_lo = R.a0_outer_max();
  const double gap_hi = z0_abs - R.d0_radius;
  if (!(gap_lo < gap_hi))
    throw Error(Errc::precondition_failure, "a0-d0-separation: A0 outer radius " + std::to_string(gap_lo) +
                                                " meets D0 at " + std::to_string(gap_hi));
  R.final_threshold = 0.5 * (gap_lo + gap_hi);
  return R;
}

}  // namespace blaschke
