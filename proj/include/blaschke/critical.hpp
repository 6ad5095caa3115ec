#pragma once

#include <array>
#include <vector>

#include "blaschke/map.hpp"

namespace blaschke {

inline constexpr double kCriticalResidualTolerance = 1e-10;

/// The ten critical points and six zeros of the perturbed map, each
/// obtained by Newton refinement from its asymptotic seed.
struct CriticalSet {
  Complex c_plus;
  Complex c_minus;
  std::array<Complex, 5> ring_criticals{};
  std::array<Complex, 5> zeros_ring{};
  Complex z0;
  Complex pole_finite;
  int origin_multiplicity = 1;
  int infinity_multiplicity = 2;

  // order: c_plus, c_minus, ring criticals (5), ring zeros (5), z0
  std::vector<double> residuals;

  int critical_count() const noexcept { return infinity_multiplicity + origin_multiplicity + 2 + 5; }
  int zero_count() const noexcept { return 1 + 5; }
  double max_residual() const noexcept {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, r);
    return m;
  }
};

/// Fifth roots of unity times w^(1/5) (principal branch), k = 0..4.
inline std::array<Complex, 5> fifth_roots(Complex w) {
  std::array<Complex, 5> out{};
  const double mod = std::pow(std::abs(w), 0.2);
  const double arg = std::arg(w) / 5.0;
  for (int k = 0; k < 5; ++k) out[static_cast<std::size_t>(k)] = std::polar(mod, arg + 2.0 * kPi * k / 5.0);
  return out;
}

/// Leading-order seeds xi (lambda/a)^(1/5) for the zeros near the origin.
inline std::array<Complex, 5> ring_zero_seeds(Complex a, Complex lambda) {
  return fifth_roots(lambda / a);
}

/// Leading-order seeds -xi (2 lambda / (3a))^(1/5) for the criticals near the origin.
inline std::array<Complex, 5> ring_critical_seeds(Complex a, Complex lambda) {
  auto s = fifth_roots(2.0 * lambda / (3.0 * a));
  for (Complex& z : s) z = -z;
  return s;
}

namespace detail {

/// Follows a simple root of the target from its lambda = 0 position to the
/// requested lambda, halving the step whenever Newton fails. A direct jump is
/// accepted only when it lands close to the start.
inline NewtonResult continue_in_lambda(Complex start, NewtonTarget target, const MapParams& p) {
  try {
    const NewtonResult r = newton_refine(start, target, p);
    if (std::abs(r.root - start) <= 0.1 * std::max(std::abs(start), 1e-3)) return r;
  } catch (const Error&) {
  }
  MapParams q = p;
  Complex z = start;
  double t = 0.0;
  double dt = 0.125;
  NewtonResult last{z, 0, 0.0};
  while (t < 1.0) {
    const double next = std::min(1.0, t + dt);
    q.lambda = p.lambda * next;
    try {
      last = newton_refine(z, target, q);
      z = last.root;
      t = next;
      dt *= 2.0;
    } catch (const Error&) {
      dt *= 0.5;
      if (dt < 1e-6) throw Error(Errc::no_convergence, "continuation stalled at t=" + std::to_string(t));
    }
  }
  return last;
}

inline void check_distinct(const std::vector<Complex>& pts, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double scale = std::max(std::abs(pts[i]), std::abs(pts[j]));
      if (std::abs(pts[i] - pts[j]) <= 1e-8 * scale)
        throw Error(Errc::seed_collision, names[i] + " and " + names[j] + " converged to one root");
    }
}

}  // namespace detail

/// Free critical point c_-(a, lambda) alone; the cheap path for parameter sweeps.
inline Complex critical_c_minus(const MapParams& p) {
  return detail::continue_in_lambda(unperturbed_critical_points(p.a).c_minus,
                                    NewtonTarget::critical_point(), p)
      .root;
}

inline CriticalSet critical_set(const MapParams& p) {
  if (p.family != Family::PerturbedBlaschke)
    throw Error(Errc::invalid_params, "family: critical_set needs the perturbed family");
  p.validate();
  CriticalSet cs;
  cs.pole_finite = 1.0 / std::conj(p.a);

  const auto free = unperturbed_critical_points(p.a);
  const auto cp = detail::continue_in_lambda(free.c_plus, NewtonTarget::critical_point(), p);
  const auto cm = detail::continue_in_lambda(free.c_minus, NewtonTarget::critical_point(), p);
  cs.c_plus = cp.root;
  cs.c_minus = cm.root;
  cs.residuals = {cp.residual, cm.residual};

  const auto crit_seeds = ring_critical_seeds(p.a, p.lambda);
  for (std::size_t k = 0; k < 5; ++k) {
    const auto r = newton_refine(crit_seeds[k], NewtonTarget::critical_point(), p);
    cs.ring_criticals[k] = r.root;
    cs.residuals.push_back(r.residual);
  }
  const auto zero_seeds = ring_zero_seeds(p.a, p.lambda);
  for (std::size_t k = 0; k < 5; ++k) {
    const auto r = newton_refine(zero_seeds[k], NewtonTarget::preimage_of(0.0), p);
    cs.zeros_ring[k] = r.root;
    cs.residuals.push_back(r.residual);
  }
  const auto z0 = detail::continue_in_lambda(p.a, NewtonTarget::preimage_of(0.0), p);
  cs.z0 = z0.root;
  cs.residuals.push_back(z0.residual);

  std::vector<Complex> crit{cs.c_plus, cs.c_minus};
  std::vector<std::string> crit_names{"c_plus", "c_minus"};
  std::vector<Complex> zeros{cs.z0};
  std::vector<std::string> zero_names{"z0"};
  for (std::size_t k = 0; k < 5; ++k) {
    crit.push_back(cs.ring_criticals[k]);
    crit_names.push_back("ring_critical[" + std::to_string(k) + "]");
    zeros.push_back(cs.zeros_ring[k]);
    zero_names.push_back("ring_zero[" + std::to_string(k) + "]");
  }
  detail::check_distinct(crit, crit_names);
  detail::check_distinct(zeros, zero_names);

  for (std::size_t i = 0; i < cs.residuals.size(); ++i)
    if (cs.residuals[i] > kCriticalResidualTolerance)
      throw Error(Errc::unconverged_root, "residual " + std::to_string(cs.residuals[i]) + " at index " +
                                              std::to_string(i));
  return cs;
}

}  // namespace blaschke
