#pragma once

#include <vector>

#include "blaschke/core.hpp"
#include "blaschke/params.hpp"
#include "blaschke/polynomial.hpp"

namespace blaschke {

/// Unchecked evaluator for hot loops. Construct once per parameter set;
/// callers are responsible for having validated the parameters.
class MapEvaluator {
 public:
  explicit MapEvaluator(const MapParams& p)
      : family_(p.family), a_(p.a), abar_(std::conj(p.a)), lambda_(p.effective_lambda()),
        n_(p.n), d_(p.d) {}

  Complex operator()(Complex z) const noexcept {
    if (is_infinity(z)) return infinity();
    Complex r;
    if (family_ == Family::McMullen) {
      if (near_zero(z)) return infinity();
      r = ipow(z, n_) + lambda_ / ipow(z, d_);
    } else {
      const Complex den = 1.0 - abar_ * z;
      if (near_zero(den, std::abs(a_) * kPoleTolerance)) return infinity();
      const Complex z2 = z * z;
      r = z2 * z * (z - a_) / den;
      if (family_ == Family::PerturbedBlaschke) {
        if (near_zero(z)) return infinity();
        r += lambda_ / z2;
      }
    }
    return is_finite(r) ? r : infinity();
  }

  Complex derivative(Complex z) const noexcept {
    if (is_infinity(z)) return infinity();
    Complex r;
    if (family_ == Family::McMullen) {
      if (near_zero(z)) return infinity();
      r = static_cast<double>(n_) * ipow(z, n_ - 1) -
          static_cast<double>(d_) * lambda_ / ipow(z, d_ + 1);
    } else {
      const Complex den = 1.0 - abar_ * z;
      if (near_zero(den, std::abs(a_) * kPoleTolerance)) return infinity();
      const Complex z2 = z * z;
      const Complex z3 = z2 * z;
      const Complex num = (4.0 * z3 - 3.0 * a_ * z2) * den + abar_ * z3 * (z - a_);
      r = num / (den * den);
      if (family_ == Family::PerturbedBlaschke) {
        if (near_zero(z)) return infinity();
        r -= 2.0 * lambda_ / z3;
      }
    }
    return is_finite(r) ? r : infinity();
  }

 private:
  static bool near_zero(Complex z, double tol = kPoleTolerance) noexcept {
    return std::abs(z.real()) <= tol && std::abs(z.imag()) <= tol;
  }
  static Complex ipow(Complex z, int k) noexcept {
    Complex r{1.0, 0.0};
    for (int i = 0; i < k; ++i) r *= z;
    return r;
  }

  Family family_;
  Complex a_, abar_, lambda_;
  int n_, d_;
};

/// B_{a,lambda}(z), B_a(z) or Q_{lambda,n,d}(z) according to p.family.
/// Poles and z = infinity map to the infinity marker.
inline Complex eval_map(Complex z, const MapParams& p) {
  p.validate();
  return MapEvaluator(p)(z);
}

inline Complex eval_derivative(Complex z, const MapParams& p) {
  p.validate();
  return MapEvaluator(p).derivative(z);
}

// Numerators obtained by clearing denominators, in closed form.

/// Polynomial whose roots are the finite preimages of w.
inline std::vector<Complex> preimage_polynomial(Complex w, const MapParams& p) {
  const Complex a = p.a;
  const Complex ab = std::conj(a);
  const Complex l = p.effective_lambda();
  switch (p.family) {
    case Family::PerturbedBlaschke:
      // z^6 - a z^5 + conj(a) w z^3 - w z^2 - lambda conj(a) z + lambda
      return {1.0, -a, 0.0, ab * w, -w, -l * ab, l};
    case Family::UnperturbedBlaschke:
      // z^4 - a z^3 + conj(a) w z - w
      return {1.0, -a, 0.0, ab * w, -w};
    case Family::McMullen: {
      std::vector<Complex> c(static_cast<std::size_t>(p.n + p.d) + 1, Complex{});
      c[0] = 1.0;
      c[static_cast<std::size_t>(p.n)] = -w;
      c.back() += l;
      return c;
    }
  }
  return {};
}

/// Polynomial whose roots are the finite critical points other than the
/// pole at 0 (for the unperturbed family, 0 appears as a double root).
inline std::vector<Complex> critical_polynomial(const MapParams& p) {
  const Complex a = p.a;
  const Complex ab = std::conj(a);
  const Complex l = p.effective_lambda();
  const double s = std::norm(a);
  switch (p.family) {
    case Family::PerturbedBlaschke:
      // z^3 (1 - conj(a) z)^2 B'(z)
      return {-3.0 * ab, 4.0 + 2.0 * s, -3.0 * a, 0.0, 0.0, -2.0 * l * ab * ab, 4.0 * l * ab,
              -2.0 * l};
    case Family::UnperturbedBlaschke:
      return {-3.0 * ab, 4.0 + 2.0 * s, -3.0 * a, 0.0, 0.0};
    case Family::McMullen: {
      std::vector<Complex> c(static_cast<std::size_t>(p.n + p.d) + 1, Complex{});
      c[0] = static_cast<double>(p.n);
      c.back() = -static_cast<double>(p.d) * l;
      return c;
    }
  }
  return {};
}

inline std::vector<Complex> fixed_point_polynomial(const MapParams& p) {
  const Complex a = p.a;
  const Complex ab = std::conj(a);
  const Complex l = p.effective_lambda();
  switch (p.family) {
    case Family::PerturbedBlaschke:
      return {1.0, -a, ab, -1.0, 0.0, -l * ab, l};
    case Family::UnperturbedBlaschke:
      return {1.0, -a, ab, -1.0, 0.0};
    case Family::McMullen: {
      std::vector<Complex> c(static_cast<std::size_t>(p.n + p.d) + 1, Complex{});
      c[0] = 1.0;
      c[static_cast<std::size_t>(p.n - 1)] = -1.0;
      c.back() += l;
      return c;
    }
  }
  return {};
}

/// Closed-form free critical points of the unperturbed Blaschke product B_a.
struct FreeCriticalPoints {
  Complex c_plus;
  Complex c_minus;
};

inline FreeCriticalPoints unperturbed_critical_points(Complex a) {
  const double s = std::norm(a);
  const double root = std::sqrt((s - 4.0) * (s - 1.0));
  const Complex k = a / (3.0 * s);
  return {k * (2.0 + s + root), k * (2.0 + s - root)};
}

/// All preimages of w with multiplicity. For w = infinity the perturbed map
/// returns {0, 0, 1/conj(a), inf, inf, inf}.
inline RootSet preimages_of_point(Complex w, const MapParams& p) {
  p.validate();
  if (is_infinity(w)) {
    RootSet r;
    auto push = [&r](Complex z) {
      r.roots.push_back(z);
      r.residuals.push_back(0.0);
      r.converged.push_back(true);
    };
    const int degree = p.family == Family::McMullen ? p.n + p.d
                       : p.family == Family::PerturbedBlaschke ? 6 : 4;
    int finite = 0;
    if (p.family == Family::PerturbedBlaschke) {
      push({});
      push({});
      push(1.0 / std::conj(p.a));
      finite = 3;
    } else if (p.family == Family::UnperturbedBlaschke) {
      push(1.0 / std::conj(p.a));
      finite = 1;
    } else {
      for (int i = 0; i < p.d; ++i) push({});
      finite = p.d;
    }
    for (int i = finite; i < degree; ++i) push(infinity());
    r.sort();
    return r;
  }
  return polynomial_roots(preimage_polynomial(w, p));
}

struct NewtonTarget {
  enum class Kind { CriticalPoint, FixedPoint, PreimageOf };
  Kind kind = Kind::CriticalPoint;
  Complex w{};

  static NewtonTarget critical_point() { return {Kind::CriticalPoint, {}}; }
  static NewtonTarget fixed_point() { return {Kind::FixedPoint, {}}; }
  static NewtonTarget preimage_of(Complex w) { return {Kind::PreimageOf, w}; }
};

inline std::vector<Complex> target_polynomial(NewtonTarget t, const MapParams& p) {
  switch (t.kind) {
    case NewtonTarget::Kind::CriticalPoint: return critical_polynomial(p);
    case NewtonTarget::Kind::FixedPoint: return fixed_point_polynomial(p);
    case NewtonTarget::Kind::PreimageOf: return preimage_polynomial(t.w, p);
  }
  return {};
}

struct NewtonResult {
  Complex root;
  int iterations = 0;
  double residual = 0.0;
};

/// Newton refinement of a simple root of the target equation from `seed`.
/// Throws no_convergence after kMaxNewtonIterations or derivative_vanished.
inline NewtonResult newton_refine(Complex seed, NewtonTarget target, const MapParams& p) {
  p.validate();
  const std::vector<Complex> c = target_polynomial(target, p);
  const NewtonOutcome o = newton_polish(c, seed, kMaxNewtonIterations);
  if (o.derivative_vanished) throw Error(Errc::derivative_vanished, "newton step undefined");
  if (!o.converged)
    throw Error(Errc::no_convergence, "no convergence after " + std::to_string(o.iterations) +
                                          " iterations (residual " + std::to_string(o.residual) +
                                          ")");
  return {o.root, o.iterations, o.residual};
}

}  // namespace blaschke
