#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "blaschke/core.hpp"

namespace blaschke {

// Coefficient vectors throughout the library are in DESCENDING degree order:
// c[0] z^n + c[1] z^(n-1) + ... + c[n].

/// Residual acceptance threshold, relative to max(1, sum |c_k| |z|^k).
inline constexpr double kRootTolerance = 1e-12;
inline constexpr int kMaxNewtonIterations = 50;
inline constexpr int kMaxPolynomialDegree = 16;

struct PolyValue {
  Complex value;
  Complex derivative;
  double scale;  // sum |c_k| |z|^k, the rounding-error yardstick for |value|
};

inline PolyValue horner(std::span<const Complex> c, Complex z) noexcept {
  Complex p{};
  Complex dp{};
  double s = 0.0;
  const double az = std::abs(z);
  for (const Complex& ck : c) {
    dp = dp * z + p;
    p = p * z + ck;
    s = s * az + std::abs(ck);
  }
  return {p, dp, s};
}

struct RootSet {
  std::vector<Complex> roots;
  std::vector<double> residuals;  // |p(root)|
  std::vector<bool> converged;

  std::size_t size() const noexcept { return roots.size(); }
  bool all_converged() const noexcept {
    return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
  }
  double max_residual() const noexcept {
    double m = 0.0;
    for (double r : residuals) m = std::max(m, r);
    return m;
  }
  /// Sorts roots lexicographically by (re, im), keeping the parallel arrays aligned.
  void sort() {
    std::vector<std::size_t> idx(roots.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t i, std::size_t j) { return lex_less(roots[i], roots[j]); });
    RootSet out;
    for (std::size_t i : idx) {
      out.roots.push_back(roots[i]);
      out.residuals.push_back(residuals[i]);
      out.converged.push_back(converged[i]);
    }
    *this = std::move(out);
  }
};

struct NewtonOutcome {
  Complex root;
  int iterations = 0;
  double residual = 0.0;
  double scale = 0.0;
  bool converged = false;
  bool derivative_vanished = false;
};

/// Plain Newton on a polynomial. Stops when the residual reaches rounding
/// level or the step drops below a few ulps of |z|; `converged` additionally
/// requires |p(z)| <= kRootTolerance * max(1, scale).
inline NewtonOutcome newton_polish(std::span<const Complex> c, Complex z,
                                   int max_iter = kMaxNewtonIterations) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  NewtonOutcome out;
  bool stopped = false;
  for (int it = 0; it < max_iter; ++it) {
    const PolyValue v = horner(c, z);
    if (std::abs(v.value) <= 2.0 * eps * v.scale) {
      stopped = true;
      break;
    }
    if (v.derivative == Complex{}) {
      out.derivative_vanished = true;
      break;
    }
    const Complex step = v.value / v.derivative;
    z -= step;
    out.iterations = it + 1;
    if (!is_finite(z)) break;
    if (std::abs(step) <= 4.0 * eps * std::max(std::abs(z), std::numeric_limits<double>::min())) {
      stopped = true;
      break;
    }
  }
  const PolyValue v = horner(c, z);
  out.root = z;
  out.residual = std::abs(v.value);
  out.scale = v.scale;
  out.converged = stopped && is_finite(z) && out.residual <= kRootTolerance * std::max(1.0, v.scale);
  return out;
}

namespace detail {

inline std::vector<Complex> trim_leading_zeros(std::span<const Complex> coeffs) {
  std::size_t first = 0;
  while (first < coeffs.size() && coeffs[first] == Complex{}) ++first;
  return {coeffs.begin() + static_cast<std::ptrdiff_t>(first), coeffs.end()};
}

}  // namespace detail

/// All complex roots of a polynomial (descending coefficients) by
/// Aberth-Ehrlich simultaneous iteration followed by Newton polishing.
/// Exact zero roots are deflated first. Result sorted by (re, im).
inline RootSet polynomial_roots(std::span<const Complex> coeffs) {
  if (coeffs.empty() || coeffs.front() == Complex{})
    throw Error(Errc::invalid_params, "coeffs: leading coefficient must be nonzero");
  for (const Complex& c : coeffs)
    if (!is_finite(c)) throw Error(Errc::invalid_params, "coeffs: not finite");
  const std::size_t degree = coeffs.size() - 1;
  if (degree > static_cast<std::size_t>(kMaxPolynomialDegree))
    throw Error(Errc::invalid_params, "coeffs: degree exceeds 16");

  RootSet out;
  std::vector<Complex> c(coeffs.begin(), coeffs.end());
  while (c.size() > 1 && c.back() == Complex{}) {
    c.pop_back();
    out.roots.push_back(Complex{});
    out.residuals.push_back(0.0);
    out.converged.push_back(true);
  }
  const std::size_t n = c.size() - 1;
  if (n > 0) {
    const Complex lead = c.front();
    for (Complex& ck : c) ck /= lead;

    // Starting circle at the geometric mean of the root moduli, angles offset
    // so no start sits on the real axis.
    const double r0 = std::max(std::pow(std::abs(c.back()), 1.0 / static_cast<double>(n)), 1e-3);
    std::vector<Complex> z(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
      z[k] = std::polar(r0, t);
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::vector<bool> done(n, false);
    for (int sweep = 0; sweep < 500; ++sweep) {
      bool all_done = true;
      for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        const PolyValue v = horner(c, z[i]);
        if (std::abs(v.value) <= 2.0 * eps * v.scale) {
          done[i] = true;
          continue;
        }
        const Complex ratio = v.value / v.derivative;
        Complex repulsion{};
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) repulsion += 1.0 / (z[i] - z[j]);
        const Complex w = ratio / (1.0 - ratio * repulsion);
        z[i] -= w;
        if (!is_finite(z[i])) z[i] = std::polar(r0 * 1.1, 0.7 + static_cast<double>(i));
        if (std::abs(w) <= 4.0 * eps * std::abs(z[i])) done[i] = true;
        else all_done = false;
      }
      if (all_done) break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const NewtonOutcome r = newton_polish(c, z[i]);
      // Polishing can only help; keep the Aberth value if Newton wandered.
      const PolyValue before = horner(c, z[i]);
      const bool keep_polished = is_finite(r.root) && r.residual <= std::abs(before.value);
      const Complex root = keep_polished ? r.root : z[i];
      const PolyValue fin = horner(coeffs, root);
      out.roots.push_back(root);
      out.residuals.push_back(std::abs(fin.value));
      out.converged.push_back(std::abs(fin.value) <= kRootTolerance * std::max(1.0, fin.scale));
    }
  }
  out.sort();
  return out;
}

inline RootSet polynomial_roots(const std::vector<Complex>& coeffs) {
  return polynomial_roots(std::span<const Complex>(coeffs));
}

}  // namespace blaschke
