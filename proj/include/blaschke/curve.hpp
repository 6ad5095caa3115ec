#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "blaschke/map.hpp"

namespace blaschke {

inline constexpr int kMinCurveSamples = 256;
inline constexpr int kMaxCurveSamples = 4096;

/// Winding number of a closed polyline about p.
inline int winding_number(const std::vector<Complex>& curve, Complex p) {
  double total = 0.0;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const Complex u = curve[k] - p;
    const Complex v = curve[(k + 1) % curve.size()] - p;
    total += std::arg(v / u);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

/// A closed sub-curve of the preimage covering the input curve `degree` times.
struct JordanLoop {
  std::vector<Complex> points;  // closed: last point connects to the first
  int degree = 0;
  int winding_origin = 0;
  bool surrounds_origin = false;
  double mean_modulus = 0.0;
};

/// A connected component of the preimage: one loop, or several loops
/// touching at a critical point.
struct PreimageComponent {
  std::vector<JordanLoop> loops;

  int degree() const {
    int d = 0;
    for (const auto& l : loops) d += l.degree;
    return d;
  }
  bool surrounds_origin() const {
    return std::any_of(loops.begin(), loops.end(), [](const JordanLoop& l) { return l.surrounds_origin; });
  }
  double mean_modulus() const {
    double m = 0.0;
    std::size_t n = 0;
    for (const auto& l : loops) {
      m += l.mean_modulus * static_cast<double>(l.points.size());
      n += l.points.size();
    }
    return n ? m / static_cast<double>(n) : 0.0;
  }
};

struct CurvePreimage {
  std::vector<PreimageComponent> components;  // by increasing mean modulus
  std::vector<Complex> pinch_points;
  int samples_used = 0;

  int total_degree() const {
    int d = 0;
    for (const auto& c : components) d += c.degree();
    return d;
  }
};

/// Closed curve sampled at n points: centre + radius e^{i (t + phase)}.
inline std::vector<Complex> circle_curve(Complex centre, double radius, int n, double phase = 0.0) {
  std::vector<Complex> c(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) c[static_cast<std::size_t>(k)] = centre + std::polar(radius, 2.0 * kPi * k / n + phase);
  return c;
}

namespace detail {

inline std::vector<Complex> densify(const std::vector<Complex>& c) {
  std::vector<Complex> out;
  out.reserve(2 * c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    out.push_back(c[k]);
    out.push_back(0.5 * (c[k] + c[(k + 1) % c.size()]));
  }
  return out;
}

/// Matches each previous root to its nearest new root. Fails unless every
/// best match beats the runner-up by a factor of 2 and the matching is a
/// permutation. Roots within pinch_tol of pinch_near are exempt from the
/// ratio test; they are paired jointly by least total distance, since at a
/// critical point both pairings trace the same set.
inline bool match_roots(const std::vector<Complex>& prev, const std::vector<Complex>& next,
                        std::vector<std::size_t>& perm, Complex pinch_near = infinity(), double pinch_tol = 0.0) {
  const std::size_t n = prev.size();
  perm.assign(n, 0);
  std::vector<bool> used(n, false);
  std::vector<std::size_t> deferred;
  for (std::size_t i = 0; i < n; ++i) {
    double best = 1e300, second = 1e300;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = std::abs(prev[i] - next[j]);
      if (d < best) {
        second = best;
        best = d;
        arg = j;
      } else if (d < second) {
        second = d;
      }
    }
    if (second < 2.0 * best) {
      if (is_finite(pinch_near) && std::abs(prev[i] - pinch_near) <= pinch_tol) {
        deferred.push_back(i);
        continue;
      }
      return false;
    }
    if (used[arg]) return false;
    used[arg] = true;
    perm[i] = arg;
  }
  if (deferred.empty()) return true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < n; ++j)
    if (!used[j]) free.push_back(j);
  if (deferred.size() > 4) return false;
  std::vector<std::size_t> best_choice;
  double best_cost = 1e300;
  do {
    double cost = 0.0;
    for (std::size_t k = 0; k < deferred.size(); ++k) cost += std::abs(prev[deferred[k]] - next[free[k]]);
    if (cost < best_cost) {
      best_cost = cost;
      best_choice.assign(free.begin(), free.begin() + static_cast<std::ptrdiff_t>(deferred.size()));
    }
  } while (std::next_permutation(free.begin(), free.end()));
  for (std::size_t k = 0; k < deferred.size(); ++k) perm[deferred[k]] = best_choice[k];
  return true;
}

inline JordanLoop make_loop(std::vector<Complex> pts, int degree) {
  JordanLoop l;
  l.points = std::move(pts);
  l.degree = degree;
  l.winding_origin = winding_number(l.points, 0.0);
  l.surrounds_origin = l.winding_origin != 0;
  double m = 0.0;
  for (const Complex& z : l.points) m += std::abs(z);
  l.mean_modulus = m / static_cast<double>(l.points.size());
  return l;
}

/// Indices of the closest approach to p in each separate run of points within tol.
inline std::vector<std::size_t> pinch_visits(const std::vector<Complex>& pts, Complex p, double tol) {
  std::vector<std::size_t> out;
  const std::size_t n = pts.size();
  std::size_t start = 0;
  while (start < n && std::abs(pts[start] - p) <= tol) ++start;  // begin outside a run
  if (start == n) return out;
  bool in_run = false;
  std::size_t best = 0;
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t k = (start + s) % n;
    const bool near = std::abs(pts[k] - p) <= tol;
    if (near && (!in_run || std::abs(pts[k] - p) < std::abs(pts[best] - p))) best = k;
    if (!near && in_run) out.push_back(best);
    in_run = near;
  }
  if (in_run) out.push_back(best);
  return out;
}

}  // namespace detail

/// Full preimage of a closed curve avoiding the critical values, threaded
/// into closed components. Samples are doubled (up to 4096) while root
/// matching stays ambiguous; past that the call fails with continuation_break.
/// With pinch_tol > 0 the curve may pass through the critical value of a
/// critical point near pinch_near: threads are paired across it, threads
/// passing it twice are split into loops there, and loops meeting there form
/// one component.
inline CurvePreimage preimage_curve(std::vector<Complex> curve, const MapParams& p, Complex pinch_near = infinity(),
                                    double pinch_tol = 0.0) {
  if (curve.size() < static_cast<std::size_t>(kMinCurveSamples))
    throw Error(Errc::invalid_params, "curve: needs at least 256 samples");
  p.validate();
  for (;;) {
    const std::size_t n = curve.size();
    std::vector<std::vector<Complex>> roots(n);
    for (std::size_t k = 0; k < n; ++k) {
      const RootSet r = preimages_of_point(curve[k], p);
      if (!r.all_converged()) throw Error(Errc::unconverged_root, "curve sample " + std::to_string(k));
      roots[k] = r.roots;
    }
    const std::size_t deg = roots[0].size();
    // threads[t][k]: position at sample k of the thread starting at root t
    std::vector<std::vector<Complex>> threads(deg, std::vector<Complex>(n));
    std::vector<std::size_t> cur(deg);
    std::iota(cur.begin(), cur.end(), std::size_t{0});
    std::vector<std::size_t> perm;
    bool ok = true;
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t t = 0; t < deg; ++t) threads[t][k] = roots[k][cur[t]];
      std::vector<Complex> prev(deg);
      for (std::size_t t = 0; t < deg; ++t) prev[t] = roots[k][cur[t]];
      if (!detail::match_roots(prev, roots[(k + 1) % n], perm, pinch_near, pinch_tol)) {
        ok = false;
        break;
      }
      for (std::size_t t = 0; t < deg; ++t) cur[t] = perm[t];
    }
    if (!ok) {
      if (2 * n > static_cast<std::size_t>(kMaxCurveSamples))
        throw Error(Errc::continuation_break, "root matching ambiguous at 4096 samples");
      curve = detail::densify(curve);
      continue;
    }
    // After one lap thread t sits on the start root cur[t]; cycles of that
    // permutation are the closed threads.
    std::vector<JordanLoop> loops;
    std::vector<bool> seen(deg, false);
    const bool pinching = is_finite(pinch_near) && pinch_tol > 0.0;
    for (std::size_t t = 0; t < deg; ++t) {
      if (seen[t]) continue;
      std::vector<Complex> pts;
      int degree = 0;
      for (std::size_t s = t; !seen[s]; s = cur[s]) {
        seen[s] = true;
        pts.insert(pts.end(), threads[s].begin(), threads[s].end());
        ++degree;
      }
      const auto visits = pinching ? detail::pinch_visits(pts, pinch_near, pinch_tol) : std::vector<std::size_t>{};
      if (visits.size() == 2) {
        // split a thread through the pinch twice into its two loops
        const std::size_t i = std::min(visits[0], visits[1]), j = std::max(visits[0], visits[1]);
        std::vector<Complex> inner(pts.begin() + static_cast<std::ptrdiff_t>(i), pts.begin() + static_cast<std::ptrdiff_t>(j));
        std::vector<Complex> outer(pts.begin() + static_cast<std::ptrdiff_t>(j), pts.end());
        outer.insert(outer.end(), pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(i));
        const int d_inner = static_cast<int>(std::lround(static_cast<double>(inner.size()) / static_cast<double>(n)));
        loops.push_back(detail::make_loop(std::move(inner), d_inner));
        loops.push_back(detail::make_loop(std::move(outer), degree - d_inner));
      } else {
        loops.push_back(detail::make_loop(std::move(pts), degree));
      }
    }
    // Loops meeting at the pinch form one component.
    CurvePreimage out;
    out.samples_used = static_cast<int>(n);
    std::vector<std::size_t> at_pinch;
    for (std::size_t i = 0; i < loops.size(); ++i) {
      if (pinching && !detail::pinch_visits(loops[i].points, pinch_near, pinch_tol).empty()) {
        at_pinch.push_back(i);
        continue;
      }
      PreimageComponent c;
      c.loops.push_back(std::move(loops[i]));
      out.components.push_back(std::move(c));
    }
    if (at_pinch.size() == 1) {
      PreimageComponent c;
      c.loops.push_back(std::move(loops[at_pinch[0]]));
      out.components.push_back(std::move(c));
    } else if (at_pinch.size() > 1) {
      PreimageComponent c;
      for (std::size_t i : at_pinch) c.loops.push_back(std::move(loops[i]));
      // closest approach between the first two loops marks the pinch
      double best = 1e300;
      Complex where{};
      for (const Complex& u : c.loops[0].points)
        if (std::abs(u - pinch_near) <= pinch_tol)
          for (const Complex& v : c.loops[1].points)
            if (std::abs(u - v) < best) {
              best = std::abs(u - v);
              where = 0.5 * (u + v);
            }
      out.pinch_points.push_back(where);
      out.components.push_back(std::move(c));
    }
    std::stable_sort(out.components.begin(), out.components.end(),
                     [](const auto& x, const auto& y) { return x.mean_modulus() < y.mean_modulus(); });
    return out;
  }
}

}  // namespace blaschke
