#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "blaschke/components.hpp"
#include "blaschke/topology.hpp"

namespace blaschke {

// ---------------------------------------------------------------- r, s, t

struct ROptions {
  int resolution = 512;
  int max_iter = 2000;
  int max_n = 200;
};

namespace detail {

/// Words met by each of the 8 pixel rays from z on a virtual dynamical grid.
/// Only the ray pixels are classified; the labels equal those of a full render.
inline std::array<std::set<std::string>, 8> ray_words(const PlaneSpec& spec, const MapEvaluator& f,
                                                      const StructuralRegions& R, Complex z) {
  const auto px = spec.pixel_of(z);
  if (!px) throw Error(Errc::invalid_params, "z: outside the viewport");
  std::array<std::set<std::string>, 8> out;
  const int res = spec.resolution;
  for (std::size_t d = 0; d < 8; ++d) {
    auto [di, dj] = kN8[d];
    for (int i = px->first, j = px->second; i >= 0 && j >= 0 && i < res && j < res; i += di, j += dj)
      out[d].insert(classify_orbit(spec.pixel_center(i, j), f, R, spec.max_iter).word());
  }
  return out;
}

inline int r_from_rays(const std::array<std::set<std::string>, 8>& rays, int max_n, bool& inconclusive) {
  inconclusive = false;
  for (int n = 0; n <= max_n; ++n) {
    const std::string w = annulus_word(n);
    int hits = 0;
    for (const auto& s : rays) hits += s.count(w) ? 1 : 0;
    if (hits > 4) return n;
    if (hits == 4) {
      inconclusive = true;
      return n;
    }
  }
  return -1;
}

}  // namespace detail

/// Viewport centred at 0 covering the measured A* boundary with a margin.
inline PlaneSpec auto_viewport(const MapParams& p, const StructuralRegions& R, int resolution, int max_iter) {
  PlaneSpec s;
  s.params = p;
  s.width = 2.3 * std::max(1.0, R.astar_max());
  s.resolution = resolution;
  s.max_iter = max_iter;
  s.r_escape = R.r_escape;
  return s;
}

/// Smallest n with c_- inside Bdd(A_n), by the 8-ray vote. A 4-4 split
/// retries once at double resolution, then fails as inconclusive.
inline int compute_r(Complex a, Complex lambda, const ROptions& opt = {}) {
  const MapParams p = MapParams::perturbed(a, lambda);
  p.validate();
  const StructuralRegions R = locate_regions(p, RegionOptions::light_mode());
  const Complex cm = critical_c_minus(p);
  const MapEvaluator f(p);
  int res = opt.resolution;
  for (int attempt = 0; attempt < 2; ++attempt, res *= 2) {
    const PlaneSpec spec = auto_viewport(p, R, std::min(res, kMaxResolution), opt.max_iter);
    bool inconclusive = false;
    const int r = detail::r_from_rays(detail::ray_words(spec, f, R, cm), opt.max_n, inconclusive);
    if (!inconclusive) {
      if (r < 0) throw Error(Errc::not_found, "no A_n up to n=" + std::to_string(opt.max_n) + " surrounds c_-");
      return r;
    }
  }
  throw Error(Errc::inconclusive, "ray vote split 4-4 at doubled resolution");
}

struct RtsRecord {
  std::optional<int> s;
  std::optional<int> t;
  std::vector<std::pair<Complex, int>> circle;  // (lambda, r) on |lambda| = rho
  std::vector<std::pair<Complex, int>> disk;    // (lambda, r) on the radial grid, circle included
  int excluded = 0;
};

struct StOptions {
  int radii_per_octave = 4;
  double floor = 1e-7;  // smallest |lambda| of the radial grid; rho itself gives one circle
  ROptions r;
};

/// Memo of r values keyed by lambda, for reuse across nested grids.
using RCache = std::map<std::pair<double, double>, std::optional<int>>;

inline std::optional<int> cached_r(Complex a, Complex lambda, const ROptions& opt, RCache* cache) {
  const std::pair<double, double> key{lambda.real(), lambda.imag()};
  if (cache) {
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
  }
  std::optional<int> r;
  try {
    r = compute_r(a, lambda, opt);
  } catch (const Error&) {
  }
  if (cache) cache->emplace(key, r);
  return r;
}

/// s = max r on |lambda| = rho; t = min r on radii rho 2^{-j/k} down to the
/// floor. Radii for rho/2 are a subset of those for rho, so t never drops as
/// rho halves. Samples failing a structural check are excluded and counted.
inline RtsRecord compute_s_t(Complex a, double rho, int n_angles, const StOptions& opt = {}, RCache* cache = nullptr) {
  if (!(rho > 0.0)) throw Error(Errc::invalid_params, "rho: must be > 0");
  if (n_angles < 1) throw Error(Errc::invalid_params, "n_angles: must be >= 1");
  RtsRecord rec;
  for (int j = 0;; ++j) {
    const double radius = rho * std::pow(2.0, -static_cast<double>(j) / opt.radii_per_octave);
    if (j > 0 && radius < opt.floor * (1.0 - 1e-12)) break;
    for (int k = 0; k < n_angles; ++k) {
      const Complex lambda = std::polar(radius, 2.0 * kPi * k / n_angles);
      const auto r = cached_r(a, lambda, opt.r, cache);
      if (!r) {
        ++rec.excluded;
        continue;
      }
      rec.disk.push_back({lambda, *r});
      if (j == 0) rec.circle.push_back({lambda, *r});
      rec.t = rec.t ? std::min(*rec.t, *r) : *r;
      if (j == 0) rec.s = rec.s ? std::max(*rec.s, *r) : *r;
    }
  }
  return rec;
}

// ---------------------------------------------------------------- rings

struct Ring {
  std::string word;
  double rho_min = 0.0;
  double rho_max = 0.0;
  int samples = 0;
  bool surrounds_origin_checked = false;
  bool surrounds_origin = false;
};

struct RingReport {
  std::vector<Ring> rings;
  std::vector<double> radii;
  int n_angles = 0;
  std::vector<std::string> labels;  // radius-major
  bool low_confidence = false;
};

struct RingOptions {
  int max_iter = 2000;
  bool confirm = true;  // render one dynamical plane per ring to check c_-'s component surrounds 0
  int confirm_resolution = 512;
};

/// Whether c_-'s component surrounds 0 in a rendered dynamical plane.
inline bool c_minus_component_surrounds_origin(Complex a, Complex lambda, int resolution, int max_iter) {
  const MapParams p = MapParams::perturbed(a, lambda);
  const StructuralRegions R = locate_regions(p, RegionOptions::light_mode());
  PlaneSpec spec = auto_viewport(p, R, resolution, max_iter);
  const RasterGrid g = render_dynamical(spec, 1);
  const ComponentMap cm = label_components(g);
  const int id = component_at(g, cm, critical_c_minus(p));
  return id >= 0 && surrounds(g, cm, id, 0.0);
}

/// Polar lambda grid, radii rho_max (i+1)/n_radii. A ring is a 4-connected
/// set of equal A0-terminated labels (angles wrap) meeting every angle.
inline RingReport detect_rings(Complex a, double rho_max, int n_radii, int n_angles, const RingOptions& opt = {}) {
  if (!(rho_max > 0.0) || n_radii < 1 || n_angles < 1) throw Error(Errc::invalid_params, "grid: empty polar grid");
  RingReport rep;
  rep.n_angles = n_angles;
  rep.low_confidence = n_angles < 16;
  for (int i = 0; i < n_radii; ++i) rep.radii.push_back(rho_max * (i + 1) / n_radii);
  rep.labels.resize(static_cast<std::size_t>(n_radii) * n_angles);
  for (int i = 0; i < n_radii; ++i)
    for (int k = 0; k < n_angles; ++k) {
      const Complex lambda = std::polar(rep.radii[static_cast<std::size_t>(i)], 2.0 * kPi * k / n_angles);
      const auto f = critical_fate(a, lambda, opt.max_iter);
      rep.labels[static_cast<std::size_t>(i) * n_angles + k] = f ? f->word() : std::string(kFailedWord);
    }
  auto ring_label = [](const std::string& w) { return w.size() >= 2 && w.back() == 'A'; };
  std::vector<int> comp(rep.labels.size(), -1);
  int next = 0;
  for (std::size_t start = 0; start < rep.labels.size(); ++start) {
    if (comp[start] != -1 || !ring_label(rep.labels[start])) continue;
    const std::string& w = rep.labels[start];
    std::vector<std::size_t> stack{start};
    comp[start] = next;
    std::vector<bool> angle_hit(static_cast<std::size_t>(n_angles), false);
    Ring ring{w, 1e300, 0.0, 0, false, false};
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const int i = static_cast<int>(c) / n_angles, k = static_cast<int>(c) % n_angles;
      angle_hit[static_cast<std::size_t>(k)] = true;
      ring.rho_min = std::min(ring.rho_min, rep.radii[static_cast<std::size_t>(i)]);
      ring.rho_max = std::max(ring.rho_max, rep.radii[static_cast<std::size_t>(i)]);
      ++ring.samples;
      const std::array<std::pair<int, int>, 4> nb{{{i - 1, k}, {i + 1, k}, {i, (k + 1) % n_angles},
                                                   {i, (k + n_angles - 1) % n_angles}}};
      for (auto [ni, nk] : nb) {
        if (ni < 0 || ni >= n_radii) continue;
        const std::size_t nc = static_cast<std::size_t>(ni) * n_angles + nk;
        if (comp[nc] != -1 || rep.labels[nc] != w) continue;
        comp[nc] = next;
        stack.push_back(nc);
      }
    }
    ++next;
    if (std::all_of(angle_hit.begin(), angle_hit.end(), [](bool b) { return b; })) rep.rings.push_back(ring);
  }
  if (opt.confirm)
    for (Ring& ring : rep.rings) {
      ring.surrounds_origin_checked = true;
      const Complex lambda = 0.5 * (ring.rho_min + ring.rho_max);
      try {
        ring.surrounds_origin = c_minus_component_surrounds_origin(a, lambda, opt.confirm_resolution, opt.max_iter);
      } catch (const Error&) {
        ring.surrounds_origin = false;
      }
    }
  std::stable_sort(rep.rings.begin(), rep.rings.end(), [](const Ring& x, const Ring& y) { return x.rho_min > y.rho_min; });
  return rep;
}

// ---------------------------------------------------------------- asymptotics

struct AsymptoticsRow {
  Complex lambda;
  double zero_error = 0.0;      // max relative error of the ring zeros against their seeds
  double critical_error = 0.0;  // same for the ring criticals
  double zero_modulus = 0.0;    // mean |zero|
  double critical_modulus = 0.0;
  double max_gap_deviation_deg = 0.0;  // largest |angular gap - 72 deg| among the zeros
};

struct AsymptoticsReport {
  Complex a;
  std::vector<AsymptoticsRow> rows;
  bool zero_decreasing = true;
  bool critical_decreasing = true;
};

inline AsymptoticsReport asymptotics_check(Complex a, const std::vector<Complex>& lambdas) {
  AsymptoticsReport rep;
  rep.a = a;
  for (const Complex& lambda : lambdas) {
    const CriticalSet cs = critical_set(MapParams::perturbed(a, lambda));
    const auto zs = ring_zero_seeds(a, lambda);
    const auto cseeds = ring_critical_seeds(a, lambda);
    AsymptoticsRow row;
    row.lambda = lambda;
    std::vector<double> args;
    for (std::size_t k = 0; k < 5; ++k) {
      row.zero_error = std::max(row.zero_error, std::abs(cs.zeros_ring[k] - zs[k]) / std::abs(zs[k]));
      row.critical_error =
          std::max(row.critical_error, std::abs(cs.ring_criticals[k] - cseeds[k]) / std::abs(cseeds[k]));
      row.zero_modulus += std::abs(cs.zeros_ring[k]) / 5.0;
      row.critical_modulus += std::abs(cs.ring_criticals[k]) / 5.0;
      args.push_back(std::arg(cs.zeros_ring[k]));
    }
    std::sort(args.begin(), args.end());
    for (std::size_t k = 0; k < 5; ++k) {
      double gap = (k + 1 < 5 ? args[k + 1] : args[0] + 2.0 * kPi) - args[k];
      row.max_gap_deviation_deg = std::max(row.max_gap_deviation_deg, std::abs(gap * 180.0 / kPi - 72.0));
    }
    if (!rep.rows.empty()) {
      rep.zero_decreasing = rep.zero_decreasing && row.zero_error < rep.rows.back().zero_error;
      rep.critical_decreasing = rep.critical_decreasing && row.critical_error < rep.rows.back().critical_error;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

// ---------------------------------------------------------------- boundary continuity

/// Symmetric Hausdorff distance between two finite point sets.
inline double hausdorff(const std::vector<Complex>& x, const std::vector<Complex>& y) {
  auto directed = [](const std::vector<Complex>& u, const std::vector<Complex>& v) {
    double worst = 0.0;
    for (const Complex& p : u) {
      double best = 1e300;
      for (const Complex& q : v) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(x, y), directed(y, x));
}

inline std::vector<Complex> astar_points(const StructuralRegions& R) {
  std::vector<Complex> pts;
  const std::size_t n = R.astar_boundary.size();
  for (std::size_t k = 0; k < n; ++k) pts.push_back(std::polar(R.astar_boundary[k], StructuralRegions::angle(k, n)));
  return pts;
}

struct ContinuityReport {
  std::vector<double> deltas;
  std::vector<double> distances;
  bool nonincreasing = true;
  double distance_to_circle = 0.0;  // of the boundary at lambda0
};

inline ContinuityReport boundary_continuity_check(Complex a, Complex lambda0, const std::vector<double>& deltas) {
  ContinuityReport rep;
  const StructuralRegions R0 = locate_regions(MapParams::perturbed(a, lambda0));
  const auto base = astar_points(R0);
  for (double r : R0.astar_boundary) rep.distance_to_circle = std::max(rep.distance_to_circle, std::abs(r - 1.0));
  for (double d : deltas) {
    double dist = 0.0;
    if (d != 0.0) {
      // perturb along the direction of lambda0
      const Complex l1 = lambda0 + d * lambda0 / std::abs(lambda0);
      dist = hausdorff(base, astar_points(locate_regions(MapParams::perturbed(a, l1))));
    }
    if (!rep.distances.empty() && dist > rep.distances.back()) rep.nonincreasing = false;
    rep.deltas.push_back(d);
    rep.distances.push_back(dist);
  }
  return rep;
}

}  // namespace blaschke
