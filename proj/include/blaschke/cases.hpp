#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blaschke/experiments.hpp"
#include "blaschke/real_line.hpp"

namespace blaschke {

/// One link of a preimage chain: U is a component mapped onto V by B.
struct ChainLink {
  std::string word;
  int connectivity = 0;
  bool surrounds_origin = false;
  // Measured for U over its image V; zero for the first link.
  int degree = 0;
  int criticals = 0;
  int predicted = 0;  // riemann_hurwitz(m_V, degree, criticals)
};

struct CaseReport {
  char which = '?';  // 'a', 'b' or 'c'
  Complex a;
  Complex lambda;
  std::optional<OrbitFate> fate;
  std::string word;
  FinalRegion final_region = FinalRegion::None;
  bool surrounds_origin = false;
  int c_minus_connectivity = 0;
  std::vector<int> connectivities;  // non-truncated components of the measured view, sorted
  std::vector<ChainLink> chain;
  std::vector<PlaneSpec> grids;
  bool confirmed = false;
  std::vector<std::string> trace;

  /// Whether the evidence matches case `c`.
  bool matches(char c) const {
    auto within = [&](int hi) {
      return std::all_of(connectivities.begin(), connectivities.end(), [&](int m) { return m <= hi; });
    };
    switch (c) {
      case 'a': return final_region == FinalRegion::D0 && c_minus_connectivity == 1 && within(2);
      case 'b': return final_region == FinalRegion::A0 && c_minus_connectivity == 3 && !surrounds_origin && within(3);
      case 'c': return final_region == FinalRegion::A0 && surrounds_origin && c_minus_connectivity >= 2 && chain_increasing();
    }
    return false;
  }

  bool chain_increasing() const {
    if (chain.size() < 2) return false;
    for (std::size_t k = 1; k < chain.size(); ++k)
      if (chain[k].connectivity <= chain[k - 1].connectivity) return false;
    return true;
  }

  /// Every chain link with a measured degree agrees with Riemann-Hurwitz.
  bool chain_consistent() const {
    bool any = false;
    for (const auto& l : chain) {
      if (l.degree == 0) continue;
      any = true;
      if (l.predicted != l.connectivity) return false;
    }
    return any;
  }
};

struct CaseOptions {
  int resolution = 1024;
  int max_iter = 2000;
  double width = 3.0;
  int workers = 0;
  std::size_t small_area = 2000;  // c_-'s component below this many pixels gets a zoomed view
  double zoom_factor = 3.0;
  double min_zoom_width = 1e-3;
  int zoom_levels = 5;
};

namespace detail {

inline ComponentStats* largest_with_word(ComponentMap& cm, const std::string& w) {
  const auto ids = components_with_word(cm, w);
  return ids.empty() ? nullptr : &cm.stats[static_cast<std::size_t>(ids.front())];
}

/// Degree of B from U onto V: preimages of points of V landing in U. Pixels
/// near the boundary lose preimages to neighbours, so the most frequent count
/// over up to 64 pixels of V is taken.
inline int measured_degree(const RasterGrid& g, const ComponentMap& cm, const ComponentStats& U,
                           const ComponentStats& V) {
  std::vector<std::pair<int, int>> px;
  for (int i = V.i0; i <= V.i1; ++i)
    for (int j = V.j0; j <= V.j1; ++j)
      if (cm.at(i, j) == V.id) px.emplace_back(i, j);
  const std::size_t stride = std::max<std::size_t>(1, px.size() / 64);
  std::map<int, int> votes;
  for (std::size_t s = 0; s < px.size(); s += stride) {
    int k = 0;
    for (const Complex& z : preimages_of_point(g.spec.pixel_center(px[s].first, px[s].second), g.spec.params).roots)
      if (is_finite(z) && component_at(g, cm, z) == U.id) ++k;
    ++votes[k];
  }
  int best = 0, count = -1;
  for (auto [k, c] : votes)
    if (c >= count) {
      best = k;
      count = c;
    }
  return best;
}

inline int criticals_in(const RasterGrid& g, const ComponentMap& cm, const CriticalSet& cs, int id) {
  int r = 0;
  if (component_at(g, cm, cs.c_plus) == id) ++r;
  if (component_at(g, cm, cs.c_minus) == id) ++r;
  for (const Complex& c : cs.ring_criticals) r += component_at(g, cm, c) == id ? 1 : 0;
  return r;
}

}  // namespace detail

/// Renders the dynamical plane at (a, lambda), measures c_-'s component and a
/// preimage chain through it, and decides which case the evidence supports.
inline CaseReport analyze_case(Complex a, Complex lambda, const CaseOptions& opt = {}) {
  const MapParams p = MapParams::perturbed(a, lambda);
  p.validate();
  CaseReport rep;
  rep.a = a;
  rep.lambda = lambda;
  const CriticalSet cs = critical_set(p);
  const Complex cmz = cs.c_minus;

  PlaneSpec full;
  full.params = p;
  full.width = opt.width;
  full.resolution = opt.resolution;
  full.max_iter = opt.max_iter;
  const RasterGrid g = render_dynamical(full, opt.workers);
  ComponentMap cm = label_components(g, {{"c_minus", cmz}, {"origin", 0.0}});
  rep.grids.push_back(full);
  rep.fate = classify_orbit(cmz, MapEvaluator(p), *g.regions, opt.max_iter);
  rep.word = rep.fate->word();
  rep.final_region = rep.fate->final_region;
  rep.trace.push_back("c_minus word " + rep.word);
  const int id = component_at(g, cm, cmz);
  if (id < 0) {
    rep.trace.push_back("c_minus pixel is ambiguous");
    return rep;
  }
  const ComponentStats cs_full = cm.stats[static_cast<std::size_t>(id)];
  rep.surrounds_origin = surrounds(g, cm, id, 0.0);

  auto collect = [&](const ComponentMap& m) {
    rep.connectivities.clear();
    for (const auto& s : m.stats)
      if (!s.truncated && !s.failed) rep.connectivities.push_back(s.connectivity);
    std::sort(rep.connectivities.begin(), rep.connectivities.end());
  };

  if (cs_full.area_px < opt.small_area && !rep.surrounds_origin) {
    // Zoom on c_- and keep halving the width until its connectivity repeats
    // or the component no longer fits. A first view that truncates it widens.
    const int extent = std::max(cs_full.i1 - cs_full.i0, cs_full.j1 - cs_full.j0) + 1;
    PlaneSpec zoom = full;
    zoom.center = cmz;
    zoom.width = std::max(opt.min_zoom_width, opt.zoom_factor * extent * full.pixel_size());
    int last = -1;
    bool measured = false;
    for (int level = 0; level < opt.zoom_levels; ++level) {
      const RasterGrid gz = render_dynamical(zoom, opt.workers);
      const ComponentMap cz = label_components(gz, {{"c_minus", cmz}});
      const int zid = component_at(gz, cz, cmz);
      if (zid < 0) {
        rep.trace.push_back("c_minus pixel is ambiguous at zoom width " + std::to_string(zoom.width));
        break;
      }
      const ComponentStats& s = cz.stats[static_cast<std::size_t>(zid)];
      rep.trace.push_back("zoom width " + std::to_string(zoom.width) + ": c_minus component area " +
                          std::to_string(s.area_px) + ", connectivity " + std::to_string(s.connectivity) +
                          (s.truncated ? ", truncated" : ""));
      if (s.truncated) {
        if (measured) break;
        zoom.width *= 2.0;
        continue;
      }
      measured = true;
      rep.grids.push_back(zoom);
      rep.c_minus_connectivity = s.connectivity;
      collect(cz);
      if (s.connectivity == last) break;
      last = s.connectivity;
      zoom.width *= 0.5;
    }
  } else {
    rep.c_minus_connectivity = cs_full.truncated ? 0 : cs_full.connectivity;
    collect(cm);
  }

  // Chain through c_-'s component: its image, itself, then 0-preimages.
  if (rep.fate->kind == FateKind::EscapeThroughT0 && rep.word.size() >= 2) {
    std::vector<std::string> words{rep.word.substr(1), rep.word, "0" + rep.word};
    const ComponentStats* prev = nullptr;
    for (const std::string& w : words) {
      ComponentStats* s = w == rep.word ? &cm.stats[static_cast<std::size_t>(id)] : detail::largest_with_word(cm, w);
      if (!s || s->truncated) break;
      ChainLink link;
      link.word = w;
      link.connectivity = s->connectivity;
      link.surrounds_origin = surrounds(g, cm, s->id, 0.0);
      if (prev) {
        link.degree = detail::measured_degree(g, cm, *s, *prev);
        link.criticals = detail::criticals_in(g, cm, cs, s->id);
        if (link.degree > 0) link.predicted = riemann_hurwitz(prev->connectivity, link.degree, link.criticals);
      }
      rep.chain.push_back(link);
      prev = s;
    }
  }

  for (char c : {'a', 'b', 'c'})
    if (rep.matches(c)) {
      rep.which = c;
      rep.confirmed = true;
      break;
    }
  return rep;
}

// ---------------------------------------------------------------- real line

struct RealSearchReport {
  int m = -1;
  int n = -1;
  double lambda2 = 0.0;     // g(lambda2) = 0
  double g_residual = 0.0;  // |B^{m+2}(c_-) - x1| at lambda2
  double lambda = 0.0;      // h(lambda) = 0
  double h_residual = 0.0;  // |B^{m+2}(c_-) - z_{-n}| at lambda
  std::vector<std::string> trace;
  std::optional<CaseReport> report;
};

namespace detail {

inline double critical_iterate(double a, double lambda, int k) {
  const MapParams p = MapParams::perturbed(a, lambda);
  const MapEvaluator f(p);
  Complex z = critical_c_minus(p);
  for (int i = 0; i < k; ++i) z = f(z);
  return z.real();
}

}  // namespace detail

struct RealSearchOptions {
  double ratio = 0.97;
  int steps = 500;
  int max_m = 6;
  int max_n = 60;
  bool verify = true;
  CaseOptions render;
};

/// Searches real lambda below lambda_hi for a parameter sending c_- onto a
/// backward preimage of z0 along the real line, so that c_- lands in D0.
inline RealSearchReport caseA_real_search(double a, double lambda_hi, int depth, const RealSearchOptions& opt = {}) {
  if (!(a > 0.0 && a < 1.0)) throw Error(Errc::invalid_params, "a: must lie in (0, 1)");
  if (!(lambda_hi > 0.0)) throw Error(Errc::invalid_params, "lambda_hi: must be > 0");
  RealSearchReport rep;
  auto g = [&](int m, double l) { return detail::critical_iterate(a, l, m + 2) - real_line_state(a, l, 0).x1; };

  // Walk lambda down geometrically until some g_m changes sign through a
  // zero. Sign changes across a pole of the iterate leave a large residual
  // after bisection and are skipped.
  double lo = 0.0, hi = 0.0;
  std::vector<double> prev(static_cast<std::size_t>(opt.max_m + 1));
  double l = lambda_hi;
  for (int m = 0; m <= opt.max_m; ++m) prev[static_cast<std::size_t>(m)] = g(m, l);
  for (int step = 1; step <= opt.steps && rep.m < 0; ++step) {
    const double next = l * opt.ratio;
    for (int m = 0; m <= opt.max_m && rep.m < 0; ++m) {
      const double v = g(m, next);
      const double u = prev[static_cast<std::size_t>(m)];
      prev[static_cast<std::size_t>(m)] = v;
      if ((v > 0.0) == (u > 0.0)) continue;
      double neg = v < 0.0 ? next : l, pos = v < 0.0 ? l : next;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (neg + pos);
        if (mid == neg || mid == pos) break;
        (g(m, mid) < 0.0 ? neg : pos) = mid;
      }
      const double res = std::abs(g(m, pos));
      if (!(res <= 1e-9)) {
        rep.trace.push_back("m=" + std::to_string(m) + ": sign change near " + std::to_string(pos) +
                            " is a pole crossing");
        continue;
      }
      rep.m = m;
      rep.lambda2 = pos;
      rep.g_residual = res;
      lo = next;
      hi = l;
    }
    l = next;
  }
  if (rep.m < 0) throw Error(Errc::no_sign_change, "g changes sign for no m <= " + std::to_string(opt.max_m));
  rep.trace.push_back("g vanishes for m=" + std::to_string(rep.m) + " in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  const int m = rep.m;
  const double far = g(m, lo) < 0.0 ? lo : hi;

  // Smallest n whose backward point z_{-n} lies above B^{m+2}(c_-) at the far end.
  const RealLineState far_state = real_line_state(a, far, depth);
  const double far_value = detail::critical_iterate(a, far, m + 2);
  for (std::size_t k = 0; k < far_state.backward_chain.size(); ++k)
    if (far_value - far_state.backward_chain[k] < 0.0) {
      rep.n = static_cast<int>(k) + 1;
      break;
    }
  if (rep.n < 0) throw Error(Errc::no_sign_change, "no backward point above the critical orbit at depth " +
                                                       std::to_string(depth));
  rep.trace.push_back("bisecting on z_{-" + std::to_string(rep.n) + "}");

  auto h = [&](double lam) {
    const RealLineState s = real_line_state(a, lam, rep.n);
    if (static_cast<int>(s.backward_chain.size()) < rep.n)
      throw Error(Errc::bracket_failure, "backward chain too short at lambda " + std::to_string(lam));
    return detail::critical_iterate(a, lam, m + 2) - s.backward_chain[static_cast<std::size_t>(rep.n - 1)];
  };
  double hn = far, hp = rep.lambda2;
  if (!(h(hn) < 0.0 && h(hp) > 0.0)) throw Error(Errc::no_sign_change, "h does not change sign on [Lambda1, Lambda2]");
  double best = hn;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (hn + hp);
    if (mid == hn || mid == hp) break;
    const double v = h(mid);
    (v < 0.0 ? hn : hp) = mid;
    best = std::abs(h(hn)) < std::abs(h(hp)) ? hn : hp;
  }
  rep.lambda = best;
  rep.h_residual = std::abs(h(best));
  if (opt.verify) {
    rep.report = analyze_case(Complex(a), Complex(best), opt.render);
    rep.trace.push_back("render: c_minus word " + rep.report->word);
  }
  return rep;
}

// ---------------------------------------------------------------- searches

struct FindOptions {
  int probe_resolution = 256;
  double ratio = 0.97;
  int steps = 500;
  int grid = 16;           // case a box scan: grid x grid samples
  int loop_samples = 64;   // case b
  int loops = 6;
  int max_candidates = 12;  // full analyses per search
  CaseOptions render;
};

namespace detail {

inline bool probe_surrounds(Complex a, Complex lambda, const std::string& word, int res, int max_iter) {
  const MapParams p = MapParams::perturbed(a, lambda);
  const StructuralRegions R = locate_regions(p, RegionOptions::light_mode());
  const RasterGrid g = render_dynamical(auto_viewport(p, R, res, max_iter), 1);
  const ComponentMap cm = label_components(g);
  const int id = component_at(g, cm, critical_c_minus(p));
  if (id < 0 || !surrounds(g, cm, id, 0.0)) return false;
  return ray_vote(g, 0.0, word).vote == RayVote::Inside;
}

inline std::string lambda_text(Complex l) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", l.real(), l.imag());
  return buf;
}

}  // namespace detail

/// Searches for a parameter realising case `which` near search_box.center.
/// Throws not_found with the trace once the budget is spent.
inline CaseReport find_case(Complex a, char which, const PlaneSpec& search_box, const FindOptions& opt = {}) {
  if (which != 'a' && which != 'b' && which != 'c') throw Error(Errc::invalid_params, "case: expected a, b or c");
  std::vector<std::string> trace;
  int analyses = 0;
  auto attempt = [&](Complex lambda) -> std::optional<CaseReport> {
    if (analyses >= opt.max_candidates) return std::nullopt;
    ++analyses;
    try {
      CaseReport r = analyze_case(a, lambda, opt.render);
      trace.push_back("analyze " + detail::lambda_text(lambda) + ": " + r.word + " -> " +
                      (r.confirmed ? std::string(1, r.which) : std::string("none")));
      if (r.confirmed && r.which == which) {
        r.trace.insert(r.trace.begin(), trace.begin(), trace.end());
        return r;
      }
    } catch (const Error& e) {
      trace.push_back("analyze " + detail::lambda_text(lambda) + ": " + e.what());
    }
    return std::nullopt;
  };
  auto fail = [&]() -> CaseReport {
    std::string msg = "case " + std::string(1, which) + " not found within budget";
    for (const auto& t : trace) msg += "\n  " + t;
    throw Error(Errc::not_found, msg);
  };
  const int max_iter = opt.render.max_iter;

  if (which == 'c') {
    Complex lambda = search_box.center;
    std::string last;
    for (int step = 0; step < opt.steps; ++step, lambda *= opt.ratio) {
      const auto f = critical_fate(a, lambda, max_iter);
      if (!f || f->kind != FateKind::EscapeThroughT0 || f->final_region != FinalRegion::A0) continue;
      const std::string w = f->word();
      if (w == last) continue;
      last = w;
      bool ok = false;
      try {
        ok = detail::probe_surrounds(a, lambda, w, opt.probe_resolution, max_iter);
      } catch (const Error&) {
      }
      trace.push_back("step " + std::to_string(step) + " " + detail::lambda_text(lambda) + " " + w +
                      (ok ? " surrounds 0" : ""));
      if (ok)
        if (auto r = attempt(lambda)) return *r;
      if (analyses >= opt.max_candidates) break;
    }
    return fail();
  }

  if (which == 'a') {
    if (std::abs(a.imag()) == 0.0 && a.real() > 0.0 && a.real() < 1.0 && search_box.center.imag() == 0.0 &&
        search_box.center.real() > 0.0) {
      RealSearchOptions ro;
      ro.render = opt.render;
      const RealSearchReport rs = caseA_real_search(a.real(), search_box.center.real() + search_box.width / 2, 60, ro);
      trace.insert(trace.end(), rs.trace.begin(), rs.trace.end());
      if (rs.report && rs.report->confirmed && rs.report->which == 'a') {
        CaseReport r = *rs.report;
        r.trace.insert(r.trace.begin(), trace.begin(), trace.end());
        return r;
      }
      return fail();
    }
  }

  // Box scan for parameters whose c_- ends in D0, nearest the centre first.
  std::vector<Complex> d0;
  for (int i = 0; i < opt.grid; ++i)
    for (int j = 0; j < opt.grid; ++j) {
      PlaneSpec s = search_box;
      s.resolution = opt.grid;
      const Complex lambda = s.pixel_center(i, j);
      const auto f = critical_fate(a, lambda, max_iter);
      if (f && f->final_region == FinalRegion::D0) d0.push_back(lambda);
    }
  {
    const auto f = critical_fate(a, search_box.center, max_iter);
    if (f && f->final_region == FinalRegion::D0) d0.insert(d0.begin(), search_box.center);
  }
  std::stable_sort(d0.begin(), d0.end(), [&](Complex x, Complex y) {
    return std::abs(x - search_box.center) < std::abs(y - search_box.center);
  });
  trace.push_back(std::to_string(d0.size()) + " D0 samples in the box");

  if (which == 'a') {
    for (const Complex& lambda : d0)
      if (auto r = attempt(lambda)) return *r;
    return fail();
  }

  // Case b: loops around a case-a parameter.
  Complex centre{};
  bool have_centre = false;
  for (const Complex& lambda : d0) {
    if (analyses >= opt.max_candidates) break;
    ++analyses;
    const CaseReport r = analyze_case(a, lambda, opt.render);
    if (r.confirmed && r.which == 'a') {
      centre = lambda;
      have_centre = true;
      trace.push_back("case-a centre " + detail::lambda_text(lambda));
      break;
    }
  }
  if (!have_centre) return fail();
  // Short itineraries first: their components are the largest and resolve best.
  std::set<std::string> tried;
  for (int loop = 0; loop < opt.loops; ++loop) {
    const double radius = 0.5 * search_box.width * std::pow(0.5, loop);
    std::vector<std::pair<std::string, Complex>> cands;
    for (int k = 0; k < opt.loop_samples; ++k) {
      const Complex lambda = centre + std::polar(radius, 2.0 * kPi * k / opt.loop_samples);
      const auto f = critical_fate(a, lambda, max_iter);
      if (!f || f->kind != FateKind::EscapeThroughT0 || f->final_region != FinalRegion::A0) continue;
      if (tried.insert(f->word()).second) cands.emplace_back(f->word(), lambda);
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const auto& x, const auto& y) { return x.first.size() < y.first.size(); });
    for (const auto& [w, lambda] : cands) {
      bool surr = true;
      try {
        surr = detail::probe_surrounds(a, lambda, w, opt.probe_resolution, max_iter);
      } catch (const Error&) {
      }
      trace.push_back("loop " + std::to_string(loop) + " " + detail::lambda_text(lambda) + " " + w +
                      (surr ? " surrounds 0" : ""));
      if (surr) continue;
      if (auto r = attempt(lambda)) return *r;
      if (analyses >= opt.max_candidates) return fail();
    }
  }
  return fail();
}

}  // namespace blaschke
