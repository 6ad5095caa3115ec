#pragma once

#include <chrono>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "blaschke/cases.hpp"
#include "blaschke/curve.hpp"
#include "blaschke/encode.hpp"

namespace blaschke {

struct VerifyConfig {
  std::string only;  // criterion name, empty for all
  std::uint64_t seed = 20240601;
  int workers = 0;
};

struct CriterionResult {
  std::string criterion;
  std::string status;  // pass, fail or skipped
  nlohmann::json measured;
  nlohmann::json expected;

  nlohmann::json to_json() const {
    return {{"criterion", criterion}, {"status", status}, {"measured", measured}, {"expected", expected}};
  }
};

namespace detail {

inline const Complex kCaseA{-1.9e-6, 3.15e-5};
inline const Complex kCaseB{9.5e-7, 3.05e-5};
inline const Complex kCaseC{7.74e-6, 9.9e-6};
inline const Complex kA05i{0.0, 0.5};
inline const std::vector<Complex> kAsymptoticA{{0.5, 0.0}, {0.0, 0.5}, {0.3, 0.4}};

inline nlohmann::json multiset_json(const std::vector<int>& v) {
  std::map<int, int> h;
  for (int m : v) ++h[m];
  nlohmann::json j = nlohmann::json::object();
  for (auto [k, c] : h) j[std::to_string(k)] = c;
  return j;
}

inline nlohmann::json case_json(const CaseReport& r) {
  nlohmann::json chain = nlohmann::json::array();
  for (const auto& l : r.chain)
    chain.push_back({{"word", l.word}, {"connectivity", l.connectivity}, {"degree", l.degree},
                     {"criticals", l.criticals}, {"predicted", l.predicted}, {"surroundsOrigin", l.surrounds_origin}});
  return {{"lambda", complex_json(r.lambda)},
          {"word", r.word},
          {"case", r.confirmed ? std::string(1, r.which) : std::string("none")},
          {"surroundsOrigin", r.surrounds_origin},
          {"cMinusConnectivity", r.c_minus_connectivity},
          {"connectivities", multiset_json(r.connectivities)},
          {"chain", chain}};
}

inline CriterionResult case_triptych(const VerifyConfig& cfg) {
  CriterionResult res{"case-triptych", "pass", nlohmann::json::array(), nullptr};
  res.expected = {{"a", "D0 chain, connectivity 1, all in {1,2}"},
                  {"b", "connectivity 3, not surrounding 0, all in {1,2,3}"},
                  {"c", "surrounds 0, some connectivity >= 4"},
                  {"runtimeSecondsMax", 300}};
  CaseOptions opt;
  opt.workers = cfg.workers;
  const std::array<std::pair<char, Complex>, 3> cases{{{'a', kCaseA}, {'b', kCaseB}, {'c', kCaseC}}};
  for (auto [which, lambda] : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const CaseReport r = analyze_case(kA05i, lambda, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& m = r.connectivities;
    auto all_le = [&](int hi) { return std::all_of(m.begin(), m.end(), [&](int x) { return x <= hi; }); };
    bool ok = false;
    switch (which) {
      case 'a': ok = r.final_region == FinalRegion::D0 && r.c_minus_connectivity == 1 && all_le(2); break;
      case 'b': ok = r.c_minus_connectivity == 3 && !r.surrounds_origin && all_le(3); break;
      case 'c':
        ok = r.surrounds_origin && r.c_minus_connectivity >= 2 &&
             std::any_of(m.begin(), m.end(), [](int x) { return x >= 4; });
        break;
    }
    ok = ok && secs <= 300.0;
    nlohmann::json j = case_json(r);
    j["within5Minutes"] = secs <= 300.0;
    j["pass"] = ok;
    res.measured.push_back(j);
    if (!ok) res.status = "fail";
  }
  return res;
}

inline CriterionResult asymptotics(const VerifyConfig&) {
  CriterionResult res{"asymptotics", "pass", nlohmann::json::array(), nullptr};
  res.expected = {{"maxRelErrorAt1e-5", 0.05}, {"maxRelErrorAt1e-8", 0.01}, {"strictlyDecreasing", true}};
  for (const Complex& a : kAsymptoticA) {
    const AsymptoticsReport rep = asymptotics_check(a, {1e-5, 1e-6, 1e-8});
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows)
      rows.push_back({{"lambda", r.lambda.real()}, {"zeroError", r.zero_error}, {"criticalError", r.critical_error}});
    const auto& first = rep.rows.front();
    const auto& last = rep.rows.back();
    const bool zeros_ok = first.zero_error <= 0.05 && last.zero_error <= 0.01 && rep.zero_decreasing;
    const bool crit_ok = first.critical_error <= 0.05 && last.critical_error <= 0.01 && rep.critical_decreasing;
    res.measured.push_back({{"a", complex_json(a)}, {"rows", rows}, {"zerosPass", zeros_ok}, {"criticalsPass", crit_ok}});
    if (!(zeros_ok && crit_ok)) res.status = "fail";
  }
  return res;
}

inline CriterionResult straight_annulus_check(const VerifyConfig& cfg) {
  CriterionResult res{"straight-annulus", "pass", nlohmann::json::array(), 1000};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const Complex& a : kAsymptoticA) {
    const MapParams p = MapParams::perturbed(a, 1e-6);
    const StructuralRegions R = locate_regions(p);
    const MapEvaluator f(p);
    const double r2in = R.annulus.r_in * R.annulus.r_in, r2out = R.annulus.r_out * R.annulus.r_out;
    int good = 0;
    for (int k = 0; k < 1000; ++k) {
      // uniform by area, open annulus
      double s = 0.0;
      do s = u(rng);
      while (s == 0.0);
      const double r = std::sqrt(r2in + s * (r2out - r2in));
      const Complex z = std::polar(r, 2.0 * kPi * u(rng));
      good += classify_orbit(z, f, R, 300).t0_entry == 1 ? 1 : 0;
    }
    res.measured.push_back({{"a", complex_json(a)}, {"entryOne", good}});
    if (good != 1000) res.status = "fail";
  }
  return res;
}

inline CriterionResult curve_trichotomy(const VerifyConfig&) {
  CriterionResult res{"curve-trichotomy", "pass", nlohmann::json::object(), nullptr};
  res.expected = {{"inside", "[2 surrounding] + [4 surrounding]"},
                  {"on", "[2 surrounding] + [3 surrounding | 1 around z0] pinched at c_-"},
                  {"outside", "[2 surrounding] + [3 surrounding] + [1 around z0]"}};
  const MapParams p = MapParams::perturbed(kA05i, 1e-6);
  const CriticalSet cs = critical_set(p);
  const Complex v = MapEvaluator(p)(cs.c_minus);
  auto describe = [&](const CurvePreimage& c) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& k : c.components) {
      nlohmann::json loops = nlohmann::json::array();
      for (const auto& l : k.loops)
        loops.push_back({{"degree", l.degree},
                         {"surroundsOrigin", l.surrounds_origin},
                         {"surroundsZ0", winding_number(l.points, cs.z0) != 0}});
      comps.push_back(loops);
    }
    return nlohmann::json{{"components", comps}, {"pinches", c.pinch_points.size()}};
  };
  // z0: 1 must surround z0, 0 must not, -1 either
  auto loop_is = [&](const JordanLoop& l, int deg, bool origin, int z0) {
    const bool around = winding_number(l.points, cs.z0) != 0;
    return l.degree == deg && l.surrounds_origin == origin && (z0 < 0 || around == (z0 == 1));
  };
  // Circles about 0 with B(c_-) inside, on and outside them.
  const CurvePreimage in = preimage_curve(circle_curve(0.0, 2.5 * std::abs(v), 256), p);
  const CurvePreimage on =
      preimage_curve(circle_curve(0.0, std::abs(v), 256, std::arg(v)), p, cs.c_minus, 0.05);
  const CurvePreimage out = preimage_curve(circle_curve(0.0, 0.6 * std::abs(v), 256), p);
  const bool in_ok = in.components.size() == 2 && in.components[0].loops.size() == 1 &&
                     loop_is(in.components[0].loops[0], 2, true, 0) && in.components[1].loops.size() == 1 &&
                     loop_is(in.components[1].loops[0], 4, true, -1);
  bool on_ok = on.components.size() == 2 && on.pinch_points.size() == 1 && on.components[0].loops.size() == 1 &&
               loop_is(on.components[0].loops[0], 2, true, 0) && on.components[1].loops.size() == 2;
  if (on_ok) {
    const auto& L = on.components[1].loops;
    on_ok = (loop_is(L[0], 3, true, 0) && loop_is(L[1], 1, false, 1)) ||
            (loop_is(L[1], 3, true, 0) && loop_is(L[0], 1, false, 1));
  }
  bool out_ok = out.components.size() == 3;
  if (out_ok) {
    int matched = 0;
    for (const auto& k : out.components)
      if (k.loops.size() == 1)
        matched += loop_is(k.loops[0], 2, true, 0) || loop_is(k.loops[0], 3, true, 0) ||
                   loop_is(k.loops[0], 1, false, 1);
    out_ok = matched == 3 && out.total_degree() == 6;
  }
  res.measured = {{"criticalValueModulus", std::abs(v)},
                  {"inside", describe(in)},
                  {"on", describe(on)},
                  {"outside", describe(out)}};
  if (!(in_ok && on_ok && out_ok)) res.status = "fail";
  return res;
}

inline CriterionResult riemann_hurwitz_check(const VerifyConfig& cfg) {
  CriterionResult res{"riemann-hurwitz", "pass", nlohmann::json::object(), nullptr};
  res.expected = {{"units", {2, 3, 1}}, {"chainConsistent", true}};
  const std::vector<int> units{riemann_hurwitz(2, 1, 0), riemann_hurwitz(2, 2, 1), riemann_hurwitz(1, 4, 3)};
  const bool units_ok = units == std::vector<int>{2, 3, 1};
  CaseOptions opt;
  opt.workers = cfg.workers;
  const CaseReport r = analyze_case(kA05i, kCaseC, opt);
  res.measured = {{"units", units}, {"chain", case_json(r)["chain"]}, {"chainConsistent", r.chain_consistent()}};
  if (!(units_ok && r.chain_consistent())) res.status = "fail";
  return res;
}

inline CriterionResult vieta_degree(const VerifyConfig& cfg) {
  CriterionResult res{"vieta-degree", "pass", nullptr, 1e-9};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> r(0.05, 0.95), t(0.0, 2.0 * kPi), e(-9.0, -3.0);
  double worst = 0.0;
  bool count_ok = true;
  for (int i = 0; i < 100; ++i) {
    const Complex a = std::polar(r(rng), t(rng));
    const Complex lambda = std::polar(std::pow(10.0, e(rng)), t(rng));
    const MapParams p = MapParams::perturbed(a, lambda);
    const RootSet rs = preimages_of_point(0.0, p);
    count_ok = count_ok && rs.size() == 6;
    Complex sum{}, prod{1.0};
    for (const Complex& z : rs.roots) {
      sum += z;
      prod *= z;
    }
    worst = std::max({worst, std::abs(sum - a), std::abs(prod - lambda), rs.max_residual()});
  }
  res.measured = {{"cases", 100}, {"allSixRoots", count_ok}, {"maxResidual", worst}};
  if (!(count_ok && worst <= 1e-9)) res.status = "fail";
  return res;
}

inline CriterionResult nesting_ordering(const VerifyConfig& cfg) {
  CriterionResult res{"nesting-ordering", "pass", nlohmann::json::object(), nullptr};
  res.expected = {{"meanRadiiIncrease", true}, {"gapToAstarDecreases", true}, {"orderAgrees", true}};
  PlaneSpec spec;
  spec.params = MapParams::perturbed(kA05i, kCaseC);
  spec.resolution = 1024;
  const RasterGrid g = render_dynamical(spec, cfg.workers);
  const ComponentMap cm = label_components(g);
  const double astar = g.regions->astar_mean();
  std::vector<double> radii;
  for (int n = 0; n <= 2; ++n) {
    const auto ids = components_with_word(cm, annulus_word(n));
    radii.push_back(ids.empty() ? -1.0 : cm.stats[static_cast<std::size_t>(ids.front())].mean_radius);
  }
  bool nest_ok = radii[0] > 0.0;
  for (std::size_t k = 1; k < radii.size(); ++k)
    nest_ok = nest_ok && radii[k] > radii[k - 1] && astar - radii[k] < astar - radii[k - 1] && radii[k] < astar;

  // Bands: the largest component of each A-terminated word that surrounds 0.
  std::vector<std::pair<std::string, double>> bands;
  std::set<std::string> seen;
  std::vector<int> order(cm.stats.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return cm.stats[static_cast<std::size_t>(x)].area_px > cm.stats[static_cast<std::size_t>(y)].area_px;
  });
  for (int id : order) {
    const auto& s = cm.stats[static_cast<std::size_t>(id)];
    if (s.kind != FateKind::EscapeThroughT0 || s.word.back() != 'A' || s.truncated || seen.count(s.word)) continue;
    if (!surrounds(g, cm, id, 0.0)) continue;
    seen.insert(s.word);
    bands.emplace_back(s.itinerary(), s.mean_radius);
  }
  int decided = 0, agree = 0;
  for (std::size_t i = 0; i < bands.size(); ++i)
    for (std::size_t j = 0; j < bands.size(); ++j) {
      if (i == j) continue;
      if (itinerary_order(bands[i].first, bands[j].first) != Order::Precedes) continue;
      ++decided;
      agree += bands[i].second < bands[j].second ? 1 : 0;
    }
  std::stable_sort(bands.begin(), bands.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
  nlohmann::json bj = nlohmann::json::array();
  for (const auto& [w, m] : bands) bj.push_back({{"itinerary", w}, {"meanRadius", m}});
  res.measured = {{"meanRadii", radii}, {"astarMean", astar}, {"bands", bj}, {"decidedPairs", decided},
                  {"agreeingPairs", agree}};
  if (!(nest_ok && decided > 0 && agree == decided)) res.status = "fail";
  return res;
}

inline CriterionResult rings(const VerifyConfig&) {
  CriterionResult res{"rings", "pass", nlohmann::json::object(), nullptr};
  res.expected = {{"completeRings", ">= 1"}, {"sNondecreasing", true}, {"tNondecreasing", true},
                  {"frozenAt3e-5", {{"s", 1}, {"t", 1}}}};
  const RingReport rep = detect_rings(kA05i, 7e-5, 48, 96);
  nlohmann::json rj = nlohmann::json::array();
  int confirmed = 0;
  for (const auto& r : rep.rings) {
    rj.push_back({{"itinerary", r.word}, {"rhoMin", r.rho_min}, {"rhoMax", r.rho_max}, {"surroundsOrigin", r.surrounds_origin}});
    confirmed += r.surrounds_origin ? 1 : 0;
  }
  RCache cache;
  nlohmann::json st = nlohmann::json::array();
  std::optional<int> ps, pt;
  bool mono = true, bracket = true;
  double rho = 3e-5;
  for (int h = 0; h <= 3; ++h, rho *= 0.5) {
    const RtsRecord r = compute_s_t(kA05i, rho, 16, {}, &cache);
    st.push_back({{"rho", rho}, {"s", r.s ? nlohmann::json(*r.s) : nlohmann::json(nullptr)},
                  {"t", r.t ? nlohmann::json(*r.t) : nlohmann::json(nullptr)}, {"excluded", r.excluded}});
    if (!r.s || !r.t) {
      mono = false;
      continue;
    }
    for (const auto& [l, v] : r.circle) bracket = bracket && *r.t <= v && v <= *r.s;
    if (ps && (*r.s < *ps || *r.t < *pt)) mono = false;
    ps = r.s;
    pt = r.t;
  }
  const bool frozen = st[0]["s"] == 1 && st[0]["t"] == 1;
  res.measured = {{"rings", rj}, {"confirmedRings", confirmed}, {"st", st}, {"tLeRLeS", bracket}};
  if (!(confirmed >= 1 && mono && bracket && frozen)) res.status = "fail";
  return res;
}

inline CriterionResult real_line_search(const VerifyConfig& cfg) {
  CriterionResult res{"real-line-search", "pass", nlohmann::json::object(), nullptr};
  res.expected = {{"hResidualMax", 1e-10}, {"gResidualMax", 1e-9}, {"case", "a"}};
  RealSearchOptions opt;
  opt.render.workers = cfg.workers;
  const RealSearchReport r = caseA_real_search(0.6, 1e-4, 60, opt);
  const bool ok = r.h_residual <= 1e-10 && r.g_residual <= 1e-9 && r.report && r.report->confirmed &&
                  r.report->which == 'a';
  res.measured = {{"m", r.m}, {"n", r.n}, {"lambda2", r.lambda2}, {"gResidual", r.g_residual}, {"lambda", r.lambda},
                  {"hResidual", r.h_residual}, {"report", r.report ? case_json(*r.report) : nlohmann::json(nullptr)}};
  if (!ok) res.status = "fail";
  return res;
}

inline CriterionResult determinism(const VerifyConfig&) {
  CriterionResult res{"determinism", "pass", nlohmann::json::object(), true};
  PlaneSpec dyn;
  dyn.params = MapParams::perturbed(kA05i, kCaseA);
  dyn.resolution = 512;
  PlaneSpec par;
  par.kind = PlaneKind::Parameter;
  par.params = MapParams::perturbed(kA05i, 1e-6);
  par.center = kCaseA;
  par.width = 2e-5;
  par.resolution = 64;
  bool ok = true;
  nlohmann::json m;
  for (const PlaneSpec* s : {&dyn, &par}) {
    const RasterGrid g1 = render(*s, 1), g4 = render(*s, 4);
    const bool same = encode_image(g1) == encode_image(g4) && encode_meta(g1) == encode_meta(g4);
    m[std::string(to_string(s->kind))] = same;
    ok = ok && same;
  }
  res.measured = m;
  if (!ok) res.status = "fail";
  return res;
}

}  // namespace detail

using CriterionFn = std::function<CriterionResult(const VerifyConfig&)>;

struct Criterion {
  std::string name;
  CriterionFn run;
};

inline const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {"case-triptych", detail::case_triptych},
      {"asymptotics", detail::asymptotics},
      {"straight-annulus", detail::straight_annulus_check},
      {"curve-trichotomy", detail::curve_trichotomy},
      {"riemann-hurwitz", detail::riemann_hurwitz_check},
      {"vieta-degree", detail::vieta_degree},
      {"nesting-ordering", detail::nesting_ordering},
      {"rings", detail::rings},
      {"real-line-search", detail::real_line_search},
      {"determinism", detail::determinism}};
  return list;
}

/// Runs the acceptance criteria (one, or all); failures and errors are
/// recorded and the run continues.
inline std::vector<CriterionResult> verify_all(const VerifyConfig& cfg,
                                               const std::function<void(const CriterionResult&)>& on_result = {}) {
  if (!cfg.only.empty() && std::none_of(criteria().begin(), criteria().end(),
                                        [&](const Criterion& c) { return c.name == cfg.only; }))
    throw Error(Errc::invalid_params, "only: unknown criterion '" + cfg.only + "'");
  std::vector<CriterionResult> out;
  for (const Criterion& c : criteria()) {
    if (!cfg.only.empty() && cfg.only != c.name) continue;
    CriterionResult r;
    try {
      r = c.run(cfg);
    } catch (const Error& e) {
      r = {c.name, "fail", {{"error", e.what()}}, nullptr};
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

inline nlohmann::json verify_report(const VerifyConfig& cfg, const std::vector<CriterionResult>& results) {
  nlohmann::json j;
  j["engine"] = std::string(kEngineVersion);
  j["seed"] = cfg.seed;
  j["only"] = cfg.only.empty() ? nlohmann::json(nullptr) : nlohmann::json(cfg.only);
  nlohmann::json rs = nlohmann::json::array();
  bool pass = true;
  for (const auto& r : results) {
    rs.push_back(r.to_json());
    pass = pass && r.status != "fail";
  }
  j["results"] = rs;
  j["pass"] = pass;
  return j;
}

}  // namespace blaschke
