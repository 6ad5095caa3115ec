#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <thread>
#include <vector>

#include "blaschke/fate.hpp"

namespace blaschke {

inline constexpr int kMinResolution = 16;
inline constexpr int kMaxResolution = 16384;

enum class PlaneKind { Dynamical, Parameter };

inline std::string_view to_string(PlaneKind k) noexcept {
  return k == PlaneKind::Dynamical ? "dynamical" : "parameter";
}

/// Square viewport. Pixel (i, j) (row i from the top) samples
///   center + width ((j + 0.5)/res - 0.5) + i width (0.5 - (i + 0.5)/res).
struct PlaneSpec {
  Complex center{};
  double width = 3.0;
  int resolution = 512;
  int max_iter = 2000;
  double r_escape = kDefaultEscapeRadius;
  PlaneKind kind = PlaneKind::Dynamical;
  MapParams params = MapParams::perturbed({0.0, 0.5}, 1e-6);  // lambda unused for the parameter plane

  void validate() const {
    if (!is_finite(center)) throw Error(Errc::invalid_params, "center: not finite");
    if (!(width > 0.0) || !std::isfinite(width)) throw Error(Errc::invalid_params, "width: must be > 0");
    if (resolution < kMinResolution || resolution > kMaxResolution)
      throw Error(Errc::invalid_params, "resolution: must lie in [16, 16384]");
    if (max_iter < 1) throw Error(Errc::invalid_params, "maxIter: must be >= 1");
    if (!(r_escape > 0.0)) throw Error(Errc::invalid_params, "rEscape: must be > 0");
    if (kind == PlaneKind::Dynamical) {
      params.validate();
    } else {
      const double r = std::abs(params.a);
      if (!(r > 0.0 && r < 1.0)) throw Error(Errc::invalid_params, "a: must satisfy 0 < |a| < 1");
    }
  }

  Complex pixel_center(int i, int j) const noexcept {
    const double res = resolution;
    return center + Complex(width * ((j + 0.5) / res - 0.5), width * (0.5 - (i + 0.5) / res));
  }

  /// Pixel containing z, or nullopt outside the viewport.
  std::optional<std::pair<int, int>> pixel_of(Complex z) const noexcept {
    const Complex d = (z - center) / width;
    const double fj = (d.real() + 0.5) * resolution;
    const double fi = (0.5 - d.imag()) * resolution;
    if (!(fj >= 0.0 && fj < resolution && fi >= 0.0 && fi < resolution)) return std::nullopt;
    return std::pair<int, int>{static_cast<int>(fi), static_cast<int>(fj)};
  }

  double pixel_size() const noexcept { return width / resolution; }
};

struct PixelLabel {
  FateKind kind = FateKind::NonEscaping;
  FinalRegion final_region = FinalRegion::None;
  bool ambiguous = false;
  bool failed = false;  // parameter plane: structural check did not pass
  std::int32_t escape_time = -1;
  std::int32_t t0_entry = -1;
  std::uint64_t word_hash = 0;

  /// Pixels sharing this key belong to the same labelled class.
  bool same_class(const PixelLabel& o) const noexcept {
    return kind == o.kind && t0_entry == o.t0_entry && word_hash == o.word_hash && failed == o.failed;
  }
};

inline std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline constexpr std::string_view kFailedWord = "!";

struct RasterGrid {
  PlaneSpec spec;
  std::vector<PixelLabel> labels;             // row-major, top row first
  std::map<std::uint64_t, std::string> words;  // word_hash -> word
  std::optional<StructuralRegions> regions;    // dynamical plane only

  const PixelLabel& at(int i, int j) const { return labels[static_cast<std::size_t>(i) * spec.resolution + j]; }
  const std::string& word_of(const PixelLabel& l) const { return words.at(l.word_hash); }
  std::size_t ambiguous_count() const {
    std::size_t n = 0;
    for (const auto& l : labels) n += l.ambiguous ? 1 : 0;
    return n;
  }
};

inline PixelLabel make_label(const OrbitFate& f, std::map<std::uint64_t, std::string>& words) {
  PixelLabel l;
  l.kind = f.kind;
  l.final_region = f.final_region;
  l.ambiguous = f.ambiguous;
  l.escape_time = f.escape_time;
  l.t0_entry = f.t0_entry;
  const std::string w = f.word();
  l.word_hash = fnv1a(w);
  words.emplace(l.word_hash, w);
  return l;
}

inline PixelLabel failed_label(std::map<std::uint64_t, std::string>& words) {
  PixelLabel l;
  l.failed = true;
  l.word_hash = fnv1a(kFailedWord);
  words.emplace(l.word_hash, std::string(kFailedWord));
  return l;
}

namespace detail {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Rows are dealt round-robin; each pixel depends only on its own centre, so
/// the result matches a sequential row-major sweep for any worker count.
template <class PixelFn>
void parallel_rows(RasterGrid& g, int workers, PixelFn&& fn) {
  const int res = g.spec.resolution;
  g.labels.assign(static_cast<std::size_t>(res) * res, PixelLabel{});
  const int w = std::min(resolve_workers(workers), res);
  std::vector<std::map<std::uint64_t, std::string>> dicts(static_cast<std::size_t>(w));
  auto run = [&](int id) {
    auto& dict = dicts[static_cast<std::size_t>(id)];
    for (int i = id; i < res; i += w)
      for (int j = 0; j < res; ++j)
        g.labels[static_cast<std::size_t>(i) * res + j] = fn(g.spec.pixel_center(i, j), dict);
  };
  if (w == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < w; ++id) pool.emplace_back(run, id);
    for (auto& t : pool) t.join();
  }
  for (auto& d : dicts) g.words.merge(d);
}

}  // namespace detail

/// Classifies every pixel centre of the dynamical plane. The regions are
/// located once and shared read-only by all workers.
inline RasterGrid render_dynamical(const PlaneSpec& spec, int workers = 0) {
  if (spec.kind != PlaneKind::Dynamical) throw Error(Errc::invalid_params, "planeKind: expected dynamical");
  spec.validate();
  RegionOptions opt;
  opt.r_escape = spec.r_escape;
  RasterGrid g;
  g.spec = spec;
  g.regions = locate_regions(spec.params, opt);
  const MapEvaluator f(spec.params);
  const StructuralRegions& R = *g.regions;
  detail::parallel_rows(g, workers, [&](Complex z, auto& dict) {
    return make_label(classify_orbit(z, f, R, spec.max_iter), dict);
  });
  return g;
}

/// Fate of c_-(a, lambda) for one parameter, with its own light-mode regions.
/// Returns nullopt when the structural checks fail.
inline std::optional<OrbitFate> critical_fate(Complex a, Complex lambda, int max_iter,
                                              double r_escape = kDefaultEscapeRadius) {
  try {
    const MapParams p = MapParams::perturbed(a, lambda);
    p.validate();
    RegionOptions opt = RegionOptions::light_mode();
    opt.r_escape = r_escape;
    const StructuralRegions R = locate_regions(p, opt);
    const Complex cm = critical_c_minus(p);
    return classify_orbit(cm, MapEvaluator(p), R, max_iter);
  } catch (const Error&) {
    return std::nullopt;
  }
}

/// Each pixel is a value of lambda; the label is the fate of c_-.
inline RasterGrid render_parameter(const PlaneSpec& spec, int workers = 0) {
  if (spec.kind != PlaneKind::Parameter) throw Error(Errc::invalid_params, "planeKind: expected parameter");
  spec.validate();
  RasterGrid g;
  g.spec = spec;
  detail::parallel_rows(g, workers, [&](Complex lambda, auto& dict) {
    const auto fate = critical_fate(spec.params.a, lambda, spec.max_iter, spec.r_escape);
    return fate ? make_label(*fate, dict) : failed_label(dict);
  });
  return g;
}

inline RasterGrid render(const PlaneSpec& spec, int workers = 0) {
  return spec.kind == PlaneKind::Dynamical ? render_dynamical(spec, workers) : render_parameter(spec, workers);
}

}  // namespace blaschke
