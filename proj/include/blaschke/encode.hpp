#pragma once

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "blaschke/components.hpp"
#include "blaschke/critical.hpp"

namespace blaschke {

using Rgb = std::array<std::uint8_t, 3>;

/// "classic": non-escaping green, escaping yellow fading to red with escape
/// time, failed parameter pixels grey.
/// "label": one colour per class word, for telling components apart.
inline Rgb pixel_colour(const PixelLabel& l, std::string_view palette) {
  if (palette != "classic" && palette != "label")
    throw Error(Errc::invalid_params, "palette: unknown palette '" + std::string(palette) + "'");
  if (l.failed) return {128, 128, 128};
  if (palette == "classic") {
    if (l.kind == FateKind::NonEscaping) return {0, 255, 0};
    const int et = std::max(0, l.escape_time);
    const double g = 255.0 * std::pow(0.82, et);
    return {255, static_cast<std::uint8_t>(std::lround(g)), 0};
  }
  if (l.kind == FateKind::NonEscaping) return {0, 0, 0};
  if (l.kind == FateKind::DirectEscape) return {255, 255, 255};
  const std::uint64_t h = l.word_hash * 0x9e3779b97f4a7c15ull;
  return {static_cast<std::uint8_t>(40 + (h >> 8) % 200), static_cast<std::uint8_t>(40 + (h >> 24) % 200),
          static_cast<std::uint8_t>(40 + (h >> 40) % 200)};
}

/// Binary PPM (P6), top row first.
inline std::string encode_image(const RasterGrid& g, std::string_view palette = "classic") {
  const int res = g.spec.resolution;
  std::string out = "P6\n" + std::to_string(res) + " " + std::to_string(res) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + g.labels.size() * 3);
  std::size_t k = header;
  for (const PixelLabel& l : g.labels) {
    const Rgb c = pixel_colour(l, palette);
    out[k++] = static_cast<char>(c[0]);
    out[k++] = static_cast<char>(c[1]);
    out[k++] = static_cast<char>(c[2]);
  }
  return out;
}

inline nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json spec_json(const PlaneSpec& s) {
  nlohmann::json j;
  j["center"] = complex_json(s.center);
  j["width"] = s.width;
  j["resolution"] = s.resolution;
  j["maxIter"] = s.max_iter;
  j["rEscape"] = s.r_escape;
  j["planeKind"] = std::string(to_string(s.kind));
  j["a"] = complex_json(s.params.a);
  j["lambda"] = s.kind == PlaneKind::Dynamical ? complex_json(s.params.lambda) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json regions_json(const StructuralRegions& R) {
  nlohmann::json j;
  j["rEscape"] = R.r_escape;
  j["straightAnnulus"] = {R.annulus.r_in, R.annulus.r_out};
  j["t0Radius"] = R.t0_radius;
  j["t0Inradius"] = R.t0_inradius;
  j["a0Band"] = {R.a0_inner_min(), R.a0_outer_max()};
  j["astarRange"] = {R.astar_min(), R.astar_max()};
  j["d0Center"] = complex_json(R.d0_center);
  j["d0Radius"] = R.d0_radius;
  j["finalThreshold"] = R.final_threshold;
  return j;
}

inline nlohmann::json component_json(const ComponentStats& s) {
  nlohmann::json j;
  j["id"] = s.id;
  j["fate"] = s.failed ? std::string("precondition-failure") : std::string(to_string(s.kind));
  j["itinerary"] = s.itinerary();
  if (s.kind == FateKind::EscapeThroughT0) {
    const char tail = s.word.back();
    j["final"] = tail == 'D' ? "D0" : tail == 'T' ? "T0" : "A0";
    j["t0Entry"] = s.t0_entry;
  }
  j["areaPx"] = s.area_px;
  j["connectivity"] = s.connectivity;
  j["truncated"] = s.truncated;
  j["meanRadius"] = s.mean_radius;
  j["contains"] = s.contains;
  return j;
}

/// Metadata sidecar. Components below `min_area` pixels are counted but not listed.
inline nlohmann::json meta_json(const RasterGrid& g, const ComponentMap& cm, std::size_t min_area = 1) {
  nlohmann::json j;
  j["spec"] = spec_json(g.spec);
  j["engine"] = std::string(kEngineVersion);
  if (g.regions) j["regions"] = regions_json(*g.regions);
  nlohmann::json comps = nlohmann::json::array();
  std::size_t omitted = 0;
  for (const auto& s : cm.stats) {
    if (s.area_px < min_area) {
      ++omitted;
      continue;
    }
    comps.push_back(component_json(s));
  }
  j["components"] = std::move(comps);
  j["componentsOmitted"] = omitted;
  j["ambiguousPx"] = cm.ambiguous_px;
  std::size_t failed = 0;
  for (const auto& l : g.labels) failed += l.failed ? 1 : 0;
  j["failedPx"] = failed;
  return j;
}

inline std::string encode_meta(const RasterGrid& g, std::size_t min_area = 1) {
  return meta_json(g, label_components(g), min_area).dump(2) + "\n";
}

inline nlohmann::json fate_json(const OrbitFate& f) {
  nlohmann::json j;
  j["fate"] = std::string(to_string(f.kind));
  j["word"] = f.word();
  j["escapeTime"] = f.escape_time;
  if (f.kind == FateKind::EscapeThroughT0) {
    j["t0Entry"] = f.t0_entry;
    j["itinerary"] = f.itinerary;
    j["final"] = std::string(to_string(f.final_region));
    j["ambiguous"] = f.ambiguous;
  }
  if (!f.orbit.empty()) {
    nlohmann::json o = nlohmann::json::array();
    for (const Complex& z : f.orbit) o.push_back(complex_json(z));
    j["orbit"] = std::move(o);
  }
  return j;
}

inline nlohmann::json critical_json(const CriticalSet& cs) {
  auto list = [](const auto& zs) {
    nlohmann::json a = nlohmann::json::array();
    for (const Complex& z : zs) a.push_back(complex_json(z));
    return a;
  };
  return {{"c_plus", complex_json(cs.c_plus)},
          {"c_minus", complex_json(cs.c_minus)},
          {"ringCriticals", list(cs.ring_criticals)},
          {"ringZeros", list(cs.zeros_ring)},
          {"z0", complex_json(cs.z0)},
          {"poleFinite", complex_json(cs.pole_finite)},
          {"criticalCount", cs.critical_count()},
          {"zeroCount", cs.zero_count()},
          {"maxResidual", cs.max_residual()}};
}

inline void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::io_error, "cannot open " + path);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(Errc::io_error, "write failed for " + path);
}

}  // namespace blaschke
