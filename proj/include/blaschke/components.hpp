#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "blaschke/raster.hpp"

namespace blaschke {

/// A point of interest checked against each component (c_-, 0, z0, ...).
struct Marker {
  std::string name;
  Complex z;
};

struct ComponentStats {
  int id = 0;
  FateKind kind = FateKind::NonEscaping;
  bool failed = false;
  int t0_entry = -1;
  std::string word;
  std::size_t area_px = 0;
  int holes = 0;
  int connectivity = 1;  // 1 + holes
  bool truncated = false;
  double mean_radius = 0.0;  // mean |z| over the pixel centres
  int i0 = 0, j0 = 0, i1 = 0, j1 = 0;  // inclusive bounding box
  int seed_i = 0, seed_j = 0;
  std::vector<std::string> contains;

  /// Itinerary without the final marker, or the word itself for the other classes.
  std::string itinerary() const {
    if (kind != FateKind::EscapeThroughT0 || word.empty()) return word;
    return word.substr(0, word.size() - 1);
  }
};

/// Per-pixel component ids (-1 for excluded ambiguous pixels) plus stats.
struct ComponentMap {
  int resolution = 0;
  std::vector<std::int32_t> id;
  std::vector<ComponentStats> stats;
  std::size_t ambiguous_px = 0;

  std::int32_t at(int i, int j) const { return id[static_cast<std::size_t>(i) * resolution + j]; }
};

namespace detail {

inline constexpr std::array<std::pair<int, int>, 4> kN4{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
inline constexpr std::array<std::pair<int, int>, 8> kN8{
    {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};

/// Complement of a component inside its bounding box grown by one pixel.
/// Cells: 1 = component, 0 = complement not yet visited, 2+ = hole index + 2,
/// -1 = complement connected to the frame.
struct HoleMap {
  int i0 = 0, j0 = 0, h = 0, w = 0;
  std::vector<std::int32_t> cell;
  int holes = 0;

  std::int32_t& at(int i, int j) { return cell[static_cast<std::size_t>(i - i0) * w + (j - j0)]; }
  bool inside(int i, int j) const { return i >= i0 && i < i0 + h && j >= j0 && j < j0 + w; }
};

/// Complement regions are 8-connected (the set itself is 4-connected), so a
/// diagonal gap in the set's wall does not seal off a hole.
inline HoleMap hole_map(const ComponentMap& cm, const ComponentStats& s) {
  HoleMap m;
  m.i0 = s.i0 - 1;
  m.j0 = s.j0 - 1;
  m.h = s.i1 - s.i0 + 3;
  m.w = s.j1 - s.j0 + 3;
  m.cell.assign(static_cast<std::size_t>(m.h) * m.w, 0);
  for (int i = s.i0; i <= s.i1; ++i)
    for (int j = s.j0; j <= s.j1; ++j)
      if (cm.at(i, j) == s.id) m.at(i, j) = 1;
  std::vector<std::pair<int, int>> stack;
  auto fill = [&](int si, int sj, std::int32_t value) {
    m.at(si, sj) = value;
    stack.push_back({si, sj});
    while (!stack.empty()) {
      auto [ci, cj] = stack.back();
      stack.pop_back();
      for (auto [di, dj] : kN8) {
        const int ni = ci + di, nj = cj + dj;
        if (!m.inside(ni, nj) || m.at(ni, nj) != 0) continue;
        m.at(ni, nj) = value;
        stack.push_back({ni, nj});
      }
    }
  };
  fill(m.i0, m.j0, -1);  // the frame ring is complement and connected
  for (int i = m.i0; i < m.i0 + m.h; ++i)
    for (int j = m.j0; j < m.j0 + m.w; ++j)
      if (m.at(i, j) == 0) fill(i, j, 2 + m.holes++);
  return m;
}

}  // namespace detail

/// Groups pixels of equal class into 4-connected components and counts the
/// holes of each. Components touching the viewport edge are flagged truncated.
inline ComponentMap label_components(const RasterGrid& g, const std::vector<Marker>& markers = {}) {
  const int res = g.spec.resolution;
  ComponentMap cm;
  cm.resolution = res;
  cm.id.assign(static_cast<std::size_t>(res) * res, -1);
  std::vector<std::pair<int, int>> stack;
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * res + j;
      const PixelLabel& l = g.labels[idx];
      if (l.ambiguous) {
        ++cm.ambiguous_px;
        continue;
      }
      if (cm.id[idx] != -1) continue;
      ComponentStats s;
      s.id = static_cast<int>(cm.stats.size());
      s.kind = l.kind;
      s.failed = l.failed;
      s.t0_entry = l.t0_entry;
      s.word = g.word_of(l);
      s.i0 = s.i1 = s.seed_i = i;
      s.j0 = s.j1 = s.seed_j = j;
      double rsum = 0.0;
      cm.id[idx] = s.id;
      stack.push_back({i, j});
      while (!stack.empty()) {
        auto [ci, cj] = stack.back();
        stack.pop_back();
        ++s.area_px;
        rsum += std::abs(g.spec.pixel_center(ci, cj));
        s.i0 = std::min(s.i0, ci);
        s.i1 = std::max(s.i1, ci);
        s.j0 = std::min(s.j0, cj);
        s.j1 = std::max(s.j1, cj);
        for (auto [di, dj] : detail::kN4) {
          const int ni = ci + di, nj = cj + dj;
          if (ni < 0 || nj < 0 || ni >= res || nj >= res) continue;
          const std::size_t nidx = static_cast<std::size_t>(ni) * res + nj;
          const PixelLabel& nl = g.labels[nidx];
          if (cm.id[nidx] != -1 || nl.ambiguous || !nl.same_class(l)) continue;
          cm.id[nidx] = s.id;
          stack.push_back({ni, nj});
        }
      }
      s.mean_radius = rsum / static_cast<double>(s.area_px);
      s.truncated = s.i0 == 0 || s.j0 == 0 || s.i1 == res - 1 || s.j1 == res - 1;
      cm.stats.push_back(std::move(s));
    }
  for (ComponentStats& s : cm.stats) {
    if (s.area_px == 1) continue;
    s.holes = detail::hole_map(cm, s).holes;
    s.connectivity = 1 + s.holes;
  }
  for (const Marker& mk : markers) {
    const auto px = g.spec.pixel_of(mk.z);
    if (!px) continue;
    const std::int32_t c = cm.at(px->first, px->second);
    if (c >= 0) cm.stats[static_cast<std::size_t>(c)].contains.push_back(mk.name);
  }
  return cm;
}

/// Component id at the pixel containing z, or -1.
inline int component_at(const RasterGrid& g, const ComponentMap& cm, Complex z) {
  const auto px = g.spec.pixel_of(z);
  if (!px) return -1;
  return cm.at(px->first, px->second);
}

/// True when the pixel of z lies in a hole of component `id`.
inline bool surrounds(const RasterGrid& g, const ComponentMap& cm, int id, Complex z) {
  const auto px = g.spec.pixel_of(z);
  if (!px) return false;
  const ComponentStats& s = cm.stats[static_cast<std::size_t>(id)];
  if (s.holes == 0) return false;
  auto m = detail::hole_map(cm, s);
  if (!m.inside(px->first, px->second)) return false;
  return m.at(px->first, px->second) >= 2;
}

/// Components whose class matches `word`, largest first.
inline std::vector<int> components_with_word(const ComponentMap& cm, const std::string& word) {
  std::vector<int> out;
  for (const auto& s : cm.stats)
    if (s.word == word) out.push_back(s.id);
  std::stable_sort(out.begin(), out.end(), [&](int x, int y) {
    return cm.stats[static_cast<std::size_t>(x)].area_px > cm.stats[static_cast<std::size_t>(y)].area_px;
  });
  return out;
}

enum class RayVote { Inside, Outside, Inconclusive };

struct RayResult {
  int hits = 0;
  int rays = 8;
  RayVote vote = RayVote::Outside;
};

/// Casts 8 pixel rays from z to the viewport edge; a ray hits when it meets a
/// pixel whose word equals `target`. Majority decides; 4-4 is inconclusive.
inline RayResult ray_vote(const RasterGrid& g, Complex z, const std::string& target) {
  const auto px = g.spec.pixel_of(z);
  if (!px) throw Error(Errc::invalid_params, "z: outside the viewport");
  const std::uint64_t h = fnv1a(target);
  const int res = g.spec.resolution;
  RayResult r;
  for (auto [di, dj] : detail::kN8) {
    int i = px->first, j = px->second;
    bool hit = false;
    while (i >= 0 && j >= 0 && i < res && j < res) {
      const PixelLabel& l = g.at(i, j);
      if (!l.failed && l.word_hash == h) {
        hit = true;
        break;
      }
      i += di;
      j += dj;
    }
    r.hits += hit ? 1 : 0;
  }
  r.vote = r.hits > 4 ? RayVote::Inside : r.hits < 4 ? RayVote::Outside : RayVote::Inconclusive;
  return r;
}

inline bool ray_containment(const RasterGrid& g, Complex z, const std::string& target) {
  const RayResult r = ray_vote(g, z, target);
  if (r.vote == RayVote::Inconclusive) throw Error(Errc::inconclusive, "ray vote split 4-4");
  return r.vote == RayVote::Inside;
}

}  // namespace blaschke
