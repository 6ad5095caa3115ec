#pragma once

#include <string>
#include <vector>

#include "blaschke/regions.hpp"

namespace blaschke {

enum class FateKind { NonEscaping, DirectEscape, EscapeThroughT0 };

inline std::string_view to_string(FateKind k) noexcept {
  switch (k) {
    case FateKind::NonEscaping: return "non-escaping";
    case FateKind::DirectEscape: return "direct-escape";
    case FateKind::EscapeThroughT0: return "escape-through-t0";
  }
  return "unknown";
}

/// Component the orbit occupies one step before T0: A0 or D0 for an entry
/// time >= 1, T0 itself when the starting point already lies in T0.
enum class FinalRegion { None, T0, A0, D0 };

inline std::string_view to_string(FinalRegion r) noexcept {
  switch (r) {
    case FinalRegion::None: return "";
    case FinalRegion::T0: return "T0";
    case FinalRegion::A0: return "A0";
    case FinalRegion::D0: return "D0";
  }
  return "";
}

struct OrbitFate {
  FateKind kind = FateKind::NonEscaping;
  int escape_time = -1;
  int t0_entry = -1;
  std::string itinerary;  // '0' = outer annulus, '1' = inner annulus; length t0_entry - 1
  FinalRegion final_region = FinalRegion::None;
  bool ambiguous = false;
  std::vector<Complex> orbit;  // filled only on request

  /// Compact label: itinerary followed by 'A', 'D' or 'T'; "*" for direct
  /// escape and "~" for non-escaping orbits.
  std::string word() const {
    switch (kind) {
      case FateKind::DirectEscape: return "*";
      case FateKind::NonEscaping: return "~";
      case FateKind::EscapeThroughT0: break;
    }
    const char tail = final_region == FinalRegion::D0 ? 'D' : final_region == FinalRegion::T0 ? 'T' : 'A';
    return itinerary + tail;
  }

  bool same_label(const OrbitFate& o) const {
    return kind == o.kind && escape_time == o.escape_time && t0_entry == o.t0_entry &&
           itinerary == o.itinerary && final_region == o.final_region;
  }
};

/// Word of the nested annulus A_n: n zeros then the A0 marker.
inline std::string annulus_word(int n) { return std::string(static_cast<std::size_t>(n), '0') + "A"; }

/// The T0 visit is the last time the orbit is inside the proxy disk: T0 lies
/// in that disk, the disk misses A*(inf), and every later iterate is in A*.
/// Symbols before the visit are read off against the straight annulus, which
/// lies in A0 and therefore separates the inner from the outer annulus.
inline OrbitFate classify_orbit(Complex z, const MapEvaluator& f, const StructuralRegions& R, int max_iter,
                                bool keep_orbit = false) {
  OrbitFate out;
  const OrbitTrace t =
      trace_orbit(f, z, R.t0_radius, R.r_escape, max_iter, keep_orbit ? &out.orbit : nullptr);
  if (!t.escaped) return out;
  out.escape_time = t.escape_time;
  if (t.last_disk_visit < 0) {
    out.kind = FateKind::DirectEscape;
    return out;
  }
  out.kind = FateKind::EscapeThroughT0;
  const int m = t.last_disk_visit;
  out.t0_entry = m;
  if (m == 0) {
    out.final_region = FinalRegion::T0;
    return out;
  }
  out.itinerary.reserve(static_cast<std::size_t>(m - 1));
  const double mid2 = R.annulus.r_mid * R.annulus.r_mid;
  const double in2 = R.annulus.r_in * R.annulus.r_in;
  const double out2 = R.annulus.r_out * R.annulus.r_out;
  Complex w = z;
  for (int k = 0; k < m - 1; ++k) {
    const double m2 = std::norm(w);
    if (m2 >= in2 && m2 <= out2) out.ambiguous = true;
    out.itinerary.push_back(m2 < mid2 ? '1' : '0');
    w = f(w);
  }
  out.final_region = std::abs(w) > R.final_threshold ? FinalRegion::D0 : FinalRegion::A0;
  return out;
}

inline OrbitFate classify_orbit(Complex z, const MapParams& p, const StructuralRegions& R, int max_iter,
                                bool keep_orbit = false) {
  p.validate();
  if (p.a != R.a || p.lambda != R.lambda)
    throw Error(Errc::invalid_params, "regions: computed for different parameters");
  return classify_orbit(z, MapEvaluator(p), R, max_iter, keep_orbit);
}

}  // namespace blaschke
