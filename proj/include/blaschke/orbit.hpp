#pragma once

#include <vector>

#include "blaschke/map.hpp"

namespace blaschke {

inline constexpr double kDefaultEscapeRadius = 10.0;

/// Raw outcome of iterating one point: when (if) it left the escape disk and
/// the last time it was seen inside the small disk around the pole at 0.
struct OrbitTrace {
  bool escaped = false;
  int escape_time = -1;
  int last_disk_visit = -1;
};

/// Iterates z_{n+1} = f(z_n) for n <= max_iter. The escape test runs before
/// the disk test so an escaping point is never counted as a disk visit.
inline OrbitTrace trace_orbit(const MapEvaluator& f, Complex z, double r_disk, double r_escape,
                              int max_iter, std::vector<Complex>* cache = nullptr) {
  OrbitTrace t;
  const double esc2 = r_escape * r_escape;
  const double disk2 = r_disk * r_disk;
  for (int n = 0; n <= max_iter; ++n) {
    if (cache) cache->push_back(z);
    const double m2 = std::norm(z);
    if (!(m2 <= esc2)) {
      t.escaped = true;
      t.escape_time = n;
      return t;
    }
    if (m2 < disk2) t.last_disk_visit = n;
    z = f(z);
  }
  return t;
}

}  // namespace blaschke
