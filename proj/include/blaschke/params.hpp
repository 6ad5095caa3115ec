#pragma once

#include <string>

#include "blaschke/core.hpp"

namespace blaschke {

enum class Family { PerturbedBlaschke, UnperturbedBlaschke, McMullen };

inline std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::PerturbedBlaschke: return "perturbed-blaschke";
    case Family::UnperturbedBlaschke: return "blaschke";
    case Family::McMullen: return "mcmullen";
  }
  return "unknown";
}

/// Parameters of one map of the three supported families:
///   PerturbedBlaschke    z^3 (z - a) / (1 - conj(a) z) + lambda / z^2
///   UnperturbedBlaschke  z^3 (z - a) / (1 - conj(a) z)
///   McMullen             z^n + lambda / z^d
struct MapParams {
  Family family = Family::PerturbedBlaschke;
  Complex a{0.5, 0.0};
  Complex lambda{0.0, 0.0};
  int n = 3;
  int d = 2;

  static MapParams perturbed(Complex a, Complex lambda) {
    return {Family::PerturbedBlaschke, a, lambda, 3, 2};
  }
  static MapParams unperturbed(Complex a) {
    return {Family::UnperturbedBlaschke, a, Complex{}, 3, 2};
  }
  static MapParams mcmullen(int n, int d, Complex lambda) {
    return {Family::McMullen, Complex{}, lambda, n, d};
  }

  bool is_blaschke() const noexcept { return family != Family::McMullen; }

  /// lambda as seen by the map; the unperturbed family ignores the field.
  Complex effective_lambda() const noexcept {
    return family == Family::UnperturbedBlaschke ? Complex{} : lambda;
  }

  /// Throws Error{invalid_params} naming the offending field.
  void validate() const {
    if (is_blaschke()) {
      if (!is_finite(a)) throw Error(Errc::invalid_params, "a: not finite");
      const double r = std::abs(a);
      if (!(r > 0.0 && r < 1.0)) throw Error(Errc::invalid_params, "a: must satisfy 0 < |a| < 1");
    } else {
      if (n < 2) throw Error(Errc::invalid_params, "n: must be >= 2");
      if (d < 1) throw Error(Errc::invalid_params, "d: must be >= 1");
    }
    if (family != Family::UnperturbedBlaschke) {
      if (!is_finite(lambda)) throw Error(Errc::invalid_params, "lambda: not finite");
      if (lambda == Complex{}) throw Error(Errc::invalid_params, "lambda: must be nonzero");
    }
  }
};

inline MapParams conj(const MapParams& p) {
  MapParams q = p;
  q.a = std::conj(p.a);
  q.lambda = std::conj(p.lambda);
  return q;
}

}  // namespace blaschke
