#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blaschke {

using Complex = std::complex<double>;

/// The point at infinity of the Riemann sphere. Both components are +inf,
/// which keeps it distinct from NaN and from any finite value.
inline Complex infinity() noexcept {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {inf, inf};
}

inline bool is_infinity(Complex z) noexcept {
  return std::isinf(z.real()) || std::isinf(z.imag());
}

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Distance below which a point is identified with a pole.
inline constexpr double kPoleTolerance = 1e-300;

enum class Errc {
  invalid_params,
  unconverged_root,
  no_convergence,
  derivative_vanished,
  seed_collision,
  precondition_failure,
  ambiguous_label,
  continuation_break,
  bracket_failure,
  no_sign_change,
  not_found,
  inconclusive,
  io_error,
};

inline std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_params: return "invalid-params";
    case Errc::unconverged_root: return "unconverged-root";
    case Errc::no_convergence: return "no-convergence";
    case Errc::derivative_vanished: return "derivative-vanished";
    case Errc::seed_collision: return "seed-collision";
    case Errc::precondition_failure: return "precondition-failure";
    case Errc::ambiguous_label: return "ambiguous-label";
    case Errc::continuation_break: return "continuation-break";
    case Errc::bracket_failure: return "bracket-failure";
    case Errc::no_sign_change: return "no-sign-change";
    case Errc::not_found: return "not-found";
    case Errc::inconclusive: return "inconclusive";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

/// Domain error carrying a machine-readable code. `detail` names the failing
/// field or check so the service layer can report it verbatim.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(std::move(detail)) {}

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

/// Lexicographic (re, im) ordering used wherever root sets are sorted.
inline bool lex_less(Complex x, Complex y) noexcept {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr std::string_view kEngineVersion = "blaschke-engine 1.0.0";

}  // namespace blaschke
