#pragma once

#include <optional>
#include <string>
#include <variant>

#include "blaschke/core.hpp"

namespace blaschke {

/// Connectivity of a proper preimage U of V under a degree-k map with r
/// critical points in U (counted with multiplicity).
inline int riemann_hurwitz(int m_v, int k, int r) {
  if (m_v < 1) throw Error(Errc::invalid_params, "m_V: must be >= 1");
  if (k < 1) throw Error(Errc::invalid_params, "k: must be >= 1");
  if (r < 0) throw Error(Errc::invalid_params, "r: must be >= 0");
  return k * (m_v - 2) + r + 2;
}

/// An itinerary word over {0,1}, or the integer n standing for n zeros (A_n).
class Itinerary {
 public:
  Itinerary(int n) : bits_(static_cast<std::size_t>(n < 0 ? 0 : n), '0') {
    if (n < 0) throw Error(Errc::invalid_params, "itinerary: negative length");
  }
  Itinerary(std::string bits) : bits_(std::move(bits)) {
    for (char c : bits_)
      if (c != '0' && c != '1') throw Error(Errc::invalid_params, "itinerary: symbols must be 0 or 1");
  }
  Itinerary(const char* bits) : Itinerary(std::string(bits)) {}

  const std::string& bits() const noexcept { return bits_; }
  bool all_zero() const noexcept { return bits_.find('1') == std::string::npos; }
  /// Number of leading zeros.
  int leading_zeros() const noexcept {
    const auto p = bits_.find('1');
    return static_cast<int>(p == std::string::npos ? bits_.size() : p);
  }

 private:
  std::string bits_;
};

enum class Order { Precedes, Succeeds, Incomparable };

inline std::string_view to_string(Order o) noexcept {
  switch (o) {
    case Order::Precedes: return "precedes";
    case Order::Succeeds: return "succeeds";
    case Order::Incomparable: return "incomparable-by-this-rule";
  }
  return "";
}

/// The surrounding order on nested components: n < m gives A_n before A_m,
/// a word with no leading zero sits before A_0, and a word with n > 0
/// leading zeros sits strictly between A_{n-1} and A_n. Pairs decided only
/// through a chain of these rules are decided too; two different words with
/// the same number of leading zeros are left open.
inline Order itinerary_order(const Itinerary& x, const Itinerary& y) {
  // Place each word on a half-integer line: A_n at 2n, a word with n leading
  // zeros at 2n - 1.
  auto pos = [](const Itinerary& d) { return d.all_zero() ? 2 * static_cast<int>(d.bits().size()) : 2 * d.leading_zeros() - 1; };
  const int px = pos(x), py = pos(y);
  if (px < py) return Order::Precedes;
  if (px > py) return Order::Succeeds;
  return Order::Incomparable;
}

}  // namespace blaschke
