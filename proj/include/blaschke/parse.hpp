#pragma once

#include <charconv>
#include <string>
#include <string_view>

#include "blaschke/core.hpp"

namespace blaschke {

namespace detail {

inline bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty() || s.front() == '+') return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace detail

/// Parses "RE", "IMi" or "RE+IMi" / "RE-IMi", scientific notation allowed
/// ("-1.9e-6+3.15e-5i", "0.5i", "1e-6"). A bare "i" stands for 1i.
/// Throws invalid_params naming `field`.
inline Complex parse_complex(std::string_view text, std::string_view field = "value") {
  auto fail = [&]() -> Complex {
    throw Error(Errc::invalid_params, std::string(field) + ": cannot parse complex literal '" + std::string(text) + "'");
  };
  std::string_view s = text;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return fail();
  double re = 0.0, im = 0.0;
  if (s.back() != 'i') {
    if (!detail::parse_real(s, re)) return fail();
    return {re, 0.0};
  }
  s.remove_suffix(1);
  // split at the last sign that is not the leading one and not an exponent sign
  std::size_t split = std::string_view::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  std::string_view re_part = split == std::string_view::npos ? std::string_view{} : s.substr(0, split);
  std::string_view im_part = split == std::string_view::npos ? s : s.substr(split);
  if (!re_part.empty() && !detail::parse_real(re_part, re)) return fail();
  if (im_part.empty() || im_part == "+") im = 1.0;
  else if (im_part == "-") im = -1.0;
  else if (!detail::parse_real(im_part, im)) return fail();
  return {re, im};
}

/// Shortest round-trip text of z in the same grammar.
inline std::string format_complex(Complex z) {
  auto num = [](double v) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  };
  if (z.imag() == 0.0) return num(z.real());
  std::string im = num(z.imag());
  if (z.real() == 0.0) return im + "i";
  if (im.front() != '-') im = "+" + im;
  return num(z.real()) + im + "i";
}

}  // namespace blaschke
