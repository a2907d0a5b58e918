#pragma once

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

#include "powerdist/extended_real.hpp"

namespace powerdist {

/// Formats a double as the shortest decimal string (at most 17 significant
/// digits) that parses back to the same bits. Locale-independent and fully
/// determined by the value, so emitted reports are byte-stable.
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_number(ExtendedReal v) { return format_number(v.value()); }

namespace detail {
inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}
}  // namespace detail

/// Locale-independent decimal parse (period radix only). Rejects anything
/// but a complete finite number.
inline double parse_real(std::string_view text) {
  std::string_view s = detail::trim(text);
  if (s.empty()) throw std::invalid_argument("empty numeric field");
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;  // from_chars does not accept '+'
  auto res = std::from_chars(first, last, v, std::chars_format::general);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::invalid_argument("not a number: '" + std::string(text) + "'");
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value: '" + std::string(text) + "'");
  return v;
}

/// Parses a real or one of the tokens "inf" / "+inf" / "-inf".
inline ExtendedReal parse_extended_real(std::string_view text) {
  std::string_view s = detail::trim(text);
  if (s == "inf" || s == "+inf") return ExtendedReal::infinity();
  if (s == "-inf") return ExtendedReal::neg_infinity();
  return ExtendedReal(parse_real(s));
}

inline bool looks_numeric(std::string_view text) {
  std::string_view s = detail::trim(text);
  if (s.empty()) return false;
  double v = 0.0;
  const char* first = s.data();
  if (s.front() == '+') ++first;
  auto res = std::from_chars(first, s.data() + s.size(), v, std::chars_format::general);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace powerdist
