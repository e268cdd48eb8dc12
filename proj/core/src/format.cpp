#include "eegsz/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <system_error>

namespace eegsz {

namespace {

std::string to_chars_string(double value, std::chars_format fmt) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value, fmt);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

}  // namespace

std::string format_double(double value) {
  if (value == 0.0) return "0";  // drops the sign of -0
  return to_chars_string(value, std::chars_format::general);
}

std::string format_scientific(double value) {
  if (value == 0.0) return "0e+00";
  return to_chars_string(value, std::chars_format::scientific);
}

std::string format_from_log(double log_value) {
  if (std::isnan(log_value)) return "nan";
  if (log_value == -std::numeric_limits<double>::infinity()) return "0e+00";
  const double direct = std::exp(log_value);
  if (direct >= std::numeric_limits<double>::min()) return format_scientific(direct);

  // Subnormal or underflowed: split log10 into exponent and mantissa.
  const double log10_value = log_value / std::log(10.0);
  double exponent = std::floor(log10_value);
  double mantissa = std::pow(10.0, log10_value - exponent);
  if (mantissa >= 9.9999995) {
    mantissa = 1.0;
    exponent += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6fe%+04.0f", mantissa, exponent);
  return buf;
}

}  // namespace eegsz
