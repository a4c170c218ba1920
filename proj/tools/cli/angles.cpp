#include "cli/angles.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace crot::cli {

double parse_number(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    throw UsageError("not a number: '" + std::string(text) + "'");
  return v;
}

double parse_angle(std::string_view text) {
  if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
    const std::string_view coeff = text.substr(0, text.size() - 2);
    if (coeff.empty() || coeff == "+") return std::numbers::pi;
    if (coeff == "-") return -std::numbers::pi;
    return parse_number(coeff) * std::numbers::pi;
  }
  return parse_number(text);
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = i + 1 == count ? stop : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  return out;
}

GridSpec parse_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
    throw UsageError("grid must be start:stop:count, got '" + std::string(text) + "'");
  GridSpec g{parse_angle(text.substr(0, c1)), parse_angle(text.substr(c1 + 1, c2 - c1 - 1)), 0};
  const std::string_view n = text.substr(c2 + 1);
  const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), g.count);
  if (n.empty() || ec != std::errc() || ptr != n.data() + n.size())
    throw UsageError("grid count is not an integer: '" + std::string(n) + "'");
  if (g.count < 2) throw UsageError("grid count must be >= 2");
  return g;
}

}  // namespace crot::cli
