#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crot::cli {

/// Bad command-line input; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Radians ("0.7853") or multiples of pi ("0.25pi", "pi", "-pi").
double parse_angle(std::string_view text);

/// Strict decimal parse of the whole string.
double parse_number(std::string_view text);

/// %.12g
std::string format_number(double v);

struct GridSpec {
  double start;
  double stop;
  std::size_t count;

  std::vector<double> values() const;
};

/// "start:stop:count" with angle endpoints and count >= 2.
GridSpec parse_grid(std::string_view text);

}  // namespace crot::cli
