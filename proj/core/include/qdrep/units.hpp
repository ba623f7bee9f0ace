#pragma once

#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qdrep {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Bohr magneton over Planck constant, Hz/T (CODATA 2018).
inline constexpr double kBohrMagnetonOverH = 13.9962449361e9;

/// Error raised for malformed or out-of-range configuration input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical dimension of a configuration value; selects the accepted unit
/// suffixes. Frequencies cover both angular (rad/s) and ordinary (Hz) keys.
enum class Dimension {
  kDimensionless,
  kInteger,
  kFrequency,
  kTime,
  kLength,
  kSpeed,
  kField,
};

std::string_view dimension_name(Dimension dim);

/// Parses "<number> <unit>" or "2pi*<number> <unit>" (optionally quoted).
///
/// The stored value is number * unit_scale, times 2pi only when the `2pi*`
/// prefix is present. Dimensionless and integer values take no unit; every
/// other dimension requires one.
double parse_quantity(std::string_view text, Dimension dim);

/// Formats a value in base SI units such that parse_quantity returns the
/// identical double.
std::string format_quantity(double value, Dimension dim);

/// Converts a Gaussian full width at half maximum to a standard deviation.
double fwhm_to_sigma(double fwhm);

}  // namespace qdrep
