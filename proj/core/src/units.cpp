#include "qdrep/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

namespace qdrep {
namespace {

struct UnitScale {
  std::string_view suffix;
  double scale;
};

constexpr std::array kFrequencyUnits{
    UnitScale{"Hz", 1.0},   UnitScale{"kHz", 1e3},  UnitScale{"MHz", 1e6},
    UnitScale{"GHz", 1e9},  UnitScale{"rad/s", 1.0}, UnitScale{"1/s", 1.0},
};
constexpr std::array kTimeUnits{
    UnitScale{"s", 1.0},    UnitScale{"ms", 1e-3}, UnitScale{"us", 1e-6},
    UnitScale{"ns", 1e-9},  UnitScale{"ps", 1e-12},
};
constexpr std::array kLengthUnits{UnitScale{"m", 1.0}, UnitScale{"km", 1e3}};
constexpr std::array kSpeedUnits{UnitScale{"m/s", 1.0}, UnitScale{"km/s", 1e3}};
constexpr std::array kFieldUnits{UnitScale{"T", 1.0}, UnitScale{"mT", 1e-3}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template <std::size_t N>
bool lookup(const std::array<UnitScale, N>& table, std::string_view unit, double& scale) {
  for (const auto& u : table) {
    if (u.suffix == unit) {
      scale = u.scale;
      return true;
    }
  }
  return false;
}

bool unit_scale(Dimension dim, std::string_view unit, double& scale) {
  switch (dim) {
    case Dimension::kFrequency: return lookup(kFrequencyUnits, unit, scale);
    case Dimension::kTime: return lookup(kTimeUnits, unit, scale);
    case Dimension::kLength: return lookup(kLengthUnits, unit, scale);
    case Dimension::kSpeed: return lookup(kSpeedUnits, unit, scale);
    case Dimension::kField: return lookup(kFieldUnits, unit, scale);
    case Dimension::kDimensionless:
    case Dimension::kInteger: return false;
  }
  return false;
}

std::string_view base_unit(Dimension dim) {
  switch (dim) {
    case Dimension::kFrequency: return "rad/s";
    case Dimension::kTime: return "s";
    case Dimension::kLength: return "m";
    case Dimension::kSpeed: return "m/s";
    case Dimension::kField: return "T";
    default: return "";
  }
}

}  // namespace

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::kDimensionless: return "dimensionless";
    case Dimension::kInteger: return "integer";
    case Dimension::kFrequency: return "frequency";
    case Dimension::kTime: return "time";
    case Dimension::kLength: return "length";
    case Dimension::kSpeed: return "speed";
    case Dimension::kField: return "magnetic field";
  }
  return "unknown";
}

double parse_quantity(std::string_view text, Dimension dim) {
  const std::string original(text);
  text = trim(text);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    text = trim(text.substr(1, text.size() - 2));
  }
  if (text.empty()) throw ConfigError("empty value");

  bool two_pi = false;
  if (text.starts_with("2pi")) {
    text = trim(text.substr(3));
    if (text.empty() || text.front() != '*') {
      throw ConfigError("expected '*' after 2pi in '" + original + "'");
    }
    text = trim(text.substr(1));
    two_pi = true;
  }

  double number = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, number);
  if (ec != std::errc{}) throw ConfigError("cannot parse number in '" + original + "'");
  const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(last - ptr)));

  if (dim == Dimension::kDimensionless || dim == Dimension::kInteger) {
    if (!unit.empty()) {
      throw ConfigError("unexpected unit '" + std::string(unit) + "' on " +
                        std::string(dimension_name(dim)) + " value '" + original + "'");
    }
    if (dim == Dimension::kInteger && (two_pi || number != std::floor(number))) {
      throw ConfigError("expected an integer, got '" + original + "'");
    }
    return two_pi ? kTwoPi * number : number;
  }

  if (unit.empty()) {
    throw ConfigError("missing unit suffix on " + std::string(dimension_name(dim)) +
                      " value '" + original + "'");
  }
  double scale = 1.0;
  if (!unit_scale(dim, unit, scale)) {
    throw ConfigError("unknown " + std::string(dimension_name(dim)) + " unit '" +
                      std::string(unit) + "' in '" + original + "'");
  }
  const double value = number * scale;
  return two_pi ? kTwoPi * value : value;
}

std::string format_quantity(double value, Dimension dim) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string out(buf.data(), ptr);
  if (dim == Dimension::kInteger || dim == Dimension::kDimensionless) return out;
  out += ' ';
  out += base_unit(dim);
  return out;
}

double fwhm_to_sigma(double fwhm) {
  if (fwhm < 0.0) throw std::invalid_argument("fwhm_to_sigma: negative width");
  return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

}  // namespace qdrep
