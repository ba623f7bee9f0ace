#pragma once

#include <span>
#include <vector>

namespace qdrep {

/// Piecewise cubic Hermite interpolant with Fritsch-Carlson slopes.
/// Preserves monotonicity of the data; refuses to extrapolate.
class MonotoneCubic {
 public:
  MonotoneCubic(std::span<const double> xs, std::span<const double> ys);

  double operator()(double x) const;

  double min_x() const { return xs_.front(); }
  double max_x() const { return xs_.back(); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> slopes_;
};

}  // namespace qdrep
