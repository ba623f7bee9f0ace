#include "qdrep/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qdrep {

MonotoneCubic::MonotoneCubic(std::span<const double> xs, std::span<const double> ys)
    : xs_(xs.begin(), xs.end()), ys_(ys.begin(), ys.end()) {
  if (xs_.size() != ys_.size() || xs_.size() < 2) {
    throw std::invalid_argument("MonotoneCubic: need at least two (x, y) pairs");
  }
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i] > xs_[i - 1])) throw std::invalid_argument("MonotoneCubic: x must increase");
  }

  const std::size_t n = xs_.size();
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    secant[i] = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
  }

  slopes_.assign(n, 0.0);
  slopes_[0] = secant[0];
  slopes_[n - 1] = secant[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (secant[i - 1] * secant[i] <= 0.0) {
      slopes_[i] = 0.0;
    } else {
      // Weighted harmonic mean (Fritsch-Butland form).
      const double h0 = xs_[i] - xs_[i - 1];
      const double h1 = xs_[i + 1] - xs_[i];
      const double w0 = 2.0 * h1 + h0;
      const double w1 = h1 + 2.0 * h0;
      slopes_[i] = (w0 + w1) / (w0 / secant[i - 1] + w1 / secant[i]);
    }
  }
  // Fritsch-Carlson limiter on the end slopes.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (secant[i] == 0.0) {
      slopes_[i] = slopes_[i + 1] = 0.0;
      continue;
    }
    const double a = slopes_[i] / secant[i];
    const double b = slopes_[i + 1] / secant[i];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      slopes_[i] = t * a * secant[i];
      slopes_[i + 1] = t * b * secant[i];
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  if (!(x >= xs_.front() && x <= xs_.back())) {
    throw std::out_of_range("MonotoneCubic: x = " + std::to_string(x) + " outside [" +
                            std::to_string(xs_.front()) + ", " + std::to_string(xs_.back()) + "]");
  }
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = it == xs_.end() ? xs_.size() - 2
                                  : static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double h = xs_[i + 1] - xs_[i];
  const double t = (x - xs_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * ys_[i] + h10 * h * slopes_[i] + h01 * ys_[i + 1] + h11 * h * slopes_[i + 1];
}

}  // namespace qdrep
