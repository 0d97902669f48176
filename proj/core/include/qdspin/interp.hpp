#pragma once

#include <vector>

namespace qdspin {

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolation. Preserves the
/// monotonicity of the data between knots and never overshoots. Evaluation
/// outside the knot range throws std::domain_error (no extrapolation).
class PchipInterpolator {
 public:
  PchipInterpolator(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> slope_;  // endpoint derivatives per knot
};

}  // namespace qdspin
