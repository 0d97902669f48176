#include "qdspin/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdspin {

PchipInterpolator::PchipInterpolator(std::vector<double> x,
                                     std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size() || x_.size() < 2) {
    throw std::invalid_argument("PchipInterpolator: need >= 2 matched knots");
  }
  for (std::size_t i = 1; i < x_.size(); ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw std::invalid_argument(
          "PchipInterpolator: x must be strictly increasing");
    }
  }

  const std::size_t n = x_.size();
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i < n - 1; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }

  slope_.assign(n, 0.0);
  // Interior knots: weighted harmonic mean of adjacent secants, zero at
  // local extrema (keeps the interpolant monotone).
  for (std::size_t i = 1; i < n - 1; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      slope_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  // One-sided endpoint formula with the standard monotonicity clamps.
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) {
      m = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(m) > 3.0 * std::abs(d0)) {
      m = 3.0 * d0;
    }
    return m;
  };
  if (n == 2) {
    slope_[0] = slope_[1] = d[0];
  } else {
    slope_[0] = endpoint(h[0], h[1], d[0], d[1]);
    slope_[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  }
}

double PchipInterpolator::operator()(double t) const {
  if (t < x_.front() || t > x_.back()) {
    throw std::domain_error("PchipInterpolator: argument outside knot range");
  }
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const std::size_t i =
      it == x_.end() ? x_.size() - 2 : std::size_t(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] +
         h11 * h * slope_[i + 1];
}

}  // namespace qdspin
