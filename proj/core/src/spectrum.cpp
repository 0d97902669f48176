#include "qdspin/spectrum.hpp"

#include <cmath>
#include <stdexcept>

namespace qdspin {

void Spectrum::validate() const {
  if (x.size() != y.size()) {
    throw std::invalid_argument("Spectrum: x and y lengths differ");
  }
  if (!sigma.empty() && sigma.size() != x.size()) {
    throw std::invalid_argument("Spectrum: sigma length differs from x");
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("Spectrum: non-finite x");
  }
  if (x.size() >= 2) {
    const bool increasing = x[1] > x[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
      const bool step_up = x[i] > x[i - 1];
      if (step_up != increasing || x[i] == x[i - 1]) {
        throw std::invalid_argument("Spectrum: x must be strictly monotone");
      }
    }
  }
}

}  // namespace qdspin
