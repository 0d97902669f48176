#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qdspin {

struct SpectrumMeta {
  std::string x_label;
  std::string x_unit;
  std::string y_label;
  std::string y_unit;
  std::string provenance;  ///< free-form note on how the data was produced
};

/// Sampled (x, y[, sigma]) curve. x must be strictly monotone; sigma is
/// either empty or one entry per point.
struct Spectrum {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sigma;
  SpectrumMeta meta;

  std::size_t size() const { return x.size(); }
  bool has_sigma() const { return !sigma.empty(); }
  void validate() const;
};

}  // namespace qdspin
