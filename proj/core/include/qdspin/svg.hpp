#pragma once

#include <string>
#include <vector>

namespace qdspin {

/// Minimal self-contained vector-graphic line/marker plot: autoscaled axes
/// with tick labels, polylines, markers and error bars. Output is
/// deterministic (fixed precision, no timestamps).
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label);

  void add_line(const std::vector<double>& x, const std::vector<double>& y,
                const std::string& label, const std::string& color);
  void add_markers(const std::vector<double>& x, const std::vector<double>& y,
                   const std::string& label, const std::string& color);
  void add_error_bars(const std::vector<double>& x,
                      const std::vector<double>& y,
                      const std::vector<double>& yerr,
                      const std::string& label, const std::string& color);

  std::string render() const;

 private:
  struct Series {
    enum class Kind { Line, Markers, ErrorBars } kind;
    std::vector<double> x, y, yerr;
    std::string label, color;
  };

  std::string title_, x_label_, y_label_;
  std::vector<Series> series_;
};

}  // namespace qdspin
