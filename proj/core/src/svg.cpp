#include "qdspin/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qdspin {
namespace {

constexpr double kWidth = 640.0, kHeight = 440.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 36.0, kBottom = 52.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round tick spacing to 1/2/5 times a power of ten.
std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  std::vector<double> ticks;
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  const double first = std::ceil(lo / step) * step;
  for (double t = first; t <= hi + 0.5 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)) {}

void SvgPlot::add_line(const std::vector<double>& x,
                       const std::vector<double>& y, const std::string& label,
                       const std::string& color) {
  series_.push_back({Series::Kind::Line, x, y, {}, label, color});
}

void SvgPlot::add_markers(const std::vector<double>& x,
                          const std::vector<double>& y,
                          const std::string& label, const std::string& color) {
  series_.push_back({Series::Kind::Markers, x, y, {}, label, color});
}

void SvgPlot::add_error_bars(const std::vector<double>& x,
                             const std::vector<double>& y,
                             const std::vector<double>& yerr,
                             const std::string& label,
                             const std::string& color) {
  series_.push_back({Series::Kind::ErrorBars, x, y, yerr, label, color});
}

std::string SvgPlot::render() const {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const Series& s : series_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      const double err = s.yerr.empty() ? 0.0 : s.yerr[i];
      y_lo = std::min(y_lo, s.y[i] - err);
      y_hi = std::max(y_hi, s.y[i] + err);
    }
  }
  if (!std::isfinite(x_lo)) {
    x_lo = 0.0;
    x_hi = 1.0;
  }
  if (!std::isfinite(y_lo)) {
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) {
    return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h;
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
     << kHeight << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
     << "font-family=\"sans-serif\" font-size=\"14\">" << escape(title_)
     << "</text>\n";

  // Axes, ticks, grid.
  os << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
  for (double t : nice_ticks(x_lo, x_hi)) {
    const double x = px(t);
    os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
       << fmt(x) << "\" y2=\"" << fmt(kHeight - kBottom)
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kHeight - kBottom + 16)
       << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double t : nice_ticks(y_lo, y_hi)) {
    const double y = py(t);
    os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(y) << "\" x2=\""
       << fmt(kWidth - kRight) << "\" y2=\"" << fmt(y)
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(y + 4)
       << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
  }
  os << "</g>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
     << "\" height=\"" << plot_h
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\">"
     << escape(x_label_) << "</text>\n";
  os << "<text x=\"16\" y=\"" << kHeight / 2
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "font-size=\"12\" transform=\"rotate(-90 16 "
     << kHeight / 2 << ")\">" << escape(y_label_) << "</text>\n";

  // Series.
  for (const Series& s : series_) {
    if (s.kind == Series::Kind::Line) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        os << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i]))
           << (i + 1 < s.x.size() ? " " : "");
      }
      os << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (s.kind == Series::Kind::ErrorBars) {
          const double e = s.yerr[i];
          os << "<line x1=\"" << fmt(px(s.x[i])) << "\" y1=\""
             << fmt(py(s.y[i] - e)) << "\" x2=\"" << fmt(px(s.x[i]))
             << "\" y2=\"" << fmt(py(s.y[i] + e)) << "\" stroke=\"" << s.color
             << "\"/>\n";
        }
        os << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\""
           << fmt(py(s.y[i])) << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
      }
    }
  }

  // Legend.
  double ly = kTop + 8.0;
  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (const Series& s : series_) {
    if (s.label.empty()) continue;
    os << "<rect x=\"" << kLeft + 10 << "\" y=\"" << fmt(ly - 8)
       << "\" width=\"14\" height=\"3\" fill=\"" << s.color << "\"/>\n";
    os << "<text x=\"" << kLeft + 30 << "\" y=\"" << fmt(ly - 2) << "\">"
       << escape(s.label) << "</text>\n";
    ly += 16.0;
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace qdspin
