#include "satseek/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace satseek {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void absorb(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-300) {
      lo -= 0.5;
      hi += 0.5;
    } else {
      const double margin = 0.04 * (hi - lo);
      lo -= margin;
      hi += margin;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
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

std::vector<double> tick_positions(double lo, double hi, int target = 6) {
  const double span = hi - lo;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
    ticks.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  }
  return ticks;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::vector<PlotSeries>& series,
                    const PlotOptions& options) {
  const auto transform = [&](double v, bool log_scale) {
    return log_scale ? std::log10(v) : v;
  };

  Range xr, yr;
  for (const PlotSeries& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("series size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = transform(s.x[i], options.log_x);
      const double y = transform(s.y[i], options.log_y);
      if (std::isfinite(x) && std::isfinite(y)) {
        xr.absorb(x);
        yr.absorb(y);
      }
    }
  }
  xr.pad();
  yr.pad();

  const double ml = 64, mr = 16, mt = options.title.empty() ? 16 : 36, mb = 46;
  const double pw = options.width - ml - mr;
  const double ph = options.height - mt - mb;
  const auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
      << options.height << "\" viewBox=\"0 0 " << options.width << " " << options.height
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    out << "<text x=\"" << options.width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape_xml(options.title)
        << "</text>\n";
  }

  // Axes box and ticks.
  out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : tick_positions(xr.lo, xr.hi)) {
    const double x = px(t);
    out << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
        << mt + ph + 5 << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << (options.log_x ? "1e" + fmt(t) : fmt(t)) << "</text>\n";
  }
  for (double t : tick_positions(yr.lo, yr.hi)) {
    const double y = py(t);
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
        << "\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << (options.log_y ? "1e" + fmt(t) : fmt(t)) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << options.height - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape_xml(options.x_label) << "</text>\n";
  out << "<text x=\"14\" y=\"" << mt + ph / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">" << escape_xml(options.y_label)
      << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const std::size_t stride = std::max<std::size_t>(1, s.x.size() / options.max_points);
    out << "<polyline fill=\"none\" stroke=\"" << kPalette[si % 8]
        << "\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); i += stride) {
      const double x = transform(s.x[i], options.log_x);
      const double y = transform(s.y[i], options.log_y);
      if (std::isfinite(x) && std::isfinite(y)) {
        out << fmt(px(x)) << "," << fmt(py(y)) << " ";
      }
    }
    out << "\"/>\n";
    out << "<text x=\"" << ml + pw - 8 << "\" y=\"" << mt + 16 + 15 * static_cast<double>(si)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
        << kPalette[si % 8] << "\">" << escape_xml(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace satseek
