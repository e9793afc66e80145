#include "ambivox/radar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "ambivox/error.hpp"

namespace ambivox {
namespace {

constexpr double kCanvas = 800.0;
constexpr double kCentre = 400.0;
constexpr double kOuterRadius = 320.0;
constexpr double kMinExtent = 1.25;
constexpr std::array<const char*, 8> kPalette = {
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  return s == "-0.00" ? "0.00" : s;
}

struct Point {
  double x;
  double y;
};

Point polar(double radius, std::size_t axis, std::size_t count) {
  const double theta = 2.0 * std::numbers::pi * static_cast<double>(axis) / static_cast<double>(count);
  return {kCentre + radius * std::sin(theta), kCentre - radius * std::cos(theta)};
}

}  // namespace

RadarSpec build_radar_spec(const std::vector<AmbienceProfile>& profiles, const AmbienceProfile& baseline,
                           const std::vector<Feature>& axes) {
  if (axes.size() < 3) throw InvalidInput("a radar chart needs at least 3 axes");
  std::vector<double> base;
  for (Feature f : axes) {
    const auto& m = baseline.aggregate(f).mean;
    if (!m || *m == 0.0) {
      throw InvalidInput("baseline has no nonzero value for " + std::string(feature_name(f)));
    }
    base.push_back(*m);
  }
  RadarSpec spec;
  spec.axes = axes;
  for (const auto& p : profiles) {
    RadarSpec::Series s;
    s.label = std::string(to_string(p.ambience));
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const auto& m = p.aggregate(axes[i]).mean;
      if (!m) {
        throw InvalidInput("profile " + s.label + " has no value for " + std::string(feature_name(axes[i])));
      }
      const double ratio = *m / base[i];
      if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw InvalidInput("profile " + s.label + " has a non-positive ratio on " +
                           std::string(feature_name(axes[i])));
      }
      s.values.push_back(ratio);
    }
    spec.series.push_back(std::move(s));
  }
  return spec;
}

std::string render_radar_svg(const RadarSpec& spec) {
  const std::size_t m = spec.axes.size();
  double extent = kMinExtent;
  for (const auto& s : spec.series) {
    if (s.values.size() != m) throw InvalidInput("radar series " + s.label + " has the wrong axis count");
    for (double v : s.values) extent = std::max(extent, v);
  }
  const double scale = kOuterRadius / extent;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kCanvas << "\" height=\""
      << kCanvas << "\" viewBox=\"0 0 " << kCanvas << ' ' << kCanvas << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << kCanvas << "\" height=\"" << kCanvas << "\" fill=\"#ffffff\"/>\n";

  out << "  <g id=\"axes\" stroke=\"#999999\" stroke-width=\"1\">\n";
  for (std::size_t i = 0; i < m; ++i) {
    const Point p = polar(kOuterRadius, i, m);
    out << "    <line x1=\"" << fixed(kCentre) << "\" y1=\"" << fixed(kCentre) << "\" x2=\"" << fixed(p.x)
        << "\" y2=\"" << fixed(p.y) << "\"/>\n";
  }
  out << "  </g>\n";

  out << "  <circle id=\"baseline\" cx=\"" << fixed(kCentre) << "\" cy=\"" << fixed(kCentre) << "\" r=\""
      << fixed(scale * RadarSpec::kBaselineRing)
      << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\" stroke-dasharray=\"4 4\"/>\n";

  out << "  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#222222\">\n";
  for (std::size_t i = 0; i < m; ++i) {
    const Point p = polar(kOuterRadius + 24.0, i, m);
    const double dx = p.x - kCentre;
    const char* anchor = std::fabs(dx) < 1e-6 ? "middle" : (dx > 0 ? "start" : "end");
    out << "    <text x=\"" << fixed(p.x) << "\" y=\"" << fixed(p.y) << "\" text-anchor=\"" << anchor
        << "\" dominant-baseline=\"middle\">" << xml_escape(feature_name(spec.axes[i])) << "</text>\n";
  }
  out << "  </g>\n";

  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& series = spec.series[s];
    const char* colour = kPalette[s % kPalette.size()];
    out << "  <polygon class=\"series\" data-label=\"" << xml_escape(series.label) << "\" points=\"";
    for (std::size_t i = 0; i < m; ++i) {
      const Point p = polar(scale * series.values[i], i, m);
      out << (i ? " " : "") << fixed(p.x) << ',' << fixed(p.y);
    }
    out << "\" fill=\"" << colour << "\" fill-opacity=\"0.15\" stroke=\"" << colour
        << "\" stroke-width=\"2\"/>\n";
  }

  out << "  <g id=\"legend\" font-family=\"sans-serif\" font-size=\"13\">\n";
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const double y = 24.0 + 20.0 * static_cast<double>(s);
    const char* colour = kPalette[s % kPalette.size()];
    out << "    <rect x=\"16.00\" y=\"" << fixed(y - 10.0) << "\" width=\"12.00\" height=\"12.00\" fill=\"" << colour
        << "\"/>\n"
        << "    <text x=\"34.00\" y=\"" << fixed(y) << "\">" << xml_escape(spec.series[s].label) << "</text>\n";
  }
  out << "    <text x=\"16.00\" y=\"" << fixed(24.0 + 20.0 * static_cast<double>(spec.series.size()))
      << "\">baseline (dotted ring)</text>\n";
  out << "  </g>\n";
  out << "</svg>\n";
  return out.str();
}

std::string radar_svg(const std::vector<AmbienceProfile>& profiles, const AmbienceProfile& baseline,
                      const std::vector<Feature>& axes) {
  return render_radar_svg(build_radar_spec(profiles, baseline, axes));
}

}  // namespace ambivox
