#pragma once

#include <string>
#include <vector>

#include "ambivox/features.hpp"
#include "ambivox/planner.hpp"

namespace ambivox {

/// Profiles normalized per axis by a baseline profile; the baseline itself
/// sits on the unit ring.
struct RadarSpec {
  std::vector<Feature> axes;
  struct Series {
    std::string label;
    std::vector<double> values;
  };
  std::vector<Series> series;
  static constexpr double kBaselineRing = 1.0;
};

/// Divides each profile mean by the baseline mean on every axis. Throws
/// InvalidInput for fewer than 3 axes, an absent or zero baseline value, an
/// absent profile value, or a non-positive ratio.
RadarSpec build_radar_spec(const std::vector<AmbienceProfile>& profiles, const AmbienceProfile& baseline,
                           const std::vector<Feature>& axes);

/// 800x800 SVG 1.1 document: axes clockwise from 12 o'clock, dotted unit
/// ring, one polygon per series. Output depends only on the spec.
std::string render_radar_svg(const RadarSpec& spec);

std::string radar_svg(const std::vector<AmbienceProfile>& profiles, const AmbienceProfile& baseline,
                      const std::vector<Feature>& axes);

}  // namespace ambivox
