#include "ambivox/radar.hpp"

#include <cmath>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>

#include "ambivox/error.hpp"

namespace ambivox {
namespace {

const std::vector<Feature> kAxes = {Feature::kMeanIntensity, Feature::kMedianPitch, Feature::kPauseRate,
                                    Feature::kVoicedSyllableRate};

AmbienceProfile profile(Ambience a, std::vector<double> values) {
  AmbienceProfile p;
  p.ambience = a;
  p.n_clips = 1;
  for (std::size_t i = 0; i < kAxes.size(); ++i) {
    p.aggregate(kAxes[i]).mean = values[i];
    p.aggregate(kAxes[i]).count = 1;
  }
  return p;
}

std::vector<std::pair<double, double>> polygon_points(const std::string& svg) {
  const std::regex re(R"(<polygon[^>]*points="([^"]*)\")");
  std::smatch m;
  EXPECT_TRUE(std::regex_search(svg, m, re));
  std::vector<std::pair<double, double>> out;
  std::istringstream in(m[1].str());
  std::string pair;
  while (in >> pair) {
    const auto comma = pair.find(',');
    out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
  }
  return out;
}

double ring_radius(const std::string& svg) {
  const std::regex re(R"re(<circle id="baseline"[^>]* r="([0-9.]+)")re");
  std::smatch m;
  EXPECT_TRUE(std::regex_search(svg, m, re));
  return std::stod(m[1].str());
}

TEST(RadarSpec, NormalizesByBaseline) {
  const auto base = profile(Ambience::kBakeryBaseline, {70.0, 200.0, 0.5, 4.0});
  const auto spec = build_radar_spec({profile(Ambience::kNightClub, {77.0, 230.0, 0.25, 4.0})}, base, kAxes);
  ASSERT_EQ(spec.series.size(), 1u);
  EXPECT_DOUBLE_EQ(spec.series[0].values[0], 1.1);
  EXPECT_DOUBLE_EQ(spec.series[0].values[1], 1.15);
  EXPECT_DOUBLE_EQ(spec.series[0].values[2], 0.5);
  EXPECT_DOUBLE_EQ(spec.series[0].values[3], 1.0);
  EXPECT_EQ(spec.series[0].label, "night_club");
}

TEST(RadarSvg, IdentityProfileSitsOnUnitRing) {
  const auto base = profile(Ambience::kBakeryBaseline, {70.0, 200.0, 0.5, 4.0});
  const auto svg = radar_svg({base}, base, kAxes);
  const double r = ring_radius(svg);
  for (const auto& [x, y] : polygon_points(svg)) EXPECT_NEAR(std::hypot(x - 400.0, y - 400.0), r, 0.01);
}

TEST(RadarSvg, DoubledAxisAtRadiusTwo) {
  const auto base = profile(Ambience::kBakeryBaseline, {70.0, 200.0, 0.5, 4.0});
  const auto svg = radar_svg({profile(Ambience::kCafe, {70.0, 400.0, 0.5, 4.0})}, base, kAxes);
  const double r = ring_radius(svg);
  const auto pts = polygon_points(svg);
  ASSERT_EQ(pts.size(), 4u);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double radius = std::hypot(pts[i].first - 400.0, pts[i].second - 400.0) / r;
    EXPECT_NEAR(radius, i == 1 ? 2.0 : 1.0, 1e-3);
  }
  // Axis 0 points straight up, axis 1 is a quarter turn clockwise.
  EXPECT_NEAR(pts[0].first, 400.0, 0.01);
  EXPECT_LT(pts[0].second, 400.0);
  EXPECT_GT(pts[1].first, 400.0);
  EXPECT_NEAR(pts[1].second, 400.0, 0.01);
}

TEST(RadarSvg, DeterministicAndSized) {
  const auto base = profile(Ambience::kBakeryBaseline, {70.0, 200.0, 0.5, 4.0});
  const std::vector<AmbienceProfile> ps = {profile(Ambience::kCafe, {71.0, 210.0, 0.4, 4.2}),
                                           profile(Ambience::kNoisyBar, {80.0, 250.0, 0.7, 3.6})};
  const auto a = radar_svg(ps, base, kAxes);
  EXPECT_EQ(a, radar_svg(ps, base, kAxes));
  EXPECT_NE(a.find("width=\"800\" height=\"800\""), std::string::npos);
  EXPECT_NE(a.find("stroke-dasharray"), std::string::npos);
  EXPECT_EQ(a.rfind("</svg>\n"), a.size() - 7);
}

TEST(RadarSvg, RejectsBadBaselines) {
  auto base = profile(Ambience::kBakeryBaseline, {70.0, 200.0, 0.0, 4.0});
  const auto p = profile(Ambience::kCafe, {70.0, 200.0, 0.5, 4.0});
  EXPECT_THROW(radar_svg({p}, base, kAxes), InvalidInput);
  base = profile(Ambience::kBakeryBaseline, {70.0, 200.0, 0.5, 4.0});
  base.aggregate(Feature::kMedianPitch).mean.reset();
  EXPECT_THROW(radar_svg({p}, base, kAxes), InvalidInput);
  base = profile(Ambience::kBakeryBaseline, {70.0, 200.0, 0.5, 4.0});
  EXPECT_THROW(radar_svg({p}, base, {Feature::kMeanIntensity, Feature::kMedianPitch}), InvalidInput);
  EXPECT_THROW(radar_svg({profile(Ambience::kCafe, {-70.0, 200.0, 0.5, 4.0})}, base, kAxes), InvalidInput);
}

}  // namespace
}  // namespace ambivox
