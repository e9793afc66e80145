#include "ambivox/features.hpp"

#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "ambivox/audio.hpp"
#include "ambivox/error.hpp"
#include "synth.hpp"

namespace ambivox {
namespace {

constexpr int kFs = kCanonicalSampleRate;

TEST(FeatureNames, RoundTripInColumnOrder) {
  ASSERT_EQ(kAllFeatures.size(), 11u);
  EXPECT_EQ(feature_name(kAllFeatures.front()), "mean_intensity_db");
  EXPECT_EQ(feature_name(kAllFeatures.back()), "pause_rate");
  for (Feature f : kAllFeatures) EXPECT_EQ(parse_feature(feature_name(f)), f);
  EXPECT_THROW(parse_feature("loudness"), InvalidInput);
  FeatureVector v;
  set_feature_value(v, Feature::kJitter, 0.5);
  EXPECT_EQ(feature_value(v, Feature::kJitter), std::optional<double>(0.5));
  set_feature_value(v, Feature::kJitter, std::nullopt);
  EXPECT_FALSE(feature_value(v, Feature::kJitter).has_value());
}

TEST(Features, SteadySine) {
  const auto f = extract_features(synth::clip(synth::sine(220.0, 2.0, kFs)));
  ASSERT_TRUE(f.median_pitch_hz);
  EXPECT_NEAR(*f.median_pitch_hz, 220.0, 2.2);
  ASSERT_TRUE(f.jitter_local);
  ASSERT_TRUE(f.shimmer_local);
  EXPECT_LT(*f.jitter_local, 0.01);
  EXPECT_LT(*f.shimmer_local, 0.01);
  EXPECT_NEAR(*f.pitch_range_hz, 0.0, 1.0);
  EXPECT_NEAR(f.energy, 0.125 * 2.0, 1e-3);
  EXPECT_EQ(f.pause_rate, 0.0);
}

TEST(Features, AlternatingPeriodsGiveClosedFormJitter) {
  // Periods alternate 5.0 / 5.25 ms: mean |dT| = 0.25 ms over a mean period
  // of 5.125 ms.
  const auto f = extract_features(synth::clip(synth::pulse_train({0.005, 0.00525}, 2.0, kFs)));
  ASSERT_TRUE(f.jitter_local);
  EXPECT_NEAR(*f.jitter_local, 0.25 / 5.125, 1e-3);
  EXPECT_LT(*f.shimmer_local, 0.01);
}

TEST(Features, AlternatingAmplitudesGiveClosedFormShimmer) {
  // Heights alternate 0.8 / 0.6: mean |dA| = 0.2 over a mean of 0.7.
  const auto f = extract_features(synth::clip(synth::pulse_train({0.005}, 2.0, kFs, 0.0005, {0.8, 0.6})));
  ASSERT_TRUE(f.shimmer_local);
  EXPECT_NEAR(*f.shimmer_local, 0.2 / 0.7, 0.01);
  EXPECT_LT(*f.jitter_local, 0.005);
}

TEST(Features, SpectralSlopeOfOneOverHComb) {
  const auto f = extract_features(synth::clip(synth::harmonic_comb(100.0, 1.0, kFs, 8000.0)));
  ASSERT_TRUE(f.spectral_slope_db_per_octave);
  EXPECT_NEAR(*f.spectral_slope_db_per_octave, -20.0 * std::log10(2.0), 0.5);
}

TEST(Features, NoiseHasNoPitchFeatures) {
  const auto f = extract_features(synth::clip(synth::white_noise(1.0, kFs, 0.1, 9)));
  EXPECT_FALSE(f.median_pitch_hz.has_value());
  EXPECT_FALSE(f.jitter_local.has_value());
  EXPECT_FALSE(f.spectral_slope_db_per_octave.has_value());
  EXPECT_EQ(f.voiced_syll_per_sec, 0.0);
  EXPECT_GT(f.energy, 0.0);
}

TEST(Features, SilentClipIsRejected) {
  EXPECT_THROW(extract_features(synth::clip(synth::silence(1.0, kFs))), SilentClipError);
}

TEST(Features, ThreeBurstRates) {
  const auto c = synth::clip(synth::burst_sequence(180.0, {0.25, 0.25, 0.25}, {0.03, 0.1}, kFs));
  const auto f = extract_features(c);
  const double dur = c.duration_seconds();
  EXPECT_NEAR(f.pause_rate, 1.0 / dur, 1e-12);
  EXPECT_NEAR(f.overall_syll_per_sec, 3.0 / dur, 1e-12);
  EXPECT_GT(f.voiced_syll_per_sec, f.overall_syll_per_sec);
  EXPECT_NEAR(*f.median_pitch_hz, 180.0, 1.8);
}

TEST(Features, LoudnessGroupOnTwoLevels) {
  auto x = synth::sine(200.0, 1.0, kFs, 0.1);
  synth::append(x, synth::sine(200.0, 1.0, kFs, 0.4));
  const auto f = extract_features(synth::clip(x));
  EXPECT_NEAR(f.max_intensity_db, 10.0 * std::log10(0.08 / 1e-10), 0.05);
  // Mean of the two levels in the power domain.
  EXPECT_NEAR(f.mean_intensity_db, 10.0 * std::log10((0.005 + 0.08) / 2.0 / 1e-10), 0.3);
  EXPECT_NEAR(f.energy, 0.005 + 0.08, 1e-3);
}

class GainLaw : public ::testing::TestWithParam<double> {};

TEST_P(GainLaw, OnlyLoudnessFeaturesMove) {
  const double g = GetParam();
  const auto x = synth::burst_sequence(160.0, {0.3, 0.35, 0.3}, {0.08, 0.12}, kFs, 0.3);
  const auto a = extract_features(synth::clip(x));
  const auto b = extract_features(synth::clip(synth::scaled(x, g)));
  const double shift = 20.0 * std::log10(g);
  EXPECT_NEAR(b.energy, a.energy * g * g, 1e-6 * a.energy * g * g);
  EXPECT_NEAR(b.mean_intensity_db, a.mean_intensity_db + shift, 0.01);
  EXPECT_NEAR(b.max_intensity_db, a.max_intensity_db + shift, 0.01);
  for (Feature f : kAllFeatures) {
    if (f == Feature::kEnergy || f == Feature::kMeanIntensity || f == Feature::kMaxIntensity) continue;
    const auto va = feature_value(a, f);
    const auto vb = feature_value(b, f);
    ASSERT_EQ(va.has_value(), vb.has_value()) << feature_name(f);
    if (va) EXPECT_NEAR(*vb, *va, 1e-6 * std::max(1.0, std::fabs(*va))) << feature_name(f);
  }
}

INSTANTIATE_TEST_SUITE_P(Gains, GainLaw, ::testing::Values(0.25, 0.5, 2.0));

TEST(Perturbation, ClosedForm) {
  PeriodSequence s;
  s.periods = {1.0, 1.1, 1.0, 1.1};
  s.run = {0, 0, 0, 0};
  s.amplitudes = {1, 1, 1, 1};
  EXPECT_NEAR(*local_perturbation(s, s.periods), 0.1 / 1.05, 1e-12);
  // A run boundary removes the pair that straddles it.
  s.run = {0, 0, 1, 1};
  EXPECT_NEAR(*local_perturbation(s, s.periods), 0.1 / 1.05, 1e-12);
  s.periods = {1.0, 2.0};
  s.run = {0, 0};
  EXPECT_FALSE(local_perturbation(s, s.periods).has_value());
}

TEST(Features, DeterministicAcrossCalls) {
  const auto c = synth::clip(synth::burst_sequence(200.0, {0.3, 0.3}, {0.1}, kFs));
  EXPECT_EQ(extract_features(c), extract_features(c));
}

TEST(Features, SixtySecondsUnderFiveSeconds) {
  std::vector<double> x;
  for (int i = 0; i < 20; ++i) {
    synth::append(x, synth::burst_sequence(120.0 + 5.0 * i, {0.3, 0.4, 0.3, 0.5, 0.4, 0.3}, {0.1, 0.2, 0.05, 0.3, 0.15},
                                           kFs));
  }
  x.resize(60 * kFs, 0.0);
  const auto c = synth::clip(x);
  const auto t0 = std::chrono::steady_clock::now();
  const auto f = extract_features(c);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_LT(secs, 5.0);
  EXPECT_TRUE(f.median_pitch_hz.has_value());
}

}  // namespace
}  // namespace ambivox
