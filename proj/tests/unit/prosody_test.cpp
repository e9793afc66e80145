#include "ambivox/prosody.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <gtest/gtest.h>

#include "ambivox/audio.hpp"
#include "ambivox/error.hpp"
#include "synth.hpp"

namespace ambivox {
namespace {

constexpr int kFs = kCanonicalSampleRate;

double median_f0(const PitchTrack& t) {
  std::vector<double> v;
  for (const auto& f : t.f0) {
    if (f) v.push_back(*f);
  }
  std::sort(v.begin(), v.end());
  if (v.empty()) return 0.0;
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

TEST(Grid, SharedBetweenTracks) {
  const AnalysisConfig cfg;
  const auto g = make_grid(1.0, cfg);
  EXPECT_DOUBLE_EQ(g.first, cfg.grid_window() / 2.0);
  EXPECT_EQ(g.count, 96u);
  const auto c = synth::clip(synth::sine(200.0, 1.0, kFs));
  const auto pitch = track_pitch(c, cfg);
  const auto level = intensity_contour(c, cfg);
  ASSERT_EQ(pitch.size(), g.count);
  ASSERT_EQ(level.size(), g.count);
  for (std::size_t i = 0; i < g.count; ++i) {
    EXPECT_DOUBLE_EQ(pitch.times[i], g.time(i));
    EXPECT_DOUBLE_EQ(level.times[i], g.time(i));
  }
}

TEST(Config, Validation) {
  AnalysisConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.pitch_ceiling = 50.0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.hop = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidInput);
  cfg = {};
  cfg.voicing_threshold = 1.5;
  EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(Pitch, PureSine) {
  const auto t = track_pitch(synth::clip(synth::sine(220.0, 2.0, kFs)), {});
  EXPECT_EQ(t.voiced_count(), t.size());
  EXPECT_NEAR(median_f0(t), 220.0, 2.2);
  for (double s : t.strength) {
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(Pitch, HarmonicRichSawtooth) {
  for (double f0 : {100.0, 200.0, 400.0}) {
    const auto t = track_pitch(synth::clip(synth::sawtooth(f0, 1.0, kFs)), {});
    EXPECT_NEAR(median_f0(t), f0, 0.01 * f0) << f0;
  }
}

TEST(Pitch, NoiseIsUnvoiced) {
  const auto t = track_pitch(synth::clip(synth::white_noise(2.0, kFs, 0.1, 42)), {});
  EXPECT_LT(static_cast<double>(t.voiced_count()), 0.05 * static_cast<double>(t.size()));
}

TEST(Pitch, SilenceIsUnvoiced) {
  auto x = synth::sine(200.0, 0.5, kFs);
  synth::append(x, synth::silence(0.5, kFs));
  const auto t = track_pitch(synth::clip(x), {});
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.times[i] > 0.56) EXPECT_FALSE(t.voiced(i)) << t.times[i];
  }
}

TEST(Pitch, OctaveStepKeepsBothHalves) {
  auto x = synth::sawtooth(150.0, 1.0, kFs);
  synth::append(x, synth::sawtooth(300.0, 1.0, kFs));
  const auto t = track_pitch(synth::clip(x), {});
  std::size_t low = 0;
  std::size_t high = 0;
  std::optional<double> first_high;
  for (std::size_t i = 0; i < t.f0.size(); ++i) {
    const auto& f = t.f0[i];
    if (f && std::fabs(*f - 150.0) < 3.0) ++low;
    if (f && std::fabs(*f - 300.0) < 6.0) {
      ++high;
      if (!first_high) first_high = t.times[i];
    }
  }
  EXPECT_GT(low, 80u);
  EXPECT_GT(high, 80u);
  // A window straddling the step is still periodic at the lower f0.
  ASSERT_TRUE(first_high);
  EXPECT_NEAR(*first_high, 1.0, 0.02);
}

TEST(Pitch, ConcatenatedSinesMedianBetweenHalves) {
  auto x = synth::sine(150.0, 1.0, kFs);
  synth::append(x, synth::sine(300.0, 1.0, kFs));
  const auto t = track_pitch(synth::clip(x), {});
  EXPECT_NEAR(median_f0(t), 225.0, 0.05 * 225.0);
}

TEST(Pitch, TooShortClip) {
  EXPECT_THROW(track_pitch(synth::clip(synth::sine(200.0, 0.02, kFs)), {}), InvalidInput);
}

TEST(Intensity, SineLevelAndSilence) {
  auto x = synth::sine(500.0, 0.5, kFs, 0.5);
  synth::append(x, synth::silence(0.5, kFs));
  const auto c = intensity_contour(synth::clip(x), {});
  const double expect = 10.0 * std::log10(0.125 / 1e-10);
  EXPECT_NEAR(c.level_db[5], expect, 0.05);
  EXPECT_TRUE(std::isinf(c.level_db.back()));
  EXPECT_LT(c.level_db.back(), 0.0);
  EXPECT_DOUBLE_EQ(c.duration, 1.0);
}

TEST(Silences, GapAtLeastMinimumIsAPause) {
  auto x = synth::sine(220.0, 1.0, kFs);
  synth::append(x, synth::silence(0.1, kFs));
  synth::append(x, synth::sine(220.0, 1.0, kFs));
  const AnalysisConfig cfg;
  const auto s = detect_silences(intensity_contour(synth::clip(x), cfg), cfg);
  ASSERT_EQ(s.pauses.size(), 1u);
  EXPECT_NEAR(s.pauses[0].start, 1.0, 0.03);
  EXPECT_NEAR(s.pauses[0].end, 1.1, 0.03);
  EXPECT_TRUE(s.contains(1.05));
  EXPECT_FALSE(s.contains(0.5));
  EXPECT_NEAR(s.total_pause(), s.pauses[0].length(), 1e-12);
}

TEST(Silences, ShortGapIsIgnored) {
  auto x = synth::sine(220.0, 1.0, kFs);
  synth::append(x, synth::silence(0.03, kFs));
  synth::append(x, synth::sine(220.0, 1.0, kFs));
  const AnalysisConfig cfg;
  EXPECT_TRUE(detect_silences(intensity_contour(synth::clip(x), cfg), cfg).pauses.empty());
}

TEST(Silences, LeadingAndTrailingSilenceCount) {
  auto x = synth::silence(0.3, kFs);
  synth::append(x, synth::sine(220.0, 1.0, kFs));
  synth::append(x, synth::silence(0.3, kFs));
  const AnalysisConfig cfg;
  const auto s = detect_silences(intensity_contour(synth::clip(x), cfg), cfg);
  ASSERT_EQ(s.pauses.size(), 2u);
  EXPECT_DOUBLE_EQ(s.pauses[0].start, 0.0);
  EXPECT_DOUBLE_EQ(s.pauses[1].end, 1.6);
}

TEST(Silences, QuietButAudibleIsSilentBelowThreshold) {
  auto x = synth::sine(220.0, 1.0, kFs, 0.5);
  synth::append(x, synth::sine(220.0, 0.2, kFs, 0.5 * std::pow(10.0, -30.0 / 20.0)));
  synth::append(x, synth::sine(220.0, 1.0, kFs, 0.5));
  const AnalysisConfig cfg;
  EXPECT_EQ(detect_silences(intensity_contour(synth::clip(x), cfg), cfg).pauses.size(), 1u);
}

struct NucleiCase {
  std::vector<double> durations;
  std::vector<double> gaps;
  std::size_t nuclei;
  std::size_t pauses;
};

class NucleiCount : public ::testing::TestWithParam<NucleiCase> {};

TEST_P(NucleiCount, BurstsAreSyllables) {
  const auto& p = GetParam();
  const AnalysisConfig cfg;
  const auto c = synth::clip(synth::burst_sequence(180.0, p.durations, p.gaps, kFs));
  const auto level = intensity_contour(c, cfg);
  const auto pitch = track_pitch(c, cfg);
  const auto sil = detect_silences(level, cfg);
  EXPECT_EQ(sil.pauses.size(), p.pauses);
  EXPECT_EQ(detect_syllable_nuclei(level, pitch, sil, cfg).count(), p.nuclei);
}

INSTANTIATE_TEST_SUITE_P(Bursts, NucleiCount,
                         ::testing::Values(NucleiCase{{0.25, 0.25, 0.25}, {0.03, 0.1}, 3, 1},
                                           NucleiCase{{0.3}, {}, 1, 0},
                                           NucleiCase{{0.2, 0.2, 0.2, 0.2}, {0.15, 0.15, 0.15}, 4, 3},
                                           NucleiCase{{0.25, 0.25}, {0.06}, 2, 1}));

TEST(Nuclei, UnvoicedPeaksAreDropped) {
  auto x = synth::white_noise(0.3, kFs, 0.1, 1);
  synth::append(x, synth::silence(0.2, kFs));
  synth::append(x, synth::white_noise(0.3, kFs, 0.1, 2));
  const AnalysisConfig cfg;
  const auto c = synth::clip(x);
  const auto level = intensity_contour(c, cfg);
  EXPECT_EQ(detect_syllable_nuclei(level, track_pitch(c, cfg), detect_silences(level, cfg), cfg).count(), 0u);
}

TEST(Nuclei, GridMismatchIsRejected) {
  const AnalysisConfig cfg;
  const auto a = synth::clip(synth::sine(200.0, 1.0, kFs));
  const auto b = synth::clip(synth::sine(200.0, 1.2, kFs));
  const auto level = intensity_contour(a, cfg);
  EXPECT_THROW(detect_syllable_nuclei(level, track_pitch(b, cfg), detect_silences(level, cfg), cfg), InvalidInput);
}

TEST(Tracks, CsvDump) {
  const AnalysisConfig cfg;
  const auto c = synth::clip(synth::sine(200.0, 0.2, kFs));
  std::ostringstream out;
  write_tracks_csv(out, track_pitch(c, cfg), intensity_contour(c, cfg));
  const auto text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "time,f0,strength,level_db");
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), make_grid(0.2, cfg).count + 1);
}

}  // namespace
}  // namespace ambivox
