#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ambivox/prosody.hpp"

namespace ambivox {

class AudioClip;

/// The eleven per-clip vocal features. Pitch-dependent members are empty
/// when the clip has no usable voiced frames.
struct FeatureVector {
  double mean_intensity_db = 0.0;
  double energy = 0.0;  // amplitude^2 * s
  double max_intensity_db = 0.0;
  std::optional<double> median_pitch_hz;
  std::optional<double> pitch_range_hz;
  std::optional<double> shimmer_local;
  std::optional<double> jitter_local;
  std::optional<double> spectral_slope_db_per_octave;
  double voiced_syll_per_sec = 0.0;
  double overall_syll_per_sec = 0.0;
  double pause_rate = 0.0;

  bool operator==(const FeatureVector&) const = default;
};

/// Features in their canonical column order: loudness, spectral, rate.
enum class Feature {
  kMeanIntensity,
  kEnergy,
  kMaxIntensity,
  kMedianPitch,
  kPitchRange,
  kShimmer,
  kJitter,
  kSpectralSlope,
  kVoicedSyllableRate,
  kOverallSyllableRate,
  kPauseRate,
};

inline constexpr std::size_t kFeatureCount = 11;
extern const std::array<Feature, kFeatureCount> kAllFeatures;

std::string_view feature_name(Feature f);
/// Throws InvalidInput for an unknown name.
Feature parse_feature(std::string_view name);
std::optional<double> feature_value(const FeatureVector& v, Feature f);
void set_feature_value(FeatureVector& v, Feature f, std::optional<double> value);

struct LoudnessFeatures {
  double mean_intensity_db = 0.0;
  double energy = 0.0;
  double max_intensity_db = 0.0;
};

struct SpectralFeatures {
  std::optional<double> median_pitch_hz;
  std::optional<double> pitch_range_hz;
  std::optional<double> jitter_local;
  std::optional<double> shimmer_local;
  std::optional<double> spectral_slope_db_per_octave;
};

struct RateFeatures {
  double voiced_syll_per_sec = 0.0;
  double overall_syll_per_sec = 0.0;
  double pause_rate = 0.0;
};

/// Throws SilentClipError for a clip of digital silence.
LoudnessFeatures loudness_features(const AudioClip& clip, const IntensityContour& contour,
                                   const SilenceMap& silences);

SpectralFeatures spectral_features(const AudioClip& clip, const PitchTrack& pitch,
                                   const SilenceMap& silences, const AnalysisConfig& cfg = {});

RateFeatures rate_features(const IntensityContour& contour, const SilenceMap& silences,
                           const SyllableNuclei& nuclei, double clip_duration);

/// Runs every analysis once and composes the three feature groups.
FeatureVector extract_features(const AudioClip& clip, const AnalysisConfig& cfg = {});

/// Cycle-by-cycle periods and amplitudes found by waveform matching inside
/// voiced stretches, guided by the frame pitch track. `run` numbers the
/// voiced stretch each period belongs to.
struct PeriodSequence {
  std::vector<double> periods;     // s
  std::vector<double> amplitudes;  // RMS over one period
  std::vector<std::size_t> run;

  std::size_t size() const { return periods.size(); }
};

PeriodSequence measure_periods(const AudioClip& clip, const PitchTrack& pitch,
                               const SilenceMap& silences, const AnalysisConfig& cfg = {});

/// Mean absolute difference of consecutive values within the same run over
/// the mean value. Pairs whose periods differ by more than a factor 1.3 are
/// skipped. Empty when no pair qualifies.
std::optional<double> local_perturbation(const PeriodSequence& seq, std::span<const double> values);

}  // namespace ambivox
