#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ambivox/corpus.hpp"
#include "ambivox/features.hpp"

namespace ambivox {

struct FeatureAggregate {
  std::optional<double> mean;
  std::optional<double> median;
  /// Rows that had a value for this feature.
  std::size_t count = 0;
};

/// Per-feature aggregates over the clips of one ambience.
struct AmbienceProfile {
  Ambience ambience = Ambience::kBakeryBaseline;
  std::array<FeatureAggregate, kFeatureCount> features{};
  std::size_t n_clips = 0;
  RecordFilter filters;

  const FeatureAggregate& aggregate(Feature f) const { return features[static_cast<std::size_t>(f)]; }
  FeatureAggregate& aggregate(Feature f) { return features[static_cast<std::size_t>(f)]; }
};

/// Mean and median of every feature over rows of `ambience` that pass
/// `filters`. Throws InvalidInput when no row matches.
AmbienceProfile build_profile(const FeatureTable& table, Ambience ambience, const RecordFilter& filters = {});

nlohmann::json to_json(const AmbienceProfile& p);
AmbienceProfile profile_from_json(const nlohmann::json& j);
AmbienceProfile load_profile(const std::filesystem::path& path);

/// The synthesis engine's unmodified voice.
struct BaselineVoiceDescriptor {
  double median_pitch_hz = 0.0;
  double syll_per_sec = 0.0;
  double mean_intensity_db = 0.0;

  /// Throws InvalidInput unless every field is positive and finite.
  void validate() const;
};

nlohmann::json to_json(const BaselineVoiceDescriptor& b);
BaselineVoiceDescriptor baseline_from_json(const nlohmann::json& j);
BaselineVoiceDescriptor load_baseline(const std::filesystem::path& path);

struct PitchVariants {
  double low_hz = 0.0;
  double avg_hz = 0.0;
  double high_hz = 0.0;
};

/// high = avg + (avg - low). Throws InvalidInput for non-positive inputs or
/// a non-positive extrapolation.
PitchVariants pitch_variants(double low_hz, double avg_hz);

struct PlanLimits {
  int min_rate_percent = 25;
  int max_rate_percent = 200;
  double max_pitch_semitones = 24.0;
  double max_volume_db = 12.0;
};

inline constexpr double kDefaultTargetDbfs = -10.0;

struct ProsodyPlan {
  Ambience ambience = Ambience::kBakeryBaseline;
  /// Quantized to 0.01 st.
  double pitch_shift_semitones = 0.0;
  int rate_percent = 100;
  /// Quantized to 0.1 dB.
  double volume_shift_db = 0.0;
  double target_dbfs = kDefaultTargetDbfs;

  struct Provenance {
    double profile_median_pitch_hz = 0.0;
    double profile_voiced_syll_per_sec = 0.0;
    double profile_mean_intensity_db = 0.0;
    BaselineVoiceDescriptor baseline;
    double raw_pitch_shift_semitones = 0.0;
    double raw_rate_percent = 0.0;
    double raw_volume_shift_db = 0.0;
    /// Names of the offsets that hit a limit: "pitch", "rate", "volume".
    std::vector<std::string> clamps_applied;
  } provenance;
};

/// Baseline-relative offsets from the profile's mean median pitch, voiced
/// syllable rate and mean intensity. Throws InvalidInput when one of those
/// aggregates is absent.
ProsodyPlan plan_prosody(const AmbienceProfile& profile, const BaselineVoiceDescriptor& baseline,
                         double target_dbfs = kDefaultTargetDbfs, const PlanLimits& limits = {});

nlohmann::json to_json(const ProsodyPlan& plan);

/// <speak><prosody pitch="+N.NNst" rate="P%" volume="+V.VdB">TEXT</prosody></speak>
std::string emit_ssml(const ProsodyPlan& plan, std::string_view text);

struct SsmlProsody {
  double pitch_semitones = 0.0;
  int rate_percent = 0;
  double volume_db = 0.0;
  std::string text;
};

/// Parses markup in exactly the form emit_ssml produces. Throws FormatError
/// otherwise.
SsmlProsody parse_ssml(std::string_view markup);

std::string xml_escape(std::string_view text);

}  // namespace ambivox
