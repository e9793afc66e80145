#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ambivox/features.hpp"
#include "ambivox/prosody.hpp"

namespace ambivox {

enum class Gender { kFemale, kMale, kOther };
enum class Ambience {
  kBakeryBaseline,
  kFineDining,
  kCafe,
  kLivelyRestaurant,
  kQuietBar,
  kNoisyBar,
  kNightClub,
};
enum class Condition { kScripted, kUnscripted };
enum class Role { kWaiter, kCustomer };

inline constexpr std::array<Ambience, 7> kAllAmbiences = {
    Ambience::kBakeryBaseline, Ambience::kFineDining, Ambience::kCafe,    Ambience::kLivelyRestaurant,
    Ambience::kQuietBar,       Ambience::kNoisyBar,   Ambience::kNightClub,
};

std::string_view to_string(Gender g);
std::string_view to_string(Ambience a);
std::string_view to_string(Condition c);
std::string_view to_string(Role r);
std::optional<Gender> parse_gender(std::string_view s);
std::optional<Ambience> parse_ambience(std::string_view s);
std::optional<Condition> parse_condition(std::string_view s);
std::optional<Role> parse_role(std::string_view s);

struct ClipRecord {
  /// Path exactly as written in the manifest.
  std::string clip_path;
  /// clip_path resolved against the manifest's directory.
  std::filesystem::path resolved_path;
  std::string speaker_id;
  Gender gender = Gender::kOther;
  Ambience ambience = Ambience::kBakeryBaseline;
  Condition condition = Condition::kScripted;
  Role role = Role::kWaiter;
};

struct CorpusManifest {
  std::vector<ClipRecord> records;
  std::filesystem::path root;
};

/// Reads a manifest CSV with header clip_path,speaker_id,gender,ambience,
/// condition,role (any column order). Errors name the offending line.
CorpusManifest load_manifest(const std::filesystem::path& path);
CorpusManifest parse_manifest(std::istream& in, const std::filesystem::path& root,
                              bool require_files = true);
void write_manifest(std::ostream& out, const CorpusManifest& manifest);

/// Speaker-ambience batches are expected to hold between 16 and 41 clips.
inline constexpr std::size_t kMinBatchSize = 16;
inline constexpr std::size_t kMaxBatchSize = 41;
inline constexpr double kMinClipSeconds = 1.0;
inline constexpr double kMaxClipSeconds = 7.0;

struct SpeakerAmbienceBatch {
  std::string speaker_id;
  Ambience ambience = Ambience::kBakeryBaseline;
  std::vector<ClipRecord> clips;
  bool size_ok = false;
};

/// One batch per (speaker, ambience) pair, ordered by speaker id and then
/// ambience; clips keep manifest order.
std::vector<SpeakerAmbienceBatch> partition_batches(const CorpusManifest& manifest);

struct ValidationReport {
  std::size_t total = 0;
  std::array<std::size_t, 3> per_gender{};  // indexed by Gender
  struct BatchSize {
    std::string speaker_id;
    Ambience ambience;
    std::size_t size;
    bool size_ok;
  };
  std::vector<BatchSize> batches;
  /// Whole-second bins [0,1), [1,2), ..., [7,8) and a final 8 s+ bin.
  std::array<std::size_t, 9> duration_histogram{};
  std::size_t unreadable = 0;
  std::vector<std::string> warnings;

  std::size_t count(Gender g) const { return per_gender[static_cast<std::size_t>(g)]; }
  std::string to_text() const;
};

/// Report-only: counts, batch sizes, duration histogram and warnings for
/// clips outside [1 s, 7 s] and batches outside [16, 41].
ValidationReport validate_corpus(const CorpusManifest& manifest);

struct RecordFilter {
  std::optional<Gender> gender;
  std::optional<Condition> condition;
  std::optional<Role> role;
  std::optional<std::string> speaker_id;

  bool matches(const ClipRecord& r) const;
};

struct FeatureRow {
  ClipRecord record;
  double duration_seconds = 0.0;
  FeatureVector features;
};

struct ExtractionFailure {
  std::string clip_path;
  std::string reason;
};

struct FeatureTable {
  std::vector<FeatureRow> rows;
  std::vector<ExtractionFailure> failures;
  AnalysisConfig config;
};

/// Decodes and featurizes every clip on `workers` threads. Per-clip errors
/// are collected as failures; rows follow manifest order whatever the
/// worker count.
FeatureTable extract_corpus(const CorpusManifest& manifest, const AnalysisConfig& cfg,
                            unsigned workers);

/// Metadata columns, then the eleven features; absent values are empty
/// cells. A leading '# analysis ...' comment records the configuration.
void write_feature_table(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_table(std::istream& in);
FeatureTable load_feature_table(const std::filesystem::path& path);
/// One "path<TAB>reason" line per failure.
void write_failures(std::ostream& out, const FeatureTable& table);

}  // namespace ambivox
