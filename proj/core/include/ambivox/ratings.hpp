#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ambivox/stats.hpp"

namespace ambivox {

/// One Likert response: statement and rating are both on 1..7.
struct RatingRecord {
  std::string rater_id;
  std::string voice_type;
  std::string ambience;
  int statement = 1;
  int rating = 1;
};

/// CSV with header rater_id,voice_type,ambience,statement,rating.
std::vector<RatingRecord> read_ratings(std::istream& in);
std::vector<RatingRecord> load_ratings(const std::filesystem::path& path);

enum class RatingAxis { kVoiceType, kAmbience };

struct RatingGroupSummary {
  int statement = 0;
  /// One label per grouping axis, in the requested axis order.
  std::vector<std::string> key;
  double mean = 0.0;
  double median = 0.0;
  /// Sample standard deviation; 0 for a single rating.
  double sd = 0.0;
  std::size_t n = 0;
};

enum class AnalysisStatus { kOk, kIncomplete, kDegenerate, kInsufficient };
std::string_view to_string(AnalysisStatus s);

/// Voice types compared within raters for one statement. A cell is the
/// rater's mean rating for that voice type across ambiences.
struct StatementAnalysis {
  int statement = 0;
  AnalysisStatus status = AnalysisStatus::kInsufficient;
  std::string note;
  RepeatedMeasuresDesign design;
  std::optional<AnovaResult> anova;
  std::optional<TukeyResult> tukey;
};

struct RatingSummary {
  std::vector<RatingAxis> axes;
  std::vector<RatingGroupSummary> groups;
  std::vector<StatementAnalysis> analyses;
};

/// Throws InvalidInput for empty input or an empty axis list.
RatingSummary summarize_ratings(const std::vector<RatingRecord>& records,
                                const std::vector<RatingAxis>& group_by);

void write_rating_groups_csv(std::ostream& out, const RatingSummary& summary);
void write_rating_report(std::ostream& out, const RatingSummary& summary, const StatConfig& cfg);

}  // namespace ambivox
