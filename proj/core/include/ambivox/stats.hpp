#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ambivox {

/// Complete within-subjects design: values[i][j] is subject i under
/// condition j.
struct RepeatedMeasuresDesign {
  std::vector<std::string> subjects;
  std::vector<std::string> conditions;
  std::vector<std::vector<double>> values;

  std::size_t n() const { return subjects.size(); }
  std::size_t k() const { return conditions.size(); }
  /// Throws InvalidInput unless n >= 2, k >= 2 and every cell is present
  /// and finite.
  void validate() const;
};

struct AnovaResult {
  double ss_treatment = 0.0;
  double ss_subjects = 0.0;
  double ss_error = 0.0;
  double ss_total = 0.0;
  int df_treatment = 0;
  int df_error = 0;
  double f_stat = 0.0;
  double p_value = 1.0;
  /// Set when the error sum of squares vanishes but treatments differ.
  bool degenerate = false;
  std::vector<double> condition_means;

  double ms_error() const { return df_error > 0 ? ss_error / df_error : 0.0; }
};

/// One-way repeated-measures ANOVA (no sphericity correction).
AnovaResult ranova(const RepeatedMeasuresDesign& design);

struct TukeyPair {
  std::size_t a = 0;
  std::size_t b = 0;
  /// mean(a) - mean(b)
  double mean_difference = 0.0;
  double q = 0.0;
  double p_adjusted = 1.0;
};

struct TukeyResult {
  std::vector<TukeyPair> pairs;
};

/// Pairwise comparisons with q = |mean_a - mean_b| / sqrt(MS_error / n).
/// Throws InvalidInput when the error variance is zero.
TukeyResult tukey_hsd(const RepeatedMeasuresDesign& design, const AnovaResult& anova);

struct StatConfig {
  double alpha = 0.1;
  void validate() const;
};

/// "***" below alpha/100, "**" below alpha/10, "*" below alpha.
std::string significance_stars(double p, double alpha);

}  // namespace ambivox
