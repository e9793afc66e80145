#include "ambivox/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ambivox/error.hpp"
#include "ambivox/special.hpp"

namespace ambivox {
namespace {

// ss_error below this fraction of ss_total counts as zero.
constexpr double kRelativeZero = 1e-12;
// ss_total below this fraction of the raw sum of squares means all cells are
// equal up to rounding.
constexpr double kConstantDesign = 1e-20;

}  // namespace

void RepeatedMeasuresDesign::validate() const {
  if (subjects.size() < 2) throw InvalidInput("repeated-measures design needs at least 2 subjects");
  if (conditions.size() < 2) throw InvalidInput("repeated-measures design needs at least 2 conditions");
  if (values.size() != subjects.size()) throw InvalidInput("design has a row count different from its subjects");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].size() != conditions.size()) {
      throw InvalidInput("design is incomplete: subject " + subjects[i] + " has " +
                         std::to_string(values[i].size()) + " of " + std::to_string(conditions.size()) +
                         " conditions");
    }
    for (double v : values[i]) {
      if (!std::isfinite(v)) throw InvalidInput("design cell for subject " + subjects[i] + " is not finite");
    }
  }
}

AnovaResult ranova(const RepeatedMeasuresDesign& design) {
  design.validate();
  const std::size_t n = design.n();
  const std::size_t k = design.k();
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);

  double grand = 0.0;
  double raw_ss = 0.0;
  for (const auto& row : design.values) {
    for (double v : row) {
      grand += v;
      raw_ss += v * v;
    }
  }
  grand /= nd * kd;

  std::vector<double> subject_means(n, 0.0);
  AnovaResult r;
  r.condition_means.assign(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      subject_means[i] += design.values[i][j];
      r.condition_means[j] += design.values[i][j];
    }
    subject_means[i] /= kd;
  }
  for (double& m : r.condition_means) m /= nd;

  for (std::size_t j = 0; j < k; ++j) r.ss_treatment += nd * std::pow(r.condition_means[j] - grand, 2);
  for (std::size_t i = 0; i < n; ++i) r.ss_subjects += kd * std::pow(subject_means[i] - grand, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = design.values[i][j];
      r.ss_total += (v - grand) * (v - grand);
      const double e = v - subject_means[i] - r.condition_means[j] + grand;
      r.ss_error += e * e;
    }
  }

  r.df_treatment = static_cast<int>(k - 1);
  r.df_error = static_cast<int>((k - 1) * (n - 1));
  const double scale = r.ss_total;
  if (scale <= kConstantDesign * raw_ss) {
    r.ss_treatment = r.ss_subjects = r.ss_error = r.ss_total = 0.0;
    r.f_stat = 0.0;
    r.p_value = 1.0;
    return r;
  }
  if (r.ss_error <= kRelativeZero * scale && r.ss_treatment <= kRelativeZero * scale) {
    // Every subject is flat across conditions: no treatment effect to test.
    r.ss_treatment = r.ss_error = 0.0;
    r.f_stat = 0.0;
    r.p_value = 1.0;
    return r;
  }
  if (r.ss_error <= kRelativeZero * scale) {
    r.f_stat = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    r.degenerate = true;
    return r;
  }
  r.f_stat = (r.ss_treatment / r.df_treatment) / (r.ss_error / r.df_error);
  r.p_value = special::f_survival(r.f_stat, r.df_treatment, r.df_error);
  return r;
}

TukeyResult tukey_hsd(const RepeatedMeasuresDesign& design, const AnovaResult& anova) {
  design.validate();
  const std::size_t k = design.k();
  if (anova.condition_means.size() != k) throw InvalidInput("ANOVA result does not match the design");
  const double ms = anova.ms_error();
  if (!(ms > 0.0) || anova.degenerate) throw InvalidInput("Tukey HSD needs a nonzero error variance");
  const double se = std::sqrt(ms / static_cast<double>(design.n()));
  TukeyResult out;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      TukeyPair p;
      p.a = a;
      p.b = b;
      p.mean_difference = anova.condition_means[a] - anova.condition_means[b];
      p.q = std::fabs(p.mean_difference) / se;
      p.p_adjusted = std::clamp(1.0 - special::ptukey(p.q, static_cast<int>(k), anova.df_error), 0.0, 1.0);
      out.pairs.push_back(p);
    }
  }
  return out;
}

void StatConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie strictly between 0 and 1");
}

std::string significance_stars(double p, double alpha) {
  if (p < alpha / 100.0) return "***";
  if (p < alpha / 10.0) return "**";
  if (p < alpha) return "*";
  return "";
}

}  // namespace ambivox
