#include "ambivox/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "ambivox/csv.hpp"
#include "ambivox/error.hpp"

namespace ambivox {
namespace {

constexpr int kScaleMin = 1;
constexpr int kScaleMax = 7;

int parse_scale_value(const std::string& text, const char* column, std::size_t line) {
  const std::string where = "ratings line " + std::to_string(line);
  const long v = csv::parse_long(text, where);
  if (v < kScaleMin || v > kScaleMax) {
    throw FormatError(where + ": " + column + " " + text + " outside 1..7");
  }
  return static_cast<int>(v);
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string_view axis_name(RatingAxis a) { return a == RatingAxis::kVoiceType ? "voice_type" : "ambience"; }

StatementAnalysis analyze_statement(int statement, const std::vector<const RatingRecord*>& records) {
  StatementAnalysis sa;
  sa.statement = statement;
  std::set<std::string> raters;
  std::set<std::string> voices;
  std::map<std::pair<std::string, std::string>, std::pair<double, int>> cells;
  for (const auto* r : records) {
    raters.insert(r->rater_id);
    voices.insert(r->voice_type);
    auto& c = cells[{r->rater_id, r->voice_type}];
    c.first += r->rating;
    ++c.second;
  }
  if (raters.size() < 2 || voices.size() < 2) {
    sa.status = AnalysisStatus::kInsufficient;
    sa.note = "needs at least 2 raters and 2 voice types";
    return sa;
  }
  if (cells.size() != raters.size() * voices.size()) {
    sa.status = AnalysisStatus::kIncomplete;
    sa.note = "not every rater rated every voice type; descriptive statistics only";
    return sa;
  }
  sa.design.subjects.assign(raters.begin(), raters.end());
  sa.design.conditions.assign(voices.begin(), voices.end());
  for (const auto& rater : sa.design.subjects) {
    std::vector<double> row;
    for (const auto& voice : sa.design.conditions) {
      const auto& c = cells.at({rater, voice});
      row.push_back(c.first / c.second);
    }
    sa.design.values.push_back(std::move(row));
  }
  AnovaResult a = ranova(sa.design);
  if (a.ss_total == 0.0) {
    sa.status = AnalysisStatus::kDegenerate;
    sa.note = "zero variance; analysis skipped";
    return sa;
  }
  if (a.degenerate) {
    sa.status = AnalysisStatus::kDegenerate;
    sa.note = "zero error variance; post-hoc comparisons skipped";
    sa.anova = std::move(a);
    return sa;
  }
  sa.status = AnalysisStatus::kOk;
  sa.tukey = tukey_hsd(sa.design, a);
  sa.anova = std::move(a);
  return sa;
}

}  // namespace

std::string_view to_string(AnalysisStatus s) {
  switch (s) {
    case AnalysisStatus::kOk:
      return "ok";
    case AnalysisStatus::kIncomplete:
      return "incomplete";
    case AnalysisStatus::kDegenerate:
      return "degenerate";
    case AnalysisStatus::kInsufficient:
      return "insufficient";
  }
  return "unknown";
}

std::vector<RatingRecord> read_ratings(std::istream& in) {
  const csv::Table t = csv::Table::read(in, "ratings");
  const std::size_t rater = t.require_column("rater_id");
  const std::size_t voice = t.require_column("voice_type");
  const std::size_t amb = t.require_column("ambience");
  const std::size_t stmt = t.require_column("statement");
  const std::size_t rating = t.require_column("rating");
  std::vector<RatingRecord> out;
  out.reserve(t.rows().size());
  for (const auto& row : t.rows()) {
    RatingRecord r;
    r.rater_id = row.fields[rater];
    r.voice_type = row.fields[voice];
    r.ambience = row.fields[amb];
    if (r.rater_id.empty() || r.voice_type.empty()) {
      throw FormatError("ratings line " + std::to_string(row.line) + ": empty rater_id or voice_type");
    }
    r.statement = parse_scale_value(row.fields[stmt], "statement", row.line);
    r.rating = parse_scale_value(row.fields[rating], "rating", row.line);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RatingRecord> load_ratings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ratings file " + path.string());
  return read_ratings(in);
}

RatingSummary summarize_ratings(const std::vector<RatingRecord>& records,
                                const std::vector<RatingAxis>& group_by) {
  if (records.empty()) throw InvalidInput("no ratings to summarize");
  if (group_by.empty()) throw InvalidInput("at least one grouping axis is required");
  RatingSummary s;
  s.axes = group_by;

  std::map<std::pair<int, std::vector<std::string>>, std::vector<double>> groups;
  std::map<int, std::vector<const RatingRecord*>> by_statement;
  for (const auto& r : records) {
    std::vector<std::string> key;
    for (RatingAxis a : group_by) key.push_back(a == RatingAxis::kVoiceType ? r.voice_type : r.ambience);
    groups[{r.statement, std::move(key)}].push_back(r.rating);
    by_statement[r.statement].push_back(&r);
  }
  for (auto& [id, values] : groups) {
    RatingGroupSummary g;
    g.statement = id.first;
    g.key = id.second;
    g.n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    g.mean = sum / static_cast<double>(g.n);
    if (g.n > 1) {
      double ss = 0.0;
      for (double v : values) ss += (v - g.mean) * (v - g.mean);
      g.sd = std::sqrt(ss / static_cast<double>(g.n - 1));
    }
    g.median = median_of(std::move(values));
    s.groups.push_back(std::move(g));
  }
  for (const auto& [statement, recs] : by_statement) s.analyses.push_back(analyze_statement(statement, recs));
  return s;
}

void write_rating_groups_csv(std::ostream& out, const RatingSummary& summary) {
  std::vector<std::string> header = {"statement"};
  for (RatingAxis a : summary.axes) header.emplace_back(axis_name(a));
  for (const char* c : {"n", "mean", "median", "sd"}) header.emplace_back(c);
  csv::write_row(out, header);
  for (const auto& g : summary.groups) {
    std::vector<std::string> row = {std::to_string(g.statement)};
    row.insert(row.end(), g.key.begin(), g.key.end());
    row.push_back(std::to_string(g.n));
    row.push_back(csv::format_double(g.mean));
    row.push_back(csv::format_double(g.median));
    row.push_back(csv::format_double(g.sd));
    csv::write_row(out, row);
  }
}

void write_rating_report(std::ostream& out, const RatingSummary& summary, const StatConfig& cfg) {
  for (const auto& a : summary.analyses) {
    out << "statement " << a.statement << ": " << to_string(a.status);
    if (!a.note.empty()) out << " (" << a.note << ")";
    out << '\n';
    if (a.anova) {
      const auto& r = *a.anova;
      out << "  F(" << r.df_treatment << ", " << r.df_error << ") = " << csv::format_double(r.f_stat)
          << ", p = " << csv::format_double(r.p_value) << ' ' << significance_stars(r.p_value, cfg.alpha)
          << '\n';
    }
    if (a.tukey) {
      for (const auto& p : a.tukey->pairs) {
        out << "  " << a.design.conditions[p.a] << " - " << a.design.conditions[p.b]
            << ": diff = " << csv::format_double(p.mean_difference) << ", q = " << csv::format_double(p.q)
            << ", p = " << csv::format_double(p.p_adjusted) << ' '
            << significance_stars(p.p_adjusted, cfg.alpha) << '\n';
      }
    }
  }
}

}  // namespace ambivox
