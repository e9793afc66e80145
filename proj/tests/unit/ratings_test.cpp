#include "ambivox/ratings.hpp"

#include <sstream>

#include <gtest/gtest.h>

#include "ambivox/error.hpp"
#include "fixtures.hpp"

namespace ambivox {
namespace {

std::vector<RatingRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return read_ratings(in);
}

const RatingGroupSummary* find_group(const RatingSummary& s, int statement, const std::string& key) {
  for (const auto& g : s.groups) {
    if (g.statement == statement && g.key.front() == key) return &g;
  }
  return nullptr;
}

TEST(Ratings, ParsesAndValidates) {
  const auto r = parse("rater_id,voice_type,ambience,statement,rating\nr1,tts_bl,cafe,3,6\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].statement, 3);
  EXPECT_EQ(r[0].rating, 6);
  try {
    parse("rater_id,voice_type,ambience,statement,rating\nr1,a,cafe,1,5\nr1,a,cafe,1,8\n");
    FAIL() << "expected an error";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse("rater_id,voice_type,ambience,statement,rating\nr1,a,cafe,0,5\n"), FormatError);
  EXPECT_THROW(parse("rater_id,voice_type,ambience,statement,rating\nr1,a,cafe,1,x\n"), FormatError);
  EXPECT_THROW(parse("rater_id,voice_type,statement,rating\nr1,a,1,1\n"), FormatError);
}

TEST(Ratings, TwoRatersTwoVoices) {
  const auto records = parse(
      "rater_id,voice_type,ambience,statement,rating\n"
      "r1,high,cafe,1,7\nr2,high,cafe,1,7\nr1,low,cafe,1,1\nr2,low,cafe,1,1\n");
  const auto s = summarize_ratings(records, {RatingAxis::kVoiceType});
  ASSERT_EQ(s.groups.size(), 2u);
  EXPECT_DOUBLE_EQ(find_group(s, 1, "high")->mean, 7.0);
  EXPECT_DOUBLE_EQ(find_group(s, 1, "low")->mean, 1.0);
  EXPECT_EQ(find_group(s, 1, "low")->n, 2u);
  ASSERT_EQ(s.analyses.size(), 1u);
  // Every rater shows the same 6-point gap: zero error variance.
  EXPECT_EQ(s.analyses[0].status, AnalysisStatus::kDegenerate);
}

TEST(Ratings, IdenticalRatingsSkipAnalysis) {
  std::string text = "rater_id,voice_type,ambience,statement,rating\n";
  for (const char* r : {"a", "b", "c"}) {
    for (const char* v : {"x", "y"}) text += std::string(r) + "," + v + ",cafe,2,4\n";
  }
  const auto s = summarize_ratings(parse(text), {RatingAxis::kVoiceType});
  ASSERT_EQ(s.analyses.size(), 1u);
  EXPECT_EQ(s.analyses[0].status, AnalysisStatus::kDegenerate);
  EXPECT_FALSE(s.analyses[0].anova.has_value());
  EXPECT_NE(s.analyses[0].note.find("zero variance"), std::string::npos);
  EXPECT_EQ(find_group(s, 2, "x")->sd, 0.0);
}

TEST(Ratings, IncompleteDesignIsDescriptiveOnly) {
  const auto s = summarize_ratings(parse("rater_id,voice_type,ambience,statement,rating\n"
                                         "r1,x,cafe,1,3\nr1,y,cafe,1,5\nr2,x,cafe,1,4\n"),
                                   {RatingAxis::kVoiceType});
  EXPECT_EQ(s.analyses[0].status, AnalysisStatus::kIncomplete);
  EXPECT_FALSE(s.analyses[0].anova.has_value());
  EXPECT_EQ(s.groups.size(), 2u);
}

TEST(Ratings, EmptyInputIsAnError) {
  EXPECT_THROW(summarize_ratings({}, {RatingAxis::kVoiceType}), InvalidInput);
}

TEST(Ratings, GroupsByBothAxes) {
  const auto s = summarize_ratings(parse("rater_id,voice_type,ambience,statement,rating\n"
                                         "r1,x,cafe,1,3\nr1,x,noisy_bar,1,5\nr2,x,cafe,1,4\n"),
                                   {RatingAxis::kVoiceType, RatingAxis::kAmbience});
  ASSERT_EQ(s.groups.size(), 2u);
  EXPECT_EQ(s.groups[0].key, (std::vector<std::string>{"x", "cafe"}));
  EXPECT_DOUBLE_EQ(s.groups[0].mean, 3.5);
  EXPECT_DOUBLE_EQ(s.groups[0].median, 3.5);
  EXPECT_NEAR(s.groups[0].sd, std::sqrt(0.5), 1e-15);
}

TEST(Ratings, TwentyFiveRaterFixtureMatchesOracle) {
  const auto records = load_ratings(testing::data_path("ratings_25x4.csv"));
  EXPECT_EQ(records.size(), 25u * 4u * 2u * 7u);
  const auto s = summarize_ratings(records, {RatingAxis::kVoiceType});
  const auto expected = testing::load_json_fixture("ratings_25x4_expected.json");
  ASSERT_EQ(s.groups.size(), expected["groups"].size());
  for (const auto& e : expected["groups"]) {
    const auto* g = find_group(s, e["statement"].get<int>(), e["voice_type"].get<std::string>());
    ASSERT_NE(g, nullptr);
    EXPECT_NEAR(g->mean, e["mean"].get<double>(), 1e-12);
    EXPECT_NEAR(g->median, e["median"].get<double>(), 1e-12);
    EXPECT_NEAR(g->sd, e["sd"].get<double>(), 1e-12);
    EXPECT_EQ(g->n, e["n"].get<std::size_t>());
  }
  ASSERT_EQ(s.analyses.size(), 7u);
  for (const auto& a : s.analyses) {
    ASSERT_EQ(a.status, AnalysisStatus::kOk) << a.note;
    const auto& e = expected["anova"][std::to_string(a.statement)];
    EXPECT_NEAR(a.anova->f_stat, e["f"].get<double>(), 1e-6 * e["f"].get<double>());
    EXPECT_NEAR(a.anova->p_value, e["p"].get<double>(), 1e-6 * std::max(e["p"].get<double>(), 1e-12));
    EXPECT_EQ(a.tukey->pairs.size(), 6u);
  }
}

TEST(Ratings, ReportMentionsStatus) {
  const auto s = summarize_ratings(load_ratings(testing::data_path("ratings_25x4.csv")), {RatingAxis::kVoiceType});
  std::ostringstream csv_out;
  write_rating_groups_csv(csv_out, s);
  EXPECT_EQ(csv_out.str().substr(0, csv_out.str().find('\n')), "statement,voice_type,n,mean,median,sd");
  std::ostringstream report;
  write_rating_report(report, s, StatConfig{});
  EXPECT_NE(report.str().find("statement 1: ok"), std::string::npos);
}

}  // namespace
}  // namespace ambivox
