#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ambivox/audio.hpp"
#include "ambivox/csv.hpp"
#include "ambivox/error.hpp"
#include "ambivox/planner.hpp"
#include "ambivox/radar.hpp"
#include "ambivox/ratings.hpp"
#include "ambivox/wav.hpp"

#ifndef AMBIVOX_VERSION
#define AMBIVOX_VERSION "unknown"
#endif

namespace ambivox::cli {
namespace {

struct FilterArgs {
  std::string gender;
  std::string condition;
  std::string role;
  std::string speaker;

  void attach(CLI::App* app) {
    app->add_option("--gender", gender, "Keep only clips of this gender (female, male, other)");
    app->add_option("--condition", condition, "Keep only scripted or unscripted clips");
    app->add_option("--role", role, "Keep only waiter or customer clips");
    app->add_option("--speaker", speaker, "Keep only this speaker id");
  }

  RecordFilter build() const {
    RecordFilter f;
    if (!gender.empty()) {
      f.gender = parse_gender(gender);
      if (!f.gender) throw CLI::ValidationError("--gender", "unknown gender '" + gender + "'");
    }
    if (!condition.empty()) {
      f.condition = parse_condition(condition);
      if (!f.condition) throw CLI::ValidationError("--condition", "unknown condition '" + condition + "'");
    }
    if (!role.empty()) {
      f.role = parse_role(role);
      if (!f.role) throw CLI::ValidationError("--role", "unknown role '" + role + "'");
    }
    if (!speaker.empty()) f.speaker_id = speaker;
    return f;
  }
};

struct ConfigArgs {
  AnalysisConfig cfg;

  void attach(CLI::App* app) {
    app->add_option("--pitch-floor", cfg.pitch_floor, "Lowest pitch candidate in Hz")->capture_default_str();
    app->add_option("--pitch-ceiling", cfg.pitch_ceiling, "Highest pitch candidate in Hz")->capture_default_str();
    app->add_option("--hop", cfg.hop, "Analysis hop in seconds")->capture_default_str();
    app->add_option("--voicing-threshold", cfg.voicing_threshold, "Autocorrelation strength for voicing")
        ->capture_default_str();
    app->add_option("--silence-db", cfg.silence_threshold_db, "Silence margin below the loudest frame in dB")
        ->capture_default_str();
    app->add_option("--min-pause", cfg.min_pause, "Shortest silence counted as a pause in seconds")
        ->capture_default_str();
    app->add_option("--dip-db", cfg.nucleus_dip_db, "Intensity dip separating syllable nuclei in dB")
        ->capture_default_str();
  }
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path);
  return f;
}

Feature parse_feature_arg(const std::string& name) {
  try {
    return parse_feature(name);
  } catch (const InvalidInput&) {
    throw CLI::ValidationError("--feature", "unknown feature '" + name + "'");
  }
}

std::vector<Feature> parse_feature_list(const std::vector<std::string>& names) {
  if (names.empty()) return {kAllFeatures.begin(), kAllFeatures.end()};
  std::vector<Feature> out;
  for (const auto& n : names) out.push_back(parse_feature_arg(n));
  return out;
}

Ambience parse_ambience_arg(const std::string& name, const char* option) {
  const auto a = parse_ambience(name);
  if (!a) throw CLI::ValidationError(option, "unknown ambience '" + name + "'");
  return *a;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string fmt(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// extract -------------------------------------------------------------------

struct ExtractCmd {
  std::string manifest;
  std::string out;
  std::string failures;
  unsigned workers = 1;
  ConfigArgs config;

  void attach(CLI::App* app) {
    app->add_option("--manifest", manifest, "Corpus manifest CSV")->required()->check(CLI::ExistingFile);
    app->add_option("--out", out, "Feature table CSV to write")->required();
    app->add_option("--workers", workers, "Number of worker threads")->capture_default_str()->check(
        CLI::Range(1u, 256u));
    app->add_option("--failures", failures, "Write per-clip failures (path<TAB>reason) here");
    config.attach(app);
  }

  int run(std::ostream&, std::ostream& err) const {
    const CorpusManifest m = load_manifest(manifest);
    const FeatureTable table = extract_corpus(m, config.cfg, workers);
    {
      auto f = open_output(out);
      write_feature_table(f, table);
    }
    if (!failures.empty()) {
      auto f = open_output(failures);
      write_failures(f, table);
    }
    if (!table.failures.empty()) {
      err << "warning: " << table.failures.size() << " of " << m.records.size() << " clips failed\n";
      if (failures.empty()) write_failures(err, table);
    }
    return kExitOk;
  }
};

// validate / batches --------------------------------------------------------

struct ValidateCmd {
  std::string manifest;
  void attach(CLI::App* app) {
    app->add_option("--manifest", manifest, "Corpus manifest CSV")->required()->check(CLI::ExistingFile);
  }
  int run(std::ostream& out, std::ostream&) const {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot open manifest " + manifest);
    const auto m = parse_manifest(in, std::filesystem::path(manifest).parent_path(), false);
    out << validate_corpus(m).to_text();
    return kExitOk;
  }
};

struct BatchesCmd {
  std::string manifest;
  void attach(CLI::App* app) {
    app->add_option("--manifest", manifest, "Corpus manifest CSV")->required()->check(CLI::ExistingFile);
  }
  int run(std::ostream& out, std::ostream&) const {
    std::ifstream in(manifest);
    if (!in) throw IoError("cannot open manifest " + manifest);
    const auto m = parse_manifest(in, std::filesystem::path(manifest).parent_path(), false);
    csv::write_row(out, {"speaker_id", "ambience", "clips", "size_ok"});
    for (const auto& b : partition_batches(m)) {
      csv::write_row(out, {b.speaker_id, std::string(to_string(b.ambience)), std::to_string(b.clips.size()),
                           b.size_ok ? "yes" : "no"});
    }
    return kExitOk;
  }
};

// anova / tukey -------------------------------------------------------------

struct AnovaCmd {
  std::string features;
  std::vector<std::string> feature_names;
  double alpha = 0.1;
  std::string format = "text";
  FilterArgs filters;

  void attach(CLI::App* app) {
    app->add_option("--features", features, "Feature table CSV from extract")->required()->check(CLI::ExistingFile);
    app->add_option("--feature", feature_names, "Feature to test (repeatable; default all)");
    app->add_option("--alpha", alpha, "Significance threshold")->capture_default_str()->check(
        CLI::Range(0.0, 1.0));
    app->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "csv"}))->capture_default_str();
    filters.attach(app);
  }

  int run(std::ostream& out, std::ostream& err) const {
    StatConfig sc{alpha};
    sc.validate();
    const auto table = load_feature_table(features);
    const auto filter = filters.build();
    const bool as_csv = format == "csv";
    if (as_csv) {
      csv::write_row(out, {"feature", "subjects", "conditions", "df_treatment", "df_error", "f", "p", "significant",
                           "status"});
    } else {
      out << pad("feature", 30) << pad("n", 5) << pad("F(df1, df2)", 26) << pad("p", 14) << "sig\n";
    }
    for (Feature f : parse_feature_list(feature_names)) {
      const std::string name(feature_name(f));
      const FeatureDesign fd = feature_design(table, f, filter);
      for (const auto& s : fd.dropped) err << "note: " << name << ": speaker " << s << " dropped (incomplete)\n";
      const auto& d = fd.design;
      if (d.n() < 2 || d.k() < 2) {
        if (as_csv) {
          csv::write_row(out, {name, std::to_string(d.n()), std::to_string(d.k()), "", "", "", "", "", "insufficient"});
        } else {
          out << pad(name, 30) << pad(std::to_string(d.n()), 5) << "insufficient data\n";
        }
        continue;
      }
      const AnovaResult r = ranova(d);
      const std::string status = r.degenerate ? "degenerate" : "ok";
      if (as_csv) {
        csv::write_row(out, {name, std::to_string(d.n()), std::to_string(d.k()), std::to_string(r.df_treatment),
                             std::to_string(r.df_error), csv::format_double(r.f_stat),
                             csv::format_double(r.p_value), r.p_value < alpha ? "yes" : "no", status});
      } else {
        const std::string fcol =
            "F(" + std::to_string(r.df_treatment) + ", " + std::to_string(r.df_error) + ") = " + fmt(r.f_stat);
        out << pad(name, 30) << pad(std::to_string(d.n()), 5) << pad(fcol, 26) << pad(fmt(r.p_value), 14)
            << significance_stars(r.p_value, alpha) << (r.degenerate ? " (degenerate)" : "") << '\n';
      }
    }
    return kExitOk;
  }
};

struct TukeyCmd {
  std::string features;
  std::string feature;
  double alpha = 0.1;
  FilterArgs filters;

  void attach(CLI::App* app) {
    app->add_option("--features", features, "Feature table CSV from extract")->required()->check(CLI::ExistingFile);
    app->add_option("--feature", feature, "Feature to compare across ambiences")->required();
    app->add_option("--alpha", alpha, "Significance threshold")->capture_default_str()->check(
        CLI::Range(0.0, 1.0));
    filters.attach(app);
  }

  int run(std::ostream& out, std::ostream& err) const {
    StatConfig{alpha}.validate();
    const Feature f = parse_feature_arg(feature);
    const auto table = load_feature_table(features);
    const FeatureDesign fd = feature_design(table, f, filters.build());
    for (const auto& s : fd.dropped) err << "note: speaker " << s << " dropped (incomplete)\n";
    const AnovaResult r = ranova(fd.design);
    const TukeyResult t = tukey_hsd(fd.design, r);
    csv::write_row(out, {"a", "b", "mean_difference", "q", "p_adjusted", "significant"});
    for (const auto& p : t.pairs) {
      csv::write_row(out, {fd.design.conditions[p.a], fd.design.conditions[p.b], csv::format_double(p.mean_difference),
                           csv::format_double(p.q), csv::format_double(p.p_adjusted),
                           p.p_adjusted < alpha ? "yes" : "no"});
    }
    return kExitOk;
  }
};

// ratings -------------------------------------------------------------------

struct RatingsCmd {
  std::string ratings;
  std::vector<std::string> group_by = {"voice_type"};
  std::string csv_out;
  double alpha = 0.1;

  void attach(CLI::App* app) {
    app->add_option("--ratings", ratings, "Ratings CSV")->required()->check(CLI::ExistingFile);
    app->add_option("--group-by", group_by, "Grouping axes: voice_type, ambience")
        ->delimiter(',')
        ->check(CLI::IsMember({"voice_type", "ambience"}))
        ->capture_default_str();
    app->add_option("--csv", csv_out, "Write the group summary CSV here instead of standard output");
    app->add_option("--alpha", alpha, "Significance threshold")->capture_default_str()->check(
        CLI::Range(0.0, 1.0));
  }

  int run(std::ostream& out, std::ostream&) const {
    StatConfig sc{alpha};
    sc.validate();
    std::vector<RatingAxis> axes;
    for (const auto& g : group_by) axes.push_back(g == "ambience" ? RatingAxis::kAmbience : RatingAxis::kVoiceType);
    const auto summary = summarize_ratings(load_ratings(ratings), axes);
    if (csv_out.empty()) {
      write_rating_groups_csv(out, summary);
      out << '\n';
    } else {
      auto f = open_output(csv_out);
      write_rating_groups_csv(f, summary);
    }
    write_rating_report(out, summary, sc);
    return kExitOk;
  }
};

// profile / plan / radar ----------------------------------------------------

struct ProfileCmd {
  std::string features;
  std::string ambience;
  std::string out_path;
  FilterArgs filters;

  void attach(CLI::App* app) {
    app->add_option("--features", features, "Feature table CSV from extract")->required()->check(CLI::ExistingFile);
    app->add_option("--ambience", ambience, "Ambience to aggregate")->required();
    app->add_option("--out", out_path, "Write the profile JSON here instead of standard output");
    filters.attach(app);
  }

  int run(std::ostream& out, std::ostream&) const {
    const Ambience a = parse_ambience_arg(ambience, "--ambience");
    const auto profile = build_profile(load_feature_table(features), a, filters.build());
    const std::string text = to_json(profile).dump(2) + "\n";
    if (out_path.empty()) {
      out << text;
    } else {
      open_output(out_path) << text;
    }
    return kExitOk;
  }
};

struct PlanCmd {
  std::string profile;
  std::string baseline;
  std::string text;
  std::string low_profile;
  double target_dbfs = kDefaultTargetDbfs;

  void attach(CLI::App* app) {
    app->add_option("--profile", profile, "Ambience profile JSON")->required()->check(CLI::ExistingFile);
    app->add_option("--baseline", baseline, "Baseline voice JSON")->required()->check(CLI::ExistingFile);
    app->add_option("--text", text, "Utterance to wrap in prosody markup");
    app->add_option("--low-profile", low_profile,
                    "Profile whose median pitch is the low variant; adds low/avg/high pitch variants")
        ->check(CLI::ExistingFile);
    app->add_option("--target-dbfs", target_dbfs, "Loudness normalization target")->capture_default_str();
  }

  int run(std::ostream& out, std::ostream&) const {
    const auto p = load_profile(profile);
    const auto plan = plan_prosody(p, load_baseline(baseline), target_dbfs);
    auto j = to_json(plan);
    if (!low_profile.empty()) {
      const auto low = load_profile(low_profile);
      const auto& lo = low.aggregate(Feature::kMedianPitch).mean;
      if (!lo) throw InvalidInput("low profile has no median pitch aggregate");
      const auto v = pitch_variants(*lo, plan.provenance.profile_median_pitch_hz);
      j["pitch_variants"] = {{"low_hz", v.low_hz}, {"avg_hz", v.avg_hz}, {"high_hz", v.high_hz}};
    }
    if (!text.empty()) j["markup"] = emit_ssml(plan, text);
    out << j.dump(2) << '\n';
    if (!text.empty()) out << emit_ssml(plan, text) << '\n';
    return kExitOk;
  }
};

struct RadarCmd {
  std::string baseline;
  std::vector<std::string> profiles;
  std::vector<std::string> axes;
  std::string out_path;

  void attach(CLI::App* app) {
    app->add_option("--baseline", baseline, "Profile JSON drawn as the unit ring")->required()->check(
        CLI::ExistingFile);
    app->add_option("--profile", profiles, "Profile JSON to plot (repeatable)")->required()->check(
        CLI::ExistingFile);
    app->add_option("--axes", axes, "Comma-separated features (default: all 11)")->delimiter(',');
    app->add_option("--out", out_path, "Write the SVG here instead of standard output");
  }

  int run(std::ostream& out, std::ostream&) const {
    std::vector<AmbienceProfile> ps;
    for (const auto& p : profiles) ps.push_back(load_profile(p));
    const std::string svg = radar_svg(ps, load_profile(baseline), parse_feature_list(axes));
    if (out_path.empty()) {
      out << svg;
    } else {
      open_output(out_path) << svg;
    }
    return kExitOk;
  }
};

// normalize -----------------------------------------------------------------

struct NormalizeCmd {
  std::string in;
  std::string out_path;
  double target_dbfs = kDefaultTargetDbfs;

  void attach(CLI::App* app) {
    app->add_option("--in", in, "Input WAV")->required()->check(CLI::ExistingFile);
    app->add_option("--out", out_path, "Output WAV (16-bit mono)")->required();
    app->add_option("--target-dbfs", target_dbfs, "Target RMS level")->capture_default_str();
  }

  int run(std::ostream& out, std::ostream& err) const {
    const WavInfo info = probe_wav(in);
    const AudioClip clip = load_clip(in, info.sample_rate);
    const GainResult g = apply_gain_to_dbfs(clip, target_dbfs);
    write_clip(out_path, g.clip);
    out << "gain_db=" << fmt(g.gain_db, "%.3f") << " level_dbfs=" << fmt(measure_dbfs(g.clip), "%.3f") << '\n';
    if (g.clipped) err << "warning: samples were limited to full scale; level is below target\n";
    return kExitOk;
  }
};

}  // namespace

FeatureDesign feature_design(const FeatureTable& table, Feature feature, const RecordFilter& filter) {
  std::map<std::string, std::map<Ambience, std::pair<double, int>>> cells;
  std::set<Ambience> ambiences;
  std::set<std::string> speakers;
  for (const auto& row : table.rows) {
    if (!filter.matches(row.record)) continue;
    speakers.insert(row.record.speaker_id);
    ambiences.insert(row.record.ambience);
    const auto v = feature_value(row.features, feature);
    if (!v) continue;
    auto& c = cells[row.record.speaker_id][row.record.ambience];
    c.first += *v;
    ++c.second;
  }
  FeatureDesign fd;
  for (Ambience a : ambiences) fd.design.conditions.emplace_back(to_string(a));
  for (const auto& s : speakers) {
    const auto it = cells.find(s);
    if (it == cells.end() || it->second.size() != ambiences.size()) {
      fd.dropped.push_back(s);
      continue;
    }
    std::vector<double> row;
    for (Ambience a : ambiences) {
      const auto& c = it->second.at(a);
      row.push_back(c.first / c.second);
    }
    fd.design.subjects.push_back(s);
    fd.design.values.push_back(std::move(row));
  }
  return fd;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ambience-aware vocal feature analysis and prosody planning", "ambivox"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("--verbose", verbose, "Print the version stamp to standard error");

  ExtractCmd extract;
  ValidateCmd validate;
  BatchesCmd batches;
  AnovaCmd anova;
  TukeyCmd tukey;
  RatingsCmd ratings;
  ProfileCmd profile;
  PlanCmd plan;
  RadarCmd radar;
  NormalizeCmd normalize;

  extract.attach(app.add_subcommand("extract", "Extract the eleven features for every clip in a manifest"));
  validate.attach(app.add_subcommand("validate", "Report corpus totals, batch sizes and duration warnings"));
  batches.attach(app.add_subcommand("batches", "List speaker-ambience batches"));
  anova.attach(app.add_subcommand("anova", "Repeated-measures ANOVA across ambiences per feature"));
  tukey.attach(app.add_subcommand("tukey", "Tukey HSD pairwise comparisons across ambiences"));
  ratings.attach(app.add_subcommand("ratings", "Summarize Likert ratings and compare voice types"));
  profile.attach(app.add_subcommand("profile", "Aggregate features for one ambience into a profile JSON"));
  plan.attach(app.add_subcommand("plan", "Turn a profile and a baseline voice into a prosody plan"));
  radar.attach(app.add_subcommand("radar", "Draw baseline-normalized profiles as an SVG radar chart"));
  normalize.attach(app.add_subcommand("normalize", "Scale a WAV file to a target RMS level"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (verbose) err << "ambivox " << AMBIVOX_VERSION << '\n';

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string& name = sub->get_name();
    if (name == "extract") return extract.run(out, err);
    if (name == "validate") return validate.run(out, err);
    if (name == "batches") return batches.run(out, err);
    if (name == "anova") return anova.run(out, err);
    if (name == "tukey") return tukey.run(out, err);
    if (name == "ratings") return ratings.run(out, err);
    if (name == "profile") return profile.run(out, err);
    if (name == "plan") return plan.run(out, err);
    if (name == "radar") return radar.run(out, err);
    if (name == "normalize") return normalize.run(out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDataError;
  }
  return kExitUsage;
}

}  // namespace ambivox::cli
