#include "ambivox/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>

#include "ambivox/error.hpp"

namespace ambivox {
namespace {

using nlohmann::json;

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Rounds through the same text the markup carries so emit/parse is exact.
double quantize(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  const double q = std::strtod(buf, nullptr);
  return q == 0.0 ? 0.0 : q;
}

std::string format_signed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%+.*f", decimals, v == 0.0 ? 0.0 : v);
  return buf;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json load_json(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw IoError(std::string("cannot open ") + what + " " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + " " + path.string() + ": " + e.what());
  }
}

Ambience require_ambience(const std::string& s) {
  const auto a = parse_ambience(s);
  if (!a) throw FormatError("unknown ambience '" + s + "'");
  return *a;
}

double require_aggregate(const AmbienceProfile& p, Feature f) {
  const auto& m = p.aggregate(f).mean;
  if (!m) {
    throw InvalidInput("profile for " + std::string(to_string(p.ambience)) + " has no " +
                       std::string(feature_name(f)) + " aggregate");
  }
  return *m;
}

}  // namespace

AmbienceProfile build_profile(const FeatureTable& table, Ambience ambience, const RecordFilter& filters) {
  AmbienceProfile p;
  p.ambience = ambience;
  p.filters = filters;
  std::array<std::vector<double>, kFeatureCount> values;
  for (const auto& row : table.rows) {
    if (row.record.ambience != ambience || !filters.matches(row.record)) continue;
    ++p.n_clips;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      if (const auto v = feature_value(row.features, kAllFeatures[i])) values[i].push_back(*v);
    }
  }
  if (p.n_clips == 0) {
    throw InvalidInput("no feature rows match ambience " + std::string(to_string(ambience)) +
                       " and the given filters");
  }
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    auto& agg = p.features[i];
    agg.count = values[i].size();
    if (agg.count == 0) continue;
    double sum = 0.0;
    for (double v : values[i]) sum += v;
    agg.mean = sum / static_cast<double>(agg.count);
    agg.median = median_of(std::move(values[i]));
  }
  return p;
}

json to_json(const AmbienceProfile& p) {
  json filters = json::object();
  if (p.filters.gender) filters["gender"] = to_string(*p.filters.gender);
  if (p.filters.condition) filters["condition"] = to_string(*p.filters.condition);
  if (p.filters.role) filters["role"] = to_string(*p.filters.role);
  if (p.filters.speaker_id) filters["speaker_id"] = *p.filters.speaker_id;
  json features = json::object();
  for (Feature f : kAllFeatures) {
    const auto& a = p.aggregate(f);
    features[std::string(feature_name(f))] = {
        {"mean", optional_number(a.mean)}, {"median", optional_number(a.median)}, {"count", a.count}};
  }
  return {{"ambience", to_string(p.ambience)}, {"n_clips", p.n_clips}, {"filters", filters}, {"features", features}};
}

AmbienceProfile profile_from_json(const json& j) {
  try {
    AmbienceProfile p;
    p.ambience = require_ambience(j.at("ambience").get<std::string>());
    p.n_clips = j.at("n_clips").get<std::size_t>();
    if (p.n_clips == 0) throw FormatError("profile n_clips must be at least 1");
    if (j.contains("filters")) {
      const auto& f = j.at("filters");
      if (f.contains("gender")) {
        p.filters.gender = parse_gender(f.at("gender").get<std::string>());
        if (!p.filters.gender) throw FormatError("profile has an unknown gender filter");
      }
      if (f.contains("condition")) {
        p.filters.condition = parse_condition(f.at("condition").get<std::string>());
        if (!p.filters.condition) throw FormatError("profile has an unknown condition filter");
      }
      if (f.contains("role")) {
        p.filters.role = parse_role(f.at("role").get<std::string>());
        if (!p.filters.role) throw FormatError("profile has an unknown role filter");
      }
      if (f.contains("speaker_id")) p.filters.speaker_id = f.at("speaker_id").get<std::string>();
    }
    const auto& features = j.at("features");
    for (Feature f : kAllFeatures) {
      const std::string name(feature_name(f));
      if (!features.contains(name)) continue;
      const auto& e = features.at(name);
      auto& a = p.aggregate(f);
      a.mean = read_optional(e, "mean");
      a.median = read_optional(e, "median");
      a.count = e.value("count", std::size_t{0});
    }
    return p;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed profile: ") + e.what());
  }
}

AmbienceProfile load_profile(const std::filesystem::path& path) {
  return profile_from_json(load_json(path, "profile"));
}

void BaselineVoiceDescriptor::validate() const {
  for (const double v : {median_pitch_hz, syll_per_sec, mean_intensity_db}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("baseline voice fields must be positive");
  }
}

json to_json(const BaselineVoiceDescriptor& b) {
  return {{"median_pitch_hz", b.median_pitch_hz},
          {"syll_per_sec", b.syll_per_sec},
          {"mean_intensity_db", b.mean_intensity_db}};
}

BaselineVoiceDescriptor baseline_from_json(const json& j) {
  BaselineVoiceDescriptor b;
  try {
    b.median_pitch_hz = j.at("median_pitch_hz").get<double>();
    b.syll_per_sec = j.at("syll_per_sec").get<double>();
    b.mean_intensity_db = j.at("mean_intensity_db").get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed baseline: ") + e.what());
  }
  b.validate();
  return b;
}

BaselineVoiceDescriptor load_baseline(const std::filesystem::path& path) {
  return baseline_from_json(load_json(path, "baseline"));
}

PitchVariants pitch_variants(double low_hz, double avg_hz) {
  if (!(low_hz > 0.0) || !(avg_hz > 0.0)) throw InvalidInput("pitch variants need positive frequencies");
  const double high = 2.0 * avg_hz - low_hz;
  if (!(high > 0.0)) throw InvalidInput("extrapolated high pitch is not positive");
  return {low_hz, avg_hz, high};
}

ProsodyPlan plan_prosody(const AmbienceProfile& profile, const BaselineVoiceDescriptor& baseline,
                         double target_dbfs, const PlanLimits& limits) {
  baseline.validate();
  if (!std::isfinite(target_dbfs)) throw InvalidInput("target dBFS must be finite");
  ProsodyPlan plan;
  plan.ambience = profile.ambience;
  plan.target_dbfs = target_dbfs;
  auto& pv = plan.provenance;
  pv.baseline = baseline;
  pv.profile_median_pitch_hz = require_aggregate(profile, Feature::kMedianPitch);
  pv.profile_voiced_syll_per_sec = require_aggregate(profile, Feature::kVoicedSyllableRate);
  pv.profile_mean_intensity_db = require_aggregate(profile, Feature::kMeanIntensity);
  if (!(pv.profile_median_pitch_hz > 0.0)) throw InvalidInput("profile median pitch must be positive");

  pv.raw_pitch_shift_semitones = 12.0 * std::log2(pv.profile_median_pitch_hz / baseline.median_pitch_hz);
  pv.raw_rate_percent = 100.0 * pv.profile_voiced_syll_per_sec / baseline.syll_per_sec;
  pv.raw_volume_shift_db = pv.profile_mean_intensity_db - baseline.mean_intensity_db;

  double pitch = pv.raw_pitch_shift_semitones;
  if (std::fabs(pitch) > limits.max_pitch_semitones) {
    pitch = std::copysign(limits.max_pitch_semitones, pitch);
    pv.clamps_applied.emplace_back("pitch");
  }
  long rate = std::lround(pv.raw_rate_percent);
  if (rate < limits.min_rate_percent || rate > limits.max_rate_percent) {
    rate = std::clamp<long>(rate, limits.min_rate_percent, limits.max_rate_percent);
    pv.clamps_applied.emplace_back("rate");
  }
  double volume = pv.raw_volume_shift_db;
  if (std::fabs(volume) > limits.max_volume_db) {
    volume = std::copysign(limits.max_volume_db, volume);
    pv.clamps_applied.emplace_back("volume");
  }
  plan.pitch_shift_semitones = quantize(pitch, 2);
  plan.rate_percent = static_cast<int>(rate);
  plan.volume_shift_db = quantize(volume, 1);
  return plan;
}

json to_json(const ProsodyPlan& plan) {
  const auto& pv = plan.provenance;
  return {{"ambience", to_string(plan.ambience)},
          {"pitch_shift_semitones", plan.pitch_shift_semitones},
          {"rate_percent", plan.rate_percent},
          {"volume_shift_db", plan.volume_shift_db},
          {"target_dbfs", plan.target_dbfs},
          {"clamps_applied", pv.clamps_applied},
          {"provenance",
           {{"profile",
             {{"median_pitch_hz", pv.profile_median_pitch_hz},
              {"voiced_syll_per_sec", pv.profile_voiced_syll_per_sec},
              {"mean_intensity_db", pv.profile_mean_intensity_db}}},
            {"baseline", to_json(pv.baseline)},
            {"unclamped",
             {{"pitch_shift_semitones", pv.raw_pitch_shift_semitones},
              {"rate_percent", pv.raw_rate_percent},
              {"volume_shift_db", pv.raw_volume_shift_db}}}}}};
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      case '\'':
        out += "&apos;";
        break;
      default:
        out.push_back(c);
    }
  }
  return out;
}

std::string emit_ssml(const ProsodyPlan& plan, std::string_view text) {
  if (text.empty()) throw InvalidInput("markup text must not be empty");
  return "<speak><prosody pitch=\"" + format_signed(plan.pitch_shift_semitones, 2) + "st\" rate=\"" +
         std::to_string(plan.rate_percent) + "%\" volume=\"" + format_signed(plan.volume_shift_db, 1) +
         "dB\">" + xml_escape(text) + "</prosody></speak>";
}

SsmlProsody parse_ssml(std::string_view markup) {
  static const std::regex pattern(
      R"(<speak><prosody pitch="([+-][0-9]+\.[0-9]{2})st" rate="([0-9]+)%" volume="([+-][0-9]+\.[0-9])dB">([^<]*)</prosody></speak>)");
  std::match_results<std::string_view::const_iterator> m;
  if (!std::regex_match(markup.begin(), markup.end(), m, pattern)) {
    throw FormatError("markup does not match the prosody grammar");
  }
  SsmlProsody out;
  out.pitch_semitones = std::stod(m[1].str());
  out.rate_percent = std::stoi(m[2].str());
  out.volume_db = std::stod(m[3].str());
  const std::string body = m[4].str();
  static const std::array<std::pair<std::string_view, char>, 5> entities = {
      {{"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}}};
  for (std::size_t i = 0; i < body.size();) {
    if (body[i] == '&') {
      bool found = false;
      for (const auto& [name, ch] : entities) {
        if (body.compare(i, name.size(), name) == 0) {
          out.text.push_back(ch);
          i += name.size();
          found = true;
          break;
        }
      }
      if (!found) throw FormatError("markup text has an unknown entity");
    } else {
      out.text.push_back(body[i++]);
    }
  }
  return out;
}

}  // namespace ambivox
