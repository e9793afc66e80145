#include "ambivox/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "ambivox/audio.hpp"
#include "ambivox/csv.hpp"
#include "ambivox/error.hpp"
#include "ambivox/wav.hpp"

namespace ambivox {
namespace {

constexpr std::array<std::string_view, 3> kGenderNames = {"female", "male", "other"};
constexpr std::array<std::string_view, 7> kAmbienceNames = {
    "bakery_baseline", "fine_dining", "cafe", "lively_restaurant", "quiet_bar", "noisy_bar", "night_club",
};
constexpr std::array<std::string_view, 2> kConditionNames = {"scripted", "unscripted"};
constexpr std::array<std::string_view, 2> kRoleNames = {"waiter", "customer"};

constexpr std::array<std::string_view, 6> kManifestColumns = {
    "clip_path", "speaker_id", "gender", "ambience", "condition", "role",
};
constexpr std::string_view kDurationColumn = "duration_s";
constexpr std::string_view kConfigPrefix = "# analysis";

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s, const std::array<std::string_view, N>& names) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

template <typename E>
E require_token(std::optional<E> v, std::string_view column, const std::string& token,
                std::size_t line, std::string_view what) {
  if (!v) {
    throw FormatError(std::string(what) + " line " + std::to_string(line) + ": unknown " +
                      std::string(column) + " '" + token + "'");
  }
  return *v;
}

struct ColumnMap {
  std::array<std::size_t, 6> index{};

  explicit ColumnMap(const csv::Table& t) {
    for (std::size_t i = 0; i < kManifestColumns.size(); ++i) index[i] = t.require_column(kManifestColumns[i]);
  }

  ClipRecord record(const csv::Row& row, std::string_view what) const {
    ClipRecord r;
    const auto& f = row.fields;
    r.clip_path = f[index[0]];
    r.speaker_id = f[index[1]];
    if (r.clip_path.empty()) {
      throw FormatError(std::string(what) + " line " + std::to_string(row.line) + ": empty clip_path");
    }
    if (r.speaker_id.empty()) {
      throw FormatError(std::string(what) + " line " + std::to_string(row.line) + ": empty speaker_id");
    }
    r.gender = require_token(parse_gender(f[index[2]]), "gender", f[index[2]], row.line, what);
    r.ambience = require_token(parse_ambience(f[index[3]]), "ambience", f[index[3]], row.line, what);
    r.condition = require_token(parse_condition(f[index[4]]), "condition", f[index[4]], row.line, what);
    r.role = require_token(parse_role(f[index[5]]), "role", f[index[5]], row.line, what);
    return r;
  }
};

std::vector<std::string> metadata_fields(const ClipRecord& r) {
  return {r.clip_path,
          r.speaker_id,
          std::string(to_string(r.gender)),
          std::string(to_string(r.ambience)),
          std::string(to_string(r.condition)),
          std::string(to_string(r.role))};
}

std::string config_line(const AnalysisConfig& c) {
  std::ostringstream out;
  out << kConfigPrefix << " pitch_floor=" << csv::format_double(c.pitch_floor)
      << " pitch_ceiling=" << csv::format_double(c.pitch_ceiling)
      << " hop=" << csv::format_double(c.hop)
      << " voicing_threshold=" << csv::format_double(c.voicing_threshold)
      << " silence_threshold_db=" << csv::format_double(c.silence_threshold_db)
      << " min_pause=" << csv::format_double(c.min_pause)
      << " nucleus_dip_db=" << csv::format_double(c.nucleus_dip_db)
      << " octave_cost=" << csv::format_double(c.octave_cost)
      << " octave_jump_cost=" << csv::format_double(c.octave_jump_cost);
  return out.str();
}

AnalysisConfig parse_config_line(const std::string& line) {
  AnalysisConfig c;
  const std::map<std::string, double*> fields = {
      {"pitch_floor", &c.pitch_floor},
      {"pitch_ceiling", &c.pitch_ceiling},
      {"hop", &c.hop},
      {"voicing_threshold", &c.voicing_threshold},
      {"silence_threshold_db", &c.silence_threshold_db},
      {"min_pause", &c.min_pause},
      {"nucleus_dip_db", &c.nucleus_dip_db},
      {"octave_cost", &c.octave_cost},
      {"octave_jump_cost", &c.octave_jump_cost},
  };
  std::istringstream in(line.substr(kConfigPrefix.size()));
  std::string kv;
  while (in >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const auto it = fields.find(kv.substr(0, eq));
    if (it != fields.end()) *it->second = csv::parse_double(kv.substr(eq + 1), "feature table line 1");
  }
  return c;
}

}  // namespace

std::string_view to_string(Gender g) { return kGenderNames[static_cast<std::size_t>(g)]; }
std::string_view to_string(Ambience a) { return kAmbienceNames[static_cast<std::size_t>(a)]; }
std::string_view to_string(Condition c) { return kConditionNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(Role r) { return kRoleNames[static_cast<std::size_t>(r)]; }
std::optional<Gender> parse_gender(std::string_view s) { return parse_enum<Gender>(s, kGenderNames); }
std::optional<Ambience> parse_ambience(std::string_view s) { return parse_enum<Ambience>(s, kAmbienceNames); }
std::optional<Condition> parse_condition(std::string_view s) {
  return parse_enum<Condition>(s, kConditionNames);
}
std::optional<Role> parse_role(std::string_view s) { return parse_enum<Role>(s, kRoleNames); }

CorpusManifest parse_manifest(std::istream& in, const std::filesystem::path& root, bool require_files) {
  const csv::Table table = csv::Table::read(in, "manifest");
  const ColumnMap columns(table);
  CorpusManifest m;
  m.root = root;
  std::map<std::string, std::size_t> seen;
  for (const auto& row : table.rows()) {
    ClipRecord r = columns.record(row, "manifest");
    const auto [it, inserted] = seen.emplace(r.clip_path, row.line);
    if (!inserted) {
      throw FormatError("manifest line " + std::to_string(row.line) + ": duplicate clip_path '" +
                        r.clip_path + "' (first seen on line " + std::to_string(it->second) + ")");
    }
    const std::filesystem::path p(r.clip_path);
    r.resolved_path = p.is_absolute() ? p : root / p;
    if (require_files && !std::filesystem::exists(r.resolved_path)) {
      throw IoError("manifest line " + std::to_string(row.line) + ": missing file " +
                    r.resolved_path.string());
    }
    m.records.push_back(std::move(r));
  }
  return m;
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  return parse_manifest(in, path.parent_path(), true);
}

void write_manifest(std::ostream& out, const CorpusManifest& manifest) {
  csv::write_row(out, {kManifestColumns.begin(), kManifestColumns.end()});
  for (const auto& r : manifest.records) csv::write_row(out, metadata_fields(r));
}

std::vector<SpeakerAmbienceBatch> partition_batches(const CorpusManifest& manifest) {
  std::map<std::pair<std::string, Ambience>, std::vector<ClipRecord>> groups;
  for (const auto& r : manifest.records) groups[{r.speaker_id, r.ambience}].push_back(r);
  std::vector<SpeakerAmbienceBatch> out;
  out.reserve(groups.size());
  for (auto& [key, clips] : groups) {
    SpeakerAmbienceBatch b;
    b.speaker_id = key.first;
    b.ambience = key.second;
    b.size_ok = clips.size() >= kMinBatchSize && clips.size() <= kMaxBatchSize;
    b.clips = std::move(clips);
    out.push_back(std::move(b));
  }
  return out;
}

ValidationReport validate_corpus(const CorpusManifest& manifest) {
  ValidationReport rep;
  rep.total = manifest.records.size();
  if (manifest.records.empty()) {
    rep.warnings.push_back("manifest contains no clips");
    return rep;
  }
  for (const auto& r : manifest.records) {
    ++rep.per_gender[static_cast<std::size_t>(r.gender)];
    double seconds = 0.0;
    try {
      seconds = probe_wav(r.resolved_path).duration_seconds();
    } catch (const std::exception& e) {
      ++rep.unreadable;
      rep.warnings.push_back("clip " + r.clip_path + " unreadable: " + e.what());
      continue;
    }
    const auto bin = static_cast<std::size_t>(std::clamp(std::floor(seconds), 0.0, 8.0));
    ++rep.duration_histogram[bin];
    if (seconds < kMinClipSeconds || seconds > kMaxClipSeconds) {
      std::ostringstream w;
      w.precision(3);
      w << "clip " << r.clip_path << " lasts " << seconds << " s, outside [" << kMinClipSeconds
        << ", " << kMaxClipSeconds << "] s";
      rep.warnings.push_back(w.str());
    }
  }
  for (const auto& b : partition_batches(manifest)) {
    rep.batches.push_back({b.speaker_id, b.ambience, b.clips.size(), b.size_ok});
    if (!b.size_ok) {
      rep.warnings.push_back("batch speaker=" + b.speaker_id + " ambience=" +
                             std::string(to_string(b.ambience)) + " has " +
                             std::to_string(b.clips.size()) + " clips, outside [" +
                             std::to_string(kMinBatchSize) + ", " + std::to_string(kMaxBatchSize) + "]");
    }
  }
  return rep;
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  out << "utterances: " << total << '\n';
  for (std::size_t g = 0; g < per_gender.size(); ++g) {
    out << "  " << kGenderNames[g] << ": " << per_gender[g] << '\n';
  }
  out << "speaker-ambience batches: " << batches.size() << '\n';
  for (const auto& b : batches) {
    out << "  " << b.speaker_id << ' ' << to_string(b.ambience) << ": " << b.size
        << (b.size_ok ? "" : " (outside expected range)") << '\n';
  }
  out << "clip durations:\n";
  for (std::size_t i = 0; i < duration_histogram.size(); ++i) {
    out << "  ";
    if (i + 1 < duration_histogram.size()) {
      out << '[' << i << ", " << i + 1 << ") s: ";
    } else {
      out << ">= " << i << " s: ";
    }
    out << duration_histogram[i] << '\n';
  }
  if (unreadable > 0) out << "unreadable clips: " << unreadable << '\n';
  out << "warnings: " << warnings.size() << '\n';
  for (const auto& w : warnings) out << "  warning: " << w << '\n';
  return out.str();
}

bool RecordFilter::matches(const ClipRecord& r) const {
  return (!gender || r.gender == *gender) && (!condition || r.condition == *condition) &&
         (!role || r.role == *role) && (!speaker_id || r.speaker_id == *speaker_id);
}

FeatureTable extract_corpus(const CorpusManifest& manifest, const AnalysisConfig& cfg,
                            unsigned workers) {
  if (workers == 0) throw InvalidInput("worker count must be positive");
  cfg.validate();
  const std::size_t n = manifest.records.size();
  std::vector<std::optional<FeatureRow>> rows(n);
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};

  auto work = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      const ClipRecord& rec = manifest.records[i];
      try {
        const AudioClip clip = load_clip(rec.resolved_path, kCanonicalSampleRate);
        rows[i] = FeatureRow{rec, clip.duration_seconds(), extract_features(clip, cfg)};
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  {
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(work);
  }

  FeatureTable table;
  table.config = cfg;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i]) {
      table.rows.push_back(std::move(*rows[i]));
    } else {
      table.failures.push_back({manifest.records[i].clip_path, errors[i]});
    }
  }
  return table;
}

void write_feature_table(std::ostream& out, const FeatureTable& table) {
  out << config_line(table.config) << '\n';
  std::vector<std::string> header(kManifestColumns.begin(), kManifestColumns.end());
  header.emplace_back(kDurationColumn);
  for (Feature f : kAllFeatures) header.emplace_back(feature_name(f));
  csv::write_row(out, header);
  for (const auto& row : table.rows) {
    auto fields = metadata_fields(row.record);
    fields.push_back(csv::format_double(row.duration_seconds));
    for (Feature f : kAllFeatures) {
      const auto v = feature_value(row.features, f);
      fields.push_back(v ? csv::format_double(*v) : std::string());
    }
    csv::write_row(out, fields);
  }
}

FeatureTable read_feature_table(std::istream& in) {
  std::stringstream body;
  body << in.rdbuf();
  const std::string text = body.str();
  FeatureTable table;
  if (text.rfind(kConfigPrefix, 0) == 0) {
    table.config = parse_config_line(text.substr(0, text.find('\n')));
  }
  std::istringstream stream(text);
  const csv::Table t = csv::Table::read(stream, "feature table");
  const ColumnMap columns(t);
  const std::size_t duration_col = t.require_column(kDurationColumn);
  std::array<std::size_t, kFeatureCount> feature_cols{};
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    feature_cols[i] = t.require_column(feature_name(kAllFeatures[i]));
  }
  for (const auto& row : t.rows()) {
    FeatureRow fr;
    fr.record = columns.record(row, "feature table");
    fr.record.resolved_path = fr.record.clip_path;
    const std::string where = "feature table line " + std::to_string(row.line);
    fr.duration_seconds = csv::parse_double(row.fields[duration_col], where);
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      const std::string& cell = row.fields[feature_cols[i]];
      if (cell.empty()) {
        set_feature_value(fr.features, kAllFeatures[i], std::nullopt);
      } else {
        set_feature_value(fr.features, kAllFeatures[i], csv::parse_double(cell, where));
      }
    }
    table.rows.push_back(std::move(fr));
  }
  return table;
}

FeatureTable load_feature_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open feature table " + path.string());
  return read_feature_table(in);
}

void write_failures(std::ostream& out, const FeatureTable& table) {
  for (const auto& f : table.failures) out << f.clip_path << '\t' << f.reason << '\n';
}

}  // namespace ambivox
