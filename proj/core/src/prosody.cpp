#include "ambivox/prosody.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "ambivox/audio.hpp"
#include "ambivox/dsp.hpp"
#include "ambivox/error.hpp"

namespace ambivox {
namespace {

constexpr double kIntensityReference = 1e-10;  // squared amplitude, i.e. 1e-5 full scale
constexpr std::size_t kMaxCandidates = 4;
// A candidate whose lag is a multiple of a shorter-lag candidate's lag is
// dropped when the shorter one is at least this strong relative to it.
constexpr double kSubharmonicStrengthRatio = 0.9;
constexpr double kMultipleTolerance = 0.03;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Candidate {
  double f0 = 0.0;
  double strength = 0.0;
  double score = 0.0;
};

// First sample of a window of `len` samples centred at time t.
long window_start(double t, int fs, std::size_t len) {
  return std::lround(t * fs - static_cast<double>(len) / 2.0);
}

double mean_square(std::span<const double> x, long start, std::size_t len) {
  const long n = static_cast<long>(x.size());
  const long lo = std::max(0L, start);
  const long hi = std::min(n, start + static_cast<long>(len));
  if (hi <= lo) return 0.0;
  double sum = 0.0;
  for (long i = lo; i < hi; ++i) sum += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(hi - lo);
}

double to_db(double ms) {
  return ms > 0.0 ? 10.0 * std::log10(ms / kIntensityReference) : kNegInf;
}

bool same_grid(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > 1e-9) return false;
  }
  return true;
}

// Lowest-cost path through one run of voiced frames.
void smooth_run(const std::vector<std::vector<Candidate>>& cands, std::size_t begin,
                std::size_t end, double jump_cost, PitchTrack& track) {
  const std::size_t len = end - begin;
  std::vector<std::vector<double>> cost(len);
  std::vector<std::vector<std::size_t>> back(len);
  for (std::size_t i = 0; i < len; ++i) {
    const auto& here = cands[begin + i];
    cost[i].assign(here.size(), 0.0);
    back[i].assign(here.size(), 0);
    for (std::size_t c = 0; c < here.size(); ++c) {
      double best = 0.0;
      std::size_t arg = 0;
      if (i > 0) {
        const auto& prev = cands[begin + i - 1];
        best = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < prev.size(); ++p) {
          const double jump = jump_cost * std::abs(std::log2(here[c].f0 / prev[p].f0));
          const double total = cost[i - 1][p] + jump;
          if (total < best) {
            best = total;
            arg = p;
          }
        }
      }
      cost[i][c] = best - here[c].score;
      back[i][c] = arg;
    }
  }
  std::size_t state = static_cast<std::size_t>(
      std::min_element(cost[len - 1].begin(), cost[len - 1].end()) - cost[len - 1].begin());
  for (std::size_t i = len; i-- > 0;) {
    const Candidate& chosen = cands[begin + i][state];
    track.f0[begin + i] = chosen.f0;
    track.strength[begin + i] = chosen.strength;
    state = back[i][state];
  }
}

}  // namespace

void AnalysisConfig::validate() const {
  if (!(pitch_floor > 0.0) || !(pitch_ceiling > pitch_floor)) {
    throw InvalidInput("pitch floor must be positive and below the ceiling");
  }
  if (!(hop > 0.0)) throw InvalidInput("hop must be positive");
  if (!(min_pause > 0.0)) throw InvalidInput("min_pause must be positive");
  if (!(voicing_threshold >= 0.0 && voicing_threshold <= 1.0)) {
    throw InvalidInput("voicing threshold must lie in [0, 1]");
  }
  if (!(silence_threshold_db > 0.0)) throw InvalidInput("silence threshold must be positive");
  if (!(nucleus_dip_db >= 0.0)) throw InvalidInput("nucleus dip must be non-negative");
  if (!(octave_cost >= 0.0) || !(octave_jump_cost >= 0.0)) {
    throw InvalidInput("octave costs must be non-negative");
  }
}

double AnalysisConfig::grid_window() const { return std::max(kIntensityWindow, pitch_window()); }

AnalysisGrid make_grid(double duration, const AnalysisConfig& cfg) {
  const double w = cfg.grid_window();
  AnalysisGrid grid;
  grid.hop = cfg.hop;
  if (duration < w) {
    grid.first = duration / 2.0;
    grid.count = duration > 0.0 ? 1 : 0;
    return grid;
  }
  grid.first = w / 2.0;
  grid.count = static_cast<std::size_t>(std::floor((duration - w) / cfg.hop + 1e-9)) + 1;
  return grid;
}

std::size_t PitchTrack::voiced_count() const {
  return static_cast<std::size_t>(
      std::count_if(f0.begin(), f0.end(), [](const auto& v) { return v.has_value(); }));
}

bool SilenceMap::contains(double t) const {
  return std::any_of(pauses.begin(), pauses.end(),
                     [t](const Pause& p) { return t >= p.start && t <= p.end; });
}

double SilenceMap::total_pause() const {
  double total = 0.0;
  for (const auto& p : pauses) total += p.length();
  return total;
}

PitchTrack track_pitch(const AudioClip& clip, const AnalysisConfig& cfg) {
  cfg.validate();
  if (clip.duration_seconds() + 1e-12 < cfg.pitch_window()) {
    throw InvalidInput("clip is shorter than three periods of the pitch floor");
  }
  const int fs = clip.sample_rate();
  const auto x = clip.samples();
  const auto len = static_cast<std::size_t>(std::lround(cfg.pitch_window() * fs));
  const double min_lag = fs / cfg.pitch_ceiling;
  const double max_lag = fs / cfg.pitch_floor;
  const auto lag_lo = static_cast<std::size_t>(std::max(2.0, std::floor(min_lag)));
  const auto lag_hi = std::min(static_cast<std::size_t>(std::ceil(max_lag)) + 1, len - 2);
  const std::size_t nfft = next_pow2(len + lag_hi + 2);

  const auto window = window_coefficients(Window::kHann, len);
  std::vector<double> window_ac(lag_hi + 2);
  {
    std::vector<std::complex<double>> buf(nfft, 0.0);
    for (std::size_t i = 0; i < len; ++i) buf[i] = window[i];
    fft_inplace(buf);
    for (auto& v : buf) v = std::norm(v);
    fft_inplace(buf, true);
    for (std::size_t k = 0; k < window_ac.size(); ++k) window_ac[k] = buf[k].real() / buf[0].real();
  }

  const AnalysisGrid grid = make_grid(clip.duration_seconds(), cfg);
  PitchTrack track;
  track.times.resize(grid.count);
  track.f0.assign(grid.count, std::nullopt);
  track.strength.assign(grid.count, 0.0);

  std::vector<double> level(grid.count, kNegInf);
  std::vector<std::vector<Candidate>> cands(grid.count);
  std::vector<double> frame(len);
  std::vector<std::complex<double>> buf(nfft);
  std::vector<double> r(lag_hi + 2);

  for (std::size_t f = 0; f < grid.count; ++f) {
    track.times[f] = grid.time(f);
    const long start = window_start(track.times[f], fs, len);
    const long n = static_cast<long>(x.size());
    for (std::size_t i = 0; i < len; ++i) {
      const long k = start + static_cast<long>(i);
      frame[i] = (k >= 0 && k < n) ? x[static_cast<std::size_t>(k)] : 0.0;
    }
    level[f] = to_db(mean_square(frame, 0, len));
    const double mean = std::accumulate(frame.begin(), frame.end(), 0.0) / static_cast<double>(len);

    std::fill(buf.begin(), buf.end(), 0.0);
    for (std::size_t i = 0; i < len; ++i) buf[i] = (frame[i] - mean) * window[i];
    fft_inplace(buf);
    for (auto& v : buf) v = std::norm(v);
    fft_inplace(buf, true);
    const double r0 = buf[0].real();
    if (!(r0 > 0.0)) continue;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = (buf[k].real() / r0) / window_ac[k];

    auto& list = cands[f];
    for (std::size_t k = lag_lo; k <= lag_hi; ++k) {
      if (!(r[k] > r[k - 1] && r[k] >= r[k + 1])) continue;
      const double denom = r[k - 1] - 2.0 * r[k] + r[k + 1];
      const double delta = denom < 0.0 ? 0.5 * (r[k - 1] - r[k + 1]) / denom : 0.0;
      const double lag = static_cast<double>(k) + delta;
      const double f0 = fs / lag;
      if (f0 < cfg.pitch_floor || f0 > cfg.pitch_ceiling) continue;
      const double peak = r[k] - 0.25 * (r[k - 1] - r[k + 1]) * delta;
      const double strength = std::clamp(peak, 0.0, 1.0);
      list.push_back({f0, strength, strength + cfg.octave_cost * std::log2(f0 / cfg.pitch_floor)});
    }
    std::erase_if(list, [&](const Candidate& c) {
      return std::any_of(list.begin(), list.end(), [&](const Candidate& other) {
        const double ratio = other.f0 / c.f0;
        const double multiple = std::round(ratio);
        return multiple >= 2.0 && std::abs(ratio - multiple) <= kMultipleTolerance * multiple &&
               other.strength >= kSubharmonicStrengthRatio * c.strength;
      });
    });
    std::sort(list.begin(), list.end(),
              [](const Candidate& a, const Candidate& b) { return a.score > b.score; });
    if (list.size() > kMaxCandidates) list.resize(kMaxCandidates);
  }

  const double peak_level = *std::max_element(level.begin(), level.end());
  std::vector<bool> voiced(grid.count, false);
  for (std::size_t f = 0; f < grid.count; ++f) {
    if (cands[f].empty() || !std::isfinite(level[f])) continue;
    double best = 0.0;
    for (const auto& c : cands[f]) best = std::max(best, c.strength);
    track.strength[f] = best;
    voiced[f] = best >= cfg.voicing_threshold && level[f] >= peak_level - cfg.silence_threshold_db;
  }

  for (std::size_t f = 0; f < grid.count;) {
    if (!voiced[f]) {
      ++f;
      continue;
    }
    std::size_t end = f;
    while (end < grid.count && voiced[end]) ++end;
    smooth_run(cands, f, end, cfg.octave_jump_cost, track);
    f = end;
  }
  return track;
}

IntensityContour intensity_contour(const AudioClip& clip, const AnalysisConfig& cfg) {
  cfg.validate();
  const int fs = clip.sample_rate();
  const auto len = static_cast<std::size_t>(std::lround(AnalysisConfig::kIntensityWindow * fs));
  const AnalysisGrid grid = make_grid(clip.duration_seconds(), cfg);
  IntensityContour out;
  out.duration = clip.duration_seconds();
  out.times.resize(grid.count);
  out.level_db.resize(grid.count);
  for (std::size_t f = 0; f < grid.count; ++f) {
    out.times[f] = grid.time(f);
    out.level_db[f] = to_db(mean_square(clip.samples(), window_start(out.times[f], fs, len), len));
  }
  return out;
}

SilenceMap detect_silences(const IntensityContour& contour, const AnalysisConfig& cfg) {
  cfg.validate();
  if (contour.size() == 0) throw InvalidInput("detect_silences: empty contour");
  SilenceMap map;
  map.min_pause = cfg.min_pause;
  map.threshold_db = cfg.silence_threshold_db;

  const double peak = *std::max_element(contour.level_db.begin(), contour.level_db.end());
  const double threshold = peak - cfg.silence_threshold_db;
  auto silent = [&](std::size_t i) {
    const double v = contour.level_db[i];
    return !std::isfinite(v) || v < threshold;
  };

  const double half = contour.window / 2.0;
  for (std::size_t i = 0; i < contour.size();) {
    if (!silent(i)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < contour.size() && silent(j + 1)) ++j;
    // A silent frame means its whole window is silent, so the pause spans
    // the union of the windows.
    Pause p{std::max(0.0, contour.times[i] - half),
            std::min(contour.duration, contour.times[j] + half)};
    if (contour.size() == 1) p = {0.0, contour.duration};
    if (p.length() + 1e-9 >= cfg.min_pause) map.pauses.push_back(p);
    i = j + 1;
  }
  return map;
}

SyllableNuclei detect_syllable_nuclei(const IntensityContour& contour, const PitchTrack& pitch,
                                      const SilenceMap& silences, const AnalysisConfig& cfg) {
  cfg.validate();
  if (!same_grid(contour.times, pitch.times)) {
    throw InvalidInput("intensity contour and pitch track are on different time grids");
  }
  SyllableNuclei out;
  const auto& lv = contour.level_db;
  const std::size_t n = contour.size();

  std::vector<double> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isfinite(lv[i]) && !silences.contains(contour.times[i])) active.push_back(lv[i]);
  }
  if (active.empty()) return out;
  std::sort(active.begin(), active.end());
  const std::size_t mid = active.size() / 2;
  const double median =
      active.size() % 2 == 1 ? active[mid] : 0.5 * (active[mid - 1] + active[mid]);

  // Local maxima; a plateau is represented by its first frame.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(lv[i]) || lv[i] < median) continue;
    if (silences.contains(contour.times[i])) continue;
    if (i > 0 && lv[i - 1] >= lv[i]) continue;
    std::size_t j = i;
    while (j + 1 < n && lv[j + 1] == lv[i]) ++j;
    if (j + 1 < n && lv[j + 1] > lv[i]) continue;
    peaks.push_back(i);
  }

  std::vector<std::size_t> accepted;
  for (std::size_t p : peaks) {
    if (accepted.empty()) {
      accepted.push_back(p);
      continue;
    }
    const std::size_t last = accepted.back();
    double dip = lv[last];
    for (std::size_t k = last; k <= p; ++k) dip = std::min(dip, lv[k]);
    if (lv[last] - dip >= cfg.nucleus_dip_db && lv[p] - dip >= cfg.nucleus_dip_db) {
      accepted.push_back(p);
    } else if (lv[p] > lv[last]) {
      accepted.back() = p;
    }
  }

  for (std::size_t p : accepted) {
    if (pitch.voiced(p)) out.nucleus_times.push_back(contour.times[p]);
  }
  return out;
}

void write_tracks_csv(std::ostream& out, const PitchTrack& pitch, const IntensityContour& contour) {
  if (!same_grid(pitch.times, contour.times)) {
    throw InvalidInput("intensity contour and pitch track are on different time grids");
  }
  out << "time,f0,strength,level_db\n";
  for (std::size_t i = 0; i < pitch.size(); ++i) {
    out << pitch.times[i] << ',';
    if (pitch.f0[i]) out << *pitch.f0[i];
    out << ',' << pitch.strength[i] << ',';
    if (std::isfinite(contour.level_db[i])) out << contour.level_db[i];
    out << '\n';
  }
}

}  // namespace ambivox
