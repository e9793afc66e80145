#include "ambivox/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ambivox/audio.hpp"
#include "ambivox/dsp.hpp"
#include "ambivox/error.hpp"

namespace ambivox {
namespace {

constexpr double kMaxPeriodRatio = 1.3;
constexpr double kSlopeLowHz = 50.0;
constexpr double kSlopeHighHz = 8000.0;
// Waveform matches weaker than this end the current voiced stretch.
constexpr double kMinPeriodCorrelation = 0.5;

constexpr std::array<std::string_view, kFeatureCount> kNames = {
    "mean_intensity_db",
    "energy",
    "max_intensity_db",
    "median_pitch_hz",
    "pitch_range_hz",
    "shimmer_local",
    "jitter_local",
    "spectral_slope_db_per_octave",
    "voiced_syll_per_sec",
    "overall_syll_per_sec",
    "pause_rate",
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

// Frames that are voiced and not inside a pause.
std::vector<std::size_t> usable_frames(const PitchTrack& pitch, const SilenceMap& silences) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pitch.size(); ++i) {
    if (pitch.voiced(i) && !silences.contains(pitch.times[i])) out.push_back(i);
  }
  return out;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

std::optional<double> spectral_slope(const AudioClip& clip, const PitchTrack& pitch,
                                     const std::vector<std::size_t>& frames,
                                     const AnalysisConfig& cfg) {
  const int fs = clip.sample_rate();
  const auto x = clip.samples();
  const auto len = static_cast<std::size_t>(std::lround(cfg.pitch_window() * fs));
  const std::size_t nfft = next_pow2(len);
  const auto window = window_coefficients(Window::kHann, len);
  const double high = std::min(kSlopeHighHz, fs / 2.0);

  std::vector<double> block(nfft);
  std::vector<double> log_f;
  std::vector<double> db;
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t f : frames) {
    const long start = std::lround(pitch.times[f] * fs - static_cast<double>(len) / 2.0);
    std::fill(block.begin(), block.end(), 0.0);
    for (std::size_t i = 0; i < len; ++i) {
      const long k = start + static_cast<long>(i);
      if (k >= 0 && k < static_cast<long>(x.size())) block[i] = x[static_cast<std::size_t>(k)] * window[i];
    }
    const Spectrum s = magnitude_spectrum(block, fs);
    log_f.clear();
    db.clear();
    double peak = 0.0;
    for (std::size_t k = 0; k < s.magnitudes.size(); ++k) {
      const double hz = s.bin_frequencies[k];
      if (hz < kSlopeLowHz || hz > high) continue;
      peak = std::max(peak, s.magnitudes[k]);
      log_f.push_back(std::log2(hz));
      db.push_back(s.magnitudes[k]);
    }
    if (!(peak > 0.0) || log_f.size() < 2) continue;
    // Floor relative to the frame peak keeps the slope gain-invariant.
    for (double& m : db) m = 20.0 * std::log10(std::max(m, peak * 1e-10));
    sum += least_squares_slope(log_f, db);
    ++used;
  }
  if (used == 0) return std::nullopt;
  return sum / static_cast<double>(used);
}

}  // namespace

const std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::kMeanIntensity,      Feature::kEnergy,        Feature::kMaxIntensity,
    Feature::kMedianPitch,        Feature::kPitchRange,    Feature::kShimmer,
    Feature::kJitter,             Feature::kSpectralSlope, Feature::kVoicedSyllableRate,
    Feature::kOverallSyllableRate, Feature::kPauseRate,
};

std::string_view feature_name(Feature f) { return kNames[static_cast<std::size_t>(f)]; }

Feature parse_feature(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return kAllFeatures[i];
  }
  throw InvalidInput("unknown feature '" + std::string(name) + "'");
}

std::optional<double> feature_value(const FeatureVector& v, Feature f) {
  switch (f) {
    case Feature::kMeanIntensity: return v.mean_intensity_db;
    case Feature::kEnergy: return v.energy;
    case Feature::kMaxIntensity: return v.max_intensity_db;
    case Feature::kMedianPitch: return v.median_pitch_hz;
    case Feature::kPitchRange: return v.pitch_range_hz;
    case Feature::kShimmer: return v.shimmer_local;
    case Feature::kJitter: return v.jitter_local;
    case Feature::kSpectralSlope: return v.spectral_slope_db_per_octave;
    case Feature::kVoicedSyllableRate: return v.voiced_syll_per_sec;
    case Feature::kOverallSyllableRate: return v.overall_syll_per_sec;
    case Feature::kPauseRate: return v.pause_rate;
  }
  return std::nullopt;
}

void set_feature_value(FeatureVector& v, Feature f, std::optional<double> value) {
  const double x = value.value_or(0.0);
  switch (f) {
    case Feature::kMeanIntensity: v.mean_intensity_db = x; break;
    case Feature::kEnergy: v.energy = x; break;
    case Feature::kMaxIntensity: v.max_intensity_db = x; break;
    case Feature::kMedianPitch: v.median_pitch_hz = value; break;
    case Feature::kPitchRange: v.pitch_range_hz = value; break;
    case Feature::kShimmer: v.shimmer_local = value; break;
    case Feature::kJitter: v.jitter_local = value; break;
    case Feature::kSpectralSlope: v.spectral_slope_db_per_octave = value; break;
    case Feature::kVoicedSyllableRate: v.voiced_syll_per_sec = x; break;
    case Feature::kOverallSyllableRate: v.overall_syll_per_sec = x; break;
    case Feature::kPauseRate: v.pause_rate = x; break;
  }
}

LoudnessFeatures loudness_features(const AudioClip& clip, const IntensityContour& contour,
                                   const SilenceMap& silences) {
  double sum_sq = 0.0;
  for (double v : clip.samples()) sum_sq += v * v;
  if (sum_sq <= 0.0) throw SilentClipError("loudness features undefined for a silent clip");

  LoudnessFeatures out;
  out.energy = sum_sq / clip.sample_rate();

  double power_sum = 0.0;
  std::size_t used = 0;
  double power_all = 0.0;
  std::size_t used_all = 0;
  double max_db = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < contour.size(); ++i) {
    const double db = contour.level_db[i];
    if (!std::isfinite(db)) continue;
    max_db = std::max(max_db, db);
    const double power = std::pow(10.0, db / 10.0);
    power_all += power;
    ++used_all;
    if (!silences.contains(contour.times[i])) {
      power_sum += power;
      ++used;
    }
  }
  if (used_all == 0) throw SilentClipError("no frame of the clip carries energy");
  // A clip whose every frame falls inside a pause still has a level.
  if (used == 0) {
    power_sum = power_all;
    used = used_all;
  }
  out.mean_intensity_db = 10.0 * std::log10(power_sum / static_cast<double>(used));
  out.max_intensity_db = max_db;
  return out;
}

PeriodSequence measure_periods(const AudioClip& clip, const PitchTrack& pitch,
                               const SilenceMap& silences, const AnalysisConfig& cfg) {
  PeriodSequence seq;
  if (pitch.size() == 0) return seq;
  const int fs = clip.sample_rate();
  const auto x = clip.samples();
  const long n = static_cast<long>(x.size());
  const double hop = pitch.size() > 1 ? pitch.times[1] - pitch.times[0] : cfg.hop;

  std::vector<bool> usable(pitch.size(), false);
  for (std::size_t i = 0; i < pitch.size(); ++i) {
    usable[i] = pitch.voiced(i) && !silences.contains(pitch.times[i]);
  }

  std::size_t run_id = 0;
  for (std::size_t f = 0; f < pitch.size();) {
    if (!usable[f]) {
      ++f;
      continue;
    }
    std::size_t last = f;
    while (last + 1 < pitch.size() && usable[last + 1]) ++last;
    const std::size_t first = f;
    f = last + 1;
    if (last == first) continue;

    const long a = std::max(0L, std::lround((pitch.times[first] - hop / 2.0) * fs));
    const long b = std::min(n, std::lround((pitch.times[last] + hop / 2.0) * fs));
    auto period_at = [&](double pos) {
      const double t = pos / fs;
      const double idx = std::round((t - pitch.times[first]) / hop) + static_cast<double>(first);
      const auto k = static_cast<std::size_t>(
          std::clamp(idx, static_cast<double>(first), static_cast<double>(last)));
      return fs / *pitch.f0[k];
    };

    const double t0 = period_at(static_cast<double>(a));
    const long first_end = std::min(b, a + static_cast<long>(std::ceil(t0)));
    long peak = a;
    for (long k = a; k < first_end; ++k) {
      if (x[static_cast<std::size_t>(k)] > x[static_cast<std::size_t>(peak)]) peak = k;
    }
    double mark = static_cast<double>(peak);
    bool any = false;
    while (true) {
      const double period = period_at(mark);
      const auto len = static_cast<long>(std::lround(period));
      const long seg = std::lround(mark) - len / 2;
      const auto lag_lo = static_cast<long>(std::floor(0.8 * period));
      const auto lag_hi = static_cast<long>(std::ceil(1.2 * period));
      if (seg < 0 || seg < a - len / 2 || seg + lag_hi + 1 + len > b + len / 2 ||
          seg + lag_hi + 1 + len > n) {
        break;
      }
      double e0 = 0.0;
      for (long i = 0; i < len; ++i) e0 += x[static_cast<std::size_t>(seg + i)] * x[static_cast<std::size_t>(seg + i)];
      if (!(e0 > 0.0)) break;

      std::vector<double> ncc(static_cast<std::size_t>(lag_hi - lag_lo + 3));
      for (long lag = lag_lo - 1; lag <= lag_hi + 1; ++lag) {
        double num = 0.0;
        double e1 = 0.0;
        for (long i = 0; i < len; ++i) {
          const double u = x[static_cast<std::size_t>(seg + i)];
          const double v = x[static_cast<std::size_t>(seg + lag + i)];
          num += u * v;
          e1 += v * v;
        }
        ncc[static_cast<std::size_t>(lag - lag_lo + 1)] = e1 > 0.0 ? num / std::sqrt(e0 * e1) : 0.0;
      }
      std::size_t best = 1;
      for (std::size_t k = 1; k + 1 < ncc.size(); ++k) {
        if (ncc[k] > ncc[best]) best = k;
      }
      if (ncc[best] < kMinPeriodCorrelation) break;
      const double denom = ncc[best - 1] - 2.0 * ncc[best] + ncc[best + 1];
      const double delta = denom < 0.0 ? 0.5 * (ncc[best - 1] - ncc[best + 1]) / denom : 0.0;
      const double lag = static_cast<double>(lag_lo - 1 + static_cast<long>(best)) + delta;

      seq.periods.push_back(lag / fs);
      seq.amplitudes.push_back(std::sqrt(e0 / static_cast<double>(len)));
      seq.run.push_back(run_id);
      any = true;
      mark += lag;
    }
    if (any) ++run_id;
  }
  return seq;
}

std::optional<double> local_perturbation(const PeriodSequence& seq, std::span<const double> values) {
  if (values.size() != seq.size()) throw InvalidInput("local_perturbation: length mismatch");
  double diff_sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (seq.run[i] != seq.run[i + 1]) continue;
    const double hi = std::max(seq.periods[i], seq.periods[i + 1]);
    const double lo = std::min(seq.periods[i], seq.periods[i + 1]);
    if (hi > kMaxPeriodRatio * lo) continue;
    diff_sum += std::abs(values[i + 1] - values[i]);
    ++pairs;
  }
  if (pairs == 0) return std::nullopt;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (!(mean > 0.0)) return std::nullopt;
  return (diff_sum / static_cast<double>(pairs)) / mean;
}

SpectralFeatures spectral_features(const AudioClip& clip, const PitchTrack& pitch,
                                   const SilenceMap& silences, const AnalysisConfig& cfg) {
  SpectralFeatures out;
  const auto frames = usable_frames(pitch, silences);
  if (frames.empty()) return out;

  std::vector<double> f0;
  f0.reserve(frames.size());
  for (std::size_t f : frames) f0.push_back(*pitch.f0[f]);
  const auto [lo, hi] = std::minmax_element(f0.begin(), f0.end());
  out.pitch_range_hz = *hi - *lo;
  out.median_pitch_hz = median_of(f0);

  const PeriodSequence periods = measure_periods(clip, pitch, silences, cfg);
  out.jitter_local = local_perturbation(periods, periods.periods);
  out.shimmer_local = local_perturbation(periods, periods.amplitudes);
  out.spectral_slope_db_per_octave = spectral_slope(clip, pitch, frames, cfg);
  return out;
}

RateFeatures rate_features(const IntensityContour& /*contour*/, const SilenceMap& silences,
                           const SyllableNuclei& nuclei, double clip_duration) {
  if (!(clip_duration > 0.0)) throw InvalidInput("clip duration must be positive");
  RateFeatures out;
  const double voiced_duration = clip_duration - silences.total_pause();
  const auto count = static_cast<double>(nuclei.count());
  if (nuclei.count() > 0) {
    if (!(voiced_duration > 0.0)) {
      throw InvalidInput("syllables found but the pauses cover the whole clip");
    }
    out.voiced_syll_per_sec = count / voiced_duration;
    out.overall_syll_per_sec = count / clip_duration;
  }
  out.pause_rate = static_cast<double>(silences.pauses.size()) / clip_duration;
  return out;
}

FeatureVector extract_features(const AudioClip& clip, const AnalysisConfig& cfg) {
  cfg.validate();
  const IntensityContour contour = intensity_contour(clip, cfg);
  const SilenceMap silences = detect_silences(contour, cfg);
  const LoudnessFeatures loud = loudness_features(clip, contour, silences);
  const PitchTrack pitch = track_pitch(clip, cfg);
  const SyllableNuclei nuclei = detect_syllable_nuclei(contour, pitch, silences, cfg);
  const SpectralFeatures spec = spectral_features(clip, pitch, silences, cfg);
  const RateFeatures rate = rate_features(contour, silences, nuclei, clip.duration_seconds());

  FeatureVector v;
  v.mean_intensity_db = loud.mean_intensity_db;
  v.energy = loud.energy;
  v.max_intensity_db = loud.max_intensity_db;
  v.median_pitch_hz = spec.median_pitch_hz;
  v.pitch_range_hz = spec.pitch_range_hz;
  v.shimmer_local = spec.shimmer_local;
  v.jitter_local = spec.jitter_local;
  v.spectral_slope_db_per_octave = spec.spectral_slope_db_per_octave;
  v.voiced_syll_per_sec = rate.voiced_syll_per_sec;
  v.overall_syll_per_sec = rate.overall_syll_per_sec;
  v.pause_rate = rate.pause_rate;
  return v;
}

}  // namespace ambivox
