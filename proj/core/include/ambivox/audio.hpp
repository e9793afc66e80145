#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace ambivox {

/// Canonical analysis rate. Every clip is brought to this rate before
/// feature extraction.
inline constexpr int kCanonicalSampleRate = 24000;

/// Mono sample buffer with its sample rate.
///
/// Samples are finite and lie in [-1, 1]; the buffer is never empty.
/// Construction validates both and throws InvalidInput otherwise.
class AudioClip {
 public:
  AudioClip(std::vector<double> samples, int sample_rate, std::string source_id = {});

  std::span<const double> samples() const { return samples_; }
  int sample_rate() const { return sample_rate_; }
  const std::string& source_id() const { return source_id_; }
  std::size_t size() const { return samples_.size(); }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_;
  std::string source_id_;
};

/// Decodes a PCM WAV file, averages its channels to mono and resamples to
/// `target_rate`.
///
/// Throws IoError when the file cannot be read and FormatError for
/// unsupported encodings, truncated streams, zero-length data, or float
/// samples outside [-1, 1].
AudioClip load_clip(const std::filesystem::path& path, int target_rate = kCanonicalSampleRate);

/// Same as load_clip() but decodes from an in-memory WAV image.
AudioClip decode_clip(std::span<const std::byte> wav_bytes, int target_rate,
                      std::string source_id = {});

/// Averages interleaved channels into one.
std::vector<double> downmix(std::span<const double> interleaved, int channels);

/// RMS level in dB relative to full scale (amplitude 1.0).
/// Throws SilentClipError for an all-zero clip.
double measure_dbfs(const AudioClip& clip);

struct GainResult {
  AudioClip clip;
  double gain_db = 0.0;
  /// Set when the gain pushed samples past full scale and they were
  /// limited to +/-1.
  bool clipped = false;
};

/// Scales the clip so that its RMS level equals `target_dbfs`.
/// Samples that would exceed full scale are limited to +/-1 and the result
/// is flagged. Throws SilentClipError for an all-zero clip.
GainResult apply_gain_to_dbfs(const AudioClip& clip, double target_dbfs);

}  // namespace ambivox
