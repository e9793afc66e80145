#include "ambivox/audio.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ambivox/dsp.hpp"
#include "ambivox/error.hpp"
#include "ambivox/wav.hpp"

namespace ambivox {
namespace {

double rms(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v * v;
  return std::sqrt(sum / static_cast<double>(x.size()));
}

AudioClip canonicalize(const WavData& wav, int target_rate, std::string source_id) {
  if (target_rate <= 0) throw InvalidInput("target sample rate must be positive");
  auto mono = downmix(wav.samples, wav.info.channels);
  if (wav.info.sample_rate != target_rate) {
    mono = resample(mono, wav.info.sample_rate, target_rate);
    // Band-limited interpolation can overshoot full scale by a hair.
    for (double& v : mono) v = std::clamp(v, -1.0, 1.0);
  }
  if (mono.empty()) throw FormatError("WAV contains no samples");
  return AudioClip(std::move(mono), target_rate, std::move(source_id));
}

}  // namespace

AudioClip::AudioClip(std::vector<double> samples, int sample_rate, std::string source_id)
    : samples_(std::move(samples)), sample_rate_(sample_rate), source_id_(std::move(source_id)) {
  if (sample_rate_ <= 0) throw InvalidInput("sample rate must be positive");
  if (samples_.empty()) throw InvalidInput("audio clip must not be empty");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double v = samples_[i];
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
      throw InvalidInput("sample " + std::to_string(i) + " outside [-1, 1]");
    }
  }
}

AudioClip load_clip(const std::filesystem::path& path, int target_rate) {
  const WavData wav = read_wav(path);
  return canonicalize(wav, target_rate, path.string());
}

AudioClip decode_clip(std::span<const std::byte> wav_bytes, int target_rate, std::string source_id) {
  return canonicalize(decode_wav(wav_bytes), target_rate, std::move(source_id));
}

std::vector<double> downmix(std::span<const double> interleaved, int channels) {
  if (channels < 1) throw InvalidInput("downmix: channel count must be positive");
  const auto ch = static_cast<std::size_t>(channels);
  if (interleaved.size() % ch != 0) throw InvalidInput("downmix: sample count is not a multiple of the channel count");
  if (channels == 1) return {interleaved.begin(), interleaved.end()};
  std::vector<double> mono(interleaved.size() / ch);
  for (std::size_t i = 0; i < mono.size(); ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < ch; ++c) sum += interleaved[i * ch + c];
    mono[i] = sum / static_cast<double>(ch);
  }
  return mono;
}

double measure_dbfs(const AudioClip& clip) {
  const double level = rms(clip.samples());
  if (level <= 0.0) throw SilentClipError("cannot measure the level of a silent clip");
  return 20.0 * std::log10(level);
}

GainResult apply_gain_to_dbfs(const AudioClip& clip, double target_dbfs) {
  if (!std::isfinite(target_dbfs)) throw InvalidInput("target level must be finite");
  const double current = measure_dbfs(clip);
  const double gain_db = target_dbfs - current;
  const double gain = std::pow(10.0, gain_db / 20.0);
  std::vector<double> out(clip.samples().begin(), clip.samples().end());
  bool clipped = false;
  for (double& v : out) {
    v *= gain;
    if (v > 1.0 || v < -1.0) {
      v = std::clamp(v, -1.0, 1.0);
      clipped = true;
    }
  }
  return {AudioClip(std::move(out), clip.sample_rate(), clip.source_id()), gain_db, clipped};
}

}  // namespace ambivox
