#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace ambivox {

class AudioClip;

enum class SampleFormat { kPcm8, kPcm16, kPcm24, kPcm32, kFloat32 };

struct WavInfo {
  int channels = 0;
  int sample_rate = 0;
  SampleFormat format = SampleFormat::kPcm16;
  std::size_t frames = 0;

  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(frames) / sample_rate : 0.0;
  }
};

struct WavData {
  WavInfo info;
  /// Interleaved samples scaled to [-1, 1].
  std::vector<double> samples;
};

/// Parses the RIFF header only.
WavInfo probe_wav(const std::filesystem::path& path);

WavData read_wav(const std::filesystem::path& path);
WavData decode_wav(std::span<const std::byte> bytes);

std::vector<std::byte> encode_wav(std::span<const double> interleaved, int channels,
                                  int sample_rate, SampleFormat format);
void write_wav(const std::filesystem::path& path, std::span<const double> interleaved,
               int channels, int sample_rate, SampleFormat format);

/// Canonical write-back: 16-bit mono at the clip's rate.
void write_clip(const std::filesystem::path& path, const AudioClip& clip);

}  // namespace ambivox
