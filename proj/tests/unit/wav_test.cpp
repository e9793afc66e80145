#include "ambivox/wav.hpp"

#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "ambivox/audio.hpp"
#include "ambivox/error.hpp"
#include "synth.hpp"
#include "temp_dir.hpp"

namespace ambivox {
namespace {

struct FormatCase {
  SampleFormat format;
  double tolerance;
};

class WavRoundTrip : public ::testing::TestWithParam<FormatCase> {};

TEST_P(WavRoundTrip, PreservesSamples) {
  const auto [format, tol] = GetParam();
  std::vector<double> stereo;
  const auto left = synth::sine(440.0, 0.05, 16000, 0.7);
  const auto right = synth::sine(660.0, 0.05, 16000, -0.4);
  for (std::size_t i = 0; i < left.size(); ++i) {
    stereo.push_back(left[i]);
    stereo.push_back(right[i]);
  }
  const auto bytes = encode_wav(stereo, 2, 16000, format);
  const auto wav = decode_wav(bytes);
  EXPECT_EQ(wav.info.channels, 2);
  EXPECT_EQ(wav.info.sample_rate, 16000);
  EXPECT_EQ(wav.info.format, format);
  EXPECT_EQ(wav.info.frames, left.size());
  ASSERT_EQ(wav.samples.size(), stereo.size());
  for (std::size_t i = 0; i < stereo.size(); ++i) EXPECT_NEAR(wav.samples[i], stereo[i], tol);
}

INSTANTIATE_TEST_SUITE_P(Formats, WavRoundTrip,
                         ::testing::Values(FormatCase{SampleFormat::kPcm8, 1.0 / 100.0},
                                           FormatCase{SampleFormat::kPcm16, 1.0 / 30000.0},
                                           FormatCase{SampleFormat::kPcm24, 1.0 / 8e6},
                                           FormatCase{SampleFormat::kPcm32, 1e-9},
                                           FormatCase{SampleFormat::kFloat32, 1e-7}));

TEST(Wav, ProbeMatchesFile) {
  testing::TempDir dir("wav");
  const auto x = synth::sine(200.0, 1.5, 22050);
  write_wav(dir / "a.wav", x, 1, 22050, SampleFormat::kPcm16);
  const auto info = probe_wav(dir / "a.wav");
  EXPECT_EQ(info.frames, x.size());
  EXPECT_NEAR(info.duration_seconds(), 1.5, 1e-4);
  EXPECT_EQ(read_wav(dir / "a.wav").samples.size(), x.size());
}

TEST(Wav, RejectsMalformedInput) {
  const auto good = encode_wav(synth::sine(200.0, 0.01, 8000), 1, 8000, SampleFormat::kPcm16);
  std::vector<std::byte> truncated(good.begin(), good.begin() + 30);
  EXPECT_THROW(decode_wav(truncated), FormatError);
  auto not_riff = good;
  not_riff[0] = std::byte{'X'};
  EXPECT_THROW(decode_wav(not_riff), FormatError);
  const auto empty = encode_wav(std::vector<double>{}, 1, 8000, SampleFormat::kPcm16);
  EXPECT_THROW(decode_wav(empty), FormatError);
  EXPECT_THROW(read_wav("/nonexistent/file.wav"), IoError);
  EXPECT_THROW(probe_wav("/nonexistent/file.wav"), IoError);
}

TEST(Wav, WriteClipIsSixteenBitMono) {
  testing::TempDir dir("wav");
  const AudioClip c(synth::sine(300.0, 0.2, 24000), 24000);
  write_clip(dir / "c.wav", c);
  const auto info = probe_wav(dir / "c.wav");
  EXPECT_EQ(info.channels, 1);
  EXPECT_EQ(info.format, SampleFormat::kPcm16);
  EXPECT_EQ(info.sample_rate, 24000);
  EXPECT_EQ(info.frames, c.size());
}

}  // namespace
}  // namespace ambivox
