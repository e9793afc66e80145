#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ambivox {

class AudioClip;

enum class Window { kRectangular, kHann, kGaussian };

/// Symmetric window of length n. Hann is 0.5 - 0.5 cos(2 pi i / (n - 1));
/// the Gaussian is exp(-12 (i / (n - 1) - 0.5)^2).
std::vector<double> window_coefficients(Window window, std::size_t n);

struct Frame {
  double start_time = 0.0;
  std::vector<double> samples;
};

/// Overlapping windowed frames of a clip. Frames are ordered by start time
/// and the last one is zero-padded if the clip does not end on a frame
/// boundary.
struct FrameSeries {
  std::vector<Frame> frames;
  double frame_length = 0.0;
  double hop = 0.0;
  Window window = Window::kRectangular;
  int sample_rate = 0;
};

FrameSeries frame_signal(const AudioClip& clip, double frame_length, double hop, Window window);

/// In-place radix-2 FFT. Size must be a power of two.
void fft_inplace(std::span<std::complex<double>> data, bool inverse = false);

/// Full DFT of a real block of any length (Bluestein for non powers of two).
std::vector<std::complex<double>> real_dft(std::span<const double> block);

std::size_t next_pow2(std::size_t n);

struct Spectrum {
  /// Frequencies of bins 0..N/2, strictly increasing, last <= sample_rate / 2.
  std::vector<double> bin_frequencies;
  std::vector<double> magnitudes;
  std::size_t fft_size = 0;

  /// Sum of |X_k|^2 / N over the full two-sided spectrum. Equals the block's
  /// time-domain energy by Parseval's identity.
  double parseval_energy() const;
};

/// DFT magnitudes of a (pre-windowed) block. Throws InvalidInput if empty.
Spectrum magnitude_spectrum(std::span<const double> block, int sample_rate);

/// Band-limited rational resampling by polyphase windowed-sinc interpolation
/// (64 taps per phase, Kaiser beta 12). Output length is round(n * to / from).
std::vector<double> resample(std::span<const double> input, int from_rate, int to_rate);

}  // namespace ambivox
