#include "ambivox/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <unordered_map>

#include "ambivox/audio.hpp"
#include "ambivox/error.hpp"

namespace ambivox {
namespace {

using cd = std::complex<double>;

// Roots of unity e^{-2 pi i k / n} for k < n / 2, cached per size and thread.
const std::vector<cd>& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::vector<cd>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cd> w(n / 2);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    w[k] = {std::cos(angle), std::sin(angle)};
  }
  return cache.emplace(n, std::move(w)).first->second;
}

double bessel_i0(double x) {
  double sum = 1.0;
  double term = 1.0;
  const double q = x * x / 4.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

}  // namespace

std::vector<double> window_coefficients(Window window, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n <= 1 || window == Window::kRectangular) return w;
  const double denom = static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / denom;
    if (window == Window::kHann) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * x);
    } else {
      w[i] = std::exp(-12.0 * (x - 0.5) * (x - 0.5));
    }
  }
  return w;
}

FrameSeries frame_signal(const AudioClip& clip, double frame_length, double hop, Window window) {
  if (!(frame_length > 0.0) || !(hop > 0.0)) {
    throw InvalidInput("frame length and hop must be positive");
  }
  if (frame_length < hop) throw InvalidInput("frame length must not be shorter than the hop");
  const int fs = clip.sample_rate();
  const auto len = static_cast<std::size_t>(std::max(1L, std::lround(frame_length * fs)));
  const auto step = static_cast<std::size_t>(std::max(1L, std::lround(hop * fs)));
  const std::size_t n = clip.size();
  if (n < len) throw InvalidInput("clip is shorter than one frame");

  std::size_t count = (n - len) / step + 1;
  if ((n - len) % step != 0) ++count;

  const auto coeffs = window_coefficients(window, len);
  const auto samples = clip.samples();
  FrameSeries out;
  out.frame_length = frame_length;
  out.hop = hop;
  out.window = window;
  out.sample_rate = fs;
  out.frames.reserve(count);
  for (std::size_t f = 0; f < count; ++f) {
    const std::size_t start = f * step;
    Frame frame;
    frame.start_time = static_cast<double>(start) / fs;
    frame.samples.assign(len, 0.0);
    const std::size_t avail = std::min(len, n - start);
    for (std::size_t i = 0; i < avail; ++i) frame.samples[i] = samples[start + i] * coeffs[i];
    out.frames.push_back(std::move(frame));
  }
  return out;
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::span<cd> data, bool inverse) {
  const std::size_t n = data.size();
  if (n <= 1) return;
  if ((n & (n - 1)) != 0) throw InvalidInput("fft_inplace: size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const auto& w = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cd tw = inverse ? std::conj(w[k * stride]) : w[k * stride];
        const cd u = data[i + k];
        const cd v = data[i + k + half] * tw;
        data[i + k] = u + v;
        data[i + k + half] = u - v;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& x : data) x *= scale;
  }
}

std::vector<cd> real_dft(std::span<const double> block) {
  const std::size_t n = block.size();
  if (n == 0) return {};
  if ((n & (n - 1)) == 0) {
    std::vector<cd> a(block.begin(), block.end());
    fft_inplace(a);
    return a;
  }

  // Bluestein: express the DFT as a convolution with a chirp.
  std::vector<cd> chirp(n);
  const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t k2 = (static_cast<std::uint64_t>(k) * k) % two_n;
    const double angle = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = {std::cos(angle), std::sin(angle)};
  }
  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<cd> a(m, 0.0);
  std::vector<cd> b(m, 0.0);
  for (std::size_t k = 0; k < n; ++k) a[k] = block[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);
  fft_inplace(a);
  fft_inplace(b);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  fft_inplace(a, true);
  std::vector<cd> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k];
  return out;
}

double Spectrum::parseval_energy() const {
  if (fft_size == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < magnitudes.size(); ++k) {
    const double p = magnitudes[k] * magnitudes[k];
    const bool self_conjugate = k == 0 || (fft_size % 2 == 0 && k == fft_size / 2);
    sum += self_conjugate ? p : 2.0 * p;
  }
  return sum / static_cast<double>(fft_size);
}

Spectrum magnitude_spectrum(std::span<const double> block, int sample_rate) {
  if (block.empty()) throw InvalidInput("magnitude_spectrum: empty block");
  if (sample_rate <= 0) throw InvalidInput("magnitude_spectrum: non-positive sample rate");
  const auto x = real_dft(block);
  const std::size_t n = block.size();
  const std::size_t bins = n / 2 + 1;
  Spectrum s;
  s.fft_size = n;
  s.bin_frequencies.resize(bins);
  s.magnitudes.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    s.bin_frequencies[k] = static_cast<double>(k) * sample_rate / static_cast<double>(n);
    s.magnitudes[k] = std::abs(x[k]);
  }
  return s;
}

std::vector<double> resample(std::span<const double> input, int from_rate, int to_rate) {
  if (from_rate <= 0 || to_rate <= 0) throw InvalidInput("resample: rates must be positive");
  if (from_rate == to_rate || input.empty()) return {input.begin(), input.end()};

  constexpr int kTaps = 64;
  constexpr int kHalf = kTaps / 2;
  constexpr double kBeta = 12.0;
  constexpr double kRolloff = 0.8;

  const int g = std::gcd(from_rate, to_rate);
  const auto up = static_cast<std::int64_t>(to_rate / g);
  const auto down = static_cast<std::int64_t>(from_rate / g);
  // Cutoff in cycles per input sample, below the narrower of the two Nyquists.
  const double cutoff = 0.5 * kRolloff * std::min(1.0, static_cast<double>(up) / down);
  const double i0_beta = bessel_i0(kBeta);

  std::vector<double> table(static_cast<std::size_t>(up) * kTaps);
  for (std::int64_t p = 0; p < up; ++p) {
    const double frac = static_cast<double>(p) / static_cast<double>(up);
    double* taps = &table[static_cast<std::size_t>(p) * kTaps];
    double sum = 0.0;
    for (int t = 0; t < kTaps; ++t) {
      const int j = t - (kHalf - 1);
      const double tau = frac - j;
      const double arg = 2.0 * cutoff * tau;
      const double sinc =
          std::abs(arg) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
      const double u = tau / kHalf;
      const double kaiser = std::abs(u) >= 1.0 ? 0.0 : bessel_i0(kBeta * std::sqrt(1.0 - u * u)) / i0_beta;
      taps[t] = sinc * kaiser;
      sum += taps[t];
    }
    for (int t = 0; t < kTaps; ++t) taps[t] /= sum;
  }

  const auto n = static_cast<std::int64_t>(input.size());
  const std::int64_t out_len = (n * up + down / 2) / down;
  std::vector<double> out(static_cast<std::size_t>(out_len));
  for (std::int64_t m = 0; m < out_len; ++m) {
    const std::int64_t pos = m * down;
    const std::int64_t base = pos / up;
    const std::int64_t phase = pos % up;
    const double* taps = &table[static_cast<std::size_t>(phase) * kTaps];
    double acc = 0.0;
    for (int t = 0; t < kTaps; ++t) {
      const std::int64_t k = base + t - (kHalf - 1);
      if (k >= 0 && k < n) acc += input[static_cast<std::size_t>(k)] * taps[t];
    }
    out[static_cast<std::size_t>(m)] = acc;
  }
  return out;
}

}  // namespace ambivox
