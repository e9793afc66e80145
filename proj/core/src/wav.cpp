#include "ambivox/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "ambivox/audio.hpp"
#include "ambivox/error.hpp"

namespace ambivox {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  bool has(std::size_t n) const { return pos_ + n <= bytes_.size(); }
  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  void seek(std::size_t pos) { pos_ = pos; }

  std::string tag() {
    require(4);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), 4);
    pos_ += 4;
    return s;
  }
  std::uint16_t u16() {
    require(2);
    const auto v = static_cast<std::uint16_t>(byte(0) | (byte(1) << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    require(4);
    const auto v = static_cast<std::uint32_t>(byte(0) | (byte(1) << 8) | (byte(2) << 16) |
                                              (static_cast<std::uint32_t>(byte(3)) << 24));
    pos_ += 4;
    return v;
  }

 private:
  std::uint32_t byte(std::size_t i) const {
    return static_cast<std::uint32_t>(std::to_integer<std::uint8_t>(bytes_[pos_ + i]));
  }
  void require(std::size_t n) const {
    if (!has(n)) throw FormatError("WAV header truncated");
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

struct ParsedHeader {
  WavInfo info;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;
  std::size_t declared_size = 0;
  int bytes_per_sample = 0;
};

ParsedHeader parse_header(std::span<const std::byte> bytes, bool need_data) {
  ByteReader r(bytes);
  if (!r.has(12)) throw FormatError("not a RIFF/WAVE file (too short)");
  if (r.tag() != "RIFF") throw FormatError("not a RIFF/WAVE file (missing RIFF tag)");
  r.u32();
  if (r.tag() != "WAVE") throw FormatError("not a RIFF/WAVE file (missing WAVE tag)");

  ParsedHeader h;
  bool have_fmt = false;
  bool have_data = false;
  std::uint16_t format_tag = 0;
  std::uint16_t bits = 0;
  while (r.has(8)) {
    const std::string id = r.tag();
    const std::uint32_t size = r.u32();
    const std::size_t body = r.pos();
    if (id == "fmt ") {
      if (size < 16) throw FormatError("fmt chunk too small");
      format_tag = r.u16();
      h.info.channels = r.u16();
      h.info.sample_rate = static_cast<int>(r.u32());
      r.u32();  // byte rate
      r.u16();  // block align
      bits = r.u16();
      if (format_tag == kFormatExtensible) {
        if (size < 40) throw FormatError("extensible fmt chunk too small");
        r.u16();  // cbSize
        r.u16();  // valid bits
        r.u32();  // channel mask
        format_tag = r.u16();  // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw FormatError("data chunk precedes fmt chunk");
      h.data_offset = body;
      h.declared_size = size;
      if (need_data && size > r.remaining()) throw FormatError("WAV data chunk truncated");
      h.data_size = std::min<std::size_t>(size, r.remaining());
      have_data = true;
      break;
    }
    const std::size_t next = body + size + (size & 1U);
    if (next > bytes.size()) break;
    r.seek(next);
  }
  if (!have_fmt) throw FormatError("missing fmt chunk");
  if (!have_data) throw FormatError("missing data chunk");
  if (h.info.channels < 1) throw FormatError("WAV declares zero channels");
  if (h.info.sample_rate <= 0) throw FormatError("WAV declares a non-positive sample rate");

  if (format_tag == kFormatPcm && (bits == 8 || bits == 16 || bits == 24 || bits == 32)) {
    h.info.format = bits == 8    ? SampleFormat::kPcm8
                    : bits == 16 ? SampleFormat::kPcm16
                    : bits == 24 ? SampleFormat::kPcm24
                                 : SampleFormat::kPcm32;
  } else if (format_tag == kFormatFloat && bits == 32) {
    h.info.format = SampleFormat::kFloat32;
  } else {
    throw FormatError("unsupported WAV encoding (format " + std::to_string(format_tag) + ", " +
                      std::to_string(bits) + " bits)");
  }
  h.bytes_per_sample = bits / 8;
  h.info.frames = h.data_size / (static_cast<std::size_t>(h.bytes_per_sample) * h.info.channels);
  return h;
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

void put_u16(std::vector<std::byte>& out, std::uint16_t v) {
  out.push_back(static_cast<std::byte>(v & 0xFF));
  out.push_back(static_cast<std::byte>(v >> 8));
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::byte>& out, const char* tag) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(tag[i]));
}

std::int32_t quantize(double x, double scale, std::int32_t lo, std::int32_t hi) {
  const double q = std::round(std::clamp(x, -1.0, 1.0) * scale);
  return static_cast<std::int32_t>(std::clamp(q, static_cast<double>(lo), static_cast<double>(hi)));
}

}  // namespace

WavInfo probe_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  // Headers of ordinary files fit comfortably in the first 4 KiB.
  std::vector<char> head(4096);
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  std::vector<std::byte> bytes(head.size());
  std::memcpy(bytes.data(), head.data(), head.size());
  ParsedHeader h = parse_header(bytes, false);
  const auto file_size = std::filesystem::file_size(path);
  const std::size_t available = file_size > h.data_offset ? file_size - h.data_offset : 0;
  const std::size_t declared = std::min<std::size_t>(available, h.declared_size);
  h.info.frames = declared / (static_cast<std::size_t>(h.bytes_per_sample) * h.info.channels);
  return h.info;
}

WavData decode_wav(std::span<const std::byte> bytes) {
  const ParsedHeader h = parse_header(bytes, true);
  if (h.info.frames == 0) throw FormatError("WAV contains no samples");

  WavData out;
  out.info = h.info;
  const std::size_t count = h.info.frames * static_cast<std::size_t>(h.info.channels);
  out.samples.resize(count);
  const auto* p = reinterpret_cast<const std::uint8_t*>(bytes.data() + h.data_offset);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t* s = p + i * static_cast<std::size_t>(h.bytes_per_sample);
    double v = 0.0;
    switch (h.info.format) {
      case SampleFormat::kPcm8:
        v = (static_cast<int>(s[0]) - 128) / 128.0;
        break;
      case SampleFormat::kPcm16:
        v = static_cast<std::int16_t>(s[0] | (s[1] << 8)) / 32768.0;
        break;
      case SampleFormat::kPcm24: {
        std::int32_t x = s[0] | (s[1] << 8) | (s[2] << 16);
        if (x & 0x800000) x -= 0x1000000;
        v = x / 8388608.0;
        break;
      }
      case SampleFormat::kPcm32: {
        const auto u = static_cast<std::uint32_t>(s[0] | (s[1] << 8) | (s[2] << 16) |
                                                  (static_cast<std::uint32_t>(s[3]) << 24));
        v = static_cast<std::int32_t>(u) / 2147483648.0;
        break;
      }
      case SampleFormat::kFloat32: {
        const auto u = static_cast<std::uint32_t>(s[0] | (s[1] << 8) | (s[2] << 16) |
                                                  (static_cast<std::uint32_t>(s[3]) << 24));
        v = std::bit_cast<float>(u);
        if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
          throw FormatError("float sample outside [-1, 1] at index " + std::to_string(i));
        }
        break;
      }
    }
    out.samples[i] = v;
  }
  return out;
}

WavData read_wav(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_wav(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<std::byte> encode_wav(std::span<const double> interleaved, int channels,
                                  int sample_rate, SampleFormat format) {
  if (channels < 1 || sample_rate <= 0) throw InvalidInput("encode_wav: bad channel count or rate");
  if (interleaved.size() % static_cast<std::size_t>(channels) != 0) {
    throw InvalidInput("encode_wav: sample count is not a multiple of the channel count");
  }
  const int bits = format == SampleFormat::kPcm8    ? 8
                   : format == SampleFormat::kPcm16 ? 16
                   : format == SampleFormat::kPcm24 ? 24
                                                    : 32;
  const std::uint16_t tag = format == SampleFormat::kFloat32 ? kFormatFloat : kFormatPcm;
  const auto block_align = static_cast<std::uint16_t>(channels * bits / 8);
  const auto data_size = static_cast<std::uint32_t>(interleaved.size() * (bits / 8));

  std::vector<std::byte> out;
  out.reserve(44 + data_size + 1);
  put_tag(out, "RIFF");
  put_u32(out, 36 + data_size + (data_size & 1U));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, tag);
  put_u16(out, static_cast<std::uint16_t>(channels));
  put_u32(out, static_cast<std::uint32_t>(sample_rate));
  put_u32(out, static_cast<std::uint32_t>(sample_rate) * block_align);
  put_u16(out, block_align);
  put_u16(out, static_cast<std::uint16_t>(bits));
  put_tag(out, "data");
  put_u32(out, data_size);
  for (double x : interleaved) {
    switch (format) {
      case SampleFormat::kPcm8:
        out.push_back(static_cast<std::byte>(quantize(x, 128.0, -128, 127) + 128));
        break;
      case SampleFormat::kPcm16:
        put_u16(out, static_cast<std::uint16_t>(quantize(x, 32768.0, -32768, 32767)));
        break;
      case SampleFormat::kPcm24: {
        const auto v = static_cast<std::uint32_t>(quantize(x, 8388608.0, -8388608, 8388607));
        for (int i = 0; i < 3; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
        break;
      }
      case SampleFormat::kPcm32: {
        const double q = std::round(std::clamp(x, -1.0, 1.0) * 2147483648.0);
        const auto v = static_cast<std::int32_t>(std::clamp(q, -2147483648.0, 2147483647.0));
        put_u32(out, static_cast<std::uint32_t>(v));
        break;
      }
      case SampleFormat::kFloat32:
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
        break;
    }
  }
  if (data_size & 1U) out.push_back(std::byte{0});
  return out;
}

void write_wav(const std::filesystem::path& path, std::span<const double> interleaved,
               int channels, int sample_rate, SampleFormat format) {
  const auto bytes = encode_wav(interleaved, channels, sample_rate, format);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

void write_clip(const std::filesystem::path& path, const AudioClip& clip) {
  write_wav(path, clip.samples(), 1, clip.sample_rate(), SampleFormat::kPcm16);
}

}  // namespace ambivox
