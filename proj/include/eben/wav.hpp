#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "eben/errors.hpp"
#include "eben/signal.hpp"

namespace eben {

enum class WavEncoding { pcm16, float32 };

namespace detail {

inline void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xFF));
  b.push_back(static_cast<char>((v >> 8) & 0xFF));
}
inline void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline std::uint16_t get_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
inline std::uint32_t get_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
inline float get_f32(const unsigned char* p) {
  std::uint32_t u = get_u32(p);
  float f;
  std::memcpy(&f, &u, 4);
  return f;
}
inline void put_f32(std::string& b, float f) {
  std::uint32_t u;
  std::memcpy(&u, &f, 4);
  put_u32(b, u);
}

}  // namespace detail

// Reads a RIFF/WAVE file. PCM16 and IEEE float32 are supported. Multichannel
// files are rejected unless `channel` selects which channel to extract.
inline Signal read_wav(const std::string& path,
                       std::optional<int> channel = std::nullopt) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError(path + ": not a RIFF/WAVE file");

  std::uint16_t fmt_tag = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t data_off = 0, data_len = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(&bytes[pos]);
    const std::uint32_t len = detail::get_u32(&bytes[pos + 4]);
    const std::size_t body = pos + 8;
    if (body + len > bytes.size())
      throw FormatError(path + ": truncated chunk '" + std::string(id, 4) + "'");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw FormatError(path + ": fmt chunk too short");
      fmt_tag = detail::get_u16(&bytes[body]);
      channels = detail::get_u16(&bytes[body + 2]);
      rate = detail::get_u32(&bytes[body + 4]);
      bits = detail::get_u16(&bytes[body + 14]);
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_off = body;
      data_len = len;
      have_data = true;
    }
    pos = body + len + (len & 1);  // chunks are word-aligned
  }
  if (!have_fmt) throw FormatError(path + ": missing fmt chunk");
  if (!have_data) throw FormatError(path + ": missing data chunk");
  if (rate == 0) throw FormatError(path + ": zero sample rate");
  if (channels == 0) throw FormatError(path + ": zero channel count");

  int pick = 0;
  if (channels > 1) {
    if (!channel)
      throw UnsupportedError(path + ": " + std::to_string(channels) +
                             " channels; pass a channel selector");
    pick = *channel;
    if (pick < 0 || pick >= channels)
      throw ArgumentError(path + ": channel selector out of range");
  }

  Signal out;
  out.sample_rate_hz = static_cast<int>(rate);
  if (fmt_tag == 1 && bits == 16) {
    const std::size_t frame = 2u * channels;
    const std::size_t n = data_len / frame;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned char* p = &bytes[data_off + i * frame + 2u * pick];
      const std::int16_t v = static_cast<std::int16_t>(detail::get_u16(p));
      out.samples[i] = static_cast<double>(v) / 32768.0;
    }
  } else if (fmt_tag == 3 && bits == 32) {
    const std::size_t frame = 4u * channels;
    const std::size_t n = data_len / frame;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      out.samples[i] = static_cast<double>(
          detail::get_f32(&bytes[data_off + i * frame + 4u * pick]));
  } else {
    throw UnsupportedError(path + ": unsupported encoding (format tag " +
                           std::to_string(fmt_tag) + ", " +
                           std::to_string(bits) + " bits)");
  }
  return out;
}

// Writes a mono WAV file. PCM16 rounds to nearest and saturates at the int16
// limits; float32 stores the samples narrowed to IEEE single precision.
inline void write_wav(const Signal& signal, const std::string& path,
                      WavEncoding encoding = WavEncoding::float32) {
  validate(signal);
  std::string body;
  const std::uint32_t n = static_cast<std::uint32_t>(signal.samples.size());
  const bool pcm = encoding == WavEncoding::pcm16;
  const std::uint16_t bytes_per = pcm ? 2 : 4;

  body.reserve(64 + static_cast<std::size_t>(n) * bytes_per);
  body += "WAVE";
  // fmt chunk
  body += "fmt ";
  detail::put_u32(body, 16);
  detail::put_u16(body, pcm ? 1 : 3);
  detail::put_u16(body, 1);  // mono
  detail::put_u32(body, static_cast<std::uint32_t>(signal.sample_rate_hz));
  detail::put_u32(body,
                  static_cast<std::uint32_t>(signal.sample_rate_hz) * bytes_per);
  detail::put_u16(body, bytes_per);
  detail::put_u16(body, pcm ? 16 : 32);
  if (!pcm) {
    // fact chunk is conventional for non-PCM encodings
    body += "fact";
    detail::put_u32(body, 4);
    detail::put_u32(body, n);
  }
  body += "data";
  detail::put_u32(body, n * bytes_per);
  if (pcm) {
    for (double v : signal.samples) {
      long q = std::lround(v * 32768.0);
      q = std::clamp(q, -32768L, 32767L);
      detail::put_u16(body, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
  } else {
    for (double v : signal.samples) detail::put_f32(body, static_cast<float>(v));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot create " + path);
  f << "RIFF";
  std::string size_field;
  detail::put_u32(size_field, static_cast<std::uint32_t>(body.size()));
  f.write(size_field.data(), 4);
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw IoError("write failed for " + path);
}

}  // namespace eben
