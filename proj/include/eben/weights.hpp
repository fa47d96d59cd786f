#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "eben/errors.hpp"
#include "eben/signal.hpp"

namespace eben {

// Named parameter tensors in a fixed declaration order. Values are held as
// doubles but serialized as float32, so stores whose values are exactly
// float32-representable (e.g. freshly initialized ones) round-trip bit-exactly.
class WeightStore {
 public:
  void add(const std::string& name, Tensor tensor) {
    if (index_.count(name))
      throw ArgumentError("duplicate weight name '" + name + "'");
    index_[name] = entries_.size();
    entries_.emplace_back(name, std::move(tensor));
  }

  bool contains(const std::string& name) const { return index_.count(name) != 0; }

  const Tensor& get(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw LoadError("missing weight '" + name + "'");
    return entries_[it->second].second;
  }

  const std::vector<std::pair<std::string, Tensor>>& entries() const {
    return entries_;
  }

  std::size_t total_parameters() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.second.size();
    return n;
  }

 private:
  std::vector<std::pair<std::string, Tensor>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

inline std::uint32_t crc32(const unsigned char* data, std::size_t len,
                           std::uint32_t crc = 0) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  crc = ~crc;
  for (std::size_t i = 0; i < len; ++i)
    crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
  return ~crc;
}

inline void push_u16(std::vector<unsigned char>& buf, std::uint16_t v) {
  buf.push_back(static_cast<unsigned char>(v & 0xFF));
  buf.push_back(static_cast<unsigned char>(v >> 8));
}

inline void push_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    buf.push_back(static_cast<unsigned char>((v >> (8 * i)) & 0xFF));
}

inline void push_f32(std::vector<unsigned char>& buf, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  push_u32(buf, bits);
}

struct ByteReader {
  const unsigned char* p;
  std::size_t remaining;
  std::uint16_t u16() {
    if (remaining < 2) throw LoadError("weights file truncated");
    std::uint16_t v = static_cast<std::uint16_t>(p[0] | (p[1] << 8));
    p += 2;
    remaining -= 2;
    return v;
  }
  std::uint32_t u32() {
    if (remaining < 4) throw LoadError("weights file truncated");
    std::uint32_t v = static_cast<std::uint32_t>(p[0]) |
                      (static_cast<std::uint32_t>(p[1]) << 8) |
                      (static_cast<std::uint32_t>(p[2]) << 16) |
                      (static_cast<std::uint32_t>(p[3]) << 24);
    p += 4;
    remaining -= 4;
    return v;
  }
  std::uint8_t u8() {
    if (remaining < 1) throw LoadError("weights file truncated");
    std::uint8_t v = *p++;
    --remaining;
    return v;
  }
  std::string str(std::size_t len) {
    if (remaining < len) throw LoadError("weights file truncated");
    std::string s(reinterpret_cast<const char*>(p), len);
    p += len;
    remaining -= len;
    return s;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
};

}  // namespace detail

// Weights file layout: magic "EBWT"; u32 version (1); u32 entry count;
// per entry a u16 name length, the name, u8 rank, u32 extents; then every
// tensor's float32 payload in declaration order; finally a CRC32
// (polynomial 0xEDB88320) of all bytes between the magic and the checksum.
inline void save_weights(const WeightStore& store, const std::string& path) {
  std::vector<unsigned char> body;
  detail::push_u32(body, 1u);  // version
  detail::push_u32(body, static_cast<std::uint32_t>(store.entries().size()));
  for (const auto& [name, tensor] : store.entries()) {
    if (name.size() > 0xFFFF) throw ArgumentError("weight name too long");
    if (tensor.rank() > 0xFF) throw ArgumentError("weight rank too large");
    detail::push_u16(body, static_cast<std::uint16_t>(name.size()));
    body.insert(body.end(), name.begin(), name.end());
    body.push_back(static_cast<unsigned char>(tensor.rank()));
    for (std::size_t d : tensor.shape)
      detail::push_u32(body, static_cast<std::uint32_t>(d));
  }
  for (const auto& [name, tensor] : store.entries())
    for (double v : tensor.data) detail::push_f32(body, static_cast<float>(v));

  const std::uint32_t crc = detail::crc32(body.data(), body.size());

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write("EBWT", 4);
  out.write(reinterpret_cast<const char*>(body.data()),
            static_cast<std::streamsize>(body.size()));
  std::vector<unsigned char> tail;
  detail::push_u32(tail, crc);
  out.write(reinterpret_cast<const char*>(tail.data()), 4);
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline WeightStore load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 4 + 4 + 4 + 4)
    throw LoadError("weights file too short to be valid");
  if (std::memcmp(bytes.data(), "EBWT", 4) != 0)
    throw LoadError("weights file has wrong magic (expected EBWT)");

  const std::size_t body_len = bytes.size() - 8;
  const std::uint32_t stored_crc =
      static_cast<std::uint32_t>(bytes[bytes.size() - 4]) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 3]) << 8) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 2]) << 16) |
      (static_cast<std::uint32_t>(bytes[bytes.size() - 1]) << 24);
  const std::uint32_t actual_crc = detail::crc32(bytes.data() + 4, body_len);
  if (stored_crc != actual_crc)
    throw LoadError("weights file checksum mismatch: file is corrupted");

  detail::ByteReader r{bytes.data() + 4, body_len};
  const std::uint32_t version = r.u32();
  if (version != 1)
    throw LoadError("unsupported weights file version " + std::to_string(version));
  const std::uint32_t count = r.u32();

  struct Header {
    std::string name;
    std::vector<std::size_t> shape;
  };
  std::vector<Header> headers(count);
  for (auto& h : headers) {
    const std::uint16_t name_len = r.u16();
    h.name = r.str(name_len);
    const std::uint8_t rank = r.u8();
    h.shape.resize(rank);
    for (auto& d : h.shape) d = r.u32();
  }

  WeightStore store;
  for (auto& h : headers) {
    if (store.contains(h.name))
      throw LoadError("weights file repeats entry '" + h.name + "'");
    Tensor t(h.shape);
    for (auto& v : t.data) v = static_cast<double>(r.f32());
    store.add(h.name, std::move(t));
  }
  if (r.remaining != 0)
    throw LoadError("weights file has trailing bytes after payload");
  return store;
}

}  // namespace eben
