// core/include/spoofcm/io_util.hpp

// Copyright 2026  spoofcm authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SPOOFCM_IO_UTIL_HPP_
#define SPOOFCM_IO_UTIL_HPP_

#include <bit>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

namespace spoofcm {

// All on-disk formats in this project are little-endian. These helpers
// append/read fixed-width fields to a byte buffer; doubles travel as their
// raw IEEE-754 bit patterns so round trips are bitwise exact.

static_assert(std::endian::native == std::endian::little,
              "on-disk formats assume a little-endian host");

inline void put_u16(std::string &out, std::uint16_t v) {
  out.append(reinterpret_cast<const char *>(&v), 2);
}
inline void put_u32(std::string &out, std::uint32_t v) {
  out.append(reinterpret_cast<const char *>(&v), 4);
}
inline void put_u64(std::string &out, std::uint64_t v) {
  out.append(reinterpret_cast<const char *>(&v), 8);
}
inline void put_u8(std::string &out, std::uint8_t v) {
  out.push_back(static_cast<char>(v));
}
inline void put_f64(std::string &out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}
inline void put_f32(std::string &out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

/// Cursor over an in-memory byte buffer. Throws CorruptModel-agnostic
/// std::out_of_range on underrun; callers translate to their own error.
class ByteReader {
 public:
  ByteReader(const char *data, std::size_t size) : data_(data), size_(size) {}
  explicit ByteReader(const std::string &s) : ByteReader(s.data(), s.size()) {}

  std::size_t remaining() const { return size_ - pos_; }

  std::uint8_t u8() { return static_cast<std::uint8_t>(*take(1)); }
  std::uint16_t u16() { return fixed<std::uint16_t>(); }
  std::uint32_t u32() { return fixed<std::uint32_t>(); }
  std::uint64_t u64() { return fixed<std::uint64_t>(); }
  double f64() { return std::bit_cast<double>(u64()); }
  float f32() { return std::bit_cast<float>(u32()); }

  const char *take(std::size_t n) {
    if (remaining() < n) throw std::out_of_range("byte buffer underrun");
    const char *p = data_ + pos_;
    pos_ += n;
    return p;
  }

 private:
  template <typename T>
  T fixed() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }

  const char *data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

/// CRC-32 (IEEE 802.3, polynomial 0xEDB88320), as used by model files.
std::uint32_t crc32(const char *data, std::size_t size,
                    std::uint32_t seed = 0);
inline std::uint32_t crc32(const std::string &s) {
  return crc32(s.data(), s.size());
}

/// Whole-file helpers. Throw IoError on failure.
std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &bytes);

/// Shortest decimal form that round-trips the exact double (std::to_chars).
std::string format_double(double v);

}  // namespace spoofcm

#endif  // SPOOFCM_IO_UTIL_HPP_
