/*
 * Copyright 2026 the BlindFL authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BLINDFL_BYTES_HPP
#define BLINDFL_BYTES_HPP

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "blindfl/errors.hpp"

namespace blindfl {

using Bytes = std::vector<std::uint8_t>;

std::uint32_t crc32(std::span<const std::uint8_t> data);

/// Little-endian append-only byte sink.
class ByteWriter {
 public:
  Bytes take() && { return std::move(buf_); }
  const Bytes& data() const { return buf_; }
  std::size_t size() const { return buf_.size(); }

  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u16(std::uint16_t v) { raw(&v, 2); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  void f32(float v) { raw(&v, 4); }
  void f64(double v) { raw(&v, 8); }

  void bytes(std::span<const std::uint8_t> b) {
    buf_.insert(buf_.end(), b.begin(), b.end());
  }

  void literal(const char* s) {
    buf_.insert(buf_.end(), s, s + std::strlen(s));
  }

  void zeros(std::size_t n) { buf_.insert(buf_.end(), n, 0); }

  /// Appends crc32 of everything written so far.
  void checksum() { u32(crc32(buf_)); }

 private:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);  // host is little-endian
  }
  Bytes buf_;
};

/// Bounds-checked little-endian reader. Throws CodecError on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t offset() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

  std::uint8_t u8() { return take(1)[0]; }
  std::uint16_t u16() { return read_le<std::uint16_t>(); }
  std::uint32_t u32() { return read_le<std::uint32_t>(); }
  std::uint64_t u64() { return read_le<std::uint64_t>(); }

  float f32() {
    float v;
    std::memcpy(&v, take(4).data(), 4);
    return v;
  }
  double f64() {
    double v;
    std::memcpy(&v, take(8).data(), 8);
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (remaining() < n) {
      throw CodecError(CodecError::Kind::Truncated,
                       "truncated blob: needed " + std::to_string(n) +
                           " bytes at offset " + std::to_string(pos_));
    }
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  void expect_literal(const char* s, const std::string& what) {
    std::size_t n = std::strlen(s);
    auto got = take(n);
    if (std::memcmp(got.data(), s, n) != 0) {
      throw CodecError(CodecError::Kind::Malformed, "bad magic for " + what);
    }
  }

  /// Verifies a trailing crc32 over [0, pos) and consumes it.
  void verify_checksum() {
    std::uint32_t expect = crc32(data_.subspan(0, pos_));
    std::uint32_t got = u32();
    if (got != expect) {
      throw CodecError(CodecError::Kind::BadChecksum, "checksum mismatch");
    }
  }

 private:
  template <typename T>
  T read_le() {
    T v;
    std::memcpy(&v, take(sizeof(T)).data(), sizeof(T));
    return v;
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace blindfl

#endif  // BLINDFL_BYTES_HPP
