#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spotink/error.hpp"

namespace spotink {

/// Unpacked bit sequence, one 0/1 value per element.
using Bits = std::vector<std::uint8_t>;
using Bytes = std::vector<std::uint8_t>;

/// MSB-first unpacking.
inline Bits bytes_to_bits(std::span<const std::uint8_t> bytes) {
  Bits bits;
  bits.reserve(bytes.size() * 8);
  for (auto byte : bytes) {
    for (int k = 7; k >= 0; --k) bits.push_back(static_cast<std::uint8_t>((byte >> k) & 1u));
  }
  return bits;
}

/// MSB-first packing; a trailing partial byte is zero-filled.
inline Bytes bits_to_bytes(std::span<const std::uint8_t> bits) {
  Bytes bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

class BitWriter {
 public:
  explicit BitWriter(Bits& out) : out_(out) {}

  void put(std::uint64_t value, unsigned width) {
    for (unsigned k = width; k-- > 0;) out_.push_back(static_cast<std::uint8_t>((value >> k) & 1u));
  }
  void put_flag(bool flag) { out_.push_back(flag ? 1 : 0); }

 private:
  Bits& out_;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bits) : bits_(bits) {}

  std::uint64_t get(unsigned width) {
    if (remaining() < width) {
      throw Error(ErrorCode::MalformedHeader, "bit stream ends inside a field");
    }
    std::uint64_t v = 0;
    for (unsigned k = 0; k < width; ++k) v = (v << 1) | (bits_[pos_++] & 1u);
    return v;
  }
  bool get_flag() { return get(1) != 0; }

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bits_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bits_;
  std::size_t pos_ = 0;
};

inline void put_u32be(Bytes& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t get_u32be(std::span<const std::uint8_t> in, std::size_t at) {
  return (std::uint32_t{in[at]} << 24) | (std::uint32_t{in[at + 1]} << 16) |
         (std::uint32_t{in[at + 2]} << 8) | std::uint32_t{in[at + 3]};
}

}  // namespace spotink
