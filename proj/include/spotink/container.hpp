#pragma once

// Everything that travels inside the hidden payload.
//
// Sealed container (one per carrying channel), all integers big-endian:
//
//   "SPNK" | version u8 | layer kind u8 | SBC1 bitmap | layer width u32 | crc32 u32
//
// The CRC covers every preceding byte. Version 1 stores 3-bit layers as a
// plane strip ordered MSB plane first.
//
// Round header, prefixed to the bits of every embedding round (MSB first):
//
//   flags u8            bit 7 = first round (chain terminal), bit 6 = LP used
//   link u16            first round: the 16 original side-info LSBs
//                       later rounds: previous round's PP (hi) and ZP (lo)
//   fragment_bits u32   container bits carried by this round
//   [lp_count u32, lp_count x index u32]   only when LP is used
//
// The final round's PP/ZP live in the side-info LSBs, so extraction peels
// the newest round first and follows the links back to the first one.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <zlib.h>

#include "spotink/bincodec.hpp"
#include "spotink/bits.hpp"
#include "spotink/error.hpp"

namespace spotink {

inline constexpr std::string_view kContainerMagic = "SPNK";
inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kMaxRounds = 64;

enum class LayerKind : std::uint8_t { Binary = 0, Tri = 1 };

struct PayloadContainer {
  LayerKind kind = LayerKind::Binary;
  CompressedBitmap compressed;
  std::uint32_t original_layer_width = 0;

  friend bool operator==(const PayloadContainer&, const PayloadContainer&) = default;
};

inline std::uint32_t crc32_of(std::span<const std::uint8_t> data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; containers are far below 4 GiB
  crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
  return static_cast<std::uint32_t>(crc);
}

inline Bytes seal(const PayloadContainer& c) {
  Bytes out(kContainerMagic.begin(), kContainerMagic.end());
  out.push_back(kContainerVersion);
  out.push_back(static_cast<std::uint8_t>(c.kind));
  const Bytes bitmap = serialize_bitmap(c.compressed);
  out.insert(out.end(), bitmap.begin(), bitmap.end());
  put_u32be(out, c.original_layer_width);
  put_u32be(out, crc32_of(out));
  return out;
}

struct SealedContainers {
  Bytes binary;
  Bytes tri;
};

inline SealedContainers seal_container(const CompressedBitmap& binary_compressed,
                                       const CompressedBitmap& tri_compressed, std::uint32_t tri_width) {
  return {seal({LayerKind::Binary, binary_compressed, binary_compressed.width}),
          seal({LayerKind::Tri, tri_compressed, tri_width})};
}

/// The CRC is checked before anything else so that any damaged byte,
/// including one in the magic or version, reports as BadCrc.
inline PayloadContainer open_container(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t kMinSize = 4 + 1 + 1 + kBitmapHeaderSize + 4 + 4;
  if (bytes.size() < kMinSize) {
    throw Error(ErrorCode::BadMagic, "payload of " + std::to_string(bytes.size()) + " bytes is too short");
  }
  const std::size_t crc_at = bytes.size() - 4;
  if (crc32_of(bytes.first(crc_at)) != get_u32be(bytes, crc_at)) {
    throw Error(ErrorCode::BadCrc, "container checksum mismatch");
  }
  if (!std::equal(kContainerMagic.begin(), kContainerMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::BadMagic, "missing SPNK magic");
  }
  if (bytes[4] != kContainerVersion) {
    throw Error(ErrorCode::BadVersion, "unsupported container version " + std::to_string(bytes[4]));
  }
  if (bytes[5] > static_cast<std::uint8_t>(LayerKind::Tri)) {
    throw Error(ErrorCode::MalformedHeader, "unknown layer kind " + std::to_string(bytes[5]));
  }
  PayloadContainer c;
  c.kind = static_cast<LayerKind>(bytes[5]);
  std::size_t used = 0;
  try {
    c.compressed = parse_bitmap(bytes.subspan(6, crc_at - 6), &used);
  } catch (const Error& e) {
    throw Error(ErrorCode::MalformedHeader, e.what());
  }
  if (6 + used + 4 != crc_at) {
    throw Error(ErrorCode::MalformedHeader, "container length disagrees with its bitmap");
  }
  c.original_layer_width = get_u32be(bytes, 6 + used);
  return c;
}

struct RoundHeader {
  /// Set on the first round embedded, which is the last one peeled.
  bool terminal = false;
  std::uint16_t original_lsbs = 0;
  std::uint8_t prev_pp = 0;
  std::uint8_t prev_zp = 0;
  bool used_lp = false;
  std::vector<std::uint32_t> lp_map;
  std::uint32_t fragment_bits = 0;

  friend bool operator==(const RoundHeader&, const RoundHeader&) = default;
};

inline constexpr std::size_t kRoundHeaderFixedBits = 8 + 16 + 32;

inline std::size_t header_bit_length(const RoundHeader& h) noexcept {
  return kRoundHeaderFixedBits + (h.used_lp ? 32 + 32 * h.lp_map.size() : 0);
}

struct RoundPayload {
  Bits bits;
  std::size_t body_consumed = 0;
};

/// Fills exactly `capacity` bits: header, as much of `body_remainder` as fits,
/// zero padding. The header's fragment_bits is set here.
inline RoundPayload build_round_payload(RoundHeader header, std::span<const std::uint8_t> body_remainder,
                                        std::size_t capacity) {
  const std::size_t head = header_bit_length(header);
  if (head > capacity) {
    throw Error(ErrorCode::RoundTooSmall, "round header needs " + std::to_string(head) + " bits, capacity is " +
                                              std::to_string(capacity));
  }
  const std::size_t fragment = std::min(body_remainder.size(), capacity - head);
  header.fragment_bits = static_cast<std::uint32_t>(fragment);

  RoundPayload p;
  p.bits.reserve(capacity);
  BitWriter w(p.bits);
  w.put_flag(header.terminal);
  w.put_flag(header.used_lp);
  w.put(0, 6);
  if (header.terminal) {
    w.put(header.original_lsbs, 16);
  } else {
    w.put(header.prev_pp, 8);
    w.put(header.prev_zp, 8);
  }
  w.put(header.fragment_bits, 32);
  if (header.used_lp) {
    w.put(header.lp_map.size(), 32);
    for (auto idx : header.lp_map) w.put(idx, 32);
  }
  p.bits.insert(p.bits.end(), body_remainder.begin(), body_remainder.begin() + static_cast<std::ptrdiff_t>(fragment));
  p.bits.resize(capacity, 0);
  p.body_consumed = fragment;
  return p;
}

struct ParsedRound {
  RoundHeader header;
  Bits fragment;
};

/// Inverse of build_round_payload; padding past the fragment is ignored.
inline ParsedRound parse_round_payload(std::span<const std::uint8_t> bits) {
  BitReader r(bits);
  ParsedRound out;
  RoundHeader& h = out.header;
  h.terminal = r.get_flag();
  h.used_lp = r.get_flag();
  if (r.get(6) != 0) throw Error(ErrorCode::MalformedHeader, "reserved round-header flags are set");
  if (h.terminal) {
    h.original_lsbs = static_cast<std::uint16_t>(r.get(16));
  } else {
    h.prev_pp = static_cast<std::uint8_t>(r.get(8));
    h.prev_zp = static_cast<std::uint8_t>(r.get(8));
    if (h.prev_pp == h.prev_zp) throw Error(ErrorCode::MalformedHeader, "chained PP equals ZP");
  }
  h.fragment_bits = static_cast<std::uint32_t>(r.get(32));
  if (h.used_lp) {
    const auto count = r.get(32);
    if (count > r.remaining() / 32) throw Error(ErrorCode::MalformedHeader, "location map overruns the round");
    h.lp_map.reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) h.lp_map.push_back(static_cast<std::uint32_t>(r.get(32)));
  }
  if (h.fragment_bits > r.remaining()) {
    throw Error(ErrorCode::MalformedHeader, "fragment length overruns the round");
  }
  const auto start = bits.begin() + static_cast<std::ptrdiff_t>(r.position());
  out.fragment.assign(start, start + h.fragment_bits);
  return out;
}

}  // namespace spotink
