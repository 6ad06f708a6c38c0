#pragma once

// Single-channel reversible data hiding by histogram shifting.
//
// One round picks a peak value PP and a target value ZP, moves every sample
// strictly between them one step toward ZP so that the neighbour PP+d
// (d = +1 or -1, the direction of ZP) empties, and then walks the PP samples
// in raster order: a 1 bit moves the sample to PP+d, a 0 bit leaves it.
// When no empty bin exists the least populated bin (LP) stands in for ZP and
// the positions that originally held LP are recorded so the inverse shift
// can leave them alone.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "spotink/bits.hpp"
#include "spotink/error.hpp"
#include "spotink/image.hpp"

namespace spotink::rdh {

struct Histogram {
  std::array<std::uint64_t, 256> bins{};

  std::uint64_t operator[](std::uint8_t v) const noexcept { return bins[v]; }
  std::uint64_t total() const noexcept {
    std::uint64_t n = 0;
    for (auto c : bins) n += c;
    return n;
  }
};

/// Half-open run of raster indices that histogram shifting never touches.
struct SkipRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  constexpr bool contains(std::size_t i) const noexcept { return i >= begin && i < end; }
  constexpr std::size_t length() const noexcept { return end - begin; }
};

struct ZeroPoint {
  std::uint8_t value = 0;
  bool used_lp = false;

  friend bool operator==(const ZeroPoint&, const ZeroPoint&) = default;
};

struct RoundRecord {
  std::uint8_t pp = 0;
  std::uint8_t zp = 0;
  bool used_lp = false;
  /// Ascending raster indices that held the LP value before the round.
  std::vector<std::uint32_t> lp_map;
  std::size_t bits_embedded = 0;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct SideInfo {
  std::uint8_t pp = 0;
  std::uint8_t zp = 0;

  friend bool operator==(const SideInfo&, const SideInfo&) = default;
};

inline constexpr std::size_t kSideInfoPixels = 16;

namespace detail {

// Calls fn(index) for every raster index outside `skip`, in raster order.
template <typename Fn>
void for_each_index(std::size_t n, SkipRange skip, Fn&& fn) {
  const std::size_t stop1 = std::min(skip.begin, n);
  for (std::size_t i = 0; i < stop1; ++i) fn(i);
  for (std::size_t i = std::max(skip.end, stop1); i < n; ++i) fn(i);
}

inline int direction(std::uint8_t pp, std::uint8_t zp) noexcept { return pp < zp ? 1 : -1; }

inline void require_distinct(std::uint8_t pp, std::uint8_t zp) {
  if (pp == zp) {
    throw Error(ErrorCode::InvalidSideInfo, "peak and zero point coincide (" + std::to_string(pp) + ")");
  }
}

inline void validate_lp_map(std::span<const std::uint32_t> lp_map, std::size_t n, SkipRange skip) {
  for (std::size_t k = 0; k < lp_map.size(); ++k) {
    if (lp_map[k] >= n || skip.contains(lp_map[k]) || (k > 0 && lp_map[k] <= lp_map[k - 1])) {
      throw Error(ErrorCode::InvalidSideInfo, "location map is not a strictly increasing list of pixel indices");
    }
  }
}

}  // namespace detail

inline Histogram compute_histogram(const Channel& ch, SkipRange skip = {}) {
  Histogram h;
  const auto s = ch.samples();
  detail::for_each_index(s.size(), skip, [&](std::size_t i) { ++h.bins[s[i]]; });
  return h;
}

/// Most frequent value; the smallest one when several tie.
inline std::uint8_t select_pp(const Histogram& h) noexcept {
  std::size_t best = 0;
  for (std::size_t v = 1; v < 256; ++v) {
    if (h.bins[v] > h.bins[best]) best = v;
  }
  return static_cast<std::uint8_t>(best);
}

/// Nearest empty bin to `pp` (the larger value on a distance tie). With no
/// empty bin, the least frequent bin at distance >= 2 from `pp` is used as LP,
/// smallest value first. The LP bin must not neighbour PP: after embedding,
/// PP+d would hold both original LP samples and 1-bits, and the location map
/// travels inside the very bits that would have to be told apart.
inline ZeroPoint select_zp(const Histogram& h, std::uint8_t pp) {
  for (int dist = 1; dist < 256; ++dist) {
    const int up = pp + dist;
    const int down = pp - dist;
    if (up <= 255 && h.bins[up] == 0) return {static_cast<std::uint8_t>(up), false};
    if (down >= 0 && h.bins[down] == 0) return {static_cast<std::uint8_t>(down), false};
  }
  int lp = -1;
  for (int v = 0; v < 256; ++v) {
    if (v >= pp - 1 && v <= pp + 1) continue;
    if (lp < 0 || h.bins[v] < h.bins[lp]) lp = v;
  }
  if (lp < 0) throw Error(ErrorCode::NoUsableZp, "histogram offers no zero or lowest point");
  return {static_cast<std::uint8_t>(lp), true};
}

/// Bits one round can carry: the population of the peak bin.
inline std::size_t round_capacity(const Histogram& h) noexcept {
  return static_cast<std::size_t>(h.bins[select_pp(h)]);
}

/// Raster indices (outside `skip`) whose sample equals `value`.
inline std::vector<std::uint32_t> locate_value(const Channel& ch, std::uint8_t value, SkipRange skip = {}) {
  std::vector<std::uint32_t> where;
  const auto s = ch.samples();
  detail::for_each_index(s.size(), skip, [&](std::size_t i) {
    if (s[i] == value) where.push_back(static_cast<std::uint32_t>(i));
  });
  return where;
}

struct EmbedResult {
  Channel channel;
  RoundRecord record;
};

/// One embedding round. `bits` may be shorter than the PP population; the
/// remaining PP samples carry 0 (stay put).
inline EmbedResult shift_and_embed(Channel ch, std::uint8_t pp, std::uint8_t zp, bool used_lp,
                                   std::span<const std::uint8_t> bits, SkipRange skip = {}) {
  detail::require_distinct(pp, zp);
  const auto h = compute_histogram(ch, skip);
  if (bits.size() > h[pp]) {
    throw Error(ErrorCode::CapacityExceeded, std::to_string(bits.size()) + " bits offered, " +
                                                 std::to_string(h[pp]) + " peak pixels available");
  }
  if (!used_lp && h[zp] != 0) {
    throw Error(ErrorCode::InvalidSideInfo, "zero point " + std::to_string(zp) + " is not empty");
  }
  if (used_lp && (zp == pp + 1 || zp + 1 == pp)) {
    throw Error(ErrorCode::InvalidSideInfo, "lowest point must not neighbour the peak point");
  }

  RoundRecord rec{pp, zp, used_lp, {}, bits.size()};
  if (used_lp) rec.lp_map = locate_value(ch, zp, skip);

  const int d = detail::direction(pp, zp);
  const int lo = std::min<int>(pp, zp);
  const int hi = std::max<int>(pp, zp);
  auto s = ch.samples();
  std::size_t next_bit = 0;
  detail::for_each_index(s.size(), skip, [&](std::size_t i) {
    const int x = s[i];
    if (x > lo && x < hi) {
      s[i] = static_cast<std::uint8_t>(x + d);
    } else if (x == pp) {
      if (next_bit < bits.size() && bits[next_bit] != 0) s[i] = static_cast<std::uint8_t>(x + d);
      ++next_bit;
    }
  });
  return {std::move(ch), std::move(rec)};
}

/// Reads one bit per PP or PP+d sample in raster order. Returns as many bits
/// as the round's capacity.
inline Bits read_embedded_bits(const Channel& ch, std::uint8_t pp, std::uint8_t zp, SkipRange skip = {}) {
  detail::require_distinct(pp, zp);
  const int carrier = pp + detail::direction(pp, zp);
  Bits bits;
  const auto s = ch.samples();
  detail::for_each_index(s.size(), skip, [&](std::size_t i) {
    if (s[i] == pp) bits.push_back(0);
    else if (s[i] == carrier) bits.push_back(1);
  });
  return bits;
}

/// Inverse shift: every sample in (PP, ZP] (or [ZP, PP)) steps back toward PP,
/// except LP-map positions, which must still hold ZP.
inline Channel unshift(Channel ch, std::uint8_t pp, std::uint8_t zp, bool used_lp,
                       std::span<const std::uint32_t> lp_map, SkipRange skip = {}) {
  detail::require_distinct(pp, zp);
  if (!used_lp && !lp_map.empty()) {
    throw Error(ErrorCode::InvalidSideInfo, "location map present without a lowest point");
  }
  detail::validate_lp_map(lp_map, ch.size(), skip);

  const int d = detail::direction(pp, zp);
  const int lo = d > 0 ? pp + 1 : zp;
  const int hi = d > 0 ? zp : pp - 1;
  auto s = ch.samples();
  std::size_t next_lp = 0;
  bool consistent = true;
  detail::for_each_index(s.size(), skip, [&](std::size_t i) {
    const bool exempt = next_lp < lp_map.size() && lp_map[next_lp] == i;
    if (exempt) {
      ++next_lp;
      if (s[i] != zp) consistent = false;
      return;
    }
    const int x = s[i];
    if (x >= lo && x <= hi) s[i] = static_cast<std::uint8_t>(x - d);
  });
  if (!consistent) {
    throw Error(ErrorCode::InvalidSideInfo, "location map points at pixels that do not hold the lowest point");
  }
  return ch;
}

struct ExtractResult {
  Channel channel;
  Bits bits;
};

inline ExtractResult extract_and_unshift(Channel ch, std::uint8_t pp, std::uint8_t zp, bool used_lp,
                                         std::span<const std::uint32_t> lp_map, SkipRange skip = {}) {
  Bits bits = read_embedded_bits(ch, pp, zp, skip);
  Channel restored = unshift(std::move(ch), pp, zp, used_lp, lp_map, skip);
  return {std::move(restored), std::move(bits)};
}

/// The first 16 pixels of the bottom row.
inline SkipRange sideinfo_range(const Channel& ch) {
  if (ch.width() < kSideInfoPixels) {
    throw Error(ErrorCode::ImageTooSmall,
                "side information needs a bottom row of at least 16 pixels, width is " + std::to_string(ch.width()));
  }
  const std::size_t start = (ch.height() - 1) * ch.width();
  return {start, start + kSideInfoPixels};
}

inline std::uint16_t read_lsbs(const Channel& ch) {
  const auto r = sideinfo_range(ch);
  std::uint16_t v = 0;
  for (std::size_t i = r.begin; i < r.end; ++i) v = static_cast<std::uint16_t>((v << 1) | (ch[i] & 1u));
  return v;
}

inline void write_lsbs(Channel& ch, std::uint16_t v) {
  const auto r = sideinfo_range(ch);
  for (std::size_t k = 0; k < kSideInfoPixels; ++k) {
    const auto bit = static_cast<std::uint8_t>((v >> (15 - k)) & 1u);
    ch[r.begin + k] = static_cast<std::uint8_t>((ch[r.begin + k] & 0xFEu) | bit);
  }
}

struct SideInfoWrite {
  Channel channel;
  std::uint16_t original_lsbs = 0;
};

/// PP in pixels 0..7 and ZP in pixels 8..15 of the bottom row, MSB first.
inline SideInfoWrite write_lsb_sideinfo(Channel ch, SideInfo info) {
  const std::uint16_t original = read_lsbs(ch);
  write_lsbs(ch, static_cast<std::uint16_t>((info.pp << 8) | info.zp));
  return {std::move(ch), original};
}

inline SideInfo read_lsb_sideinfo(const Channel& ch) {
  const std::uint16_t v = read_lsbs(ch);
  return {static_cast<std::uint8_t>(v >> 8), static_cast<std::uint8_t>(v & 0xFFu)};
}

}  // namespace spotink::rdh
