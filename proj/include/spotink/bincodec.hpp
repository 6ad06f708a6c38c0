#pragma once

// Lossless bilevel compression in the style of a JBIG2 generic region:
// every pixel is coded by the MQ coder under a context formed from ten
// already-coded neighbours.
//
//        row y-2:       X X X
//        row y-1:     X X X X X
//        row y  :     X X ?
//
// Neighbours outside the image read as 0.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spotink/bits.hpp"
#include "spotink/error.hpp"
#include "spotink/image.hpp"
#include "spotink/mq_coder.hpp"

namespace spotink {

inline constexpr std::size_t kContextBits = 10;
inline constexpr std::size_t kContextCount = std::size_t{1} << kContextBits;

using CodecContextState = std::array<mq::Context, kContextCount>;

struct CompressedBitmap {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  Bytes body;

  friend bool operator==(const CompressedBitmap&, const CompressedBitmap&) = default;
};

/// The decoder reads at most two bytes ahead, so a complete body never needs
/// more than two synthesized bytes past its terminator.
inline constexpr std::size_t kMaxTerminatorFill = 2;

inline constexpr std::string_view kBitmapMagic = "SBC1";
inline constexpr std::size_t kBitmapHeaderSize = 16;

namespace detail {

// Rows padded by two zero pixels on each side; three rows kept rolling.
class ContextWindow {
 public:
  explicit ContextWindow(std::size_t width)
      : width_(width), rows_{Row(width + 4, 0), Row(width + 4, 0), Row(width + 4, 0)} {}

  std::uint8_t* current() { return rows_[2].data() + 2; }

  unsigned context(std::size_t x) const {
    const std::uint8_t* r2 = rows_[0].data() + 2 + x;
    const std::uint8_t* r1 = rows_[1].data() + 2 + x;
    const std::uint8_t* r0 = rows_[2].data() + 2 + x;
    return (unsigned{r2[-1]} << 9) | (unsigned{r2[0]} << 8) | (unsigned{r2[1]} << 7) |
           (unsigned{r1[-2]} << 6) | (unsigned{r1[-1]} << 5) | (unsigned{r1[0]} << 4) |
           (unsigned{r1[1]} << 3) | (unsigned{r1[2]} << 2) | (unsigned{r0[-2]} << 1) |
           unsigned{r0[-1]};
  }

  void advance() {
    std::swap(rows_[0], rows_[1]);
    std::swap(rows_[1], rows_[2]);
    std::fill(rows_[2].begin(), rows_[2].end(), 0);
  }

 private:
  using Row = std::vector<std::uint8_t>;
  std::size_t width_;
  std::array<Row, 3> rows_;
};

}  // namespace detail

inline CompressedBitmap encode_bitmap(const BiLevelImage& img) {
  if (img.width() == 0 || img.height() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "cannot compress an empty bitmap");
  }
  CodecContextState state{};
  mq::Encoder enc;
  detail::ContextWindow win(img.width());
  for (std::size_t y = 0; y < img.height(); ++y) {
    std::uint8_t* cur = win.current();
    const auto row = img.row(y);
    for (std::size_t x = 0; x < img.width(); ++x) {
      const unsigned bit = row[x] & 1u;
      enc.encode(state[win.context(x)], bit);
      cur[x] = static_cast<std::uint8_t>(bit);
    }
    win.advance();
  }
  return {static_cast<std::uint32_t>(img.width()), static_cast<std::uint32_t>(img.height()),
          std::move(enc).finish()};
}

inline BiLevelImage decode_bitmap(const CompressedBitmap& c) {
  if (c.width == 0 || c.height == 0) {
    throw Error(ErrorCode::CorruptStream, "bitmap header declares a zero dimension");
  }
  const auto& b = c.body;
  if (b.size() < 2 || b[b.size() - 2] != mq::kMarkerPrefix || b.back() != mq::kEndMarker) {
    throw Error(ErrorCode::CorruptStream, "arithmetic-coded body is truncated (no terminator)");
  }
  BiLevelImage img(c.width, c.height);
  CodecContextState state{};
  mq::Decoder dec(b);
  detail::ContextWindow win(c.width);
  for (std::size_t y = 0; y < c.height; ++y) {
    std::uint8_t* cur = win.current();
    for (std::size_t x = 0; x < c.width; ++x) {
      const auto bit = static_cast<std::uint8_t>(dec.decode(state[win.context(x)]));
      cur[x] = bit;
      img.at(x, y) = bit;
    }
    win.advance();
  }
  if (!dec.stayed_in_bounds() || dec.fill_bytes() > kMaxTerminatorFill) {
    throw Error(ErrorCode::CorruptStream, "arithmetic-coded body ended before the bitmap did");
  }
  return img;
}

/// "SBC1", width, height, body length (all u32 big-endian), body.
inline Bytes serialize_bitmap(const CompressedBitmap& c) {
  Bytes out(kBitmapMagic.begin(), kBitmapMagic.end());
  put_u32be(out, c.width);
  put_u32be(out, c.height);
  put_u32be(out, static_cast<std::uint32_t>(c.body.size()));
  out.insert(out.end(), c.body.begin(), c.body.end());
  return out;
}

/// Parses a serialized bitmap at the start of `in`; `consumed` receives its
/// length so callers can continue after it.
inline CompressedBitmap parse_bitmap(std::span<const std::uint8_t> in, std::size_t* consumed = nullptr) {
  if (in.size() < kBitmapHeaderSize ||
      !std::equal(kBitmapMagic.begin(), kBitmapMagic.end(), in.begin())) {
    throw Error(ErrorCode::CorruptStream, "missing SBC1 bitmap header");
  }
  CompressedBitmap c;
  c.width = get_u32be(in, 4);
  c.height = get_u32be(in, 8);
  const std::uint32_t len = get_u32be(in, 12);
  if (len > in.size() - kBitmapHeaderSize) {
    throw Error(ErrorCode::CorruptStream, "bitmap body is truncated");
  }
  if (c.width == 0 || c.height == 0) {
    throw Error(ErrorCode::CorruptStream, "bitmap header declares a zero dimension");
  }
  c.body.assign(in.begin() + kBitmapHeaderSize, in.begin() + kBitmapHeaderSize + len);
  if (consumed) *consumed = kBitmapHeaderSize + len;
  return c;
}

struct CompressionReport {
  std::size_t before_bytes = 0;
  std::size_t after_bytes = 0;
  double ratio_percent = 0.0;
};

/// Before = packed bits, ceil(w*h/8); after = serialized size including the
/// 16-byte header. Ratio is (1 - after/before) * 100 and may be negative.
inline CompressionReport compression_report(const BiLevelImage& img) {
  CompressionReport r;
  r.before_bytes = (img.size() + 7) / 8;
  r.after_bytes = serialize_bitmap(encode_bitmap(img)).size();
  r.ratio_percent = (1.0 - static_cast<double>(r.after_bytes) / static_cast<double>(r.before_bytes)) * 100.0;
  return r;
}

}  // namespace spotink
