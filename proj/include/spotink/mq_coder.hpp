#pragma once

// MQ binary arithmetic coder, the adaptive coder used by JBIG2 generic
// regions (ITU-T T.88 Annex E encoder / Annex G decoder).

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spotink/error.hpp"

namespace spotink::mq {

struct QeEntry {
  std::uint16_t qe;
  std::uint8_t nmps;
  std::uint8_t nlps;
  std::uint8_t switch_mps;
};

inline constexpr std::array<QeEntry, 47> kQeTable{{
    {0x5601, 1, 1, 1},   {0x3401, 2, 6, 0},   {0x1801, 3, 9, 0},   {0x0AC1, 4, 12, 0},
    {0x0521, 5, 29, 0},  {0x0221, 38, 33, 0}, {0x5601, 7, 6, 1},   {0x5401, 8, 14, 0},
    {0x4801, 9, 14, 0},  {0x3801, 10, 14, 0}, {0x3001, 11, 17, 0}, {0x2401, 12, 18, 0},
    {0x1C01, 13, 20, 0}, {0x1601, 29, 21, 0}, {0x5601, 15, 14, 1}, {0x5401, 16, 14, 0},
    {0x5101, 17, 15, 0}, {0x4801, 18, 16, 0}, {0x3801, 19, 17, 0}, {0x3401, 20, 18, 0},
    {0x3001, 21, 19, 0}, {0x2801, 22, 19, 0}, {0x2401, 23, 20, 0}, {0x2201, 24, 21, 0},
    {0x1C01, 25, 22, 0}, {0x1801, 26, 23, 0}, {0x1601, 27, 24, 0}, {0x1401, 28, 25, 0},
    {0x1201, 29, 26, 0}, {0x1101, 30, 27, 0}, {0x0AC1, 31, 28, 0}, {0x09C1, 32, 29, 0},
    {0x08A1, 33, 30, 0}, {0x0521, 34, 31, 0}, {0x0441, 35, 32, 0}, {0x02A1, 36, 33, 0},
    {0x0221, 37, 34, 0}, {0x0141, 38, 35, 0}, {0x0111, 39, 36, 0}, {0x0085, 40, 37, 0},
    {0x0049, 41, 38, 0}, {0x0025, 42, 39, 0}, {0x0015, 43, 40, 0}, {0x0009, 44, 41, 0},
    {0x0005, 45, 42, 0}, {0x0001, 45, 43, 0}, {0x5601, 46, 46, 0},
}};

/// Adaptive probability state of one context: Qe table index and MPS sense.
struct Context {
  std::uint8_t index = 0;
  std::uint8_t mps = 0;

  friend bool operator==(const Context&, const Context&) = default;
};

/// Stream terminator written by flush(); its absence marks a truncated body.
inline constexpr std::uint8_t kMarkerPrefix = 0xFF;
inline constexpr std::uint8_t kEndMarker = 0xAC;

class Encoder {
 public:
  Encoder() { out_.push_back(0); }  // byte preceding the stream, dropped on finish()

  void encode(Context& cx, unsigned bit) {
    const QeEntry& e = kQeTable[cx.index];
    a_ -= e.qe;
    if (bit == cx.mps) {
      if ((a_ & 0x8000u) == 0) {
        if (a_ < e.qe) a_ = e.qe;
        else c_ += e.qe;
        cx.index = e.nmps;
        renormalize();
      } else {
        c_ += e.qe;
      }
    } else {
      if (a_ < e.qe) c_ += e.qe;
      else a_ = e.qe;
      if (e.switch_mps) cx.mps = static_cast<std::uint8_t>(1 - cx.mps);
      cx.index = e.nlps;
      renormalize();
    }
  }

  /// Flushes the registers and appends the 0xFF 0xAC terminator.
  std::vector<std::uint8_t> finish() && {
    const std::uint32_t temp = c_ + a_;
    c_ |= 0xFFFFu;
    if (c_ >= temp) c_ -= 0x8000u;
    c_ <<= ct_;
    byte_out();
    c_ <<= ct_;
    byte_out();
    if (out_.back() != kMarkerPrefix) out_.push_back(kMarkerPrefix);
    out_.push_back(kEndMarker);
    out_.erase(out_.begin());
    return std::move(out_);
  }

 private:
  void renormalize() {
    do {
      a_ <<= 1;
      c_ <<= 1;
      if (--ct_ == 0) byte_out();
    } while ((a_ & 0x8000u) == 0);
  }

  void byte_out() {
    if (out_.back() == 0xFF) {
      emit_stuffed();
    } else if (c_ < 0x8000000u) {
      emit_plain();
    } else {
      ++out_.back();
      if (out_.back() == 0xFF) {
        c_ &= 0x7FFFFFFu;
        emit_stuffed();
      } else {
        emit_plain();
      }
    }
  }

  // After 0xFF only seven bits go out so a carry can never propagate past it.
  void emit_stuffed() {
    out_.push_back(static_cast<std::uint8_t>(c_ >> 20));
    c_ &= 0xFFFFFu;
    ct_ = 7;
  }
  void emit_plain() {
    out_.push_back(static_cast<std::uint8_t>(c_ >> 19));
    c_ &= 0x7FFFFu;
    ct_ = 8;
  }

  std::uint32_t a_ = 0x8000;
  std::uint32_t c_ = 0;
  int ct_ = 12;
  std::vector<std::uint8_t> out_;
};

class Decoder {
 public:
  explicit Decoder(std::span<const std::uint8_t> data) : data_(data) {
    c_ = std::uint32_t{byte_at(0)} << 16;
    byte_in();
    c_ <<= 7;
    ct_ -= 7;
    a_ = 0x8000;
  }

  unsigned decode(Context& cx) {
    const QeEntry& e = kQeTable[cx.index];
    unsigned d;
    a_ -= e.qe;
    if ((c_ >> 16) < e.qe) {
      // LPS exchange
      if (a_ < e.qe) {
        a_ = e.qe;
        d = cx.mps;
        cx.index = e.nmps;
      } else {
        a_ = e.qe;
        d = 1u - cx.mps;
        if (e.switch_mps) cx.mps = static_cast<std::uint8_t>(1 - cx.mps);
        cx.index = e.nlps;
      }
      renormalize();
    } else {
      c_ -= std::uint32_t{e.qe} << 16;
      if ((a_ & 0x8000u) == 0) {
        // MPS exchange
        if (a_ < e.qe) {
          d = 1u - cx.mps;
          if (e.switch_mps) cx.mps = static_cast<std::uint8_t>(1 - cx.mps);
          cx.index = e.nlps;
        } else {
          d = cx.mps;
          cx.index = e.nmps;
        }
        renormalize();
      } else {
        d = cx.mps;
      }
    }
    return d;
  }

  /// True when decoding never needed bytes beyond the end of the data, which
  /// for a complete stream means it stopped at the terminator.
  bool stayed_in_bounds() const noexcept { return !overran_; }

  /// Bytes of 1s synthesized after reaching the terminator.
  std::size_t fill_bytes() const noexcept { return fill_bytes_; }

 private:
  std::uint8_t byte_at(std::size_t i) {
    if (i < data_.size()) return data_[i];
    overran_ = true;
    return 0xFF;
  }

  void byte_in() {
    if (byte_at(pos_) == 0xFF) {
      const std::uint8_t next = byte_at(pos_ + 1);
      if (next > 0x8F) {
        // marker: feed 1s without advancing
        c_ += 0xFF00u;
        ct_ = 8;
        ++fill_bytes_;
      } else {
        ++pos_;
        c_ += std::uint32_t{next} << 9;
        ct_ = 7;
      }
    } else {
      ++pos_;
      c_ += std::uint32_t{byte_at(pos_)} << 8;
      ct_ = 8;
    }
  }

  void renormalize() {
    do {
      if (ct_ == 0) byte_in();
      a_ <<= 1;
      c_ <<= 1;
      --ct_;
    } while ((a_ & 0x8000u) == 0);
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::uint32_t a_ = 0;
  std::uint32_t c_ = 0;
  int ct_ = 0;
  bool overran_ = false;
  std::size_t fill_bytes_ = 0;
};

}  // namespace spotink::mq
