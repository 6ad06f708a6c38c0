#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spotink/error.hpp"

namespace spotink {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Row-major raster. The tag keeps semantically different 8-bit rasters
/// (a colour plane, a bilevel mask, a 3-bit layer) from being mixed up.
template <typename Sample, typename Tag>
class Raster {
 public:
  using sample_type = Sample;

  Raster() = default;

  Raster(std::size_t width, std::size_t height, Sample fill = Sample{})
      : width_(width), height_(height), samples_(width * height, fill) {}

  Raster(std::size_t width, std::size_t height, std::vector<Sample> samples)
      : width_(width), height_(height), samples_(std::move(samples)) {
    if (samples_.size() != width_ * height_) {
      throw Error(ErrorCode::DimensionMismatch,
                  "raster of " + std::to_string(width_) + "x" + std::to_string(height_) +
                      " given " + std::to_string(samples_.size()) + " samples");
    }
  }

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  Sample& operator[](std::size_t i) { return samples_[i]; }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }

  Sample& at(std::size_t x, std::size_t y) { return samples_[y * width_ + x]; }
  const Sample& at(std::size_t x, std::size_t y) const { return samples_[y * width_ + x]; }

  std::span<Sample> samples() noexcept { return samples_; }
  std::span<const Sample> samples() const noexcept { return samples_; }
  std::span<const Sample> row(std::size_t y) const noexcept {
    return std::span<const Sample>(samples_).subspan(y * width_, width_);
  }

  bool same_shape(std::size_t w, std::size_t h) const noexcept { return width_ == w && height_ == h; }
  template <typename S, typename T>
  bool same_shape(const Raster<S, T>& other) const noexcept {
    return same_shape(other.width(), other.height());
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<Sample> samples_;
};

struct RgbTag {};
struct GrayTag {};
struct ChannelTag {};
struct BiLevelTag {};
struct TriLevelTag {};

using RgbImage = Raster<Rgb, RgbTag>;
using GrayImage = Raster<std::uint8_t, GrayTag>;
/// One colour plane of an RgbImage; the unit histogram shifting works on.
using Channel = Raster<std::uint8_t, ChannelTag>;
/// Samples are 0 or 1; 1 means ink.
using BiLevelImage = Raster<std::uint8_t, BiLevelTag>;
/// Samples are ink levels 0..7.
using TriLevelLayer = Raster<std::uint8_t, TriLevelTag>;

inline constexpr std::uint8_t kMaxTriLevel = 7;

enum class ColorPlane { Red, Green, Blue };

inline Channel extract_plane(const RgbImage& img, ColorPlane plane) {
  Channel ch(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const Rgb& p = img[i];
    ch[i] = plane == ColorPlane::Red ? p.r : plane == ColorPlane::Green ? p.g : p.b;
  }
  return ch;
}

inline void replace_plane(RgbImage& img, ColorPlane plane, const Channel& ch) {
  if (!img.same_shape(ch)) {
    throw Error(ErrorCode::DimensionMismatch, "channel does not match image");
  }
  for (std::size_t i = 0; i < img.size(); ++i) {
    Rgb& p = img[i];
    (plane == ColorPlane::Red ? p.r : plane == ColorPlane::Green ? p.g : p.b) = ch[i];
  }
}

/// Converts between same-sized 8-bit rasters of different tags.
template <typename To, typename From>
To retag(const From& src) {
  return To(src.width(), src.height(),
            std::vector<typename To::sample_type>(src.samples().begin(), src.samples().end()));
}

/// ITU-R BT.601 luma rounded to the nearest integer, integer arithmetic only.
inline std::uint8_t luma601(const Rgb& p) noexcept {
  return static_cast<std::uint8_t>((299u * p.r + 587u * p.g + 114u * p.b + 500u) / 1000u);
}

inline GrayImage luminance(const RgbImage& img) {
  GrayImage y(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) y[i] = luma601(img[i]);
  return y;
}

inline void validate_bilevel(const BiLevelImage& img) {
  for (auto v : img.samples()) {
    if (v > 1) throw Error(ErrorCode::LevelOutOfRange, "bilevel sample above 1");
  }
}

inline void validate_trilevel(const TriLevelLayer& layer) {
  for (auto v : layer.samples()) {
    if (v > kMaxTriLevel) {
      throw Error(ErrorCode::LevelOutOfRange,
                  "3-bit layer sample " + std::to_string(v) + " exceeds 7");
    }
  }
}

}  // namespace spotink
