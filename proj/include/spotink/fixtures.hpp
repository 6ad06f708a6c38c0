#pragma once

// Synthetic illustration-like images: a handful of flat colours laid out as
// a rectangle mosaic with an ellipse inside some tiles. Generation uses only
// integer arithmetic on mt19937 output, so a seed gives the same image on
// every platform.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "spotink/image.hpp"

namespace spotink::fixtures {

inline constexpr std::size_t kMinColors = 2;
inline constexpr std::size_t kMaxColors = 64;

namespace detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(static_cast<std::mt19937::result_type>(seed ^ (seed >> 32))) {}

  /// Value in [0, n). The modulo bias is irrelevant for fixtures.
  std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }

 private:
  std::mt19937 engine_;
};

struct Tile {
  std::size_t x, y, w, h;
  std::size_t area() const noexcept { return w * h; }
};

}  // namespace detail

inline RgbImage gen_illustration(std::size_t width, std::size_t height, std::size_t n_colors, std::uint64_t seed) {
  if (n_colors < kMinColors || n_colors > kMaxColors) {
    throw std::invalid_argument("colour count must be in [2, 64], got " + std::to_string(n_colors));
  }
  if (width * height < n_colors) {
    throw std::invalid_argument("image has fewer pixels than requested colours");
  }
  detail::Rng rng(seed);

  std::vector<Rgb> palette;
  while (palette.size() < n_colors) {
    const Rgb c{static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                static_cast<std::uint8_t>(rng.below(256))};
    if (std::find(palette.begin(), palette.end(), c) == palette.end()) palette.push_back(c);
  }

  // Split the largest tile until there are about three tiles per colour.
  std::vector<detail::Tile> tiles{{0, 0, width, height}};
  const std::size_t target = 3 * n_colors;
  while (tiles.size() < target) {
    auto it = std::max_element(tiles.begin(), tiles.end(),
                               [](const auto& a, const auto& b) { return a.area() < b.area(); });
    detail::Tile t = *it;
    if (t.area() < 2) break;
    const bool vertical_cut = t.w >= t.h;
    const std::size_t len = vertical_cut ? t.w : t.h;
    const std::size_t cut = std::max<std::size_t>(1, rng.between(len / 4, (3 * len) / 4));
    if (cut >= len) break;
    if (vertical_cut) {
      *it = {t.x, t.y, cut, t.h};
      tiles.push_back({t.x + cut, t.y, t.w - cut, t.h});
    } else {
      *it = {t.x, t.y, t.w, cut};
      tiles.push_back({t.x, t.y + cut, t.w, t.h - cut});
    }
  }

  RgbImage img(width, height);
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const auto& t = tiles[i];
    const Rgb base = i < n_colors ? palette[i] : palette[rng.below(n_colors)];
    for (std::size_t y = t.y; y < t.y + t.h; ++y) {
      for (std::size_t x = t.x; x < t.x + t.w; ++x) img.at(x, y) = base;
    }
    // Ellipse radii stay below half the tile, so the tile corners keep the
    // base colour and every palette entry survives.
    if (t.w < 8 || t.h < 8 || rng.below(2) == 0) continue;
    const Rgb fill = palette[rng.below(n_colors)];
    const auto pct = static_cast<std::int64_t>(rng.between(50, 90));
    const std::int64_t rx2 = static_cast<std::int64_t>(t.w - 2) * pct / 100;  // doubled radii
    const std::int64_t ry2 = static_cast<std::int64_t>(t.h - 2) * pct / 100;
    const std::int64_t cx2 = static_cast<std::int64_t>(2 * t.x + t.w - 1);
    const std::int64_t cy2 = static_cast<std::int64_t>(2 * t.y + t.h - 1);
    for (std::size_t y = t.y; y < t.y + t.h; ++y) {
      for (std::size_t x = t.x; x < t.x + t.w; ++x) {
        const std::int64_t dx = 2 * static_cast<std::int64_t>(x) - cx2;
        const std::int64_t dy = 2 * static_cast<std::int64_t>(y) - cy2;
        if (dx * dx * ry2 * ry2 + dy * dy * rx2 * rx2 <= rx2 * rx2 * ry2 * ry2) img.at(x, y) = fill;
      }
    }
  }
  return img;
}

struct Layers {
  BiLevelImage binary;
  TriLevelLayer tri;
};

inline constexpr std::uint8_t kBinaryThreshold = 128;

/// Quantises BT.601 luma: binary = (Y >= 128), 3-bit = Y / 32.
inline Layers gen_layers(const RgbImage& img) {
  Layers out{BiLevelImage(img.width(), img.height()), TriLevelLayer(img.width(), img.height())};
  for (std::size_t i = 0; i < img.size(); ++i) {
    const auto y = luma601(img[i]);
    out.binary[i] = y >= kBinaryThreshold ? 1 : 0;
    out.tri[i] = static_cast<std::uint8_t>(y / 32);
  }
  return out;
}

}  // namespace spotink::fixtures
