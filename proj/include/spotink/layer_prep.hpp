#pragma once

#include <cstddef>
#include <string>

#include "spotink/error.hpp"
#include "spotink/image.hpp"

namespace spotink {

inline constexpr std::size_t kTriPlanes = 3;

/// Splits a 3-bit layer into its bit planes and lays them side by side:
/// columns [0,w) hold bit 2, [w,2w) bit 1, [2w,3w) bit 0.
inline BiLevelImage decompose_3bit(const TriLevelLayer& layer) {
  const std::size_t w = layer.width();
  BiLevelImage planes(kTriPlanes * w, layer.height());
  for (std::size_t y = 0; y < layer.height(); ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const auto v = layer.at(x, y);
      for (std::size_t p = 0; p < kTriPlanes; ++p) {
        planes.at(p * w + x, y) = static_cast<std::uint8_t>((v >> (kTriPlanes - 1 - p)) & 1u);
      }
    }
  }
  return planes;
}

inline TriLevelLayer recompose_3bit(const BiLevelImage& planes, std::size_t original_width) {
  if (planes.width() != kTriPlanes * original_width) {
    throw Error(ErrorCode::DimensionMismatch, "plane strip is " + std::to_string(planes.width()) +
                                                  " wide, expected 3 x " + std::to_string(original_width));
  }
  TriLevelLayer layer(original_width, planes.height());
  for (std::size_t y = 0; y < planes.height(); ++y) {
    for (std::size_t x = 0; x < original_width; ++x) {
      std::uint8_t v = 0;
      for (std::size_t p = 0; p < kTriPlanes; ++p) {
        v = static_cast<std::uint8_t>((v << 1) | (planes.at(p * original_width + x, y) & 1u));
      }
      layer.at(x, y) = v;
    }
  }
  return layer;
}

}  // namespace spotink
