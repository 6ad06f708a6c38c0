#pragma once

// Full-reference quality metrics: MSE, PSNR and mean SSIM over a sliding
// window (unit stride, fully interior windows only).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "spotink/error.hpp"
#include "spotink/image.hpp"

namespace spotink::metrics {

inline constexpr double kMaxSample = 255.0;

enum class Weighting { Gaussian, Uniform };

struct SsimParams {
  std::size_t window = 11;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
  Weighting weighting = Weighting::Gaussian;
  double sigma = 1.5;

  double c1() const noexcept { return (k1 * dynamic_range) * (k1 * dynamic_range); }
  double c2() const noexcept { return (k2 * dynamic_range) * (k2 * dynamic_range); }
};

namespace detail {

template <typename A, typename B>
void require_same_shape(const A& x, const B& y) {
  if (!x.same_shape(y)) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(x.width()) + "x" + std::to_string(x.height()) + " vs " +
                    std::to_string(y.width()) + "x" + std::to_string(y.height()));
  }
}

/// Normalised 1-D window weights; the 2-D window is their outer product.
inline std::vector<double> window_weights(const SsimParams& p) {
  std::vector<double> w(p.window, 1.0);
  if (p.weighting == Weighting::Gaussian) {
    const double centre = (static_cast<double>(p.window) - 1.0) / 2.0;
    for (std::size_t k = 0; k < p.window; ++k) {
      const double d = static_cast<double>(k) - centre;
      w[k] = std::exp(-(d * d) / (2.0 * p.sigma * p.sigma));
    }
  }
  double sum = 0.0;
  for (double v : w) sum += v;
  for (double& v : w) v /= sum;
  return w;
}

}  // namespace detail

template <typename Image>
double mse(const Image& x, const Image& y) {
  detail::require_same_shape(x, y);
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - static_cast<double>(y[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(x.size());
}

/// +infinity for identical inputs.
inline double psnr_from_mse(double m) {
  if (m == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kMaxSample * kMaxSample / m);
}

template <typename Image>
double psnr(const Image& x, const Image& y) {
  return psnr_from_mse(mse(x, y));
}

template <typename Image>
double mssim(const Image& x, const Image& y, const SsimParams& params = {}) {
  detail::require_same_shape(x, y);
  const std::size_t n = params.window;
  if (n == 0 || x.width() < n || x.height() < n) {
    throw Error(ErrorCode::ImageTooSmall, "image smaller than the " + std::to_string(n) + "x" +
                                              std::to_string(n) + " SSIM window");
  }
  const auto w = detail::window_weights(params);
  const std::size_t width = x.width();
  const std::size_t height = x.height();
  const std::size_t out_w = width - n + 1;
  const std::size_t out_h = height - n + 1;

  // Horizontal pass over every row for x, y, x^2, y^2, xy.
  enum { kX, kY, kXX, kYY, kXY, kMaps };
  std::vector<std::vector<double>> h(kMaps, std::vector<double>(height * out_w));
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < out_w; ++c) {
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (std::size_t k = 0; k < n; ++k) {
        const double a = x.at(c + k, r);
        const double b = y.at(c + k, r);
        sx += w[k] * a;
        sy += w[k] * b;
        sxx += w[k] * a * a;
        syy += w[k] * b * b;
        sxy += w[k] * a * b;
      }
      const std::size_t at = r * out_w + c;
      h[kX][at] = sx;
      h[kY][at] = sy;
      h[kXX][at] = sxx;
      h[kYY][at] = syy;
      h[kXY][at] = sxy;
    }
  }

  const double c1 = params.c1();
  const double c2 = params.c2();
  double total = 0.0;
  for (std::size_t r = 0; r < out_h; ++r) {
    for (std::size_t c = 0; c < out_w; ++c) {
      double m[kMaps] = {};
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t at = (r + k) * out_w + c;
        for (int map = 0; map < kMaps; ++map) m[map] += w[k] * h[map][at];
      }
      const double mx = m[kX], my = m[kY];
      const double vx = m[kXX] - mx * mx;
      const double vy = m[kYY] - my * my;
      const double cov = m[kXY] - mx * my;
      total += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return total / static_cast<double>(out_w * out_h);
}

struct Quality {
  double psnr = 0.0;
  double mssim = 0.0;
};

struct ChannelMetrics {
  Quality luminance;
  Quality red;
  Quality green;
  Quality blue;
};

/// Per-plane and BT.601 luminance quality of `marked` against `original`.
/// MSSIM is reported only when the image is at least one window in size;
/// otherwise it is NaN.
inline ChannelMetrics channel_metrics(const RgbImage& original, const RgbImage& marked,
                                      const SsimParams& params = {}) {
  detail::require_same_shape(original, marked);
  const bool windowed = original.width() >= params.window && original.height() >= params.window;
  auto measure = [&](const auto& a, const auto& b) {
    return Quality{psnr(a, b), windowed ? mssim(a, b, params) : std::numeric_limits<double>::quiet_NaN()};
  };
  ChannelMetrics m;
  m.luminance = measure(luminance(original), luminance(marked));
  m.red = measure(extract_plane(original, ColorPlane::Red), extract_plane(marked, ColorPlane::Red));
  m.green = measure(extract_plane(original, ColorPlane::Green), extract_plane(marked, ColorPlane::Green));
  m.blue = measure(extract_plane(original, ColorPlane::Blue), extract_plane(marked, ColorPlane::Blue));
  return m;
}

}  // namespace spotink::metrics
