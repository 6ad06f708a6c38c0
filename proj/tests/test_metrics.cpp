#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "spotink/metrics.hpp"

using namespace spotink;
using namespace spotink::metrics;

namespace {

GrayImage gray(std::size_t w, std::size_t h, std::vector<std::uint8_t> v) { return GrayImage(w, h, std::move(v)); }

std::vector<double> as_doubles(const GrayImage& g) { return {g.samples().begin(), g.samples().end()}; }

GrayImage random_gray(std::mt19937& rng, std::size_t w, std::size_t h) {
  GrayImage g(w, h);
  for (auto& v : g.samples()) v = static_cast<std::uint8_t>(rng() % 256);
  return g;
}

}  // namespace

TEST(Mse, Examples) {
  EXPECT_EQ(mse(gray(2, 2, {1, 2, 3, 4}), gray(2, 2, {1, 2, 3, 4})), 0.0);
  EXPECT_DOUBLE_EQ(mse(gray(2, 2, {0, 0, 0, 0}), gray(2, 2, {1, 0, 0, 0})), 0.25);
  EXPECT_DOUBLE_EQ(mse(gray(1, 1, {0}), gray(1, 1, {255})), 65025.0);
}

TEST(Psnr, Examples) {
  EXPECT_TRUE(std::isinf(psnr(gray(1, 1, {9}), gray(1, 1, {9}))));
  EXPECT_NEAR(psnr_from_mse(1.0), 48.1308, 1e-4);
  EXPECT_NEAR(psnr(gray(1, 1, {0}), gray(1, 1, {255})), 0.0, 1e-12);
}

TEST(Mse, ShapeMismatch) {
  try {
    mse(gray(1, 2, {0, 0}), gray(2, 1, {0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Mssim, IdenticalIsOne) {
  std::mt19937 rng(1);
  const auto g = random_gray(rng, 20, 15);
  EXPECT_NEAR(mssim(g, g), 1.0, 1e-12);
}

TEST(Mssim, ConstantOffsetClosedForm) {
  const GrayImage a(16, 16, std::vector<std::uint8_t>(256, 100));
  const GrayImage b(16, 16, std::vector<std::uint8_t>(256, 101));
  const double c1 = (0.01 * 255) * (0.01 * 255);
  const double expected = (2.0 * 100 * 101 + c1) / (100.0 * 100 + 101.0 * 101 + c1);
  EXPECT_NEAR(mssim(a, b), expected, 1e-9);
}

TEST(Mssim, TooSmall) {
  try {
    mssim(GrayImage(10, 20), GrayImage(10, 20));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ImageTooSmall);
  }
}

TEST(MetricsProperty, AgreesWithOracle) {
  std::mt19937 rng(99);
  for (int t = 0; t < 20; ++t) {
    const std::size_t w = 11 + rng() % 30, h = 11 + rng() % 30;
    const auto a = random_gray(rng, w, h);
    auto b = a;
    for (auto& v : b.samples()) v = static_cast<std::uint8_t>(std::clamp<int>(v + static_cast<int>(rng() % 41) - 20, 0, 255));
    EXPECT_NEAR(mse(a, b), oracle::mse(as_doubles(a), as_doubles(b)), 1e-9);
    EXPECT_NEAR(psnr(a, b), oracle::psnr(as_doubles(a), as_doubles(b)), 1e-9);
    EXPECT_NEAR(mssim(a, b), oracle::mssim(as_doubles(a), as_doubles(b), w, h), 1e-9);
    SsimParams uniform;
    uniform.weighting = Weighting::Uniform;
    EXPECT_NEAR(mssim(a, b, uniform), oracle::mssim(as_doubles(a), as_doubles(b), w, h, false), 1e-9);
  }
}

TEST(MetricsProperty, Symmetric) {
  std::mt19937 rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_gray(rng, 24, 24);
    const auto b = random_gray(rng, 24, 24);
    EXPECT_DOUBLE_EQ(mse(a, b), mse(b, a));
    EXPECT_NEAR(mssim(a, b), mssim(b, a), 1e-12);
  }
}

TEST(ChannelMetrics, OnlyChangedPlaneDegrades) {
  RgbImage a(12, 12);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = {static_cast<std::uint8_t>(i), 50, 200};
  RgbImage b = a;
  b[5].b = 201;
  const auto m = channel_metrics(a, b);
  EXPECT_TRUE(std::isinf(m.red.psnr));
  EXPECT_TRUE(std::isinf(m.green.psnr));
  EXPECT_NEAR(m.blue.psnr, psnr_from_mse(1.0 / 144.0), 1e-9);
  EXPECT_LT(m.blue.mssim, 1.0);
  EXPECT_DOUBLE_EQ(m.red.mssim, 1.0);
}

TEST(ChannelMetrics, SmallImagesHaveNoMssim) {
  const RgbImage a(4, 4);
  EXPECT_TRUE(std::isnan(channel_metrics(a, a).blue.mssim));
}
