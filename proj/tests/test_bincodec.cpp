#include <gtest/gtest.h>

#include <random>

#include "golden.hpp"
#include "spotink/bincodec.hpp"
#include "spotink/fixtures.hpp"
#include "spotink/layer_prep.hpp"

using namespace spotink;

namespace {

BiLevelImage noise(std::size_t w, std::size_t h, std::uint32_t seed, unsigned density_pct = 50) {
  std::mt19937 rng(seed);
  BiLevelImage img(w, h);
  for (auto& v : img.samples()) v = (rng() % 100) < density_pct ? 1 : 0;
  return img;
}

}  // namespace

TEST(BitmapCodec, RoundTripsSmallShapes) {
  for (auto [w, h] : {std::pair{1, 1}, {1, 7}, {7, 1}, {2, 2}, {3, 5}, {17, 3}}) {
    for (std::uint32_t seed = 0; seed < 5; ++seed) {
      const auto img = noise(w, h, seed);
      EXPECT_EQ(decode_bitmap(encode_bitmap(img)), img) << w << "x" << h;
    }
  }
}

TEST(BitmapCodec, RoundTripsStructuredLayers) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto layers = fixtures::gen_layers(fixtures::gen_illustration(200, 150, 8, seed));
    EXPECT_EQ(decode_bitmap(encode_bitmap(layers.binary)), layers.binary);
    const auto strip = decompose_3bit(layers.tri);
    EXPECT_EQ(decode_bitmap(encode_bitmap(strip)), strip);
  }
}

TEST(BitmapCodec, Deterministic) {
  const auto img = noise(64, 64, 9, 20);
  EXPECT_EQ(encode_bitmap(img), encode_bitmap(img));
}

TEST(BitmapCodec, BodyEndsWithTerminator) {
  const auto c = encode_bitmap(noise(33, 9, 2));
  ASSERT_GE(c.body.size(), 2u);
  EXPECT_EQ(c.body[c.body.size() - 2], 0xFF);
  EXPECT_EQ(c.body.back(), 0xAC);
}

TEST(BitmapCodec, AllZeroPageCompressesBelowOnePercent) {
  const BiLevelImage blank(830, 1170);
  const auto r = compression_report(blank);
  EXPECT_EQ(r.before_bytes, (830u * 1170u + 7) / 8);
  EXPECT_LT(static_cast<double>(r.after_bytes), 0.01 * static_cast<double>(r.before_bytes));
  EXPECT_GE(r.ratio_percent, 99.0);
  EXPECT_EQ(decode_bitmap(encode_bitmap(blank)), blank);
}

TEST(BitmapCodec, NoiseDoesNotCompressMuch) {
  const auto img = noise(512, 512, 5);
  const auto r = compression_report(img);
  EXPECT_GE(static_cast<double>(r.after_bytes), 0.95 * static_cast<double>(r.before_bytes));
  EXPECT_EQ(decode_bitmap(encode_bitmap(img)), img);
}

TEST(BitmapCodec, StructuredLayerCompressesWell) {
  const auto layers = fixtures::gen_layers(fixtures::gen_illustration(830, 1170, 12, 42));
  EXPECT_GE(compression_report(layers.binary).ratio_percent, 79.0);
}

TEST(BitmapCodec, RejectsEmptyBitmap) {
  try {
    encode_bitmap(BiLevelImage(0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(BitmapCodec, CorruptStreams) {
  int step = 0;
  const auto expect_corrupt = [&step](const auto& fn) {
    ++step;
    try {
      fn();
      FAIL() << "case " << step;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::CorruptStream);
    }
  };
  const auto good = encode_bitmap(noise(40, 40, 1));
  auto truncated = good;
  truncated.body.resize(truncated.body.size() / 2);
  expect_corrupt([&] { decode_bitmap(truncated); });
  auto zero = good;
  zero.height = 0;
  expect_corrupt([&] { decode_bitmap(zero); });
  const auto bytes = serialize_bitmap(good);
  expect_corrupt([&] { parse_bitmap(std::span(bytes).first(bytes.size() - 1)); });
  expect_corrupt([&] { parse_bitmap(std::span(bytes).first(10)); });
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  expect_corrupt([&] { parse_bitmap(bad_magic); });
  // Valid header and terminator but far too little data for the declared size.
  CompressedBitmap starved{4000, 4000, Bytes{0x12, 0xFF, 0xAC}};
  expect_corrupt([&] { decode_bitmap(starved); });
}

TEST(BitmapCodec, SerializeParseRoundTrip) {
  const auto c = encode_bitmap(noise(13, 11, 4));
  auto bytes = serialize_bitmap(c);
  bytes.push_back(0x99);  // trailing data belongs to the caller
  std::size_t used = 0;
  EXPECT_EQ(parse_bitmap(bytes, &used), c);
  EXPECT_EQ(used, bytes.size() - 1);
}

TEST(BitmapCodecGolden, AllZero) { EXPECT_EQ(golden::encoded_hex(golden::all_zero()), golden::kAllZeroHex); }

TEST(BitmapCodecGolden, Checkerboard) {
  EXPECT_EQ(golden::encoded_hex(golden::checkerboard()), golden::kCheckerboardHex);
}

TEST(BitmapCodecGolden, Box) { EXPECT_EQ(golden::encoded_hex(golden::box()), golden::kBoxHex); }

TEST(BitmapCodecProperty, RandomRoundTrips) {
  std::mt19937 rng(2024);
  for (int t = 0; t < 200; ++t) {
    const std::size_t w = 1 + rng() % 70, h = 1 + rng() % 70;
    const auto img = noise(w, h, rng(), rng() % 101);
    ASSERT_EQ(decode_bitmap(encode_bitmap(img)), img) << "trial " << t;
  }
}
