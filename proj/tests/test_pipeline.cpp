#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spotink/fixtures.hpp"
#include "spotink/pipeline.hpp"

using namespace spotink;

namespace {

struct Case {
  RgbImage general;
  BiLevelImage binary;
  TriLevelLayer tri;
};

Case fixture(std::size_t w, std::size_t h, std::size_t colours, std::uint64_t seed) {
  auto img = fixtures::gen_illustration(w, h, colours, seed);
  auto layers = fixtures::gen_layers(img);
  return {std::move(img), std::move(layers.binary), std::move(layers.tri)};
}

ErrorCode code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Pipeline, RoundTripsFixture) {
  const auto c = fixture(200, 160, 6, 11);
  const auto out = embed(c.general, c.binary, c.tri);
  const auto back = extract(out.marked);
  EXPECT_EQ(back.general, c.general);
  EXPECT_EQ(back.binary, c.binary);
  EXPECT_EQ(back.tri, c.tri);
}

TEST(Pipeline, GreenIsUntouched) {
  const auto c = fixture(120, 90, 4, 2);
  const auto out = embed(c.general, c.binary, c.tri);
  EXPECT_EQ(extract_plane(out.marked, ColorPlane::Green), extract_plane(c.general, ColorPlane::Green));
  EXPECT_NE(out.marked, c.general);
}

TEST(Pipeline, AllZeroLayersNeedOneRound) {
  auto c = fixture(256, 256, 3, 5);
  const BiLevelImage blank(256, 256);
  const TriLevelLayer blank_tri(256, 256);
  const auto out = embed(c.general, blank, blank_tri);
  EXPECT_EQ(out.report.red.rounds.size(), 1u);
  EXPECT_EQ(out.report.blue.rounds.size(), 1u);
  EXPECT_GE(out.report.blue.psnr, 48.13);
  const auto back = extract(out.marked);
  EXPECT_EQ(back.binary, blank);
  EXPECT_EQ(back.tri, blank_tri);
}

TEST(Pipeline, PlanMatchesEmbed) {
  const auto c = fixture(160, 160, 10, 8);
  const auto plan = plan_capacity(c.general, c.binary, c.tri);
  const auto out = embed(c.general, c.binary, c.tri);
  ASSERT_TRUE(plan.feasible());
  ASSERT_EQ(plan.red.rounds.size(), out.report.red.rounds.size());
  ASSERT_EQ(plan.blue.rounds.size(), out.report.blue.rounds.size());
  for (std::size_t r = 0; r < plan.blue.rounds.size(); ++r) {
    EXPECT_EQ(plan.blue.rounds[r].pp, out.report.blue.rounds[r].pp);
    EXPECT_EQ(plan.blue.rounds[r].zp, out.report.blue.rounds[r].zp);
  }
}

TEST(Pipeline, RejectsMismatchedLayers) {
  const auto c = fixture(64, 64, 4, 1);
  EXPECT_EQ(code_of([&] { embed(c.general, BiLevelImage(64, 63), c.tri); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { embed(c.general, c.binary, TriLevelLayer(63, 64)); }), ErrorCode::DimensionMismatch);
}

TEST(Pipeline, RejectsNarrowImages) {
  const auto c = fixture(15, 40, 2, 1);
  EXPECT_EQ(code_of([&] { embed(c.general, c.binary, c.tri); }), ErrorCode::ImageTooSmall);
}

TEST(Pipeline, RejectsOutOfRangeLayers) {
  auto c = fixture(32, 32, 2, 1);
  c.tri[3] = 8;
  EXPECT_EQ(code_of([&] { embed(c.general, c.binary, c.tri); }), ErrorCode::LevelOutOfRange);
}

TEST(Pipeline, InsufficientCapacity) {
  // Every value equally common: each round carries almost nothing.
  RgbImage flat(256, 64);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const auto v = static_cast<std::uint8_t>(i % 256);
    flat[i] = {v, v, v};
  }
  std::mt19937 rng(1);
  BiLevelImage binary(256, 64);
  TriLevelLayer tri(256, 64);
  for (auto& v : binary.samples()) v = rng() & 1;
  for (auto& v : tri.samples()) v = rng() % 8;
  try {
    embed(flat, binary, tri);
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientCapacity);
    EXPECT_GT(e.shortfall_bits(), 0u);
    EXPECT_NE(std::string(e.what()).find("shortfall"), std::string::npos);
  }
  const auto plan = plan_capacity(flat, binary, tri);
  EXPECT_FALSE(plan.feasible());
  EXPECT_GT(plan.shortfall_bits(), 0u);
}

TEST(Pipeline, UnmarkedImageIsRejected) {
  const auto c = fixture(100, 100, 5, 4);
  EXPECT_EQ(code_of([&] { extract(c.general); }), ErrorCode::NotAMarkedImage);
}

TEST(Pipeline, TamperedCarrierIsRejected) {
  const auto c = fixture(100, 100, 5, 4);
  const auto out = embed(c.general, c.binary, c.tri);
  const auto& round = out.report.blue.rounds.back();
  ASSERT_GT(round.fragment_bits, 0u);
  // Toggle the carrier sample holding the first payload bit of the last round.
  auto bad = out.marked;
  const int d = round.pp < round.zp ? 1 : -1;
  const std::size_t skip_from = (bad.height() - 1) * bad.width();
  std::size_t seen = 0;
  bool flipped = false;
  for (std::size_t i = 0; i < bad.size() && !flipped; ++i) {
    if (i >= skip_from && i < skip_from + 16) continue;
    auto& v = bad[i].b;
    if (v != round.pp && v != round.pp + d) continue;
    if (seen++ == round.header_bits) {
      v = static_cast<std::uint8_t>(v == round.pp ? round.pp + d : round.pp);
      flipped = true;
    }
  }
  ASSERT_TRUE(flipped);
  EXPECT_EQ(code_of([&] { extract(bad); }), ErrorCode::NotAMarkedImage);
}

TEST(PipelineProperty, RandomFixturesRoundTrip) {
  std::mt19937 rng(31);
  for (int t = 0; t < 12; ++t) {
    const std::size_t w = 16 + rng() % 150, h = 4 + rng() % 150;
    const auto c = fixture(w, h, 2 + rng() % 20, rng());
    const auto out = embed(c.general, c.binary, c.tri);
    const auto back = extract(out.marked);
    ASSERT_EQ(back.general, c.general) << "trial " << t;
    ASSERT_EQ(back.binary, c.binary);
    ASSERT_EQ(back.tri, c.tri);
  }
}
