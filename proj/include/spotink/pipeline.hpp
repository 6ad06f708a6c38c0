#pragma once

// End-to-end packing of the special colour layers into a general colour
// image and the exact inverse.
//
// Embedding: the binary layer and the plane strip of the 3-bit layer are
// compressed and sealed into one container each; the binary container is
// hidden in R, the 3-bit one in B, each by as many histogram-shifting rounds
// as needed. G is never touched. The first 16 bottom-row pixels of a carrying
// channel are kept out of every round and finally receive the last round's
// PP/ZP in their LSBs.

#include <cstddef>
#include <cstdint>
#include <future>
#include <string>
#include <utility>
#include <vector>

#include "spotink/bincodec.hpp"
#include "spotink/bits.hpp"
#include "spotink/container.hpp"
#include "spotink/error.hpp"
#include "spotink/image.hpp"
#include "spotink/layer_prep.hpp"
#include "spotink/metrics.hpp"
#include "spotink/rdh.hpp"

namespace spotink {

inline constexpr ColorPlane kBinaryCarrier = ColorPlane::Red;
inline constexpr ColorPlane kTriCarrier = ColorPlane::Blue;

struct RoundSummary {
  std::uint8_t pp = 0;
  std::uint8_t zp = 0;
  bool used_lp = false;
  std::size_t lp_count = 0;
  std::size_t capacity_bits = 0;
  std::size_t header_bits = 0;
  std::size_t fragment_bits = 0;
};

struct ChannelPlan {
  ColorPlane plane = ColorPlane::Red;
  std::size_t container_bytes = 0;
  std::vector<RoundSummary> rounds;
  bool feasible = false;
  std::size_t shortfall_bits = 0;
  /// Only set by embed(): PSNR of the carrying channel against the original.
  double psnr = 0.0;
};

struct EmbedReport {
  ChannelPlan red;
  ChannelPlan blue;

  bool feasible() const noexcept { return red.feasible && blue.feasible; }
  std::size_t shortfall_bits() const noexcept { return red.shortfall_bits + blue.shortfall_bits; }
};

struct EmbedOutput {
  RgbImage marked;
  EmbedReport report;
};

struct Unpacked {
  RgbImage general;
  BiLevelImage binary;
  TriLevelLayer tri;
};

namespace detail {

inline void check_inputs(const RgbImage& general, const BiLevelImage& binary, const TriLevelLayer& tri) {
  if (!binary.same_shape(general) || !tri.same_shape(general)) {
    throw Error(ErrorCode::DimensionMismatch,
                "layers must match the " + std::to_string(general.width()) + "x" +
                    std::to_string(general.height()) + " general colour layer");
  }
  if (general.width() < rdh::kSideInfoPixels) {
    throw Error(ErrorCode::ImageTooSmall, "general colour layer must be at least 16 pixels wide");
  }
  validate_bilevel(binary);
  validate_trilevel(tri);
}

inline SealedContainers build_containers(const BiLevelImage& binary, const TriLevelLayer& tri) {
  // The two layers compress independently.
  auto tri_job = std::async(std::launch::async, [&] { return encode_bitmap(decompose_3bit(tri)); });
  const CompressedBitmap bin = encode_bitmap(binary);
  return seal_container(bin, tri_job.get(), static_cast<std::uint32_t>(tri.width()));
}

struct ChannelEmbedding {
  Channel channel;
  ChannelPlan plan;
};

/// Runs rounds until the whole body is hidden or the round budget is spent.
/// Never throws for lack of capacity; the plan says whether it fit.
inline ChannelEmbedding embed_channel(Channel ch, ColorPlane plane, std::span<const std::uint8_t> container) {
  const Bits body = bytes_to_bits(container);
  const rdh::SkipRange skip = rdh::sideinfo_range(ch);
  const std::uint16_t original_lsbs = rdh::read_lsbs(ch);

  ChannelPlan plan;
  plan.plane = plane;
  plan.container_bytes = container.size();

  std::size_t offset = 0;
  rdh::SideInfo last{};
  while (plan.rounds.size() < kMaxRounds) {
    const auto hist = rdh::compute_histogram(ch, skip);
    const std::uint8_t pp = rdh::select_pp(hist);
    const auto zp = rdh::select_zp(hist, pp);
    const std::size_t capacity = hist[pp];

    RoundHeader header;
    header.terminal = plan.rounds.empty();
    header.original_lsbs = original_lsbs;
    header.prev_pp = last.pp;
    header.prev_zp = last.zp;
    header.used_lp = zp.used_lp;
    if (zp.used_lp) header.lp_map = rdh::locate_value(ch, zp.value, skip);
    if (header_bit_length(header) > capacity) break;

    const auto payload =
        build_round_payload(header, std::span<const std::uint8_t>(body).subspan(offset), capacity);
    auto embedded = rdh::shift_and_embed(std::move(ch), pp, zp.value, zp.used_lp, payload.bits, skip);
    ch = std::move(embedded.channel);
    offset += payload.body_consumed;
    plan.rounds.push_back({pp, zp.value, zp.used_lp, header.lp_map.size(), capacity,
                           header_bit_length(header), payload.body_consumed});
    last = {pp, zp.value};
    if (offset == body.size()) {
      plan.feasible = true;
      ch = rdh::write_lsb_sideinfo(std::move(ch), last).channel;
      return {std::move(ch), std::move(plan)};
    }
  }
  plan.shortfall_bits = body.size() - offset;
  return {std::move(ch), std::move(plan)};
}

/// Peels every round off a carrying channel. Returns the restored channel
/// and the container bytes. Any inconsistency reports NotAMarkedImage.
inline std::pair<Channel, Bytes> extract_channel(Channel ch) {
  const auto fail = [](const std::string& why) { return Error(ErrorCode::NotAMarkedImage, why); };
  if (ch.width() < rdh::kSideInfoPixels) throw fail("image narrower than the side-information block");
  const rdh::SkipRange skip = rdh::sideinfo_range(ch);
  rdh::SideInfo info = rdh::read_lsb_sideinfo(ch);

  std::vector<Bits> fragments;
  bool reached_first = false;
  try {
    for (std::size_t r = 0; r < kMaxRounds && !reached_first; ++r) {
      if (info.pp == info.zp) throw fail("side information holds PP == ZP");
      const Bits bits = rdh::read_embedded_bits(ch, info.pp, info.zp, skip);
      ParsedRound parsed = parse_round_payload(bits);
      ch = rdh::unshift(std::move(ch), info.pp, info.zp, parsed.header.used_lp, parsed.header.lp_map, skip);
      fragments.push_back(std::move(parsed.fragment));
      if (parsed.header.terminal) {
        rdh::write_lsbs(ch, parsed.header.original_lsbs);
        reached_first = true;
      } else {
        info = {parsed.header.prev_pp, parsed.header.prev_zp};
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotAMarkedImage) throw;
    throw fail(e.what());
  }
  if (!reached_first) throw fail("round chain does not terminate within 64 rounds");

  Bits body;
  for (auto it = fragments.rbegin(); it != fragments.rend(); ++it) body.insert(body.end(), it->begin(), it->end());
  if (body.size() % 8 != 0) throw fail("hidden payload is not a whole number of bytes");
  return {std::move(ch), bits_to_bytes(body)};
}

inline PayloadContainer open_or_fail(std::span<const std::uint8_t> bytes, LayerKind expected) {
  try {
    PayloadContainer c = open_container(bytes);
    if (c.kind != expected) throw Error(ErrorCode::MalformedHeader, "container carries the wrong layer kind");
    return c;
  } catch (const Error& e) {
    throw Error(ErrorCode::NotAMarkedImage, e.what());
  }
}

}  // namespace detail

inline EmbedOutput embed(const RgbImage& general, const BiLevelImage& binary, const TriLevelLayer& tri) {
  detail::check_inputs(general, binary, tri);
  const SealedContainers sealed = detail::build_containers(binary, tri);

  const Channel red = extract_plane(general, kBinaryCarrier);
  const Channel blue = extract_plane(general, kTriCarrier);
  auto blue_job = std::async(std::launch::async,
                             [&] { return detail::embed_channel(blue, kTriCarrier, sealed.tri); });
  auto red_result = detail::embed_channel(red, kBinaryCarrier, sealed.binary);
  auto blue_result = blue_job.get();

  EmbedReport report{std::move(red_result.plan), std::move(blue_result.plan)};
  if (!report.feasible()) {
    throw CapacityError(report.shortfall_bits(),
                        "payload does not fit in " + std::to_string(kMaxRounds) + " rounds per channel");
  }
  report.red.psnr = metrics::psnr(red, red_result.channel);
  report.blue.psnr = metrics::psnr(blue, blue_result.channel);

  RgbImage marked = general;
  replace_plane(marked, kBinaryCarrier, red_result.channel);
  replace_plane(marked, kTriCarrier, blue_result.channel);
  return {std::move(marked), std::move(report)};
}

/// Dry run of embed(): same rounds, nothing written, infeasibility reported
/// in the plan rather than thrown.
inline EmbedReport plan_capacity(const RgbImage& general, const BiLevelImage& binary, const TriLevelLayer& tri) {
  detail::check_inputs(general, binary, tri);
  const SealedContainers sealed = detail::build_containers(binary, tri);
  auto blue_job = std::async(std::launch::async, [&] {
    return detail::embed_channel(extract_plane(general, kTriCarrier), kTriCarrier, sealed.tri).plan;
  });
  ChannelPlan red = detail::embed_channel(extract_plane(general, kBinaryCarrier), kBinaryCarrier, sealed.binary).plan;
  return {std::move(red), blue_job.get()};
}

inline Unpacked extract(const RgbImage& marked) {
  auto blue_job = std::async(std::launch::async,
                             [&] { return detail::extract_channel(extract_plane(marked, kTriCarrier)); });
  auto [red, binary_bytes] = detail::extract_channel(extract_plane(marked, kBinaryCarrier));
  auto [blue, tri_bytes] = blue_job.get();

  const auto bin_c = detail::open_or_fail(binary_bytes, LayerKind::Binary);
  const auto tri_c = detail::open_or_fail(tri_bytes, LayerKind::Tri);
  const auto fail = [](const std::string& why) { return Error(ErrorCode::NotAMarkedImage, why); };
  if (!red.same_shape(bin_c.compressed.width, bin_c.compressed.height) ||
      !blue.same_shape(tri_c.original_layer_width, tri_c.compressed.height) ||
      std::size_t{tri_c.compressed.width} != kTriPlanes * tri_c.original_layer_width) {
    throw fail("hidden layers do not match the image dimensions");
  }

  Unpacked out;
  try {
    auto tri_job = std::async(std::launch::async, [&] {
      return recompose_3bit(decode_bitmap(tri_c.compressed), tri_c.original_layer_width);
    });
    out.binary = decode_bitmap(bin_c.compressed);
    out.tri = tri_job.get();
  } catch (const Error& e) {
    throw fail(e.what());
  }
  out.general = marked;
  replace_plane(out.general, kBinaryCarrier, red);
  replace_plane(out.general, kTriCarrier, blue);
  return out;
}

}  // namespace spotink
