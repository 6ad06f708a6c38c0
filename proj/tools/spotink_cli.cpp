// spotink: hide a binary layer and a 3-bit layer inside an RGB image, losslessly.
//
// Exit codes:
//   0  success
//   1  I/O, format or usage error
//   2  payload does not fit (stderr carries "shortfall: N bits")
//   3  image and layer dimensions disagree
//   4  input is not a marked image, or it was altered

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "spotink/spotink.hpp"

namespace {

using nlohmann::json;
using namespace spotink;

constexpr int kReportVersion = 1;

enum Exit : int { kOk = 0, kFailure = 1, kNoCapacity = 2, kBadDimensions = 3, kNotMarked = 4 };

// JSON has no infinity literal.
json number(double v) {
  if (std::isinf(v)) return "inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

json quality(const metrics::Quality& q) { return {{"psnr", number(q.psnr)}, {"mssim", number(q.mssim)}}; }

json metrics_table(const metrics::ChannelMetrics& m) {
  return {{"luminance", quality(m.luminance)},
          {"red", quality(m.red)},
          {"green", quality(m.green)},
          {"blue", quality(m.blue)}};
}

json plan_json(const ChannelPlan& p) {
  json rounds = json::array();
  std::size_t capacity = 0;
  for (const auto& r : p.rounds) {
    capacity += r.capacity_bits;
    rounds.push_back({{"pp", r.pp},
                      {"zp", r.zp},
                      {"used_lp", r.used_lp},
                      {"lp_count", r.lp_count},
                      {"capacity_bits", r.capacity_bits},
                      {"header_bits", r.header_bits},
                      {"payload_bits", r.fragment_bits}});
  }
  return {{"container_bytes", p.container_bytes},
          {"container_bits", 8 * p.container_bytes},
          {"capacity_bits", capacity},
          {"feasible", p.feasible},
          {"shortfall_bits", p.shortfall_bits},
          {"rounds", std::move(rounds)}};
}

struct Inputs {
  RgbImage general;
  BiLevelImage binary;
  TriLevelLayer tri;
};

Inputs load(const std::string& general, const std::string& binary, const std::string& tri) {
  return {io::read_rgb(general), io::read_bilevel(binary), io::read_trilevel(tri)};
}

int run_embed(const std::string& general, const std::string& binary, const std::string& tri,
              const std::string& out, const std::string& report_path) {
  const auto in = load(general, binary, tri);
  const auto result = embed(in.general, in.binary, in.tri);
  io::write_image(result.marked, out, io::ImageFormat::Png);
  if (!report_path.empty()) {
    json red = plan_json(result.report.red);
    json blue = plan_json(result.report.blue);
    red["psnr"] = number(result.report.red.psnr);
    blue["psnr"] = number(result.report.blue.psnr);
    const json report{{"report_version", kReportVersion},
                      {"width", in.general.width()},
                      {"height", in.general.height()},
                      {"channels", {{"red", std::move(red)}, {"blue", std::move(blue)}}},
                      {"quality", metrics_table(metrics::channel_metrics(in.general, result.marked))}};
    const std::string text = report.dump(2) + "\n";
    io::write_file(report_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  return kOk;
}

int run_extract(const std::string& marked, const std::string& out_general, const std::string& out_binary,
                const std::string& out_tri) {
  const auto unpacked = extract(io::read_rgb(marked));
  io::write_image(unpacked.general, out_general);
  io::write_image(unpacked.binary, out_binary);
  io::write_trilevel(unpacked.tri, out_tri);
  return kOk;
}

int run_capacity(const std::string& general, const std::string& binary, const std::string& tri) {
  const auto in = load(general, binary, tri);
  const auto plan = plan_capacity(in.general, in.binary, in.tri);
  const json out{{"report_version", kReportVersion},
                 {"feasible", plan.feasible()},
                 {"shortfall_bits", plan.shortfall_bits()},
                 {"channels", {{"red", plan_json(plan.red)}, {"blue", plan_json(plan.blue)}}}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int run_metrics(const std::string& a, const std::string& b) {
  const auto m = metrics::channel_metrics(io::read_rgb(a), io::read_rgb(b));
  json out = metrics_table(m);
  out["report_version"] = kReportVersion;
  std::cout << out.dump(2) << "\n";
  return kOk;
}

int run_gen(std::size_t width, std::size_t height, std::size_t colours, std::uint64_t seed,
            const std::string& prefix) {
  const auto img = fixtures::gen_illustration(width, height, colours, seed);
  const auto layers = fixtures::gen_layers(img);
  io::write_image(img, prefix + "_general.png");
  io::write_image(layers.binary, prefix + "_binary.pbm");
  io::write_trilevel(layers.tri, prefix + "_tri.pgm");
  return kOk;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InsufficientCapacity: return kNoCapacity;
    case ErrorCode::DimensionMismatch: return kBadDimensions;
    case ErrorCode::NotAMarkedImage: return kNotMarked;
    default: return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversibly embed spot-colour layers into an RGB image"};
  app.require_subcommand(1);

  std::string general, binary, tri, out, report, marked, out_general, out_binary, out_tri, a, b, prefix;
  std::size_t width = 0, height = 0, colours = 0;
  std::uint64_t seed = 0;

  auto* embed_cmd = app.add_subcommand("embed", "Hide both layers and write the marked PNG");
  embed_cmd->add_option("--general", general, "RGB image")->required();
  embed_cmd->add_option("--binary", binary, "Bilevel layer")->required();
  embed_cmd->add_option("--tri", tri, "3-bit layer (gray, values 0..7)")->required();
  embed_cmd->add_option("--out", out, "Marked PNG")->required();
  embed_cmd->add_option("--report", report, "Write a JSON report here");

  auto* extract_cmd = app.add_subcommand("extract", "Recover the image and both layers");
  extract_cmd->add_option("--marked", marked, "Marked image")->required();
  extract_cmd->add_option("--out-general", out_general, "Restored RGB image")->required();
  extract_cmd->add_option("--out-binary", out_binary, "Restored bilevel layer")->required();
  extract_cmd->add_option("--out-tri", out_tri, "Restored 3-bit layer")->required();

  auto* capacity_cmd = app.add_subcommand("capacity", "Print the embedding plan as JSON");
  capacity_cmd->add_option("--general", general)->required();
  capacity_cmd->add_option("--binary", binary)->required();
  capacity_cmd->add_option("--tri", tri)->required();

  auto* metrics_cmd = app.add_subcommand("metrics", "PSNR and MSSIM of two RGB images as JSON");
  metrics_cmd->add_option("--a", a)->required();
  metrics_cmd->add_option("--b", b)->required();

  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic image and its two layers");
  gen_cmd->add_option("--width", width)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--height", height)->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--colors", colours)->required()->check(CLI::Range(2, 64));
  gen_cmd->add_option("--seed", seed)->default_val(0);
  gen_cmd->add_option("--out-prefix", prefix)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kFailure;
  }

  try {
    if (*embed_cmd) return run_embed(general, binary, tri, out, report);
    if (*extract_cmd) return run_extract(marked, out_general, out_binary, out_tri);
    if (*capacity_cmd) return run_capacity(general, binary, tri);
    if (*metrics_cmd) return run_metrics(a, b);
    if (*gen_cmd) return run_gen(width, height, colours, seed, prefix);
  } catch (const CapacityError& e) {
    std::cerr << "spotink: " << e.what() << "\n" << "shortfall: " << e.shortfall_bits() << " bits\n";
    return kNoCapacity;
  } catch (const Error& e) {
    std::cerr << "spotink: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "spotink: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
