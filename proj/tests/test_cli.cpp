#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spotink/imageio.hpp"

namespace fs = std::filesystem;
using namespace spotink;

namespace {

struct Invocation {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spotink_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  Invocation run(const std::string& args) const {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd =
        std::string(SPOTINK_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int raw = std::system(cmd.c_str());
    Invocation r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string gen(const std::string& name, int w, int h, int colours, int seed) const {
    const auto prefix = path(name).string();
    const auto r = run("gen --width " + std::to_string(w) + " --height " + std::to_string(h) + " --colors " +
                       std::to_string(colours) + " --seed " + std::to_string(seed) + " --out-prefix " + prefix);
    EXPECT_EQ(r.status, 0) << r.err;
    return prefix;
  }

  static std::string triple(const std::string& prefix) {
    return "--general " + prefix + "_general.png --binary " + prefix + "_binary.pbm --tri " + prefix + "_tri.pgm";
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, EmbedExtractRoundTrip) {
  const auto p = gen("fx", 96, 80, 6, 3);
  auto r = run("embed " + triple(p) + " --out " + path("marked.png").string() + " --report " +
               path("report.json").string());
  ASSERT_EQ(r.status, 0) << r.err;
  ASSERT_TRUE(fs::exists(path("marked.png")));

  const auto report = nlohmann::json::parse(slurp(path("report.json")));
  EXPECT_EQ(report["report_version"], 1);
  EXPECT_TRUE(report["channels"]["blue"]["feasible"].get<bool>());
  EXPECT_GE(report["channels"]["blue"]["rounds"].size(), 1u);
  EXPECT_TRUE(report["quality"]["green"]["psnr"] == "inf");

  r = run("extract --marked " + path("marked.png").string() + " --out-general " + path("g.png").string() +
          " --out-binary " + path("b.pbm").string() + " --out-tri " + path("t.pgm").string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(io::read_rgb(path("g.png")), io::read_rgb(p + "_general.png"));
  EXPECT_EQ(slurp(path("b.pbm")), slurp(p + "_binary.pbm"));
  EXPECT_EQ(slurp(path("t.pgm")), slurp(p + "_tri.pgm"));
}

TEST_F(Cli, GenIsDeterministic) {
  const auto a = gen("a", 50, 40, 5, 9);
  const auto b = gen("b", 50, 40, 5, 9);
  for (const char* suffix : {"_general.png", "_binary.pbm", "_tri.pgm"}) {
    EXPECT_EQ(slurp(a + suffix), slurp(b + suffix)) << suffix;
  }
}

TEST_F(Cli, MissingInputIsIoError) {
  const auto r = run("embed --general /nonexistent.png --binary x.pbm --tri y.pgm --out " +
                     path("m.png").string());
  EXPECT_EQ(r.status, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(r.err.empty());
}

TEST_F(Cli, DimensionMismatch) {
  const auto a = gen("a", 40, 40, 3, 1);
  const auto b = gen("b", 40, 30, 3, 1);
  const auto r = run("embed --general " + a + "_general.png --binary " + b + "_binary.pbm --tri " + a +
                     "_tri.pgm --out " + path("m.png").string());
  EXPECT_EQ(r.status, 3) << r.err;
}

TEST_F(Cli, InsufficientCapacityReportsShortfall) {
  RgbImage flat(256, 32);
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const auto v = static_cast<std::uint8_t>(i % 256);
    flat[i] = {v, v, v};
  }
  std::mt19937 rng(2);
  BiLevelImage bits(256, 32);
  GrayImage tri(256, 32);
  for (auto& v : bits.samples()) v = rng() & 1;
  for (auto& v : tri.samples()) v = static_cast<std::uint8_t>(rng() % 8);
  io::write_image(flat, path("g.png"));
  io::write_image(bits, path("b.pbm"));
  io::write_image(tri, path("t.pgm"));
  const std::string args = "--general " + path("g.png").string() + " --binary " + path("b.pbm").string() +
                           " --tri " + path("t.pgm").string();
  auto r = run("embed " + args + " --out " + path("m.png").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("shortfall: "), std::string::npos) << r.err;
  EXPECT_NE(r.err.find(" bits"), std::string::npos);

  r = run("capacity " + args);
  EXPECT_EQ(r.status, 0) << r.err;
  const auto plan = nlohmann::json::parse(r.out);
  EXPECT_FALSE(plan["feasible"].get<bool>());
  EXPECT_GT(plan["shortfall_bits"].get<std::size_t>(), 0u);
}

TEST_F(Cli, CapacityMatchesEmbed) {
  const auto p = gen("fx", 120, 100, 12, 4);
  const auto cap = run("capacity " + triple(p));
  ASSERT_EQ(cap.status, 0) << cap.err;
  const auto plan = nlohmann::json::parse(cap.out);
  EXPECT_TRUE(plan["feasible"].get<bool>());
  const auto emb = run("embed " + triple(p) + " --out " + path("m.png").string() + " --report " +
                       path("r.json").string());
  ASSERT_EQ(emb.status, 0) << emb.err;
  const auto report = nlohmann::json::parse(slurp(path("r.json")));
  for (const char* ch : {"red", "blue"}) {
    EXPECT_EQ(plan["channels"][ch]["rounds"], report["channels"][ch]["rounds"]) << ch;
  }
}

TEST_F(Cli, ExtractRejectsUnmarkedAndCorrupted) {
  const auto p = gen("fx", 64, 64, 4, 8);
  const std::string outs = " --out-general " + path("g.png").string() + " --out-binary " +
                           path("b.pbm").string() + " --out-tri " + path("t.pgm").string();
  EXPECT_EQ(run("extract --marked " + p + "_general.png" + outs).status, 4);

  ASSERT_EQ(run("embed " + triple(p) + " --out " + path("m.png").string()).status, 0);
  auto img = io::read_rgb(path("m.png"));
  for (std::size_t i = 0; i < img.size(); i += 7) img[i].b ^= 0x10;
  io::write_image(img, path("bad.png"));
  EXPECT_EQ(run("extract --marked " + path("bad.png").string() + outs).status, 4);
}

TEST_F(Cli, MetricsOfIdenticalFiles) {
  const auto p = gen("fx", 32, 32, 3, 1);
  const auto r = run("metrics --a " + p + "_general.png --b " + p + "_general.png");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto m = nlohmann::json::parse(r.out);
  for (const char* ch : {"luminance", "red", "green", "blue"}) {
    EXPECT_EQ(m[ch]["psnr"], "inf");
    EXPECT_DOUBLE_EQ(m[ch]["mssim"].get<double>(), 1.0);
  }
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").status, 1);
  EXPECT_EQ(run("embed --general x").status, 1);
  EXPECT_EQ(run("gen --width 10 --height 10 --colors 99 --out-prefix " + path("z").string()).status, 1);
}
