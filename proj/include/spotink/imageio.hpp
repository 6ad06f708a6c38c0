#pragma once

// Lossless image files: the PNM family (P1-P6, maxval 255) and PNG limited
// to 8-bit RGB, 8-bit gray and 1-bit gray. Bilevel files use the PBM
// convention: 1 = black = ink. A 1-bit PNG stores ink as black (sample 0).

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <zlib.h>

#include "spotink/bits.hpp"
#include "spotink/error.hpp"
#include "spotink/image.hpp"

namespace spotink::io {

enum class ImageFormat { Png, Pbm, PbmAscii, Pgm, PgmAscii, Ppm, PpmAscii };

using AnyImage = std::variant<RgbImage, GrayImage, BiLevelImage>;

inline constexpr std::size_t kMaxDimension = 1u << 16;

namespace detail {

inline void check_dimensions(std::size_t w, std::size_t h) {
  if (w == 0 || h == 0 || w > kMaxDimension || h > kMaxDimension) {
    throw Error(ErrorCode::CorruptFile,
                "unsupported image dimensions " + std::to_string(w) + "x" + std::to_string(h));
  }
}

// ---------------------------------------------------------------- PNM

class PnmCursor {
 public:
  explicit PnmCursor(std::span<const std::uint8_t> data) : data_(data) {}

  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') ++pos_;
      } else if (std::isspace(data_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number() {
    skip_space_and_comments();
    if (pos_ >= data_.size() || !std::isdigit(data_[pos_])) {
      throw Error(ErrorCode::CorruptFile, "expected a number in PNM data");
    }
    std::size_t v = 0;
    while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
      v = v * 10 + (data_[pos_++] - '0');
      if (v > (1u << 30)) throw Error(ErrorCode::CorruptFile, "PNM number out of range");
    }
    return v;
  }

  /// One '0' or '1', whitespace optional between digits (P1).
  std::uint8_t pbm_digit() {
    skip_space_and_comments();
    if (pos_ >= data_.size() || (data_[pos_] != '0' && data_[pos_] != '1')) {
      throw Error(ErrorCode::CorruptFile, "expected 0 or 1 in P1 data");
    }
    return static_cast<std::uint8_t>(data_[pos_++] - '0');
  }

  /// Raster data starts after exactly one whitespace byte.
  std::span<const std::uint8_t> raw(std::size_t count) {
    if (pos_ >= data_.size() || !std::isspace(data_[pos_])) {
      throw Error(ErrorCode::CorruptFile, "missing separator before PNM raster");
    }
    ++pos_;
    if (data_.size() - pos_ < count) throw Error(ErrorCode::CorruptFile, "PNM raster is truncated");
    auto out = data_.subspan(pos_, count);
    pos_ += count;
    return out;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

inline AnyImage decode_pnm(std::span<const std::uint8_t> data) {
  const char kind = static_cast<char>(data[1]);
  PnmCursor cur(data.subspan(2));
  const std::size_t w = cur.number();
  const std::size_t h = cur.number();
  check_dimensions(w, h);

  if (kind == '1' || kind == '4') {
    BiLevelImage img(w, h);
    if (kind == '1') {
      for (std::size_t i = 0; i < img.size(); ++i) img[i] = cur.pbm_digit();
    } else {
      const std::size_t stride = (w + 7) / 8;
      const auto raster = cur.raw(stride * h);
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) img.at(x, y) = (raster[y * stride + x / 8] >> (7 - x % 8)) & 1u;
      }
    }
    return img;
  }

  const std::size_t maxval = cur.number();
  if (maxval != 255) {
    throw Error(ErrorCode::UnsupportedBitDepth, "PNM maxval " + std::to_string(maxval) + " (only 255 supported)");
  }
  const std::size_t channels = (kind == '2' || kind == '5') ? 1 : 3;
  std::vector<std::uint8_t> samples(w * h * channels);
  if (kind == '2' || kind == '3') {
    for (auto& s : samples) {
      const std::size_t v = cur.number();
      if (v > maxval) throw Error(ErrorCode::CorruptFile, "PNM sample exceeds maxval");
      s = static_cast<std::uint8_t>(v);
    }
  } else {
    const auto raster = cur.raw(samples.size());
    std::copy(raster.begin(), raster.end(), samples.begin());
  }
  if (channels == 1) return GrayImage(w, h, std::move(samples));
  RgbImage img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = {samples[3 * i], samples[3 * i + 1], samples[3 * i + 2]};
  return img;
}

inline void append(Bytes& out, std::string_view s) { out.insert(out.end(), s.begin(), s.end()); }

inline Bytes encode_pnm(const AnyImage& any, ImageFormat format) {
  Bytes out;
  const auto header = [&](std::string_view magic, std::size_t w, std::size_t h, bool maxval) {
    append(out, std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n" +
                    (maxval ? "255\n" : ""));
  };
  if (const auto* bl = std::get_if<BiLevelImage>(&any)) {
    if (format == ImageFormat::PbmAscii) {
      header("P1", bl->width(), bl->height(), false);
      for (std::size_t y = 0; y < bl->height(); ++y) {
        for (std::size_t x = 0; x < bl->width(); ++x) {
          out.push_back(bl->at(x, y) ? '1' : '0');
          out.push_back(x + 1 == bl->width() ? '\n' : ' ');
        }
      }
    } else {
      header("P4", bl->width(), bl->height(), false);
      const std::size_t stride = (bl->width() + 7) / 8;
      for (std::size_t y = 0; y < bl->height(); ++y) {
        Bytes row(stride, 0);
        for (std::size_t x = 0; x < bl->width(); ++x) {
          if (bl->at(x, y)) row[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
        }
        out.insert(out.end(), row.begin(), row.end());
      }
    }
  } else if (const auto* g = std::get_if<GrayImage>(&any)) {
    if (format == ImageFormat::PgmAscii) {
      header("P2", g->width(), g->height(), true);
      for (std::size_t i = 0; i < g->size(); ++i) {
        append(out, std::to_string((*g)[i]));
        out.push_back((i + 1) % g->width() == 0 ? '\n' : ' ');
      }
    } else {
      header("P5", g->width(), g->height(), true);
      out.insert(out.end(), g->samples().begin(), g->samples().end());
    }
  } else {
    const auto& rgb = std::get<RgbImage>(any);
    const bool ascii = format == ImageFormat::PpmAscii;
    header(ascii ? "P3" : "P6", rgb.width(), rgb.height(), true);
    for (std::size_t i = 0; i < rgb.size(); ++i) {
      const Rgb p = rgb[i];
      if (ascii) {
        append(out, std::to_string(p.r) + " " + std::to_string(p.g) + " " + std::to_string(p.b));
        out.push_back((i + 1) % rgb.width() == 0 ? '\n' : ' ');
      } else {
        out.insert(out.end(), {p.r, p.g, p.b});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- PNG

inline constexpr std::array<std::uint8_t, 8> kPngSignature{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

inline std::uint8_t paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
  return static_cast<std::uint8_t>(pb <= pc ? b : c);
}

inline void unfilter(Bytes& data, std::size_t h, std::size_t stride, std::size_t bpp) {
  Bytes prev(stride, 0);
  for (std::size_t y = 0; y < h; ++y) {
    std::uint8_t* line = data.data() + y * (stride + 1);
    const std::uint8_t type = line[0];
    std::uint8_t* cur = line + 1;
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= bpp ? cur[i - bpp] : 0;
      const int b = prev[i];
      const int c = i >= bpp ? prev[i - bpp] : 0;
      switch (type) {
        case 0: break;
        case 1: cur[i] = static_cast<std::uint8_t>(cur[i] + a); break;
        case 2: cur[i] = static_cast<std::uint8_t>(cur[i] + b); break;
        case 3: cur[i] = static_cast<std::uint8_t>(cur[i] + (a + b) / 2); break;
        case 4: cur[i] = static_cast<std::uint8_t>(cur[i] + paeth(a, b, c)); break;
        default: throw Error(ErrorCode::CorruptFile, "unknown PNG filter type " + std::to_string(type));
      }
    }
    std::copy(cur, cur + stride, prev.begin());
  }
}

inline AnyImage decode_png(std::span<const std::uint8_t> data) {
  std::size_t pos = kPngSignature.size();
  std::size_t w = 0, h = 0;
  int depth = 0, color = -1;
  Bytes idat;
  bool seen_end = false;
  while (!seen_end) {
    if (data.size() - pos < 12) throw Error(ErrorCode::CorruptFile, "PNG chunk is truncated");
    const std::uint32_t len = get_u32be(data, pos);
    if (len > data.size() - pos - 12) throw Error(ErrorCode::CorruptFile, "PNG chunk is truncated");
    const auto type_and_body = data.subspan(pos + 4, 4 + len);
    const std::string_view type(reinterpret_cast<const char*>(type_and_body.data()), 4);
    const auto body = type_and_body.subspan(4);
    const std::uint32_t crc = get_u32be(data, pos + 8 + len);
    if (static_cast<std::uint32_t>(crc32(0, type_and_body.data(), static_cast<uInt>(type_and_body.size()))) != crc) {
      throw Error(ErrorCode::CorruptFile, "PNG chunk CRC mismatch in " + std::string(type));
    }
    pos += 12 + len;

    if (type == "IHDR") {
      if (len != 13) throw Error(ErrorCode::CorruptFile, "bad IHDR length");
      w = get_u32be(body, 0);
      h = get_u32be(body, 4);
      depth = body[8];
      color = body[9];
      if (body[10] != 0 || body[11] != 0) throw Error(ErrorCode::UnsupportedFormat, "unknown PNG compression/filter method");
      if (body[12] != 0) throw Error(ErrorCode::UnsupportedFormat, "interlaced PNG");
      check_dimensions(w, h);
      if (color == 3) throw Error(ErrorCode::UnsupportedBitDepth, "palette PNG");
      if (color == 4 || color == 6) throw Error(ErrorCode::UnsupportedBitDepth, "PNG with alpha channel");
      if (depth == 16) throw Error(ErrorCode::UnsupportedBitDepth, "16-bit PNG");
      const bool ok = (color == 0 && (depth == 1 || depth == 8)) || (color == 2 && depth == 8);
      if (!ok) {
        throw Error(ErrorCode::UnsupportedBitDepth, "PNG colour type " + std::to_string(color) + " at depth " +
                                                        std::to_string(depth));
      }
    } else if (type == "tRNS") {
      throw Error(ErrorCode::UnsupportedBitDepth, "PNG with transparency");
    } else if (type == "IDAT") {
      idat.insert(idat.end(), body.begin(), body.end());
    } else if (type == "IEND") {
      seen_end = true;
    } else if (color < 0) {
      throw Error(ErrorCode::CorruptFile, "PNG does not start with IHDR");
    }
  }
  if (color < 0) throw Error(ErrorCode::CorruptFile, "PNG without IHDR");

  const std::size_t channels = color == 2 ? 3 : 1;
  const std::size_t stride = (w * channels * depth + 7) / 8;
  const std::size_t bpp = std::max<std::size_t>(1, channels * depth / 8);
  Bytes raw(h * (stride + 1));
  uLongf raw_len = static_cast<uLongf>(raw.size());
  if (uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
      raw_len != raw.size()) {
    throw Error(ErrorCode::CorruptFile, "PNG image data does not inflate to the expected size");
  }
  unfilter(raw, h, stride, bpp);
  const auto line = [&](std::size_t y) { return raw.data() + y * (stride + 1) + 1; };

  if (depth == 1) {
    BiLevelImage img(w, h);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) img.at(x, y) = ((line(y)[x / 8] >> (7 - x % 8)) & 1u) ? 0 : 1;
    }
    return img;
  }
  if (channels == 1) {
    GrayImage img(w, h);
    for (std::size_t y = 0; y < h; ++y) std::copy(line(y), line(y) + w, &img.at(0, y));
    return img;
  }
  RgbImage img(w, h);
  for (std::size_t y = 0; y < h; ++y) {
    const std::uint8_t* p = line(y);
    for (std::size_t x = 0; x < w; ++x) img.at(x, y) = {p[3 * x], p[3 * x + 1], p[3 * x + 2]};
  }
  return img;
}

inline void put_chunk(Bytes& out, std::string_view type, std::span<const std::uint8_t> body) {
  put_u32be(out, static_cast<std::uint32_t>(body.size()));
  const std::size_t start = out.size();
  append(out, type);
  out.insert(out.end(), body.begin(), body.end());
  put_u32be(out, static_cast<std::uint32_t>(crc32(0, out.data() + start, static_cast<uInt>(out.size() - start))));
}

inline Bytes encode_png(const AnyImage& any) {
  std::size_t w = 0, h = 0, stride = 0;
  std::uint8_t depth = 8, color = 0;
  Bytes raw;
  std::visit([&](const auto& img) {
    w = img.width();
    h = img.height();
  }, any);
  if (const auto* bl = std::get_if<BiLevelImage>(&any)) {
    depth = 1;
    stride = (w + 7) / 8;
    raw.assign(h * (stride + 1), 0);
    for (std::size_t y = 0; y < h; ++y) {
      std::uint8_t* p = raw.data() + y * (stride + 1) + 1;
      for (std::size_t x = 0; x < w; ++x) {
        if (!bl->at(x, y)) p[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));  // white = paper
      }
    }
  } else if (const auto* g = std::get_if<GrayImage>(&any)) {
    stride = w;
    raw.assign(h * (stride + 1), 0);
    for (std::size_t y = 0; y < h; ++y) std::copy_n(&g->at(0, y), w, raw.data() + y * (stride + 1) + 1);
  } else {
    const auto& rgb = std::get<RgbImage>(any);
    color = 2;
    stride = 3 * w;
    raw.assign(h * (stride + 1), 0);
    for (std::size_t y = 0; y < h; ++y) {
      std::uint8_t* p = raw.data() + y * (stride + 1) + 1;
      for (std::size_t x = 0; x < w; ++x) {
        const Rgb c = rgb.at(x, y);
        p[3 * x] = c.r;
        p[3 * x + 1] = c.g;
        p[3 * x + 2] = c.b;
      }
    }
  }

  uLongf zlen = compressBound(static_cast<uLong>(raw.size()));
  Bytes z(zlen);
  if (compress2(z.data(), &zlen, raw.data(), static_cast<uLong>(raw.size()), Z_BEST_COMPRESSION) != Z_OK) {
    throw Error(ErrorCode::IoError, "deflate failed");
  }
  z.resize(zlen);

  Bytes out(kPngSignature.begin(), kPngSignature.end());
  Bytes ihdr;
  put_u32be(ihdr, static_cast<std::uint32_t>(w));
  put_u32be(ihdr, static_cast<std::uint32_t>(h));
  ihdr.insert(ihdr.end(), {depth, color, 0, 0, 0});
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", z);
  put_chunk(out, "IEND", {});
  return out;
}

}  // namespace detail

/// Decodes PNG or PNM by signature.
inline AnyImage decode_image(std::span<const std::uint8_t> data) {
  if (data.size() >= detail::kPngSignature.size() &&
      std::equal(detail::kPngSignature.begin(), detail::kPngSignature.end(), data.begin())) {
    return detail::decode_png(data);
  }
  if (data.size() >= 2 && data[0] == 'P' && data[1] >= '1' && data[1] <= '6') return detail::decode_pnm(data);
  throw Error(ErrorCode::UnsupportedFormat, "neither PNG nor PNM");
}

inline Bytes encode_image(const AnyImage& img, ImageFormat format) {
  const bool bilevel = std::holds_alternative<BiLevelImage>(img);
  const bool gray = std::holds_alternative<GrayImage>(img);
  const bool compatible = format == ImageFormat::Png ||
                          ((format == ImageFormat::Pbm || format == ImageFormat::PbmAscii) && bilevel) ||
                          ((format == ImageFormat::Pgm || format == ImageFormat::PgmAscii) && gray) ||
                          ((format == ImageFormat::Ppm || format == ImageFormat::PpmAscii) && !bilevel && !gray);
  if (!compatible) throw Error(ErrorCode::FormatMismatch, "image kind cannot be stored in the requested format");
  return format == ImageFormat::Png ? detail::encode_png(img) : detail::encode_pnm(img, format);
}

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return data;
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

inline AnyImage read_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }

inline void write_image(const AnyImage& img, const std::filesystem::path& path, ImageFormat format) {
  write_file(path, encode_image(img, format));
}

/// Picks the binary format matching the file extension (PNG when unknown).
inline ImageFormat format_for_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".pbm") return ImageFormat::Pbm;
  if (ext == ".pgm") return ImageFormat::Pgm;
  if (ext == ".ppm") return ImageFormat::Ppm;
  return ImageFormat::Png;
}

inline void write_image(const AnyImage& img, const std::filesystem::path& path) {
  write_image(img, path, format_for_path(path));
}

inline RgbImage read_rgb(const std::filesystem::path& path) {
  auto img = read_image(path);
  if (auto* rgb = std::get_if<RgbImage>(&img)) return std::move(*rgb);
  throw Error(ErrorCode::FormatMismatch, path.string() + " is not an RGB image");
}

/// Accepts a bilevel file, or an 8-bit gray file holding only 0 (ink) and 255.
inline BiLevelImage read_bilevel(const std::filesystem::path& path) {
  auto img = read_image(path);
  if (auto* bl = std::get_if<BiLevelImage>(&img)) return std::move(*bl);
  if (auto* g = std::get_if<GrayImage>(&img)) {
    BiLevelImage out(g->width(), g->height());
    for (std::size_t i = 0; i < g->size(); ++i) {
      const auto v = (*g)[i];
      if (v != 0 && v != 255) throw Error(ErrorCode::LevelOutOfRange, path.string() + " is not black and white");
      out[i] = v == 0 ? 1 : 0;
    }
    return out;
  }
  throw Error(ErrorCode::FormatMismatch, path.string() + " is not a bilevel image");
}

/// A 3-bit layer is stored as an 8-bit gray image whose samples are all <= 7.
inline TriLevelLayer read_trilevel(const std::filesystem::path& path) {
  auto img = read_image(path);
  auto* g = std::get_if<GrayImage>(&img);
  if (!g) throw Error(ErrorCode::FormatMismatch, path.string() + " is not an 8-bit gray image");
  auto layer = retag<TriLevelLayer>(*g);
  validate_trilevel(layer);
  return layer;
}

inline void write_trilevel(const TriLevelLayer& layer, const std::filesystem::path& path) {
  write_image(retag<GrayImage>(layer), path);
}

}  // namespace spotink::io
