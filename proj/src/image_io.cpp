#include "fogbench/image_io.h"

#include <png.h>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace fogbench::io {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& p, const char* what) {
  throw std::runtime_error(p.string() + ": " + what);
}

std::uint8_t quant8(double v) {
  long k = std::lround(v * 255.0);
  if (k < 0) k = 0;
  if (k > 255) k = 255;
  return static_cast<std::uint8_t>(k);
}

float byteswap_f32(float v) {
  auto u = std::bit_cast<std::uint32_t>(v);
  u = ((u & 0xFF000000u) >> 24) | ((u & 0x00FF0000u) >> 8) | ((u & 0x0000FF00u) << 8) |
      ((u & 0x000000FFu) << 24);
  return std::bit_cast<float>(u);
}

/// Reads the three whitespace-delimited PFM header tokens (magic, dims,
/// scale), each terminated by exactly one whitespace byte.
void read_pfm_header(std::ifstream& in, const std::filesystem::path& p, bool& color, int& w,
                     int& h, bool& little_endian) {
  std::string magic;
  in >> magic;
  if (magic == "PF")
    color = true;
  else if (magic == "Pf")
    color = false;
  else
    fail(p, "not a PFM file");
  double scale = 0.0;
  if (!(in >> w >> h >> scale)) fail(p, "truncated PFM header");
  if (w < 1 || h < 1) fail(p, "bad PFM dimensions");
  if (scale == 0.0) fail(p, "bad PFM scale");
  little_endian = scale < 0.0;
  in.get();  // single whitespace byte before the raster
}

void write_pfm_raster(const std::filesystem::path& p, const char* magic, int h, int w,
                      int channels, const std::function<float(int r, int c, int ch)>& sample) {
  std::ofstream out(p, std::ios::binary);
  if (!out) fail(p, "cannot open for writing");
  out << magic << "\n" << w << " " << h << "\n" << "-1.0" << "\n";
  std::vector<float> row(static_cast<std::size_t>(w) * channels);
  for (int r = h - 1; r >= 0; --r) {  // bottom-up
    for (int c = 0; c < w; ++c)
      for (int ch = 0; ch < channels; ++ch) row[static_cast<std::size_t>(c) * channels + ch] =
          sample(r, c, ch);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
  }
  if (!out) fail(p, "write failed");
}

std::vector<float> read_pfm_raster(const std::filesystem::path& p, bool want_color, int& h,
                                   int& w) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(p, "cannot open");
  bool color = false, le = false;
  read_pfm_header(in, p, color, w, h, le);
  if (color != want_color) fail(p, want_color ? "expected color PFM" : "expected grayscale PFM");
  int channels = color ? 3 : 1;
  std::vector<float> data(static_cast<std::size_t>(h) * w * channels);
  std::vector<float> row(static_cast<std::size_t>(w) * channels);
  for (int r = h - 1; r >= 0; --r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    if (!in) fail(p, "truncated PFM raster");
    if (le != (std::endian::native == std::endian::little))
      for (auto& v : row) v = byteswap_f32(v);
    std::memcpy(data.data() + static_cast<std::size_t>(r) * w * channels, row.data(),
                row.size() * sizeof(float));
  }
  return data;
}

}  // namespace

void write_png(const std::filesystem::path& p, const RgbImage& img) {
  std::vector<std::uint8_t> rgb(img.pixels() * 3);
  for (int c = 0; c < 3; ++c) {
    const double* pl = img.plane(c);
    for (std::size_t i = 0; i < img.pixels(); ++i) rgb[i * 3 + c] = quant8(pl[i]);
  }
  write_png_bytes(p, img.height(), img.width(), rgb);
}

void write_png_bytes(const std::filesystem::path& p, int height, int width,
                     const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(height) * width * 3)
    throw std::invalid_argument("write_png_bytes: buffer size mismatch");
  FilePtr f(std::fopen(p.string().c_str(), "wb"));
  if (!f) fail(p, "cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(p, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(p, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(p, "libpng write error");
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  for (int r = 0; r < height; ++r)
    png_write_row(png, const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(r) * width * 3));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

void write_png_rgba(const std::filesystem::path& p, const RgbImage& img, const Mask& valid) {
  if (valid.height() != img.height() || valid.width() != img.width())
    throw std::invalid_argument("write_png_rgba: mask shape mismatch");
  const int height = img.height(), width = img.width();
  std::vector<std::uint8_t> rgba(img.pixels() * 4);
  for (int c = 0; c < 3; ++c) {
    const double* pl = img.plane(c);
    for (std::size_t i = 0; i < img.pixels(); ++i) rgba[i * 4 + c] = quant8(pl[i]);
  }
  for (std::size_t i = 0; i < img.pixels(); ++i) rgba[i * 4 + 3] = valid[i] ? 255 : 0;
  FilePtr f(std::fopen(p.string().c_str(), "wb"));
  if (!f) fail(p, "cannot open for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(p, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(p, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(p, "libpng write error");
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB_ALPHA, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  for (int r = 0; r < height; ++r)
    png_write_row(png,
                  const_cast<png_bytep>(rgba.data() + static_cast<std::size_t>(r) * width * 4));
  png_write_end(png, info);
  png_destroy_write_struct(&png, &info);
}

RgbImage read_png(const std::filesystem::path& p) {
  FilePtr f(std::fopen(p.string().c_str(), "rb"));
  if (!f) fail(p, "cannot open");
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail(p, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(p, "png_create_info_struct failed");
  }
  std::vector<std::uint8_t> data;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(p, "libpng read error");
  }
  png_init_io(png, f.get());
  png_read_info(png, info);
  png_set_expand(png);          // palette/low-bit/tRNS to full depth
  png_set_strip_16(png);        // 16-bit down to 8
  png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  int width = static_cast<int>(png_get_image_width(png, info));
  int height = static_cast<int>(png_get_image_height(png, info));
  if (png_get_channels(png, info) != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(p, "unsupported PNG channel layout");
  }
  data.resize(static_cast<std::size_t>(height) * width * 3);
  rows.resize(height);
  for (int r = 0; r < height; ++r) rows[r] = data.data() + static_cast<std::size_t>(r) * width * 3;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  RgbImage img(height, width);
  for (int c = 0; c < 3; ++c) {
    double* pl = img.plane(c);
    for (std::size_t i = 0; i < img.pixels(); ++i)
      pl[i] = static_cast<double>(data[i * 3 + c]) / 255.0;
  }
  return img;
}

void write_pfm(const std::filesystem::path& p, const ScalarField& f) {
  write_pfm_raster(p, "Pf", f.height(), f.width(), 1,
                   [&](int r, int c, int) { return static_cast<float>(f.at(r, c)); });
}

ScalarField read_pfm(const std::filesystem::path& p) {
  int h = 0, w = 0;
  auto data = read_pfm_raster(p, false, h, w);
  ScalarField f(h, w);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<double>(data[i]);
  return f;
}

void write_pfm_rgb(const std::filesystem::path& p, const RgbImage& img) {
  write_pfm_raster(p, "PF", img.height(), img.width(), 3,
                   [&](int r, int c, int ch) { return static_cast<float>(img.at(r, c, ch)); });
}

RgbImage read_pfm_rgb(const std::filesystem::path& p) {
  int h = 0, w = 0;
  auto data = read_pfm_raster(p, true, h, w);
  RgbImage img(h, w);
  for (int c = 0; c < 3; ++c) {
    double* pl = img.plane(c);
    for (std::size_t i = 0; i < img.pixels(); ++i)
      pl[i] = static_cast<double>(data[i * 3 + c]);
  }
  return img;
}

}  // namespace fogbench::io
