#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "fogbench/field.h"

namespace fogbench::io {

/// 8-bit RGB PNG. Writing rounds channel*255 to nearest; reading divides
/// by 255. Gray/palette/alpha sources are expanded to RGB on read.
void write_png(const std::filesystem::path& p, const RgbImage& img);
RgbImage read_png(const std::filesystem::path& p);

/// Raw interleaved 8-bit RGB variant (false-color renderings).
void write_png_bytes(const std::filesystem::path& p, int height, int width,
                     const std::vector<std::uint8_t>& rgb);

/// RGBA PNG whose alpha channel carries a validity mask (255 valid, 0 not).
/// read_png strips the alpha back off.
void write_png_rgba(const std::filesystem::path& p, const RgbImage& img, const Mask& valid);

/// Grayscale PFM ("Pf"), float32, bottom-up rows. Written little-endian
/// (scale -1); both endiannesses are read. Values round-trip bit-exactly,
/// including +inf.
void write_pfm(const std::filesystem::path& p, const ScalarField& f);
ScalarField read_pfm(const std::filesystem::path& p);

/// Color PFM ("PF"), interleaved float32 RGB.
void write_pfm_rgb(const std::filesystem::path& p, const RgbImage& img);
RgbImage read_pfm_rgb(const std::filesystem::path& p);

}  // namespace fogbench::io
