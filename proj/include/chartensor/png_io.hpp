#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chartensor/image.hpp"

namespace chartensor {

/// Reads an 8-bit (or 16-bit, downscaled) grey, grey+alpha, RGB or RGBA PNG.
/// Alpha is composited over white. Throws Error(kIo) on failure.
ColorImage read_png(const std::string& path);

void write_png(const std::string& path, const RgbImage& image);
void write_png(const std::string& path, const GrayImage& image);

/// In-memory encode; deterministic (no time chunk, fixed compression).
std::vector<std::uint8_t> encode_png(const RgbImage& image);
std::vector<std::uint8_t> encode_png(const GrayImage& image);
ColorImage decode_png(const std::vector<std::uint8_t>& bytes);

}  // namespace chartensor
