// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sripipe {

struct Gray16Image {
  int width = 0;
  int height = 0;
  std::vector<uint16_t> pixels;  // row-major
};

struct Rgb8Image {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> pixels;  // row-major, interleaved RGB
};

// Rejects anything that is not single-channel 16-bit grayscale (BadEncoding).
Gray16Image read_png_gray16(const std::filesystem::path& path);
void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      std::span<const uint16_t> pixels);

// Rejects anything that is not 8-bit RGB (BadEncoding).
Rgb8Image read_png_rgb8(const std::filesystem::path& path);
void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    std::span<const uint8_t> pixels);

}  // namespace sripipe
