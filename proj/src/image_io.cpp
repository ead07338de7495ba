// SPDX-License-Identifier: Apache-2.0
#include "sripipe/image_io.hpp"

#include <png.h>

#include <bit>
#include <cstdio>
#include <csetjmp>
#include <memory>

#include "sripipe/errors.hpp"

namespace sripipe {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngReader() {
    png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                 nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  PngWriter() {
    png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                  nullptr);
    if (png) info = png_create_info_struct(png);
  }
  ~PngWriter() { png_destroy_write_struct(&png, &info); }
};

void check_signature(std::FILE* fp, const std::filesystem::path& path) {
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fp) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    fail(Errc::bad_encoding, path.string() + " is not a PNG file");
  std::rewind(fp);
}

}  // namespace

Gray16Image read_png_gray16(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) fail(Errc::io, "cannot open " + path.string());
  check_signature(fp.get(), path);

  Gray16Image img;
  std::vector<png_bytep> rows;
  PngReader r;
  if (!r.png || !r.info) fail(Errc::io, "libpng allocation failed");
  if (setjmp(png_jmpbuf(r.png)))
    fail(Errc::bad_encoding, "corrupt PNG: " + path.string());

  png_init_io(r.png, fp.get());
  png_read_info(r.png, r.info);

  const png_uint_32 w = png_get_image_width(r.png, r.info);
  const png_uint_32 h = png_get_image_height(r.png, r.info);
  const int depth = png_get_bit_depth(r.png, r.info);
  const int color = png_get_color_type(r.png, r.info);
  if (color != PNG_COLOR_TYPE_GRAY || depth != 16)
    fail(Errc::bad_encoding,
         path.string() + " is not 16-bit single-channel grayscale");

  if constexpr (std::endian::native == std::endian::little)
    png_set_swap(r.png);

  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.pixels.resize(static_cast<std::size_t>(w) * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = reinterpret_cast<png_bytep>(img.pixels.data() +
                                          static_cast<std::size_t>(y) * w);
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

void write_png_gray16(const std::filesystem::path& path, int width, int height,
                      std::span<const uint16_t> pixels) {
  if (width <= 0 || height <= 0 ||
      pixels.size() != static_cast<std::size_t>(width) * height)
    fail(Errc::dimension_mismatch, "pixel buffer does not match dimensions");
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) fail(Errc::io, "cannot write " + path.string());

  std::vector<png_bytep> rows(height);
  PngWriter wtr;
  if (!wtr.png || !wtr.info) fail(Errc::io, "libpng allocation failed");
  if (setjmp(png_jmpbuf(wtr.png)))
    fail(Errc::io, "PNG write failed: " + path.string());

  png_init_io(wtr.png, fp.get());
  png_set_IHDR(wtr.png, wtr.info, width, height, 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wtr.png, wtr.info);
  if constexpr (std::endian::native == std::endian::little)
    png_set_swap(wtr.png);
  for (int y = 0; y < height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(
        const_cast<uint16_t*>(pixels.data() + static_cast<std::size_t>(y) * width));
  png_write_image(wtr.png, rows.data());
  png_write_end(wtr.png, nullptr);
}

Rgb8Image read_png_rgb8(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) fail(Errc::io, "cannot open " + path.string());
  check_signature(fp.get(), path);

  Rgb8Image img;
  std::vector<png_bytep> rows;
  PngReader r;
  if (!r.png || !r.info) fail(Errc::io, "libpng allocation failed");
  if (setjmp(png_jmpbuf(r.png)))
    fail(Errc::bad_encoding, "corrupt PNG: " + path.string());

  png_init_io(r.png, fp.get());
  png_read_info(r.png, r.info);
  const png_uint_32 w = png_get_image_width(r.png, r.info);
  const png_uint_32 h = png_get_image_height(r.png, r.info);
  if (png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_RGB ||
      png_get_bit_depth(r.png, r.info) != 8)
    fail(Errc::bad_encoding, path.string() + " is not 8-bit RGB");

  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.pixels.resize(static_cast<std::size_t>(w) * h * 3);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = img.pixels.data() + static_cast<std::size_t>(y) * w * 3;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    std::span<const uint8_t> pixels) {
  if (width <= 0 || height <= 0 ||
      pixels.size() != static_cast<std::size_t>(width) * height * 3)
    fail(Errc::dimension_mismatch, "pixel buffer does not match dimensions");
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) fail(Errc::io, "cannot write " + path.string());

  std::vector<png_bytep> rows(height);
  PngWriter wtr;
  if (!wtr.png || !wtr.info) fail(Errc::io, "libpng allocation failed");
  if (setjmp(png_jmpbuf(wtr.png)))
    fail(Errc::io, "PNG write failed: " + path.string());

  png_init_io(wtr.png, fp.get());
  png_set_IHDR(wtr.png, wtr.info, width, height, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wtr.png, wtr.info);
  for (int y = 0; y < height; ++y)
    rows[y] = const_cast<png_bytep>(pixels.data() +
                                    static_cast<std::size_t>(y) * width * 3);
  png_write_image(wtr.png, rows.data());
  png_write_end(wtr.png, nullptr);
}

}  // namespace sripipe
