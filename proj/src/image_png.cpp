#include "uvface/error.hpp"
#include "uvface/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace uvface {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_png(const std::filesystem::path& path, int width, int height, int color_type,
               const std::vector<std::uint8_t>& pixels, int channels) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw IoError("cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw IoError("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw IoError("PNG encoding failed for " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int row = 0; row < height; ++row) {
    auto* ptr = const_cast<png_bytep>(pixels.data() + static_cast<std::size_t>(row) * width * channels);
    png_write_row(png, ptr);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

struct Decoded {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;
};

Decoded read_png(const std::filesystem::path& path, bool keep_gray) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw IoError("cannot open " + path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw CorruptFileError("not a PNG file: " + path.string(), 0);
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("libpng initialization failed");
  }
  Decoded d;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("PNG decoding failed for " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (!keep_gray && (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)) png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  d.width = static_cast<int>(png_get_image_width(png, info));
  d.height = static_cast<int>(png_get_image_height(png, info));
  d.channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  d.pixels.resize(rowbytes * d.height);
  std::vector<png_bytep> rows(d.height);
  for (int r = 0; r < d.height; ++r) rows[r] = d.pixels.data() + rowbytes * r;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return d;
}

}  // namespace

void save_png(const RgbImage& image, const std::filesystem::path& path) {
  std::vector<std::uint8_t> px(image.data.size());
  std::transform(image.data.begin(), image.data.end(), px.begin(), [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  });
  write_png(path, image.width, image.height, PNG_COLOR_TYPE_RGB, px, 3);
}

void save_png(const GrayImage& image, const std::filesystem::path& path) {
  write_png(path, image.width, image.height, PNG_COLOR_TYPE_GRAY, image.data, 1);
}

RgbImage load_png_rgb(const std::filesystem::path& path) {
  const Decoded d = read_png(path, false);
  if (d.channels != 3) throw CorruptFileError("unsupported PNG channel layout in " + path.string(), 0);
  RgbImage img(d.height, d.width);
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = d.pixels[i] / 255.0;
  return img;
}

GrayImage load_png_gray(const std::filesystem::path& path) {
  const Decoded d = read_png(path, true);
  if (d.channels != 1) throw InvalidArgument("expected a single-channel PNG: " + path.string());
  GrayImage img(d.height, d.width);
  img.data = d.pixels;
  return img;
}

}  // namespace uvface
