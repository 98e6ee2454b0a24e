#include "png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

#include "error.hpp"

namespace qalpha {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

RasterImage read_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) fail_io("cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail_io("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail_io("libpng init failed");
  }
  std::vector<png_bytep> row_ptrs;
  std::vector<png_byte> data;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail_io("failed to decode " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  png_set_strip_16(png);
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  png_set_gray_to_rgb(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  data.resize(stride * h);
  row_ptrs.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = data.data() + y * stride;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  RasterImage img = RasterImage::create(static_cast<int>(w), static_cast<int>(h), 3);
  for (png_uint_32 y = 0; y < h; ++y) {
    const png_byte* row = data.data() + y * stride;
    for (png_uint_32 x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      img.planes[0][i] = row[3 * x];
      img.planes[1][i] = row[3 * x + 1];
      img.planes[2][i] = row[3 * x + 2];
    }
  }
  return img;
}

void write_png(const RasterImage& img, const std::string& path) {
  if (img.channels() != 3) fail_arg("PNG output needs a 3-channel image");
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) fail_io("cannot write " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) fail_io("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail_io("libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail_io("failed to encode " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  const std::vector<std::uint8_t> bytes = quantize8(img);
  std::vector<png_bytep> row_ptrs(img.height);
  for (int y = 0; y < img.height; ++y)
    row_ptrs[y] = const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * img.width * 3);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace qalpha
