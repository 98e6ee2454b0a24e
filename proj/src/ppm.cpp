#include "ppm.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <vector>

#include "error.hpp"

namespace qalpha {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) continue;
    tok.push_back(static_cast<char>(c));
    while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
      tok.push_back(static_cast<char>(in.get()));
    return tok;
  }
  return tok;
}

long parse_positive(const std::string& tok, const std::string& what, const std::string& path) {
  if (tok.empty()) fail_io("truncated PPM header in " + path);
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end == tok.c_str() || *end != '\0' || v <= 0)
    fail_io("invalid " + what + " '" + tok + "' in " + path);
  return v;
}

}  // namespace

RasterImage read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open " + path);
  if (next_token(in) != "P6") fail_io(path + " is not a binary PPM (P6)");
  const long w = parse_positive(next_token(in), "width", path);
  const long h = parse_positive(next_token(in), "height", path);
  const long maxval = parse_positive(next_token(in), "maxval", path);
  if (maxval != 255) fail_io(path + " has maxval " + std::to_string(maxval) + "; only 255 is supported");
  // Exactly one whitespace byte separates the header from the raster.
  in.get();

  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<std::uint8_t> raw(n * 3);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) fail_io(path + " is truncated");

  RasterImage img = RasterImage::create(static_cast<int>(w), static_cast<int>(h), 3);
  for (std::size_t i = 0; i < n; ++i) {
    img.planes[0][i] = raw[3 * i];
    img.planes[1][i] = raw[3 * i + 1];
    img.planes[2][i] = raw[3 * i + 2];
  }
  return img;
}

void write_ppm(const RasterImage& img, const std::string& path) {
  if (img.channels() != 3) fail_arg("PPM output needs a 3-channel image");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write " + path);
  out << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  const std::vector<std::uint8_t> bytes = quantize8(img);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail_io("write failed for " + path);
}

}  // namespace qalpha
