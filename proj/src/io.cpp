#include "io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "error.hpp"
#include "png_io.hpp"
#include "ppm.hpp"

namespace qalpha {

namespace {

std::string lower_ext(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

void write_plane(std::ofstream& out, const Plane& p) {
  out.write(reinterpret_cast<const char*>(p.data()),
            static_cast<std::streamsize>(p.size() * sizeof(double)));
}

void read_plane(std::ifstream& in, Plane& p, const std::string& path) {
  in.read(reinterpret_cast<char*>(p.data()),
          static_cast<std::streamsize>(p.size() * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != p.size() * sizeof(double))
    fail_io(path + " is truncated");
}

}  // namespace

RasterImage load_image(const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "ppm" || ext == "pnm") return read_ppm(path);
  if (ext == "png") return read_png(path);
  fail_io("unsupported image format '" + ext + "' for " + path);
}

void save_image(const RasterImage& img, const std::string& path) {
  const std::string ext = lower_ext(path);
  if (ext == "ppm" || ext == "pnm") return write_ppm(img, path);
  if (ext == "png") return write_png(img, path);
  fail_io("unsupported image format '" + ext + "' for " + path);
}

RealQImage read_rqi(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_io("cannot open " + path);
  std::string magic;
  std::getline(in, magic);
  if (magic != "RQI1") fail_io(path + " is not an RQI file");
  int w = 0, h = 0;
  in >> w >> h;
  in.get();  // newline after the dimensions
  if (!in || w <= 0 || h <= 0) fail_io("invalid RQI header in " + path);
  RealQImage q = RealQImage::create(w, h);
  read_plane(in, q.e, path);
  read_plane(in, q.r, path);
  read_plane(in, q.g, path);
  read_plane(in, q.b, path);
  return q;
}

void write_rqi(const RealQImage& q, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_io("cannot write " + path);
  out << "RQI1\n" << q.width << ' ' << q.height << '\n';
  write_plane(out, q.e);
  write_plane(out, q.r);
  write_plane(out, q.g);
  write_plane(out, q.b);
  if (!out) fail_io("write failed for " + path);
}

}  // namespace qalpha
