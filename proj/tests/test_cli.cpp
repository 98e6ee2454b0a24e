// End-to-end checks of the qalpha binary. The binary path arrives via the
// QALPHA_CLI_BIN environment variable (set by ctest).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qalpha/qalpha.h"

namespace {

namespace fs = std::filesystem;

std::string cli_bin() {
  const char* bin = std::getenv("QALPHA_CLI_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "QALPHA_CLI_BIN must point at the qalpha binary");
  return bin;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "qalpha_cli_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = cli_bin() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Manifest comparison ignoring the wall-clock line.
std::string strip_wall(const std::string& manifest) {
  std::istringstream in(manifest);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("wall_ms:", 0) != 0) out += line + "\n";
  return out;
}

void write_test_image(const std::string& path, int w = 32, int h = 32) {
  std::vector<double> r(w * h), g(w * h), b(w * h);
  for (int i = 0; i < w * h; ++i) {
    r[i] = (i * 7) % 256;
    g[i] = (i * 11 + 3) % 256;
    b[i] = (i * 5 + 17) % 256;
  }
  r[0] = g[0] = b[0] = 0;
  r[w * h - 1] = g[w * h - 1] = b[w * h - 1] = 255;
  const double* planes[3] = {r.data(), g.data(), b.data()};
  qalpha_image* img = nullptr;
  REQUIRE(qalpha_image_create(w, h, 3, planes, &img) == QALPHA_OK);
  REQUIRE(qalpha_image_save(img, path.c_str()) == QALPHA_OK);
  qalpha_image_free(img);
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("identity enhancement reproduces the input file") {
  TempDir dir;
  write_test_image(dir.file("in.ppm"));
  CHECK(run("enhance " + dir.file("in.ppm") + " " + dir.file("out.ppm") +
            " --method qdft --alpha 1 --beta 0 --lambda 1 --post none") == 0);
  CHECK(slurp(dir.file("in.ppm")) == slurp(dir.file("out.ppm")));
  CHECK(fs::exists(dir.file("out.ppm.manifest.txt")));
  CHECK(fs::exists(dir.file("out.ppm.metrics.csv")));
}

TEST_CASE("exit codes distinguish usage and io failures") {
  TempDir dir;
  write_test_image(dir.file("in.ppm"));
  CHECK(run("enhance") == 1);                                        // missing arguments
  CHECK(run("enhance " + dir.file("nope.ppm") + " " + dir.file("o.ppm")) == 2);  // no input
  CHECK(run("enhance " + dir.file("in.ppm") + " " + dir.file("o.ppm") + " --alpha 7") == 1);
  CHECK(run("nonsense") == 1);
  CHECK(run("--version") == 0);
}

TEST_CASE("channel mode with per-channel parameters") {
  TempDir dir;
  write_test_image(dir.file("in.ppm"));
  CHECK(run("enhance " + dir.file("in.ppm") + " " + dir.file("out.ppm") +
            " --method dft-channel --beta 0.33"
            " --alpha-r 0.74 --lambda-r 0.14 --alpha-g 0.88 --lambda-g 0.30"
            " --alpha-b 0.78 --lambda-b 0.16 --post gamma --gamma 3.51") == 0);
  const std::string manifest = slurp(dir.file("out.ppm.manifest.txt"));
  CHECK(manifest.find("alpha_r: 0.74") != std::string::npos);
  CHECK(manifest.find("lambda_g: 0.3") != std::string::npos);
  CHECK(manifest.find("eme_r:") != std::string::npos);
}

TEST_CASE("histogram emits 256 rows per channel") {
  TempDir dir;
  write_test_image(dir.file("in.ppm"));
  CHECK(run("histogram " + dir.file("in.ppm") + " -o " + dir.file("hist.csv")) == 0);
  const std::string csv = slurp(dir.file("hist.csv"));
  CHECK(csv.rfind("bin,ch1,ch2,ch3\n", 0) == 0);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 257);
}

TEST_CASE("metric scores rasters and rqi files") {
  TempDir dir;
  write_test_image(dir.file("in.ppm"));
  CHECK(run("enhance " + dir.file("in.ppm") + " " + dir.file("out.ppm") +
            " --alpha 0.9 --save-realq " + dir.file("out.rqi")) == 0);
  CHECK(run("metric " + dir.file("in.ppm") + " -o " + dir.file("m1.csv")) == 0);
  CHECK(run("metric " + dir.file("out.rqi") + " -o " + dir.file("m2.csv")) == 0);
  CHECK(slurp(dir.file("m1.csv")).find(",eme,") != std::string::npos);
  CHECK(slurp(dir.file("m2.csv")).find(",ceme,") != std::string::npos);
}

TEST_CASE("sweep writes a stable surface and an argmax") {
  TempDir dir;
  write_test_image(dir.file("in.ppm"));
  const std::string cmd = "sweep " + dir.file("in.ppm") +
                          " --fix lambda=0.58 --vary alpha:0.6:1:0.2 --vary beta:0:0.4:0.2"
                          " --blocks 8x8 -o ";
  CHECK(run(cmd + dir.file("s1.csv") + " --manifest " + dir.file("s1.txt")) == 0);
  CHECK(run(cmd + dir.file("s2.csv") + " --manifest " + dir.file("s2.txt")) == 0);
  CHECK(slurp(dir.file("s1.csv")) == slurp(dir.file("s2.csv")));
  const std::string manifest = slurp(dir.file("s1.txt"));
  CHECK(manifest.find("argmax_metric:") != std::string::npos);
  int lines = 0;
  for (char c : slurp(dir.file("s1.csv")))
    if (c == '\n') ++lines;
  CHECK(lines == 2 + 3 * 3);
}

TEST_CASE("optimize is reproducible for a fixed seed") {
  TempDir dir;
  write_test_image(dir.file("in.ppm"), 16, 16);
  const std::string base = "optimize " + dir.file("in.ppm") +
                           " --pop 8 --gens 4 --seed 7 --blocks 4x4 --log ";
  CHECK(run(base + dir.file("a.csv") + " --manifest " + dir.file("a.txt")) == 0);
  CHECK(run(base + dir.file("b.csv") + " --manifest " + dir.file("b.txt")) == 0);
  CHECK(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
  CHECK(strip_wall(slurp(dir.file("a.txt")))
            .find("rng_seed: 7") != std::string::npos);
  // manifests agree apart from the log/manifest paths and timing
  std::string a = strip_wall(slurp(dir.file("a.txt")));
  std::string b = strip_wall(slurp(dir.file("b.txt")));
  const auto scrub = [&](std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    if (pos != std::string::npos) s.replace(pos, from.size(), to);
    return s;
  };
  a = scrub(a, dir.file("a.csv"), "LOG");
  b = scrub(b, dir.file("b.csv"), "LOG");
  CHECK(a == b);
}

TEST_CASE("compare produces six images plus one csv") {
  TempDir dir;
  write_test_image(dir.file("in.ppm"));
  // an externally produced image dropped into the bundle is scored
  fs::create_directories(dir.file("bundle"));
  write_test_image(dir.file("bundle/retinex.ppm"));
  CHECK(run("compare " + dir.file("in.ppm") + " " + dir.file("bundle") +
            " --alpha 0.9 --beta 0.5 --lambda 0.5 --post gamma --gamma 1.15") == 0);

  int images = 0, csvs = 0;
  for (const auto& entry : fs::directory_iterator(dir.file("bundle"))) {
    const std::string ext = entry.path().extension().string();
    if (ext == ".ppm" || ext == ".png") ++images;
    if (ext == ".csv") ++csvs;
  }
  CHECK(images == 7);  // 6 generated + 1 external
  CHECK(csvs == 1);
  const std::string csv = slurp(dir.file("bundle/metrics.csv"));
  CHECK(csv.find("retinex.ppm,external") != std::string::npos);
  CHECK(csv.find("histeq.ppm,histeq") != std::string::npos);
}

TEST_SUITE_END();
