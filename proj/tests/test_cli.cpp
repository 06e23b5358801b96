#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli_cases.hpp"
#include "mlkit/cli.hpp"
#include "mlkit/errors.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kTests{MLKIT_TEST_DIR};

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("mlkit-test-" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

int run(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "--no-cache");
  std::ostringstream out, err;
  const int code = mlkit::run_cli(args, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

std::string data(const char* name) { return (kTests / "data" / name).string(); }

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({"--spec", data("curve_0_-2.json"), "curve-info"}) == 0);
  CHECK(run({"--spec", data("singular.json"), "curve-info"}) == 2);
  CHECK(run({"--spec", data("curve_0_-2.json"), "point", "add", "(1, 1)", "O"}) == 2);
  CHECK(run({"--spec", data("curve_0_-2.json"), "eval", "--formula", "(< x1"}) == 2);
  CHECK(run({"--spec", data("curve_0_-2.json"), "no-such-command"}) == 2);
  CHECK(run({"--ceiling", "10", "--spec", data("curve_0_-2.json"), "coset", "dke", "--k", "1,1,1", "--e", "4"}) == 3);
  CHECK(run({"--help"}) == 0);
}

TEST_CASE("group spec files") {
  using mlkit::GroupSpecFile;
  const auto spec = GroupSpecFile::parse(R"({"backend":"curve","a":"0","b":"-2","generators":[["3","5"]],"rank":1})");
  CHECK(spec.generators.size() == 1);
  CHECK_THROWS_AS(GroupSpecFile::parse(R"({"backend":"curve","a":"0","b":"-4/2","generators":[]})"), mlkit::InputError);
  CHECK_THROWS_AS(GroupSpecFile::parse(R"({"backend":"torus"})"), mlkit::InputError);
  CHECK_THROWS_AS(GroupSpecFile::parse("not json"), mlkit::InputError);
  CHECK_THROWS_AS(GroupSpecFile::parse(R"({"backend":"curve","a":"0","b":"-2","generators":[["3","4"]]})"),
                  mlkit::InputError);
}

TEST_CASE("point cache round trip") {
  TempDir dir;
  const mlkit::PointCache cache(dir.path);
  const auto backend = mlkit::GroupBackend::curve(0, -2);
  CHECK_FALSE(cache.load(backend, 50));
  const auto pts = cache.points(backend, 50);
  CHECK(fs::exists(cache.entry_path(backend, 50)));
  REQUIRE(cache.load(backend, 50));
  CHECK(*cache.load(backend, 50) == pts);
  // A tampered entry is rejected and rebuilt.
  {
    std::ofstream f(cache.entry_path(backend, 50), std::ios::trunc);
    f << R"({"points":[["1","1"]]})";
  }
  CHECK_FALSE(cache.load(backend, 50));
  CHECK(cache.points(backend, 50) == pts);
}

TEST_CASE("golden transcripts, with and without the cache") {
  const bool update = std::getenv("MLKIT_UPDATE_GOLDEN") != nullptr;
  TempDir dir;
  for (const auto& c : golden::cases()) {
    CAPTURE(c.name);
    const fs::path file = kTests / "golden" / (std::string(c.name) + ".txt");
    const auto plain = golden::run(c, kTests / "data", {"--no-cache"});
    if (update) {
      std::ofstream(file, std::ios::binary) << plain.transcript();
    }
    const std::string expected = golden::read_file(file);
    CHECK(plain.transcript() == expected);
    const auto cold = golden::run(c, kTests / "data", {"--cache-dir", dir.path.string()});
    const auto warm = golden::run(c, kTests / "data", {"--cache-dir", dir.path.string()});
    CHECK(cold.transcript() == expected);
    CHECK(warm.transcript() == expected);
  }
}
