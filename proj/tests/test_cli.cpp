#include <doctest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "tjp/cli.hpp"
#include "tjp/corpus_io.hpp"

using namespace tjp;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

bool same_tree(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::vector<std::filesystem::path> fa, fb;
  for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
    if (e.is_regular_file()) fa.push_back(std::filesystem::relative(e.path(), a));
  }
  for (const auto& e : std::filesystem::recursive_directory_iterator(b)) {
    if (e.is_regular_file()) fb.push_back(std::filesystem::relative(e.path(), b));
  }
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb || fa.empty()) return false;
  for (const auto& f : fa) {
    if (slurp(a / f) != slurp(b / f)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(20.0) == "20.0");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e300) == "1e+300");
  CHECK(format_number(1.0 / 0.0) == "inf");
}

TEST_CASE("usage errors exit 2 with usage text") {
  Run r = run({"frobnicate"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("Usage") != std::string::npos);

  r = run({});
  CHECK(r.code == kExitUsage);

  r = run({"sample", "--source", "x.npy", "--out", "o"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("--seed") != std::string::npos);

  r = run({"degrade", "--task", "blur", "--in", "x.npy", "--seed", "1", "--out", "o"});
  CHECK(r.code == kExitUsage);

  r = run({"metrics", "q_abf", "a.npy", "b.npy"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("not supported") != std::string::npos);

  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("metrics subcommand matches the library") {
  testing::TempDir dir("cli_metrics");
  write_array(Grid(Shape{6, 7}, 2.0f), dir / "a.npy");
  write_array(Grid(Shape{6, 7}, 2.5f), dir / "b.npy");
  Run r = run({"metrics", "psnr", (dir / "a.npy").string(), (dir / "b.npy").string(), "--max", "5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "20.0\n");
  r = run({"metrics", "psnr", (dir / "a.npy").string(), (dir / "a.npy").string()});
  CHECK(r.out == "inf\n");
  r = run({"metrics", "ssim", (dir / "a.npy").string(), (dir / "a.npy").string(), "--max", "5"});
  CHECK(r.out == "1.0\n");

  Grid la(Shape{4, 4}, 0.0f), lb(Shape{4, 4}, 0.0f);
  for (std::size_t i : {0, 1, 2, 3}) la[i] = 1.0f;
  for (std::size_t i : {2, 3, 4, 5}) lb[i] = 1.0f;
  write_array(la, dir / "la.npy");
  write_array(lb, dir / "lb.npy");
  r = run({"metrics", "dice", (dir / "la.npy").string(), (dir / "lb.npy").string(), "--label", "1"});
  CHECK(r.out == "0.5\n");
  r = run({"metrics", "dice", (dir / "la.npy").string(), (dir / "lb.npy").string(), "--label", "4"});
  CHECK(r.code == kExitRuntime);
  CHECK(r.err.find("undefined metric") != std::string::npos);

  write_array(Grid(Shape{8, 8}, 0.0f), dir / "f0.npy");
  write_array(Grid(Shape{8, 8}, 0.0f), dir / "f1.npy");
  r = run({"metrics", "sdlogj", (dir / "f0.npy").string(), (dir / "f1.npy").string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "0.0 0.0\n");

  r = run({"metrics", "psnr", (dir / "missing.npy").string(), (dir / "a.npy").string()});
  CHECK(r.code == kExitRuntime);
}

TEST_CASE("pipeline output is reproducible and verifies") {
  testing::TempDir dir("cli_pipeline");
  REQUIRE(run({"synth", "--shape", "24", "24", "24", "--seed", "3", "--out", (dir / "vol.npy").string()}).code == 0);
  std::ofstream(dir / "cfg.json") << R"({"scales": [1.0, 0.5], "counts": [2, 1], "window": [8, 8, 8]})";

  const auto pipeline = [&](const std::string& out, const std::string& jobs) {
    return run({"pipeline", "--source", (dir / "vol.npy").string(), "--config", (dir / "cfg.json").string(), "--out",
                (dir / out).string(), "--seed", "42", "--jobs", jobs});
  };
  REQUIRE(pipeline("a", "1").code == kExitOk);
  REQUIRE(pipeline("b", "2").code == kExitOk);
  CHECK(same_tree(dir / "a", dir / "b"));
  CHECK(std::filesystem::exists(dir / "a" / "patches" / "p000000_deform_warped.npy"));

  Run v = run({"verify", "--manifest", (dir / "a" / "manifest.json").string()});
  CHECK(v.code == kExitOk);
  CHECK(v.out.find("FAIL") == std::string::npos);
  CHECK(v.out.find("PASS verify") != std::string::npos);

  // Corrupting one output is detected.
  write_array(Grid(Shape{8, 8, 8}, 0.0f), dir / "a" / "patches" / "p000001_noise_noisy.npy");
  v = run({"verify", "--manifest", (dir / "a" / "manifest.json").string()});
  CHECK(v.code == kExitRuntime);
  CHECK(v.out.find("FAIL p000001") != std::string::npos);

  std::ofstream(dir / "bad.json") << R"({"window": [8, 8, 8], "mask_ration": 0.5})";
  Run bad = run({"sample", "--source", (dir / "vol.npy").string(), "--config", (dir / "bad.json").string(), "--out",
                 (dir / "c").string(), "--seed", "1"});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("mask_ration") != std::string::npos);
}

TEST_CASE("degrade writes params and a verifiable manifest") {
  testing::TempDir dir("cli_degrade");
  REQUIRE(run({"synth", "--shape", "20", "18", "--seed", "5", "--out", (dir / "img.npy").string()}).code == 0);
  for (const std::string task : {"mask", "deform", "lowres", "noise"}) {
    const auto out = dir / task;
    const Run r = run({"degrade", "--task", task, "--in", (dir / "img.npy").string(), "--seed", "9", "--out", out.string()});
    REQUIRE(r.code == kExitOk);
    CHECK(std::filesystem::exists(out / "params.json"));
    CHECK(run({"verify", "--manifest", (out / "manifest.json").string()}).code == kExitOk);
  }
}
