// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "support.hpp"
#include "tjp/cli.hpp"
#include "tjp/corpus_io.hpp"
#include "tjp/deformation.hpp"
#include "tjp/error.hpp"
#include "tjp/lowres.hpp"
#include "tjp/masking.hpp"
#include "tjp/metrics.hpp"
#include "tjp/noising.hpp"
#include "tjp/pipeline.hpp"
#include "tjp/sampler.hpp"

using namespace tjp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) { return format_number(v); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<fs::path> tree(const fs::path& root) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out.push_back(fs::relative(e.path(), root));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = dispatch(args, o, e);
  if (out) *out = o.str();
  if (code != 0) std::cerr << e.str();
  return code;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Shared with the I/O criterion: the pipeline output of the determinism run.
fs::path g_pipeline_manifest;

Outcome determinism(const testing::TempDir& dir) {
  const fs::path vol = dir / "synthetic128.npy";
  write_array(synthetic_volume(Shape{128, 128, 128}, 2024), vol);
  std::ofstream(dir / "run.json") << R"({"scales": [1.0, 0.5, 0.25], "counts": [60, 30, 10], "window": [32, 32, 32]})";

  double worst = 0;
  for (const std::string run : {"run1", "run2"}) {
    const auto t0 = std::chrono::steady_clock::now();
    const int code = cli({"pipeline", "--source", vol.string(), "--config", (dir / "run.json").string(), "--out",
                          (dir / run).string(), "--seed", "42", "--jobs", "4"});
    worst = std::max(worst, seconds_since(t0));
    if (code != 0) return {false, run + " exited " + std::to_string(code)};
  }
  const auto a = tree(dir / "run1"), b = tree(dir / "run2");
  if (a != b) return {false, "file lists differ"};
  std::size_t differing = 0;
  for (const auto& f : a) differing += slurp(dir / "run1" / f) != slurp(dir / "run2" / f);
  const CorpusManifest m = read_manifest(dir / "run1" / "manifest.json");
  g_pipeline_manifest = dir / "run1" / "manifest.json";
  const bool ok = differing == 0 && m.patches.size() == 100 && worst < 60.0;
  return {ok, std::to_string(m.patches.size()) + " patches, " + std::to_string(a.size()) + " files, " +
                  std::to_string(differing) + " differ, slowest run " + fmt(std::round(worst * 10) / 10) + " s (< 60)"};
}

Outcome pyramid() {
  const auto levels = multiscale_resize(testing::random_grid(Shape{64, 64}, 1), {1.0, 0.5, 0.25});
  const bool ok = levels.size() == 3 && levels[0].shape() == Shape{64, 64} && levels[1].shape() == Shape{32, 32} &&
                  levels[2].shape() == Shape{16, 16};
  std::string d;
  for (const auto& l : levels) d += l.shape().to_string() + " ";
  return {ok, d + "(expected 64/32/16)"};
}

Outcome mask_statistics() {
  const DegradationConfig cfg;  // mask_ratio 0.5, cell 4
  const Grid x(Shape{256, 256}, 1.0f);  // 64 x 64 lattice
  double worst_vis = 0, worst_both = 0;
  int invariant = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DualMaskResult r = dual_mask(x, cfg, RngStream(seed, "mask", 0));
    if (!(r.pair.lattice_a.shape() == Shape{64, 64})) return {false, "lattice is not 64x64"};
    const double n = 4096.0;
    double va = 0, vb = 0, both = 0;
    for (std::size_t i = 0; i < r.pair.lattice_a.size(); ++i) {
      va += r.pair.lattice_a[i];
      vb += r.pair.lattice_b[i];
      both += r.pair.lattice_a[i] == 0.0f && r.pair.lattice_b[i] == 0.0f;
    }
    worst_vis = std::max({worst_vis, std::abs(va / n - 0.5), std::abs(vb / n - 0.5)});
    worst_both = std::max(worst_both, std::abs(both / n - 0.25));
    invariant += both > 0 && r.pair.jointly_hidden() == static_cast<std::size_t>(both);
  }
  const bool ok = worst_vis <= 0.03 && worst_both <= 0.03 && invariant == 100;
  return {ok, "max |visible - 0.5| " + fmt(worst_vis) + ", max |both - 0.25| " + fmt(worst_both) + ", invariant " +
                  std::to_string(invariant) + "/100"};
}

Outcome displacement_bound() {
  const DegradationConfig cfg;
  double worst = 0;
  int violations = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Shape s = seed % 2 ? Shape{32, 32, 32} : Shape{64, 64};
    const DeformationField f = deformation_field(s, cfg, RngStream(seed, "deform", 0));
    for (const Grid& c : f.comp) {
      for (float v : c.data()) {
        worst = std::max(worst, std::abs(static_cast<double>(v)));
        violations += std::abs(static_cast<double>(v)) > 0.6;
      }
    }
  }
  return {violations == 0, "max |phi| " + fmt(worst) + ", violations " + std::to_string(violations)};
}

Outcome smoothness() {
  DegradationConfig smooth, rough;
  rough.flow_smoothing = false;
  auto wins_at = [&](const Shape& s) {
    int wins = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const double a = sdlogj(deformation_field(s, smooth, RngStream(seed, "deform", 0))).first;
      const double b = sdlogj(deformation_field(s, rough, RngStream(seed, "deform", 0))).first;
      wins += a < b;
    }
    return wins;
  };
  // Fields are drawn at patch extent; gate on the default sampling window in 2D and 3D.
  const auto window = SamplePlan{}.window;
  const Shape w2{std::span<const std::size_t>(window)};
  const Shape w3{window[0], window[0], window[0]};
  const int wins2 = wins_at(w2), wins3 = wins_at(w3), wins64 = wins_at(Shape{64, 64});
  const int wins = std::min(wins2, wins3);
  const auto zero = sdlogj(zero_field(Shape{24, 24, 24}));
  // phi(x) = 1.1 x about the centre, displacements stored in normalized units.
  bool exact = zero.first == 0.0 && zero.second == 0.0;
  for (const Shape& s : {Shape{24, 24}, Shape{24, 24, 24}}) {
    DeformationField f = zero_field(s);
    const auto st = s.strides();
    for (std::size_t a = 0; a < s.rank(); ++a) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double c = static_cast<double>((i / st[a]) % s[a]);
        const double cells = 0.1 * (c - static_cast<double>(s[a] - 1) / 2.0);
        f.comp[a][i] = static_cast<float>(cells / (static_cast<double>(s[a]) * 0.5));
      }
    }
    const auto r = sdlogj(f);
    exact = exact && r.first == 0.0 && r.second == 0.0;
  }
  return {wins >= 19 && exact, std::to_string(wins2) + "/20 seeds smoother at " + w2.to_string() + ", " +
                                   std::to_string(wins3) + "/20 at " + w3.to_string() + " (64x64: " +
                                   std::to_string(wins64) + "/20, not gating), zero and uniform-scaling exact: " +
                                   (exact ? "yes" : "no")};
}

Outcome warp_identity() {
  double worst = 0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Shape s = seed % 2 ? Shape{32, 32, 32} : Shape{64, 64};
    const Grid x = testing::random_grid(s, seed);
    const Grid y = warp(x, zero_field(s));
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(static_cast<double>(y[i]) - x[i]));
  }
  return {worst <= 1e-6, "max abs error " + fmt(worst) + " (<= 1e-6) over 20 patches"};
}

Outcome lowres_monotonicity() {
  DegradationConfig lo, hi;
  lo.down_noise_range = hi.down_noise_range = {0.0, 0.0};
  lo.down_scale_range = {0.25, 0.25};
  hi.down_scale_range = {0.75, 0.75};
  const Grid img = synthetic_volume(Shape{128, 128}, 7);
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RngStream rng(seed, "lowres", 0);
    wins += psnr(img, degrade_lowres(img, hi, rng).image, 1.0) > psnr(img, degrade_lowres(img, lo, rng).image, 1.0);
  }
  return {wins >= 8, std::to_string(wins) + "/10 seeds with PSNR(s=0.75) > PSNR(s=0.25)"};
}

Outcome noise_stages() {
  DegradationConfig off;
  off.gauss_noise_range = {0.0, 0.0};
  off.poisson_peak = 0.0;
  off.sp_amount_range = {0.0, 0.0};
  const Grid x = testing::random_grid(Shape{64, 64, 16}, 5);
  const bool identity = bit_equal(degrade_noise(x, off, RngStream(1, "noise", 0)).image, x);

  DegradationConfig sp = off;
  sp.sp_amount_range = {0.01, 0.05};
  bool exact = true;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Grid y = testing::random_grid(Shape{128, 128}, static_cast<unsigned>(seed), 0.01f, 0.99f);
    const NoiseResult r = degrade_noise(y, sp, RngStream(seed, "noise", 0));
    std::size_t altered = 0;
    for (std::size_t i = 0; i < y.size(); ++i) altered += r.image[i] != y[i];
    exact = exact && altered == static_cast<std::size_t>(std::llround(r.params.sp_amount * static_cast<double>(y.size())));
  }

  DegradationConfig po = off;
  po.poisson_peak = 255.0;
  const NoiseResult p = degrade_noise(Grid(Shape{250, 400}, 0.5f), po, RngStream(3, "noise", 0));
  double sum = 0, sq = 0;
  for (float v : p.image.data()) {
    sum += v;
    sq += static_cast<double>(v) * v;
  }
  const double n = 1e5, mean = sum / n, var = sq / n - mean * mean;
  const double rel = var / (0.5 / 255.0) - 1.0;
  const bool ok = identity && exact && std::abs(mean - 0.5) <= 0.005 && std::abs(rel) <= 0.2;
  return {ok, std::string("identity ") + (identity ? "yes" : "no") + ", s&p counts exact " + (exact ? "yes" : "no") +
                  ", poisson mean " + fmt(mean) + ", variance ratio " + fmt(1.0 + rel)};
}

Outcome metric_oracles() {
  std::vector<std::string> fails;
  const double p20 = psnr(Grid(Shape{16, 16}, 2.0f), Grid(Shape{16, 16}, 2.5f), 5.0);
  const float a = 0.5f, b = 0.6f;
  const double d = static_cast<double>(b) - static_cast<double>(a);
  const double p01 = psnr(Grid(Shape{16, 16}, a), Grid(Shape{16, 16}, b), 1.0);
  const double p0 = psnr(Grid(Shape{16, 16}, 0.0f), Grid(Shape{16, 16}, 1.0f), 1.0);
  if (std::abs(p20 - 20.0) > 1e-9) fails.push_back("psnr 20");
  if (std::abs(p01 - 10.0 * std::log10(1.0 / (d * d))) > 1e-9) fails.push_back("psnr 0.1");
  if (std::abs(p0) > 1e-9) fails.push_back("psnr 0");

  const Grid x = testing::random_grid(Shape{48, 48}, 11);
  const double self = ssim(x, x, 1.0);
  const double pair = ssim(Grid(Shape{32, 32}, 0.5f), Grid(Shape{32, 32}, 0.6f), 1.0);
  if (std::abs(self - 1.0) > 1e-9) fails.push_back("ssim self");
  if (std::abs(pair - 0.98361) > 1e-4) fails.push_back("ssim pair");

  std::mt19937 gen(2718);
  int fixtures = 0, mismatches = 0;
  for (const Shape& s : {Shape{8, 8}, Shape{16, 16}, Shape{5, 13}, Shape{8, 8, 8}, Shape{16, 16, 16}, Shape{7, 16, 3}}) {
    for (int rep = 0; rep < 5; ++rep) {
      const LabelGrid la = oracle::random_labels(s, gen), lb = oracle::random_labels(s, gen);
      for (std::uint32_t label = 1; label <= 3; ++label) {
        const bool in_a = std::count(la.data().begin(), la.data().end(), label) > 0;
        const bool in_b = std::count(lb.data().begin(), lb.data().end(), label) > 0;
        if (!in_a || !in_b) continue;
        ++fixtures;
        mismatches += dice(la, lb, label) != oracle::oracle_dice(la, lb, label);
        mismatches += hd95(la, lb, label) != oracle::oracle_hd95(la, lb, label, {1.0, 1.0, 1.0});
      }
    }
  }
  if (mismatches) fails.push_back("dice/hd95");

  const Grid g = grid_image(Shape{12, 12}, 4, 1);
  double on = 0;
  for (float v : g.data()) on += v;
  const double frac = on / 144.0;
  if (frac != 0.4375) fails.push_back("grid_image");

  std::string d2 = "psnr " + fmt(p20) + "/" + fmt(p0) + " dB, ssim self " + fmt(self) + ", pair " + fmt(pair) + ", " +
                   std::to_string(fixtures) + " dice/hd95 fixtures with " + std::to_string(mismatches) +
                   " mismatches, grid fraction " + fmt(frac);
  for (const auto& f : fails) d2 += "; failed " + f;
  return {fails.empty(), d2};
}

// numpy.save(np.arange(6, dtype='<f4').reshape(2, 3))
const char* kGoldenHex =
    "934e554d5059010076007b276465736372273a20273c6634272c2027666f727472616e5f6f72646572273a2046616c73652c20277368"
    "617065273a2028322c2033292c207d202020202020202020202020202020202020202020202020202020202020202020202020202020"
    "202020202020202020202020202020202020200a000000000000803f0000004000004040000080400000a040";

Outcome io() {
  std::mt19937 gen(31337);
  std::uniform_int_distribution<std::size_t> rank(2, 3), extent(1, 16);
  std::uniform_int_distribution<std::uint32_t> bits;
  int exact = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<std::size_t> dims(rank(gen));
    for (auto& v : dims) v = extent(gen);
    Grid g{Shape(std::span<const std::size_t>(dims))};
    for (float& v : g.data()) {
      const std::uint32_t w = bits(gen);
      std::memcpy(&v, &w, 4);
    }
    const Grid back = decode_array(encode_array(g));
    exact += back.shape() == g.shape() && std::memcmp(back.data().data(), g.data().data(), g.size() * 4) == 0;
  }

  Grid ar(Shape{2, 3});
  for (std::size_t i = 0; i < 6; ++i) ar[i] = static_cast<float>(i);
  const auto bytes = encode_array(ar);
  std::string hex;
  char buf[3];
  for (auto byte : bytes) {
    std::snprintf(buf, sizeof buf, "%02x", byte);
    hex += buf;
  }
  const bool golden = hex == kGoldenHex;

  std::string report;
  bool verified = false;
  if (!g_pipeline_manifest.empty()) {
    const int code = cli({"verify", "--manifest", g_pipeline_manifest.string(), "--jobs", "4"}, &report);
    verified = code == 0 && report.find("FAIL") == std::string::npos;
  }
  const std::string summary = report.empty() ? "no pipeline output" : report.substr(report.rfind("verify:") + 8);
  return {exact == 1000 && golden && verified, std::to_string(exact) + "/1000 round-trips exact, golden bytes " +
                                                   (golden ? "match" : "differ") + ", verify " +
                                                   summary.substr(0, summary.find('\n'))};
}

}  // namespace

int main() {
  testing::TempDir dir("acceptance");
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"determinism", [&] { return determinism(dir); }},
      {"pyramid sizes", pyramid},
      {"mask statistics", mask_statistics},
      {"displacement bound", displacement_bound},
      {"smoothness", smoothness},
      {"warp identity", warp_identity},
      {"low-res monotonicity", lowres_monotonicity},
      {"noise stages", noise_stages},
      {"metric oracles", metric_oracles},
      {"I/O", io},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed ? 1 : 0;
}
