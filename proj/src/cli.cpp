#include "tjp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

#include <CLI11.hpp>

#include "tjp/corpus_io.hpp"
#include "tjp/deformation.hpp"
#include "tjp/error.hpp"
#include "tjp/metrics.hpp"
#include "tjp/pipeline.hpp"

namespace tjp {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace {

struct Options {
  std::string source, config, out, in, task, manifest, metric;
  std::vector<std::string> files;
  std::uint64_t seed = 0;
  unsigned jobs = 0;
  std::optional<std::uint32_t> label;
  double max_val = 1.0;
  std::vector<std::size_t> shape;
};

RunConfig config_or_default(const std::string& path) { return path.empty() ? RunConfig{} : load_run_config(path); }

int run_sample(const Options& o, bool with_tasks, std::ostream& out) {
  RunConfig rc = config_or_default(o.config);
  rc.plan.master_seed = o.seed;
  const LoadedSource src = load_source(o.source);
  GenerateOptions g;
  g.jobs = o.jobs;
  if (with_tasks) g.tasks.assign(std::begin(kAllTasks), std::end(kAllTasks));
  const CorpusManifest m = generate_corpus(src, rc, o.out, g);
  out << m.patches.size() << " patches written to " << o.out << '\n';
  for (const auto& s : m.skips) log(LogLevel::info, "skipped scale " + format_number(s.scale) + ": " + s.reason);
  return kExitOk;
}

int run_degrade(const Options& o, std::ostream& out) {
  const RunConfig rc = config_or_default(o.config);
  const LoadedSource src = load_source(o.in);
  degrade_whole(src, task_from_string(o.task), rc.degradation, o.seed, o.out);
  out << o.task << " written to " << o.out << '\n';
  return kExitOk;
}

DeformationField field_from_files(const std::vector<std::string>& files) {
  DeformationField f;
  for (const auto& file : files) f.comp.push_back(read_array(file));
  f.shape = f.comp.front().shape();
  if (f.comp.size() != f.shape.rank()) {
    fail(ErrorKind::domain, "a rank-" + std::to_string(f.shape.rank()) + " field needs " +
                                std::to_string(f.shape.rank()) + " component files");
  }
  for (const auto& c : f.comp) {
    if (!(c.shape() == f.shape)) fail(ErrorKind::domain, "field components differ in shape");
  }
  return f;
}

int run_metric(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string& k = o.metric;
  if (k == "q_abf" || k == "q_cv") {
    err << "metric " << k << " is not supported (no published definition)\n";
    return kExitUsage;
  }
  if (k == "sdlogj") {
    const auto [sd, nonpos] = sdlogj(field_from_files(o.files));
    out << format_number(sd) << ' ' << format_number(nonpos) << '\n';
    return kExitOk;
  }
  if (o.files.size() != 2) {
    err << "metrics " << k << " takes exactly two arrays\n";
    return kExitUsage;
  }
  const Grid a = read_array(o.files[0]);
  const Grid b = read_array(o.files[1]);
  double v = 0.0;
  if (k == "psnr") {
    v = psnr(a, b, o.max_val);
  } else if (k == "ssim") {
    v = ssim(a, b, o.max_val);
  } else if (k == "dice") {
    const auto la = LabelGrid::from_grid(a), lb = LabelGrid::from_grid(b);
    v = o.label ? dice(la, lb, *o.label) : dice_macro(la, lb);
  } else if (k == "hd95") {
    v = hd95(LabelGrid::from_grid(a), LabelGrid::from_grid(b), o.label.value_or(1), a.spacing());
  } else {
    err << "unknown metric \"" << k << "\"\n";
    return kExitUsage;
  }
  out << format_number(v) << '\n';
  return kExitOk;
}

int run_verify(const Options& o, std::ostream& out) {
  const VerifyReport r = verify_manifest(o.manifest, out, o.jobs);
  out << (r.failed == 0 ? "PASS" : "FAIL") << " verify: " << r.passed << " passed, " << r.failed << " failed\n";
  return r.failed == 0 ? kExitOk : kExitRuntime;
}

int run_synth(const Options& o, std::ostream& out) {
  const Grid g = synthetic_volume(Shape(std::span<const std::size_t>(o.shape)), o.seed);
  write_array(g, o.out);
  out << "wrote " << g.shape().to_string() << " to " << o.out << '\n';
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic corpus factory for self-supervised degradation pairs", "tjp"};
  app.require_subcommand(1);
  Options o;

  auto add_jobs = [&](CLI::App* c) { c->add_option("--jobs", o.jobs, "worker threads (default: all cores)"); };

  auto* sample = app.add_subcommand("sample", "sample multi-scale windows and write arrays plus manifest");
  auto* pipeline = app.add_subcommand("pipeline", "sample, then apply all four degradations per patch");
  for (auto* c : {sample, pipeline}) {
    c->add_option("--source", o.source, "source array (.npy) or raw blob with sidecar")->required();
    c->add_option("--config", o.config, "run configuration JSON");
    c->add_option("--out", o.out, "output directory")->required();
    c->add_option("--seed", o.seed, "master seed")->required();
    add_jobs(c);
  }

  auto* degrade = app.add_subcommand("degrade", "apply one degradation to a whole array");
  degrade->add_option("--task", o.task, "mask | deform | lowres | noise")
      ->required()
      ->check(CLI::IsMember({"mask", "deform", "lowres", "noise"}));
  degrade->add_option("--in", o.in, "input array")->required();
  degrade->add_option("--config", o.config, "run configuration JSON");
  degrade->add_option("--seed", o.seed, "master seed")->required();
  degrade->add_option("--out", o.out, "output directory")->required();

  auto* metrics = app.add_subcommand("metrics", "evaluate a metric between arrays");
  metrics->add_option("metric", o.metric, "psnr | ssim | dice | hd95 | sdlogj")->required();
  metrics->add_option("files", o.files, "arrays (sdlogj: one file per field component)")->required();
  metrics->add_option("--label", o.label, "label for dice / hd95");
  metrics->add_option("--max", o.max_val, "peak value for psnr / ssim (default 1)");

  auto* verify = app.add_subcommand("verify", "regenerate every manifest entry and compare bytes");
  verify->add_option("--manifest", o.manifest, "manifest.json")->required();
  add_jobs(verify);

  auto* synth = app.add_subcommand("synth", "write a smooth synthetic test volume");
  synth->add_option("--shape", o.shape, "extents (2 or 3 values)")->required()->expected(2, 3);
  synth->add_option("--seed", o.seed, "seed")->required();
  synth->add_option("--out", o.out, "output .npy path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (sample->parsed()) return run_sample(o, false, out);
    if (pipeline->parsed()) return run_sample(o, true, out);
    if (degrade->parsed()) return run_degrade(o, out);
    if (metrics->parsed()) return run_metric(o, out, err);
    if (verify->parsed()) return run_verify(o, out);
    if (synth->parsed()) return run_synth(o, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::configuration ? kExitUsage : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace tjp
