#include <fstream>
#include <sstream>

#include "tjp/corpus_io.hpp"
#include "tjp/error.hpp"

namespace tjp {

namespace {

using nlohmann::json;

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::manifest, where + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorKind::manifest, where + ": missing \"" + key + "\"");
  return *it;
}

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::manifest, where + "." + key + ": " + e.what());
  }
}

json plan_to_json(const SamplePlan& p) {
  return {{"scales", p.scales}, {"counts", p.counts}, {"window", p.window}, {"master_seed", p.master_seed}};
}

SamplePlan plan_from_json(const json& j) {
  SamplePlan p;
  p.scales = get<std::vector<double>>(j, "scales", "plan");
  p.counts = get<std::vector<std::uint64_t>>(j, "counts", "plan");
  p.window = get<std::vector<std::size_t>>(j, "window", "plan");
  p.master_seed = get<std::uint64_t>(j, "master_seed", "plan");
  return p;
}

json record_to_json(const PatchRecord& r) {
  return {{"patch_id", r.patch_id}, {"source_uri", r.source_uri}, {"scale", r.scale},
          {"origin", r.origin},     {"window", r.window},         {"lineage", lineage_to_json(r.lineage)}};
}

PatchRecord record_from_json(const json& j, const std::string& where) {
  PatchRecord r;
  r.patch_id = get<std::uint64_t>(j, "patch_id", where);
  r.source_uri = get<std::string>(j, "source_uri", where);
  r.scale = get<double>(j, "scale", where);
  r.origin = get<std::vector<std::size_t>>(j, "origin", where);
  r.window = get<std::vector<std::size_t>>(j, "window", where);
  r.lineage = lineage_from_json(need(j, "lineage", where));
  if (r.origin.size() != r.window.size()) fail(ErrorKind::manifest, where + ": origin and window ranks differ");
  return r;
}

}  // namespace

json lineage_to_json(const Lineage& l) {
  return {{"master_seed", l.master_seed}, {"label", l.label}, {"index", l.index}};
}

Lineage lineage_from_json(const json& j) {
  Lineage l;
  l.master_seed = get<std::uint64_t>(j, "master_seed", "lineage");
  l.label = get<std::string>(j, "label", "lineage");
  l.index = get<std::uint64_t>(j, "index", "lineage");
  return l;
}

json manifest_to_json(const CorpusManifest& m) {
  json j;
  j["version"] = m.version;
  j["master_seed"] = m.master_seed;
  j["config"] = to_json(m.config);
  j["plan"] = plan_to_json(m.plan);

  j["sources"] = json::array();
  for (const auto& s : m.sources) {
    j["sources"].push_back({{"uri", s.uri}, {"shape", s.shape}, {"intensity_range", {s.intensity_range.lo, s.intensity_range.hi}}});
  }

  j["patches"] = json::array();
  for (const auto& p : m.patches) {
    json tasks = json::object();
    for (const auto& [name, t] : p.tasks) {
      tasks[name] = {{"lineage", lineage_to_json(t.lineage)}, {"params", t.params}, {"outputs", t.outputs}};
    }
    j["patches"].push_back({{"record", record_to_json(p.record)},
                            {"source_index", p.source_index},
                            {"clean_file", p.clean_file},
                            {"tasks", std::move(tasks)}});
  }

  j["skips"] = json::array();
  for (const auto& s : m.skips) j["skips"].push_back({{"source_uri", s.source_uri}, {"scale", s.scale}, {"reason", s.reason}});
  return j;
}

CorpusManifest manifest_from_json(const json& j) {
  CorpusManifest m;
  m.version = get<std::string>(j, "version", "manifest");
  if (m.version != kManifestVersion) fail(ErrorKind::manifest, "unsupported manifest version \"" + m.version + "\"");
  m.master_seed = get<std::uint64_t>(j, "master_seed", "manifest");
  try {
    m.config = degradation_from_json(need(j, "config", "manifest"));
  } catch (const Error& e) {
    fail(ErrorKind::manifest, std::string("config: ") + e.what());
  }
  m.plan = plan_from_json(need(j, "plan", "manifest"));

  const json& sources = need(j, "sources", "manifest");
  if (!sources.is_array()) fail(ErrorKind::manifest, "sources must be an array");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const std::string where = "sources[" + std::to_string(i) + "]";
    SourceEntry s;
    s.uri = get<std::string>(sources[i], "uri", where);
    s.shape = get<std::vector<std::size_t>>(sources[i], "shape", where);
    const auto r = get<std::vector<double>>(sources[i], "intensity_range", where);
    if (r.size() != 2) fail(ErrorKind::manifest, where + ".intensity_range must be [lo, hi]");
    s.intensity_range = {r[0], r[1]};
    m.sources.push_back(std::move(s));
  }

  const json& patches = need(j, "patches", "manifest");
  if (!patches.is_array()) fail(ErrorKind::manifest, "patches must be an array");
  for (std::size_t i = 0; i < patches.size(); ++i) {
    const std::string where = "patches[" + std::to_string(i) + "]";
    ManifestPatch p;
    p.record = record_from_json(need(patches[i], "record", where), where + ".record");
    p.source_index = get<std::size_t>(patches[i], "source_index", where);
    if (p.source_index >= m.sources.size()) fail(ErrorKind::manifest, where + ": source_index out of range");
    p.clean_file = get<std::string>(patches[i], "clean_file", where);
    const json& tasks = need(patches[i], "tasks", where);
    if (!tasks.is_object()) fail(ErrorKind::manifest, where + ".tasks must be an object");
    for (const auto& [name, t] : tasks.items()) {
      if (name != "mask" && name != "deform" && name != "lowres" && name != "noise") {
        fail(ErrorKind::manifest, where + ": unknown task \"" + name + "\"");
      }
      const std::string tw = where + ".tasks." + name;
      TaskEntry e;
      e.lineage = lineage_from_json(need(t, "lineage", tw));
      e.params = need(t, "params", tw);
      e.outputs = get<std::map<std::string, std::string>>(t, "outputs", tw);
      p.tasks.emplace(name, std::move(e));
    }
    m.patches.push_back(std::move(p));
  }

  const json& skips = need(j, "skips", "manifest");
  if (!skips.is_array()) fail(ErrorKind::manifest, "skips must be an array");
  for (std::size_t i = 0; i < skips.size(); ++i) {
    const std::string where = "skips[" + std::to_string(i) + "]";
    m.skips.push_back({get<std::string>(skips[i], "source_uri", where), get<double>(skips[i], "scale", where),
                       get<std::string>(skips[i], "reason", where)});
  }
  return m;
}

std::string canonical_json(const json& j) { return j.dump(2, ' ', false, json::error_handler_t::strict) + "\n"; }

void write_manifest(const CorpusManifest& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out << canonical_json(manifest_to_json(m));
  if (!out) fail(ErrorKind::io, "short write to " + path.string());
}

CorpusManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j;
  try {
    j = json::parse(ss.str());
  } catch (const json::exception& e) {
    fail(ErrorKind::manifest, path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace tjp
