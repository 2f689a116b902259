#include <cstring>
#include <fstream>

#include "tjp/corpus_io.hpp"
#include "tjp/error.hpp"

namespace tjp {

namespace {

std::size_t dtype_bytes(const std::string& dtype) {
  if (dtype == "<f4") return 4;
  if (dtype == "<u2" || dtype == "<i2") return 2;
  if (dtype == "<u1") return 1;
  fail(ErrorKind::unsupported, "blob dtype " + dtype);
}

float decode_item(const std::uint8_t* p, const std::string& dtype) {
  if (dtype == "<f4") {
    float v;
    std::memcpy(&v, p, 4);
    return v;
  }
  if (dtype == "<u1") return static_cast<float>(p[0]);
  const auto u = static_cast<std::uint16_t>(p[0] | (p[1] << 8));
  if (dtype == "<u2") return static_cast<float>(u);
  return static_cast<float>(static_cast<std::int16_t>(u));
}

BlobHeader read_sidecar(const std::filesystem::path& blob) {
  const auto side = sidecar_path(blob);
  std::ifstream in(side);
  if (!in) fail(ErrorKind::io, "cannot open blob header " + side.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::format, side.string() + ": " + e.what());
  }
  BlobHeader h;
  try {
    if (!j.is_object() || !j.contains("shape")) fail(ErrorKind::format, side.string() + ": missing \"shape\"");
    h.shape = j.at("shape").get<std::vector<std::size_t>>();
    if (j.contains("dtype")) h.dtype = j.at("dtype").get<std::string>();
    if (j.contains("intensity_range") && !j.at("intensity_range").is_null()) {
      const auto r = j.at("intensity_range").get<std::vector<double>>();
      if (r.size() != 2 || !(r[0] < r[1])) fail(ErrorKind::format, side.string() + ": intensity_range must be [lo, hi] with lo < hi");
      h.intensity_range = Range{r[0], r[1]};
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::format, side.string() + ": " + e.what());
  }
  if (h.shape.size() < 2 || h.shape.size() > 3) fail(ErrorKind::unsupported, "blob rank " + std::to_string(h.shape.size()));
  dtype_bytes(h.dtype);
  return h;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& blob) {
  auto p = blob;
  p += ".json";
  return p;
}

BlobSource::BlobSource(std::filesystem::path blob) : path_(std::move(blob)), header_(read_sidecar(path_)) {
  item_bytes_ = dtype_bytes(header_.dtype);
  const auto expected = shape().size() * item_bytes_;
  std::error_code ec;
  const auto actual = std::filesystem::file_size(path_, ec);
  if (ec) fail(ErrorKind::io, "cannot stat " + path_.string());
  if (actual != expected) {
    fail(ErrorKind::format, path_.string() + " holds " + std::to_string(actual) + " bytes, header needs " +
                                std::to_string(expected));
  }
}

Grid BlobSource::read_region(std::span<const std::size_t> origin, const Shape& extents) const {
  const Shape full = shape();
  if (origin.size() != full.rank() || extents.rank() != full.rank()) fail(ErrorKind::domain, "region rank mismatch");
  for (std::size_t a = 0; a < full.rank(); ++a) {
    if (origin[a] + extents[a] > full[a]) fail(ErrorKind::domain, "region exceeds blob extents " + full.to_string());
  }
  std::ifstream in(path_, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path_.string());

  Grid out(extents);
  const auto st = full.strides();
  const std::size_t row = extents[full.rank() - 1];
  const std::size_t rows = extents.size() / row;
  std::vector<std::uint8_t> buf(row * item_bytes_);
  for (std::size_t r = 0; r < rows; ++r) {
    // Offset of this row's first cell within the blob.
    std::size_t offset = origin[full.rank() - 1], rem = r;
    for (std::size_t a = full.rank() - 1; a-- > 0;) {
      offset += (origin[a] + rem % extents[a]) * st[a];
      rem /= extents[a];
    }
    in.seekg(static_cast<std::streamoff>(offset * item_bytes_));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!in) fail(ErrorKind::io, "short read from " + path_.string());
    for (std::size_t c = 0; c < row; ++c) out[r * row + c] = decode_item(buf.data() + c * item_bytes_, header_.dtype);
  }
  return out;
}

Grid BlobSource::read_all() const {
  const std::vector<std::size_t> origin(header_.shape.size(), 0);
  return read_region(origin, shape());
}

void write_blob(const Grid& grid, const std::filesystem::path& blob, const std::optional<Range>& intensity_range) {
  {
    std::ofstream out(blob, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot open " + blob.string() + " for writing");
    out.write(reinterpret_cast<const char*>(grid.data().data()), static_cast<std::streamsize>(grid.size() * sizeof(float)));
    if (!out) fail(ErrorKind::io, "short write to " + blob.string());
  }
  nlohmann::json j;
  j["shape"] = grid.shape().to_vector();
  j["dtype"] = "<f4";
  if (intensity_range) j["intensity_range"] = {intensity_range->lo, intensity_range->hi};
  std::ofstream side(sidecar_path(blob), std::ios::trunc);
  if (!side) fail(ErrorKind::io, "cannot write " + sidecar_path(blob).string());
  side << canonical_json(j);
}

std::vector<std::vector<std::size_t>> tile_iter(const Shape& source, const Shape& tile, std::span<const std::size_t> stride) {
  const std::size_t rank = source.rank();
  if (tile.rank() != rank || stride.size() != rank) fail(ErrorKind::domain, "tile, stride and source ranks differ");
  std::vector<std::vector<std::size_t>> per_axis(rank);
  for (std::size_t a = 0; a < rank; ++a) {
    if (tile[a] > source[a]) fail(ErrorKind::domain, "tile " + tile.to_string() + " exceeds source " + source.to_string());
    if (stride[a] == 0) fail(ErrorKind::domain, "stride must be positive");
    const std::size_t last = source[a] - tile[a];
    for (std::size_t o = 0; o < last; o += stride[a]) per_axis[a].push_back(o);
    per_axis[a].push_back(last);
  }
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> pos(rank, 0);
  while (true) {
    std::vector<std::size_t> origin(rank);
    for (std::size_t a = 0; a < rank; ++a) origin[a] = per_axis[a][pos[a]];
    out.push_back(std::move(origin));
    std::size_t a = rank;
    while (a-- > 0) {
      if (++pos[a] < per_axis[a].size()) break;
      pos[a] = 0;
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

}  // namespace tjp
