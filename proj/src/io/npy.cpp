#include <bit>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>

#include "tjp/corpus_io.hpp"
#include "tjp/error.hpp"

namespace tjp {

namespace {

constexpr char kMagic[] = "\x93NUMPY";
constexpr std::size_t kMagicLen = 6;
constexpr std::size_t kAlign = 64;

static_assert(std::endian::native == std::endian::little, "array container code assumes a little-endian host");

std::string header_text(const Shape& shape) {
  std::string dict = "{'descr': '<f4', 'fortran_order': False, 'shape': (";
  for (std::size_t a = 0; a < shape.rank(); ++a) {
    if (a) dict += ", ";
    dict += std::to_string(shape[a]);
  }
  dict += "), }";
  // magic + version + u16 length + dict + padding + '\n' is a multiple of 64.
  const std::size_t unpadded = kMagicLen + 2 + 2 + dict.size() + 1;
  const std::size_t total = (unpadded + kAlign - 1) / kAlign * kAlign;
  dict.append(total - unpadded, ' ');
  dict += '\n';
  return dict;
}

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::format, "array container: " + what); }

// Value text following `'key':` in a Python-literal dict.
std::string_view field(std::string_view dict, std::string_view key) {
  const std::string quoted = "'" + std::string(key) + "'";
  const auto at = dict.find(quoted);
  if (at == std::string_view::npos) bad("header lacks " + quoted);
  auto pos = dict.find(':', at + quoted.size());
  if (pos == std::string_view::npos) bad("malformed header entry " + quoted);
  ++pos;
  while (pos < dict.size() && dict[pos] == ' ') ++pos;
  std::size_t end = pos;
  if (end < dict.size() && dict[end] == '(') {
    end = dict.find(')', end);
    if (end == std::string_view::npos) bad("unterminated shape tuple");
    ++end;
  } else if (end < dict.size() && dict[end] == '\'') {
    end = dict.find('\'', end + 1);
    if (end == std::string_view::npos) bad("unterminated string");
    ++end;
  } else {
    while (end < dict.size() && dict[end] != ',' && dict[end] != '}') ++end;
    while (end > pos && dict[end - 1] == ' ') --end;
  }
  return dict.substr(pos, end - pos);
}

std::vector<std::size_t> parse_shape(std::string_view tuple) {
  if (tuple.size() < 2 || tuple.front() != '(' || tuple.back() != ')') bad("shape is not a tuple");
  std::vector<std::size_t> dims;
  std::size_t i = 1;
  while (i + 1 < tuple.size()) {
    while (i + 1 < tuple.size() && (tuple[i] == ' ' || tuple[i] == ',')) ++i;
    if (i + 1 >= tuple.size()) break;
    if (!std::isdigit(static_cast<unsigned char>(tuple[i]))) bad("shape entries must be integers");
    std::size_t v = 0;
    while (i + 1 < tuple.size() && std::isdigit(static_cast<unsigned char>(tuple[i]))) {
      v = v * 10 + static_cast<std::size_t>(tuple[i] - '0');
      ++i;
    }
    dims.push_back(v);
  }
  return dims;
}

}  // namespace

std::vector<std::uint8_t> encode_array(const Grid& grid) {
  const std::string header = header_text(grid.shape());
  std::vector<std::uint8_t> out;
  out.reserve(kMagicLen + 4 + header.size() + grid.size() * 4);
  out.insert(out.end(), kMagic, kMagic + kMagicLen);
  out.push_back(0x01);
  out.push_back(0x00);
  const auto len = static_cast<std::uint16_t>(header.size());
  out.push_back(static_cast<std::uint8_t>(len & 0xFF));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.insert(out.end(), header.begin(), header.end());
  const auto* payload = reinterpret_cast<const std::uint8_t*>(grid.data().data());
  out.insert(out.end(), payload, payload + grid.size() * sizeof(float));
  return out;
}

Grid decode_array(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kMagicLen + 4 || std::memcmp(bytes.data(), kMagic, kMagicLen) != 0) bad("bad magic");
  const std::uint8_t major = bytes[6];
  std::size_t header_len = 0, header_start = 0;
  if (major == 1) {
    header_len = bytes[8] | (static_cast<std::size_t>(bytes[9]) << 8);
    header_start = 10;
  } else if (major == 2 || major == 3) {
    if (bytes.size() < 12) bad("truncated header");
    header_len = bytes[8] | (static_cast<std::size_t>(bytes[9]) << 8) | (static_cast<std::size_t>(bytes[10]) << 16) |
                 (static_cast<std::size_t>(bytes[11]) << 24);
    header_start = 12;
  } else {
    bad("unknown format version " + std::to_string(major));
  }
  if (bytes.size() < header_start + header_len) bad("truncated header");
  const std::string dict(bytes.begin() + static_cast<std::ptrdiff_t>(header_start),
                         bytes.begin() + static_cast<std::ptrdiff_t>(header_start + header_len));
  const auto trimmed = std::string_view(dict);
  if (trimmed.empty() || trimmed.front() != '{' || trimmed.find('}') == std::string_view::npos) bad("header is not a dict");

  const auto descr = field(trimmed, "descr");
  if (descr != "'<f4'") fail(ErrorKind::unsupported, "array dtype " + std::string(descr) + " (only '<f4')");
  const auto order = field(trimmed, "fortran_order");
  if (order == "True") fail(ErrorKind::unsupported, "column-major (fortran_order) arrays are not supported");
  if (order != "False") bad("fortran_order must be True or False");
  const auto dims = parse_shape(field(trimmed, "shape"));
  if (dims.size() < 2 || dims.size() > 3) fail(ErrorKind::unsupported, "array rank " + std::to_string(dims.size()));
  for (auto d : dims) {
    if (d == 0) fail(ErrorKind::unsupported, "zero-sized arrays are not supported");
  }

  const Shape shape{std::span<const std::size_t>(dims)};
  const std::size_t payload = bytes.size() - header_start - header_len;
  if (payload != shape.size() * sizeof(float)) {
    bad("payload holds " + std::to_string(payload) + " bytes, shape " + shape.to_string() + " needs " +
        std::to_string(shape.size() * sizeof(float)));
  }
  std::vector<float> data(shape.size());
  std::memcpy(data.data(), bytes.data() + header_start + header_len, payload);
  return Grid(shape, std::move(data));
}

void write_array(const Grid& grid, const std::filesystem::path& path) {
  const auto bytes = encode_array(grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::io, "short write to " + path.string());
}

Grid read_array(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_array(bytes);
}

}  // namespace tjp
