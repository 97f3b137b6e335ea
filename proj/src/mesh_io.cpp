#include "reconeval/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "reconeval/error.hpp"

namespace reconeval {

namespace {

using Kind = ParseError::Kind;
using Location = ParseError::Location;

static_assert(std::endian::native == std::endian::little, "binary PLY codec assumes a little-endian host");

// ---------------------------------------------------------------------------
// Small text helpers

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<long long> to_integer(std::string_view s) {
  long long v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

template <typename T>
void append_number(std::string& out, T value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

// Line cursor with 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::string_view text, std::size_t pos = 0, std::size_t line = 0)
      : text_(text), pos_(pos), line_(line) {}

  bool next(std::string_view& out) {
    if (pos_ >= text_.size()) return false;
    const std::size_t end = text_.find('\n', pos_);
    const std::size_t stop = end == std::string_view::npos ? text_.size() : end;
    out = text_.substr(pos_, stop - pos_);
    pos_ = end == std::string_view::npos ? text_.size() : end + 1;
    ++line_;
    return true;
  }

  std::size_t line() const { return line_; }
  std::size_t position() const { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_;
  std::size_t line_;
};

// ---------------------------------------------------------------------------
// PLY

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::optional<PlyType> ply_type(std::string_view name) {
  static const std::map<std::string_view, PlyType> table = {
      {"char", PlyType::Int8},     {"int8", PlyType::Int8},       {"uchar", PlyType::UInt8},
      {"uint8", PlyType::UInt8},   {"short", PlyType::Int16},     {"int16", PlyType::Int16},
      {"ushort", PlyType::UInt16}, {"uint16", PlyType::UInt16},   {"int", PlyType::Int32},
      {"int32", PlyType::Int32},   {"uint", PlyType::UInt32},     {"uint32", PlyType::UInt32},
      {"float", PlyType::Float32}, {"float32", PlyType::Float32}, {"double", PlyType::Float64},
      {"float64", PlyType::Float64}};
  const auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool ply_is_integral(PlyType t) { return t != PlyType::Float32 && t != PlyType::Float64; }

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::Float32;
  bool is_list = false;
  PlyType count_type = PlyType::UInt8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> properties;
};

struct PlyHeader {
  bool binary = false;
  std::vector<PlyElement> elements;
  std::size_t body_offset = 0;
  std::size_t body_line = 0;  // lines consumed by the header
};

PlyHeader parse_ply_header(std::string_view bytes) {
  PlyHeader header;
  LineReader reader(bytes);
  std::string_view line;
  if (!reader.next(line) || trim(line) != "ply") {
    throw ParseError(Kind::MalformedHeader, Location::Line, 1, "missing 'ply' magic");
  }
  bool have_format = false;
  bool done = false;
  while (!done) {
    if (!reader.next(line)) {
      throw ParseError(Kind::MalformedHeader, Location::Line, reader.line() + 1, "missing end_header");
    }
    const auto tokens = split_ws(trim(line));
    if (tokens.empty()) continue;
    const auto where = reader.line();
    const auto& key = tokens[0];
    if (key == "comment" || key == "obj_info") continue;
    if (key == "format") {
      if (tokens.size() != 3) throw ParseError(Kind::MalformedHeader, Location::Line, where, "bad format line");
      if (tokens[1] == "ascii") {
        header.binary = false;
      } else if (tokens[1] == "binary_little_endian") {
        header.binary = true;
      } else if (tokens[1] == "binary_big_endian") {
        throw ParseError(Kind::UnsupportedFormat, Location::Line, where, "big-endian PLY is not supported");
      } else {
        throw ParseError(Kind::MalformedHeader, Location::Line, where, "unknown format '" + std::string(tokens[1]) + "'");
      }
      have_format = true;
    } else if (key == "element") {
      if (tokens.size() != 3) throw ParseError(Kind::MalformedHeader, Location::Line, where, "bad element line");
      const auto count = to_integer(tokens[2]);
      if (!count || *count < 0) throw ParseError(Kind::MalformedHeader, Location::Line, where, "bad element count");
      header.elements.push_back({std::string(tokens[1]), static_cast<std::size_t>(*count), {}});
    } else if (key == "property") {
      if (header.elements.empty()) {
        throw ParseError(Kind::MalformedHeader, Location::Line, where, "property before any element");
      }
      PlyProperty prop;
      if (tokens.size() == 5 && tokens[1] == "list") {
        const auto ct = ply_type(tokens[2]);
        const auto it = ply_type(tokens[3]);
        if (!ct || !it || !ply_is_integral(*ct)) {
          throw ParseError(Kind::MalformedHeader, Location::Line, where, "bad list property types");
        }
        prop.is_list = true;
        prop.count_type = *ct;
        prop.type = *it;
        prop.name = std::string(tokens[4]);
      } else if (tokens.size() == 3) {
        const auto t = ply_type(tokens[1]);
        if (!t) throw ParseError(Kind::MalformedHeader, Location::Line, where, "unknown type '" + std::string(tokens[1]) + "'");
        prop.type = *t;
        prop.name = std::string(tokens[2]);
      } else {
        throw ParseError(Kind::MalformedHeader, Location::Line, where, "bad property line");
      }
      header.elements.back().properties.push_back(prop);
    } else if (key == "end_header") {
      done = true;
    } else {
      throw ParseError(Kind::MalformedHeader, Location::Line, where, "unexpected keyword '" + std::string(key) + "'");
    }
  }
  if (!have_format) throw ParseError(Kind::MalformedHeader, Location::Line, reader.line(), "missing format line");
  header.body_offset = reader.position();
  header.body_line = reader.line();
  return header;
}

// Pulls scalar values out of the body, either as text tokens or raw bytes.
class PlyBodyReader {
 public:
  PlyBodyReader(std::string_view bytes, const PlyHeader& header)
      : bytes_(bytes), binary_(header.binary), pos_(header.body_offset), lines_(bytes, header.body_offset, header.body_line) {}

  // Starts the next element instance (ASCII: fetches the next non-empty line).
  void begin_instance(const std::string& element) {
    if (binary_) return;
    std::string_view line;
    do {
      if (!lines_.next(line)) {
        throw ParseError(Kind::TruncatedBody, Location::Line, lines_.line() + 1,
                         "unexpected end of file while reading element '" + element + "'");
      }
      line = trim(line);
    } while (line.empty());
    tokens_ = split_ws(line);
    token_ = 0;
  }

  void end_instance() {
    if (!binary_ && token_ != tokens_.size()) {
      throw ParseError(Kind::InvalidValue, Location::Line, lines_.line(), "extra values on line");
    }
  }

  double read(PlyType type) {
    if (binary_) return read_binary(type);
    if (token_ >= tokens_.size()) {
      throw ParseError(Kind::TruncatedBody, Location::Line, lines_.line(), "too few values on line");
    }
    const auto tok = tokens_[token_++];
    const auto v = to_double(tok);
    if (!v) throw ParseError(Kind::InvalidValue, Location::Line, lines_.line(), "not a number: '" + std::string(tok) + "'");
    if (ply_is_integral(type) && *v != static_cast<double>(static_cast<long long>(*v))) {
      throw ParseError(Kind::InvalidValue, Location::Line, lines_.line(), "expected an integer: '" + std::string(tok) + "'");
    }
    return *v;
  }

  // Location for diagnostics about the value just read.
  ParseError::Location location() const { return binary_ ? Location::Byte : Location::Line; }
  std::size_t offset() const { return binary_ ? pos_ : lines_.line(); }

 private:
  template <typename T>
  double take() {
    if (pos_ + sizeof(T) > bytes_.size()) {
      throw ParseError(Kind::TruncatedBody, Location::Byte, pos_, "unexpected end of binary body");
    }
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return static_cast<double>(v);
  }

  double read_binary(PlyType type) {
    switch (type) {
      case PlyType::Int8: return take<std::int8_t>();
      case PlyType::UInt8: return take<std::uint8_t>();
      case PlyType::Int16: return take<std::int16_t>();
      case PlyType::UInt16: return take<std::uint16_t>();
      case PlyType::Int32: return take<std::int32_t>();
      case PlyType::UInt32: return take<std::uint32_t>();
      case PlyType::Float32: return take<float>();
      case PlyType::Float64: return take<double>();
    }
    return 0.0;
  }

  std::string_view bytes_;
  bool binary_;
  std::size_t pos_;
  LineReader lines_;
  std::vector<std::string_view> tokens_;
  std::size_t token_ = 0;
};

enum class VertexSlot { X, Y, Z, NX, NY, NZ, Red, Green, Blue, Quality, Ignored };

VertexSlot vertex_slot(const std::string& name) {
  static const std::map<std::string, VertexSlot> table = {
      {"x", VertexSlot::X},          {"y", VertexSlot::Y},           {"z", VertexSlot::Z},
      {"nx", VertexSlot::NX},        {"ny", VertexSlot::NY},         {"nz", VertexSlot::NZ},
      {"red", VertexSlot::Red},      {"green", VertexSlot::Green},   {"blue", VertexSlot::Blue},
      {"diffuse_red", VertexSlot::Red}, {"diffuse_green", VertexSlot::Green}, {"diffuse_blue", VertexSlot::Blue},
      {"quality", VertexSlot::Quality}};
  const auto it = table.find(name);
  return it == table.end() ? VertexSlot::Ignored : it->second;
}

void normalize_rows(Vertices& normals) {
  for (Eigen::Index i = 0; i < normals.rows(); ++i) {
    // Rows already unit to rounding are kept bit-exact.
    const double n = normals.row(i).norm();
    if (n > 0.0 && std::abs(n - 1.0) > 1e-12) normals.row(i) /= n;
  }
}

LoadedGeometry finish(Vertices vertices, std::vector<std::array<int, 3>> faces, Vertices normals, Colors colors,
                      std::vector<double> quality, std::vector<std::string> warnings, const LoadOptions& options) {
  vertices *= options.unit_scale;
  normalize_rows(normals);
  LoadedGeometry out;
  out.quality = std::move(quality);
  out.warnings = std::move(warnings);
  if (faces.empty()) {
    PointCloud cloud;
    cloud.points = std::move(vertices);
    cloud.normals = std::move(normals);
    out.geometry = std::move(cloud);
    return out;
  }
  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int k = 0; k < 3; ++k) mesh.faces(static_cast<Eigen::Index>(f), k) = faces[f][static_cast<std::size_t>(k)];
  }
  mesh.normals = std::move(normals);
  mesh.colors = std::move(colors);
  out.geometry = std::move(mesh);
  return out;
}

// Fan-triangulates one polygon; drops faces that repeat a vertex.
void add_polygon(const std::vector<long long>& poly, std::vector<std::array<int, 3>>& faces, std::size_t& dropped) {
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    const std::array<int, 3> tri = {static_cast<int>(poly[0]), static_cast<int>(poly[k]), static_cast<int>(poly[k + 1])};
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      ++dropped;
      continue;
    }
    faces.push_back(tri);
  }
}

LoadedGeometry load_ply(std::string_view bytes, const LoadOptions& options) {
  const PlyHeader header = parse_ply_header(bytes);
  std::vector<std::string> warnings;

  const PlyElement* vertex_element = nullptr;
  for (const auto& e : header.elements) {
    if (e.name == "vertex") vertex_element = &e;
  }
  if (!vertex_element) throw ParseError(Kind::MalformedHeader, Location::Line, header.body_line, "no vertex element");

  std::vector<VertexSlot> slots;
  std::array<bool, 10> present{};
  for (const auto& p : vertex_element->properties) {
    VertexSlot slot = p.is_list ? VertexSlot::Ignored : vertex_slot(p.name);
    if (slot == VertexSlot::Ignored) {
      warnings.push_back("ignoring vertex property '" + p.name + "'");
    } else {
      present[static_cast<std::size_t>(slot)] = true;
    }
    slots.push_back(slot);
  }
  if (!present[0] || !present[1] || !present[2]) {
    throw ParseError(Kind::MalformedHeader, Location::Line, header.body_line, "vertex element lacks x/y/z");
  }
  const bool has_normals = present[3] && present[4] && present[5];
  const bool has_colors = present[6] && present[7] && present[8];
  const bool has_quality = present[9];

  const auto n = static_cast<Eigen::Index>(vertex_element->count);
  Vertices vertices(n, 3);
  Vertices normals = has_normals ? Vertices(n, 3) : Vertices(0, 3);
  Colors colors = has_colors ? Colors(n, 3) : Colors(0, 3);
  std::vector<double> quality(has_quality ? static_cast<std::size_t>(n) : 0);
  std::vector<std::array<int, 3>> faces;
  std::size_t dropped = 0;

  PlyBodyReader body(bytes, header);
  for (const auto& element : header.elements) {
    const bool is_vertex = &element == vertex_element;
    const bool is_face = element.name == "face";
    if (!is_vertex && !is_face) warnings.push_back("ignoring element '" + element.name + "'");
    for (std::size_t i = 0; i < element.count; ++i) {
      body.begin_instance(element.name);
      const auto row = static_cast<Eigen::Index>(i);
      for (std::size_t pi = 0; pi < element.properties.size(); ++pi) {
        const auto& prop = element.properties[pi];
        if (prop.is_list) {
          const auto where = body.offset();
          const double count = body.read(prop.count_type);
          if (count < 0) throw ParseError(Kind::InvalidValue, body.location(), where, "negative list length");
          const auto len = static_cast<std::size_t>(count);
          const bool indices = is_face && (prop.name == "vertex_indices" || prop.name == "vertex_index");
          std::vector<long long> poly;
          for (std::size_t k = 0; k < len; ++k) {
            const auto at = body.offset();
            const double v = body.read(prop.type);
            if (!indices) continue;
            if (v < 0 || v >= static_cast<double>(n)) {
              throw ParseError(Kind::IndexOutOfRange, body.location(), at,
                               "face " + std::to_string(i) + " references vertex " +
                                   std::to_string(static_cast<long long>(v)) + " of " + std::to_string(n));
            }
            poly.push_back(static_cast<long long>(v));
          }
          if (indices) {
            if (len < 3) throw ParseError(Kind::InvalidValue, body.location(), where, "face with fewer than 3 vertices");
            add_polygon(poly, faces, dropped);
          }
          continue;
        }
        const double v = body.read(prop.type);
        if (!is_vertex) continue;
        switch (slots[pi]) {
          case VertexSlot::X: vertices(row, 0) = v; break;
          case VertexSlot::Y: vertices(row, 1) = v; break;
          case VertexSlot::Z: vertices(row, 2) = v; break;
          case VertexSlot::NX: if (has_normals) normals(row, 0) = v; break;
          case VertexSlot::NY: if (has_normals) normals(row, 1) = v; break;
          case VertexSlot::NZ: if (has_normals) normals(row, 2) = v; break;
          case VertexSlot::Red: if (has_colors) colors(row, 0) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0)); break;
          case VertexSlot::Green: if (has_colors) colors(row, 1) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0)); break;
          case VertexSlot::Blue: if (has_colors) colors(row, 2) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0)); break;
          case VertexSlot::Quality: quality[i] = v; break;
          case VertexSlot::Ignored: break;
        }
      }
      body.end_instance();
    }
    if (is_face) {
      for (const auto& prop : element.properties) {
        if (!(prop.is_list && (prop.name == "vertex_indices" || prop.name == "vertex_index"))) {
          warnings.push_back("ignoring face property '" + prop.name + "'");
        }
      }
    }
  }
  if (dropped > 0) warnings.push_back("dropped " + std::to_string(dropped) + " faces with repeated vertices");
  return finish(std::move(vertices), std::move(faces), std::move(normals), std::move(colors), std::move(quality),
                std::move(warnings), options);
}

// ---------------------------------------------------------------------------
// OBJ

LoadedGeometry load_obj(std::string_view bytes, const LoadOptions& options) {
  std::vector<Eigen::Vector3d> positions;
  std::vector<Eigen::Vector3d> vn;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::pair<int, int>> vertex_normal_refs;  // (vertex, normal)
  std::vector<std::string> warnings;
  std::map<std::string, int> ignored;
  std::size_t dropped = 0;

  LineReader reader(bytes);
  std::string_view raw;
  while (reader.next(raw)) {
    auto line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto tokens = split_ws(line);
    const auto where = reader.line();
    auto parse_vec = [&](std::size_t first) {
      if (tokens.size() < first + 3) throw ParseError(Kind::InvalidValue, Location::Line, where, "expected 3 coordinates");
      Eigen::Vector3d v;
      for (int k = 0; k < 3; ++k) {
        const auto d = to_double(tokens[first + static_cast<std::size_t>(k)]);
        if (!d) throw ParseError(Kind::InvalidValue, Location::Line, where, "not a number: '" + std::string(tokens[first + static_cast<std::size_t>(k)]) + "'");
        v[k] = *d;
      }
      return v;
    };
    if (tokens[0] == "v") {
      positions.push_back(parse_vec(1));
    } else if (tokens[0] == "vn") {
      vn.push_back(parse_vec(1));
    } else if (tokens[0] == "f") {
      if (tokens.size() < 4) throw ParseError(Kind::InvalidValue, Location::Line, where, "face with fewer than 3 vertices");
      std::vector<long long> poly;
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        const auto tok = tokens[k];
        const auto slash = tok.find('/');
        const auto vi = to_integer(tok.substr(0, slash));
        if (!vi || *vi == 0) throw ParseError(Kind::InvalidValue, Location::Line, where, "bad face index '" + std::string(tok) + "'");
        const long long count = static_cast<long long>(positions.size());
        const long long index = *vi > 0 ? *vi - 1 : count + *vi;
        if (index < 0 || index >= count) {
          throw ParseError(Kind::IndexOutOfRange, Location::Line, where,
                           "vertex " + std::to_string(*vi) + " of " + std::to_string(count));
        }
        poly.push_back(index);
        if (slash != std::string_view::npos) {
          const auto rest = tok.substr(slash + 1);
          const auto second = rest.find('/');
          if (second != std::string_view::npos && second + 1 < rest.size()) {
            const auto ni = to_integer(rest.substr(second + 1));
            const long long ncount = static_cast<long long>(vn.size());
            if (!ni || *ni == 0) throw ParseError(Kind::InvalidValue, Location::Line, where, "bad normal index");
            const long long nindex = *ni > 0 ? *ni - 1 : ncount + *ni;
            if (nindex < 0 || nindex >= ncount) {
              throw ParseError(Kind::IndexOutOfRange, Location::Line, where,
                               "normal " + std::to_string(*ni) + " of " + std::to_string(ncount));
            }
            vertex_normal_refs.emplace_back(static_cast<int>(index), static_cast<int>(nindex));
          }
        }
      }
      add_polygon(poly, faces, dropped);
    } else {
      ++ignored[std::string(tokens[0])];
    }
  }
  for (const auto& [key, count] : ignored) {
    warnings.push_back("ignoring " + std::to_string(count) + " '" + key + "' records");
  }
  if (dropped > 0) warnings.push_back("dropped " + std::to_string(dropped) + " faces with repeated vertices");

  const auto n = static_cast<Eigen::Index>(positions.size());
  Vertices vertices(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) vertices.row(i) = positions[static_cast<std::size_t>(i)].transpose();
  Vertices normals(0, 3);
  if (!vertex_normal_refs.empty()) {
    normals = Vertices::Zero(n, 3);
    for (const auto& [v, k] : vertex_normal_refs) normals.row(v) = vn[static_cast<std::size_t>(k)].transpose();
  } else if (!vn.empty() && static_cast<Eigen::Index>(vn.size()) == n) {
    normals.resize(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) normals.row(i) = vn[static_cast<std::size_t>(i)].transpose();
  } else if (!vn.empty()) {
    warnings.push_back("ignoring unreferenced vn records");
  }
  return finish(std::move(vertices), std::move(faces), std::move(normals), Colors(0, 3), {}, std::move(warnings),
                options);
}

// ---------------------------------------------------------------------------
// Writers

struct WriteView {
  const Vertices& points;
  const Vertices& normals;
  const Colors* colors;
  const Faces* faces;
};

template <typename T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

std::string write_ply(const WriteView& view, bool binary, std::span<const double> scalar,
                      std::span<const std::string> comments) {
  const auto n = view.points.rows();
  const bool normals = view.normals.rows() == n && n > 0;
  const bool colors = view.colors && view.colors->rows() == n && n > 0;
  const bool quality = !scalar.empty();
  const auto m = view.faces ? view.faces->rows() : 0;

  std::string out;
  out += "ply\n";
  out += binary ? "format binary_little_endian 1.0\n" : "format ascii 1.0\n";
  for (const auto& c : comments) {
    std::string line = c;
    std::replace(line.begin(), line.end(), '\n', ' ');
    out += "comment " + line + "\n";
  }
  out += "element vertex " + std::to_string(n) + "\n";
  out += "property double x\nproperty double y\nproperty double z\n";
  if (normals) out += "property double nx\nproperty double ny\nproperty double nz\n";
  if (colors) out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  if (quality) out += "property float quality\n";
  if (view.faces) {
    out += "element face " + std::to_string(m) + "\n";
    out += "property list uchar int vertex_indices\n";
  }
  out += "end_header\n";

  for (Eigen::Index i = 0; i < n; ++i) {
    if (binary) {
      for (int k = 0; k < 3; ++k) put(out, view.points(i, k));
      if (normals) for (int k = 0; k < 3; ++k) put(out, view.normals(i, k));
      if (colors) for (int k = 0; k < 3; ++k) put(out, (*view.colors)(i, k));
      if (quality) put(out, static_cast<float>(scalar[static_cast<std::size_t>(i)]));
      continue;
    }
    for (int k = 0; k < 3; ++k) {
      if (k) out += ' ';
      append_number(out, view.points(i, k));
    }
    if (normals) for (int k = 0; k < 3; ++k) { out += ' '; append_number(out, view.normals(i, k)); }
    if (colors) for (int k = 0; k < 3; ++k) { out += ' '; append_number(out, static_cast<int>((*view.colors)(i, k))); }
    if (quality) { out += ' '; append_number(out, static_cast<float>(scalar[static_cast<std::size_t>(i)])); }
    out += '\n';
  }
  for (Eigen::Index f = 0; f < m; ++f) {
    if (binary) {
      put(out, std::uint8_t{3});
      for (int k = 0; k < 3; ++k) put(out, static_cast<std::int32_t>((*view.faces)(f, k)));
      continue;
    }
    out += '3';
    for (int k = 0; k < 3; ++k) { out += ' '; append_number(out, (*view.faces)(f, k)); }
    out += '\n';
  }
  return out;
}

std::string write_obj(const WriteView& view, std::span<const std::string> comments) {
  const auto n = view.points.rows();
  const bool normals = view.normals.rows() == n && n > 0;
  std::string out;
  for (const auto& c : comments) {
    std::string line = c;
    std::replace(line.begin(), line.end(), '\n', ' ');
    out += "# " + line + "\n";
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    out += 'v';
    for (int k = 0; k < 3; ++k) { out += ' '; append_number(out, view.points(i, k)); }
    out += '\n';
  }
  if (normals) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out += "vn";
      for (int k = 0; k < 3; ++k) { out += ' '; append_number(out, view.normals(i, k)); }
      out += '\n';
    }
  }
  if (view.faces) {
    for (Eigen::Index f = 0; f < view.faces->rows(); ++f) {
      out += 'f';
      for (int k = 0; k < 3; ++k) {
        const int idx = (*view.faces)(f, k) + 1;
        out += ' ';
        append_number(out, idx);
        if (normals) {
          out += "//";
          append_number(out, idx);
        }
      }
      out += '\n';
    }
  }
  return out;
}

std::string write_any(const WriteView& view, MeshFormat format, std::span<const double> scalar,
                      std::span<const std::string> comments) {
  if (!scalar.empty() && static_cast<Eigen::Index>(scalar.size()) != view.points.rows()) {
    throw std::invalid_argument("scalar channel has " + std::to_string(scalar.size()) + " values for " +
                                std::to_string(view.points.rows()) + " vertices");
  }
  switch (format) {
    case MeshFormat::PlyAscii: return write_ply(view, false, scalar, comments);
    case MeshFormat::PlyBinaryLe: return write_ply(view, true, scalar, comments);
    case MeshFormat::Obj:
      if (!scalar.empty()) throw std::invalid_argument("OBJ cannot carry a per-vertex scalar channel; use PLY");
      return write_obj(view, comments);
  }
  throw std::invalid_argument("unsupported mesh format");
}

}  // namespace

LoadedGeometry load_mesh(std::string_view bytes, MeshFormat format, const LoadOptions& options) {
  if (!(options.unit_scale > 0.0)) throw std::invalid_argument("unit scale must be positive");
  switch (format) {
    case MeshFormat::PlyAscii:
    case MeshFormat::PlyBinaryLe: return load_ply(bytes, options);
    case MeshFormat::Obj: return load_obj(bytes, options);
  }
  throw ParseError(Kind::UnsupportedFormat, Location::Byte, 0, "unknown format");
}

std::string write_mesh(const TriangleMesh& mesh, MeshFormat format, std::span<const double> scalar,
                       std::span<const std::string> comments) {
  return write_any({mesh.vertices, mesh.normals, &mesh.colors, &mesh.faces}, format, scalar, comments);
}

std::string write_point_cloud(const PointCloud& cloud, MeshFormat format, std::span<const double> scalar,
                              std::span<const std::string> comments) {
  return write_any({cloud.points, cloud.normals, nullptr, nullptr}, format, scalar, comments);
}

MeshFormat detect_format(const std::filesystem::path& path, std::string_view bytes) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".obj") return MeshFormat::Obj;
  if (ext == ".ply") {
    const auto head = bytes.substr(0, std::min<std::size_t>(bytes.size(), 512));
    return head.find("binary_little_endian") != std::string_view::npos ? MeshFormat::PlyBinaryLe : MeshFormat::PlyAscii;
  }
  throw ParseError(Kind::UnsupportedFormat, Location::Byte, 0, "unrecognized extension '" + ext + "' for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

LoadedGeometry load_geometry_file(const std::filesystem::path& path, const LoadOptions& options) {
  const std::string bytes = read_file(path);
  return load_mesh(bytes, detect_format(path, bytes), options);
}

}  // namespace reconeval
