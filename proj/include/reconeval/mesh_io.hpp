#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mesh.hpp"

namespace reconeval {

enum class MeshFormat { PlyAscii, PlyBinaryLe, Obj };

struct LoadOptions {
  /// Multiplier applied to coordinates on load (1000 for files in metres).
  double unit_scale = 1.0;
};

struct LoadedGeometry {
  std::variant<TriangleMesh, PointCloud> geometry;
  /// Per-vertex "quality" property, empty when the file has none.
  std::vector<double> quality;
  /// Ignored properties, elements and records.
  std::vector<std::string> warnings;

  bool is_mesh() const { return std::holds_alternative<TriangleMesh>(geometry); }
  const TriangleMesh& mesh() const { return std::get<TriangleMesh>(geometry); }
  const PointCloud& cloud() const { return std::get<PointCloud>(geometry); }
};

/// Parses PLY (ASCII or binary little-endian) or the v/vn/f subset of OBJ.
/// Either PLY value accepts either PLY encoding; the header decides.
/// Input with faces yields a TriangleMesh, vertex-only input a PointCloud.
/// Polygons are fan-triangulated; faces repeating a vertex are dropped with a
/// warning. Every failure is a ParseError naming the byte or line.
LoadedGeometry load_mesh(std::string_view bytes, MeshFormat format, const LoadOptions& options = {});

/// Serializes a mesh. An optional scalar channel (one value per vertex) is
/// stored as the float vertex property "quality" (PLY only). `comments` land
/// in the PLY header or as '#' lines in OBJ.
std::string write_mesh(const TriangleMesh& mesh, MeshFormat format, std::span<const double> scalar = {},
                       std::span<const std::string> comments = {});
std::string write_point_cloud(const PointCloud& cloud, MeshFormat format, std::span<const double> scalar = {},
                              std::span<const std::string> comments = {});

/// Format from the extension (.ply -> PLY, peeking at the header for the
/// encoding; .obj -> OBJ). Throws ParseError(UnsupportedFormat) otherwise.
MeshFormat detect_format(const std::filesystem::path& path, std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

LoadedGeometry load_geometry_file(const std::filesystem::path& path, const LoadOptions& options = {});

}  // namespace reconeval
