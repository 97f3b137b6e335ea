#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace reconeval {

using Vertices = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using Faces = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;
using Colors = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// Indexed triangle surface. Coordinates are millimetres.
/// `normals` and `colors` are either empty or have one row per vertex.
struct TriangleMesh {
  Vertices vertices;
  Faces faces;
  Vertices normals;
  Colors colors;

  Eigen::Index vertex_count() const { return vertices.rows(); }
  Eigen::Index face_count() const { return faces.rows(); }
  bool has_normals() const { return normals.rows() == vertices.rows() && vertices.rows() > 0; }

  Eigen::Vector3d corner(Eigen::Index face, int k) const { return vertices.row(faces(face, k)).transpose(); }
};

/// Oriented point set. `normals` is empty or one row per point; `valid` is
/// empty (all valid) or one flag per point.
struct PointCloud {
  Vertices points;
  Vertices normals;
  std::vector<std::uint8_t> valid;

  Eigen::Index size() const { return points.rows(); }
  bool has_normals() const { return normals.rows() == points.rows() && points.rows() > 0; }
  bool is_valid(Eigen::Index i) const { return valid.empty() || valid[static_cast<std::size_t>(i)] != 0; }
};

/// Throws std::invalid_argument when a face references a missing vertex,
/// repeats an index, or a stored normal is not unit length within 1e-6.
void validate(const TriangleMesh& mesh);
void validate(const PointCloud& cloud);

/// Vertex set of a mesh as a cloud, carrying the vertex normals when present.
PointCloud to_point_cloud(const TriangleMesh& mesh);

/// Area-weighted vertex normals. Zero-area faces contribute nothing; a vertex
/// with no contributing face gets a zero row, which callers treat as "no normal".
Vertices compute_vertex_normals(const TriangleMesh& mesh);

/// Unit face normal following the winding, or zero for a degenerate face.
Eigen::Vector3d face_normal(const TriangleMesh& mesh, Eigen::Index face);
double face_area(const TriangleMesh& mesh, Eigen::Index face);

/// Faces with at least one edge used by exactly one face.
std::vector<int> detect_boundary_triangles(const TriangleMesh& mesh);
/// Same information as a per-face flag vector.
std::vector<std::uint8_t> boundary_face_mask(const TriangleMesh& mesh);

/// Area-weighted surface centroid.
Eigen::Vector3d surface_centroid(const TriangleMesh& mesh);

}  // namespace reconeval
