#include "reconeval/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace reconeval {

namespace {

void check_unit_rows(const Vertices& normals, const char* what) {
  for (Eigen::Index i = 0; i < normals.rows(); ++i) {
    const double n = normals.row(i).norm();
    // Zero rows mark "no normal" and are allowed.
    if (n != 0.0 && std::abs(n - 1.0) > 1e-6) {
      throw std::invalid_argument(std::string(what) + " " + std::to_string(i) + " is not unit length");
    }
  }
}

}  // namespace

void validate(const TriangleMesh& mesh) {
  const auto n = mesh.vertex_count();
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const auto a = mesh.faces(f, 0), b = mesh.faces(f, 1), c = mesh.faces(f, 2);
    if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) {
      throw std::invalid_argument("face " + std::to_string(f) + " references a missing vertex");
    }
    if (a == b || b == c || a == c) throw std::invalid_argument("face " + std::to_string(f) + " repeats a vertex");
  }
  if (mesh.normals.rows() != 0 && mesh.normals.rows() != n) throw std::invalid_argument("normal count mismatch");
  if (mesh.colors.rows() != 0 && mesh.colors.rows() != n) throw std::invalid_argument("color count mismatch");
  check_unit_rows(mesh.normals, "vertex normal");
}

void validate(const PointCloud& cloud) {
  if (cloud.normals.rows() != 0 && cloud.normals.rows() != cloud.size()) {
    throw std::invalid_argument("normal count mismatch");
  }
  if (!cloud.valid.empty() && static_cast<Eigen::Index>(cloud.valid.size()) != cloud.size()) {
    throw std::invalid_argument("validity flag count mismatch");
  }
  check_unit_rows(cloud.normals, "point normal");
}

PointCloud to_point_cloud(const TriangleMesh& mesh) {
  PointCloud cloud;
  cloud.points = mesh.vertices;
  if (mesh.has_normals()) cloud.normals = mesh.normals;
  return cloud;
}

Eigen::Vector3d face_normal(const TriangleMesh& mesh, Eigen::Index face) {
  const Eigen::Vector3d a = mesh.corner(face, 0);
  const Eigen::Vector3d n = (mesh.corner(face, 1) - a).cross(mesh.corner(face, 2) - a);
  const double len = n.norm();
  return len > 0.0 ? Eigen::Vector3d(n / len) : Eigen::Vector3d::Zero();
}

double face_area(const TriangleMesh& mesh, Eigen::Index face) {
  const Eigen::Vector3d a = mesh.corner(face, 0);
  return 0.5 * (mesh.corner(face, 1) - a).cross(mesh.corner(face, 2) - a).norm();
}

Vertices compute_vertex_normals(const TriangleMesh& mesh) {
  Vertices normals = Vertices::Zero(mesh.vertex_count(), 3);
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const Eigen::Vector3d a = mesh.corner(f, 0);
    // Cross product length is twice the area: area weighting for free.
    const Eigen::RowVector3d weighted = (mesh.corner(f, 1) - a).cross(mesh.corner(f, 2) - a).transpose();
    for (int k = 0; k < 3; ++k) normals.row(mesh.faces(f, k)) += weighted;
  }
  for (Eigen::Index i = 0; i < normals.rows(); ++i) {
    const double len = normals.row(i).norm();
    if (len > 0.0) {
      normals.row(i) /= len;
    } else {
      normals.row(i).setZero();
    }
  }
  return normals;
}

std::vector<std::uint8_t> boundary_face_mask(const TriangleMesh& mesh) {
  auto key = [](int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) | static_cast<std::uint32_t>(v);
  };
  std::unordered_map<std::uint64_t, int> edge_use;
  edge_use.reserve(static_cast<std::size_t>(mesh.face_count()) * 3);
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) ++edge_use[key(mesh.faces(f, k), mesh.faces(f, (k + 1) % 3))];
  }
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(mesh.face_count()), 0);
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      if (edge_use[key(mesh.faces(f, k), mesh.faces(f, (k + 1) % 3))] == 1) {
        mask[static_cast<std::size_t>(f)] = 1;
        break;
      }
    }
  }
  return mask;
}

std::vector<int> detect_boundary_triangles(const TriangleMesh& mesh) {
  const auto mask = boundary_face_mask(mesh);
  std::vector<int> faces;
  for (std::size_t f = 0; f < mask.size(); ++f) {
    if (mask[f]) faces.push_back(static_cast<int>(f));
  }
  return faces;
}

Eigen::Vector3d surface_centroid(const TriangleMesh& mesh) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  double area = 0.0;
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const double w = face_area(mesh, f);
    sum += w * (mesh.corner(f, 0) + mesh.corner(f, 1) + mesh.corner(f, 2)) / 3.0;
    area += w;
  }
  if (area <= 0.0) {
    // No area at all: fall back to the vertex mean.
    return mesh.vertex_count() > 0 ? Eigen::Vector3d(mesh.vertices.colwise().mean().transpose())
                                   : Eigen::Vector3d::Zero();
  }
  return sum / area;
}

}  // namespace reconeval
