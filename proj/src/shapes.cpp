#include "reconeval/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace reconeval {

namespace {

TriangleMesh from_lists(const std::vector<Eigen::Vector3d>& v, const std::vector<Eigen::Vector3i>& f) {
  TriangleMesh mesh;
  mesh.vertices.resize(static_cast<Eigen::Index>(v.size()), 3);
  for (std::size_t i = 0; i < v.size(); ++i) mesh.vertices.row(static_cast<Eigen::Index>(i)) = v[i].transpose();
  mesh.faces.resize(static_cast<Eigen::Index>(f.size()), 3);
  for (std::size_t i = 0; i < f.size(); ++i) mesh.faces.row(static_cast<Eigen::Index>(i)) = f[i].transpose();
  return mesh;
}

// Unit icosphere: vertices on the unit sphere.
void unit_icosphere(int subdivisions, std::vector<Eigen::Vector3d>& v, std::vector<Eigen::Vector3i>& f) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
       {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
       {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
       {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[static_cast<std::size_t>(a)] + v[static_cast<std::size_t>(b)]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<Eigen::Vector3i> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int ab = mid(tri[0], tri[1]), bc = mid(tri[1], tri[2]), ca = mid(tri[2], tri[0]);
      next.emplace_back(tri[0], ab, ca);
      next.emplace_back(tri[1], bc, ab);
      next.emplace_back(tri[2], ca, bc);
      next.emplace_back(ab, bc, ca);
    }
    f = std::move(next);
  }
}

double smoothstep(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * (3.0 - 2.0 * x);
}

double mound(double x, double y, double x0, double y0, double height, double sigma) {
  const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
  return height * std::exp(-r2 / (2.0 * sigma * sigma));
}

}  // namespace

TriangleMesh make_icosphere(double radius, int subdivisions) {
  std::vector<Eigen::Vector3d> v;
  std::vector<Eigen::Vector3i> f;
  unit_icosphere(subdivisions, v, f);
  TriangleMesh mesh = from_lists(v, f);
  mesh.normals = mesh.vertices;
  mesh.vertices *= radius;
  return mesh;
}

TriangleMesh make_uv_sphere(double radius, int rings, int segments) {
  if (rings < 2 || segments < 3) throw std::invalid_argument("uv sphere needs rings >= 2 and segments >= 3");
  std::vector<Eigen::Vector3d> v;
  std::vector<Eigen::Vector3i> f;
  v.emplace_back(0, 0, -1);
  for (int r = 1; r < rings; ++r) {
    const double theta = std::numbers::pi * r / rings;  // from -z pole
    for (int s = 0; s < segments; ++s) {
      const double phi = 2.0 * std::numbers::pi * s / segments;
      v.emplace_back(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), -std::cos(theta));
    }
  }
  v.emplace_back(0, 0, 1);
  const int top = static_cast<int>(v.size()) - 1;
  auto ring = [&](int r, int s) { return 1 + (r - 1) * segments + (s % segments); };
  // Outward winding: looking from outside the face is counter-clockwise.
  for (int s = 0; s < segments; ++s) f.emplace_back(0, ring(1, s + 1), ring(1, s));
  for (int r = 1; r + 1 < rings; ++r) {
    for (int s = 0; s < segments; ++s) {
      f.emplace_back(ring(r, s), ring(r, s + 1), ring(r + 1, s + 1));
      f.emplace_back(ring(r, s), ring(r + 1, s + 1), ring(r + 1, s));
    }
  }
  for (int s = 0; s < segments; ++s) f.emplace_back(top, ring(rings - 1, s), ring(rings - 1, s + 1));
  TriangleMesh mesh = from_lists(v, f);
  mesh.normals = mesh.vertices;
  mesh.vertices *= radius;
  return mesh;
}

TriangleMesh make_hemisphere(double radius, int rings, int segments) {
  if (rings < 2 || rings % 2 != 0) throw std::invalid_argument("hemisphere needs an even ring count >= 2");
  const TriangleMesh sphere = make_uv_sphere(radius, rings, segments);
  // Keep rings up to the equator (ring index rings/2 lies in z = 0).
  const int last_vertex = 1 + (rings / 2 - 1) * segments + segments;  // exclusive
  std::vector<Eigen::Vector3i> faces;
  for (Eigen::Index fi = 0; fi < sphere.face_count(); ++fi) {
    const Eigen::Vector3i face = sphere.faces.row(fi).transpose();
    if (face.maxCoeff() < last_vertex) faces.push_back(face);
  }
  TriangleMesh mesh;
  mesh.vertices = sphere.vertices.topRows(last_vertex);
  mesh.normals = sphere.normals.topRows(last_vertex);
  mesh.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
  for (std::size_t i = 0; i < faces.size(); ++i) mesh.faces.row(static_cast<Eigen::Index>(i)) = faces[i].transpose();
  return mesh;
}

TriangleMesh make_tetrahedron(double radius) {
  const double s = radius / std::sqrt(3.0);
  std::vector<Eigen::Vector3d> v = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  std::vector<Eigen::Vector3i> f = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
  return from_lists(v, f);
}

TriangleMesh make_grid(int n, double step) {
  if (n < 2) throw std::invalid_argument("grid needs n >= 2");
  std::vector<Eigen::Vector3d> v;
  std::vector<Eigen::Vector3i> f;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) v.emplace_back(i * step, j * step, 0.0);
  }
  for (int j = 0; j + 1 < n; ++j) {
    for (int i = 0; i + 1 < n; ++i) {
      const int a = j * n + i, b = a + 1, c = a + n, d = c + 1;
      f.emplace_back(a, b, d);
      f.emplace_back(a, d, c);
    }
  }
  return from_lists(v, f);
}

TriangleMesh make_torso_phantom(int subdivisions) {
  std::vector<Eigen::Vector3d> v;
  std::vector<Eigen::Vector3i> f;
  unit_icosphere(subdivisions, v, f);
  for (auto& d : v) {
    const double x = 150.0 * d.x();
    const double y = 230.0 * d.y();
    // Deeper front than back, blended smoothly across the sides.
    double z = (100.0 + 15.0 * std::tanh(-4.0 * d.z())) * d.z();
    const double front = smoothstep(-3.0 * d.z());
    const double back = smoothstep(3.0 * d.z());
    z -= front * (mound(x, y, -70.0, -30.0, 40.0, 38.0) + mound(x, y, 72.0, -42.0, 32.0, 33.0));
    z += back * mound(x, y, 50.0, 90.0, 14.0, 45.0);
    d = Eigen::Vector3d(x, y, z);
  }
  TriangleMesh mesh = from_lists(v, f);
  mesh.normals = compute_vertex_normals(mesh);
  return mesh;
}

PointCloud sample_surface(const TriangleMesh& mesh, int count, std::uint64_t seed) {
  if (!mesh.has_normals()) throw std::invalid_argument("sample_surface needs vertex normals");
  std::vector<double> cumulative(static_cast<std::size_t>(mesh.face_count()));
  double total = 0.0;
  for (Eigen::Index fi = 0; fi < mesh.face_count(); ++fi) {
    total += face_area(mesh, fi);
    cumulative[static_cast<std::size_t>(fi)] = total;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  PointCloud cloud;
  cloud.points.resize(count, 3);
  cloud.normals.resize(count, 3);
  for (int i = 0; i < count; ++i) {
    const double pick = uniform(rng) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    const auto fi = static_cast<Eigen::Index>(std::min<std::ptrdiff_t>(it - cumulative.begin(), mesh.face_count() - 1));
    const double r1 = std::sqrt(uniform(rng));
    const double r2 = uniform(rng);
    const Eigen::Vector3d w(1.0 - r1, r1 * (1.0 - r2), r1 * r2);
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    for (int k = 0; k < 3; ++k) {
      p += w[k] * mesh.vertices.row(mesh.faces(fi, k)).transpose();
      n += w[k] * mesh.normals.row(mesh.faces(fi, k)).transpose();
    }
    cloud.points.row(i) = p.transpose();
    cloud.normals.row(i) = n.normalized().transpose();
  }
  return cloud;
}

}  // namespace reconeval
