#include "reconeval/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reconeval/error.hpp"

namespace reconeval {

BvhTree::BvhTree(const TriangleMesh& mesh) {
  const auto m = static_cast<int>(mesh.face_count());
  if (m == 0) return;
  std::vector<Eigen::Vector3d> centroids(static_cast<std::size_t>(m));
  std::vector<Eigen::AlignedBox3d> boxes(static_cast<std::size_t>(m));
  order_.resize(static_cast<std::size_t>(m));
  for (int f = 0; f < m; ++f) {
    Eigen::AlignedBox3d box;
    for (int k = 0; k < 3; ++k) box.extend(mesh.corner(f, k));
    boxes[static_cast<std::size_t>(f)] = box;
    centroids[static_cast<std::size_t>(f)] = (mesh.corner(f, 0) + mesh.corner(f, 1) + mesh.corner(f, 2)) / 3.0;
    order_[static_cast<std::size_t>(f)] = f;
  }
  nodes_.reserve(static_cast<std::size_t>(2 * m / kLeafSize + 2));
  build(mesh, centroids, boxes, 0, m);
}

int BvhTree::build(const TriangleMesh& mesh, std::vector<Eigen::Vector3d>& centroids,
                   std::vector<Eigen::AlignedBox3d>& boxes, int begin, int end) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Eigen::AlignedBox3d box;
  Eigen::AlignedBox3d centroid_box;
  for (int i = begin; i < end; ++i) {
    const int f = order_[static_cast<std::size_t>(i)];
    box.extend(boxes[static_cast<std::size_t>(f)]);
    centroid_box.extend(centroids[static_cast<std::size_t>(f)]);
  }
  nodes_[static_cast<std::size_t>(index)].box = box;

  if (end - begin <= kLeafSize) {
    nodes_[static_cast<std::size_t>(index)].first = begin;
    nodes_[static_cast<std::size_t>(index)].count = end - begin;
    return index;
  }

  int axis = 0;
  centroid_box.sizes().maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end, [&](int lhs, int rhs) {
    const double cl = centroids[static_cast<std::size_t>(lhs)][axis];
    const double cr = centroids[static_cast<std::size_t>(rhs)][axis];
    return cl < cr || (cl == cr && lhs < rhs);
  });

  const int left = build(mesh, centroids, boxes, begin, mid);
  const int right = build(mesh, centroids, boxes, mid, end);
  auto& node = nodes_[static_cast<std::size_t>(index)];
  node.first = left;
  node.right = right;
  node.count = 0;
  return index;
}

ClosestHit closest_point_on_face(const TriangleMesh& mesh, int face, const Eigen::Vector3d& p) {
  const auto proj = closest_point_on_triangle(p, mesh.corner(face, 0), mesh.corner(face, 1), mesh.corner(face, 2));
  ClosestHit hit;
  hit.face_index = face;
  hit.closest_point = proj.point;
  hit.barycentric = proj.barycentric;
  hit.squared_distance = proj.squared_distance;
  hit.distance = proj.distance;
  return hit;
}

ClosestHit closest_triangle(const BvhTree& bvh, const TriangleMesh& mesh, const Eigen::Vector3d& p) {
  if (bvh.empty() || mesh.face_count() == 0) {
    throw DegenerateError(DegenerateError::Kind::EmptyInput, "closest_triangle: mesh has no faces");
  }
  const auto& nodes = bvh.nodes();
  const auto& order = bvh.face_order();
  ClosestHit best;
  int stack[128];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const auto& node = nodes[static_cast<std::size_t>(stack[--top])];
    // Equal bound is still visited so that ties reach the lowest face index.
    if (node.box.squaredExteriorDistance(p) > best.squared_distance) continue;
    if (node.is_leaf()) {
      for (int i = node.first; i < node.first + node.count; ++i) {
        const int f = order[static_cast<std::size_t>(i)];
        ClosestHit hit = closest_point_on_face(mesh, f, p);
        if (hit.squared_distance < best.squared_distance ||
            (hit.squared_distance == best.squared_distance && f < best.face_index)) {
          best = hit;
        }
      }
      continue;
    }
    const int left = node.first;
    const int right = node.right;
    const double dl = nodes[static_cast<std::size_t>(left)].box.squaredExteriorDistance(p);
    const double dr = nodes[static_cast<std::size_t>(right)].box.squaredExteriorDistance(p);
    // Nearer child on top of the stack.
    if (dl <= dr) {
      stack[top++] = right;
      stack[top++] = left;
    } else {
      stack[top++] = left;
      stack[top++] = right;
    }
  }
  return best;
}

Eigen::Vector3d roi_sphere_center(const TriangleMesh& target) {
  if (target.face_count() == 0) {
    throw DegenerateError(DegenerateError::Kind::EmptyInput, "roi_sphere_center: mesh has no faces");
  }
  const Eigen::Vector3d centroid = surface_centroid(target);
  const Eigen::Vector2d q = centroid.head<2>();
  double best_z = std::numeric_limits<double>::infinity();
  for (Eigen::Index f = 0; f < target.face_count(); ++f) {
    const Eigen::Vector3d a = target.corner(f, 0), b = target.corner(f, 1), c = target.corner(f, 2);
    const Eigen::Vector2d ab = (b - a).head<2>(), ac = (c - a).head<2>(), aq = q - a.head<2>();
    const double det = ab.x() * ac.y() - ab.y() * ac.x();
    // Faces parallel to the line are covered by their neighbours.
    if (std::abs(det) <= 1e-14 * (ab.squaredNorm() + ac.squaredNorm())) continue;
    const double wb = (aq.x() * ac.y() - aq.y() * ac.x()) / det;
    const double wc = (ab.x() * aq.y() - ab.y() * aq.x()) / det;
    const double wa = 1.0 - wb - wc;
    constexpr double eps = -1e-12;
    if (wa < eps || wb < eps || wc < eps) continue;
    best_z = std::min(best_z, wa * a.z() + wb * b.z() + wc * c.z());
  }
  if (!std::isfinite(best_z)) {
    throw DegenerateError(DegenerateError::Kind::NoIntersection,
                          "roi_sphere_center: the z-parallel line through the centroid misses the mesh");
  }
  return {q.x(), q.y(), best_z};
}

}  // namespace reconeval
