#pragma once

#include <vector>

#include <Eigen/Geometry>

#include "closest_point.hpp"
#include "mesh.hpp"

namespace reconeval {

/// Axis-aligned box hierarchy over the faces of a mesh. Immutable once built;
/// queries are const and may run concurrently. The tree stores face indices
/// only, so every query also takes the mesh it was built from.
class BvhTree {
 public:
  struct Node {
    Eigen::AlignedBox3d box;
    int first = 0;   // leaf: offset into face_order(); inner: left child index
    int count = 0;   // leaf: number of faces; inner: 0
    int right = -1;  // inner: right child index
    bool is_leaf() const { return count > 0; }
  };

  static constexpr int kLeafSize = 4;

  BvhTree() = default;
  explicit BvhTree(const TriangleMesh& mesh);

  bool empty() const { return nodes_.empty(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& face_order() const { return order_; }

 private:
  int build(const TriangleMesh& mesh, std::vector<Eigen::Vector3d>& centroids, std::vector<Eigen::AlignedBox3d>& boxes,
            int begin, int end);

  std::vector<Node> nodes_;
  std::vector<int> order_;
};

/// Globally closest face to `p`. Ties in squared distance go to the lowest face
/// index. Throws DegenerateError(EmptyInput) for a mesh without faces.
ClosestHit closest_triangle(const BvhTree& bvh, const TriangleMesh& mesh, const Eigen::Vector3d& p);

/// Exact point-to-face query, exposed for callers that already know the face.
ClosestHit closest_point_on_face(const TriangleMesh& mesh, int face, const Eigen::Vector3d& p);

/// Sphere centre for error confinement: where the z-parallel line through the
/// area-weighted centroid meets the surface, taking the smallest z (the side
/// facing a camera looking down +z). Throws DegenerateError(NoIntersection)
/// when the line misses every face.
Eigen::Vector3d roi_sphere_center(const TriangleMesh& target);

}  // namespace reconeval
