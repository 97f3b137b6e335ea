#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "reconeval/error.hpp"
#include "reconeval/registration.hpp"

namespace reconeval {

IndexedMesh::IndexedMesh(TriangleMesh m) : mesh(std::move(m)), bvh(mesh) {
  if (!mesh.has_normals()) mesh.normals = compute_vertex_normals(mesh);
  face_normals.resize(static_cast<std::size_t>(mesh.face_count()));
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) face_normals[static_cast<std::size_t>(f)] = face_normal(mesh, f);
}

namespace {

using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

// Accumulates the linearized point-to-plane system about the centroid of the
// points, with the rotational block scaled by the RMS radius so that the
// condition number does not depend on the unit of length.
struct PlaneSystem {
  Matrix6 hessian = Matrix6::Zero();
  Vector6 gradient = Vector6::Zero();
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  double scale = 1.0;

  void build(const std::vector<Eigen::Vector3d>& points, const std::vector<Eigen::Vector3d>& normals,
             const std::vector<double>& residuals) {
    centroid.setZero();
    for (const auto& p : points) centroid += p;
    centroid /= static_cast<double>(points.size());
    double spread = 0.0;
    for (const auto& p : points) spread += (p - centroid).squaredNorm();
    scale = std::sqrt(spread / static_cast<double>(points.size()));
    if (!(scale > 0.0)) scale = 1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      Vector6 row;
      row.head<3>() = (points[i] - centroid).cross(normals[i]) / scale;
      row.tail<3>() = normals[i];
      hessian.noalias() += row * row.transpose();
      if (!residuals.empty()) gradient.noalias() -= row * residuals[i];
    }
  }

  double condition() const {
    const Eigen::SelfAdjointEigenSolver<Matrix6> solver(hessian, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    if (!(ev[0] > 0.0)) return std::numeric_limits<double>::infinity();
    return ev[5] / ev[0];
  }
};

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  return values[mid];
}

}  // namespace

double point_to_plane_condition(const Vertices& points, const Vertices& normals) {
  std::vector<Eigen::Vector3d> p, n;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const Eigen::Vector3d ni = normals.row(i).transpose();
    if (ni.squaredNorm() == 0.0) continue;
    p.emplace_back(points.row(i).transpose());
    n.push_back(ni);
  }
  if (p.size() < 6) return std::numeric_limits<double>::infinity();
  PlaneSystem system;
  system.build(p, n, {});
  return system.condition();
}

IcpResult icp_point_to_plane(const PointCloud& source, const IndexedMesh& target, const RigidTransformd& init,
                             const RoiSphere& roi, const IcpParams& params) {
  if (target.mesh.face_count() == 0) throw DegenerateError(DegenerateError::Kind::EmptyInput, "ICP target has no faces");
  const bool source_normals = source.has_normals();
  const double min_cos = std::cos(params.normal_angle_deg * std::numbers::pi / 180.0);

  IcpResult result;
  RigidTransformd current = init;
  double threshold = params.reject_bootstrap;
  double best = std::numeric_limits<double>::infinity();

  std::vector<Eigen::Vector3d> points, normals;
  std::vector<double> residuals, distances;
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    points.clear();
    normals.clear();
    residuals.clear();
    distances.clear();
    const Eigen::Matrix3d rotation = current.rotation_matrix();
    for (Eigen::Index i = 0; i < source.size(); ++i) {
      if (!source.is_valid(i)) continue;
      const Eigen::Vector3d q = rotation * source.points.row(i).transpose() + current.translation;
      if (!roi.contains(q)) continue;
      const ClosestHit hit = closest_triangle(target.bvh, target.mesh, q);
      if (hit.distance > threshold) continue;
      Eigen::Vector3d plane = target.face_normals[static_cast<std::size_t>(hit.face_index)];
      Eigen::Vector3d smooth = Eigen::Vector3d::Zero();
      for (int k = 0; k < 3; ++k) {
        smooth += hit.barycentric[k] * target.mesh.normals.row(target.mesh.faces(hit.face_index, k)).transpose();
      }
      if (smooth.squaredNorm() > 0.0) smooth.normalize();
      if (plane.squaredNorm() == 0.0) plane = smooth;  // degenerate face
      if (plane.squaredNorm() == 0.0) continue;
      if (source_normals && smooth.squaredNorm() > 0.0) {
        const Eigen::Vector3d ns = rotation * source.normals.row(i).transpose();
        if (ns.dot(smooth) < min_cos) continue;
      }
      points.push_back(q);
      normals.push_back(plane);
      residuals.push_back((q - hit.closest_point).dot(plane));
      distances.push_back(hit.distance);
    }
    if (static_cast<int>(points.size()) < params.min_correspondences) {
      throw DegenerateError(DegenerateError::Kind::TooFewCorrespondences,
                            "ICP iteration " + std::to_string(iter + 1) + " kept " + std::to_string(points.size()) +
                                " correspondences inside the ROI");
    }

    double sum2 = 0.0;
    for (double r : residuals) sum2 += r * r;
    const double rms = std::sqrt(sum2 / static_cast<double>(residuals.size()));
    result.raw_residuals.push_back(rms);
    best = std::min(best, rms);
    result.residuals.push_back(best);
    result.correspondences = static_cast<int>(points.size());

    PlaneSystem system;
    system.build(points, normals, residuals);
    const double cond = system.condition();
    if (!(cond <= params.max_condition)) {
      throw DegenerateError(DegenerateError::Kind::UnderConstrained,
                            "point-to-plane system is under-constrained (condition number " + std::to_string(cond) +
                                "); the geometry leaves some rigid motions unobservable");
    }
    const Vector6 x = system.hessian.ldlt().solve(system.gradient);
    const Eigen::Vector3d omega = x.head<3>() / system.scale;
    const Eigen::Vector3d shift = x.tail<3>();

    const double angle = omega.norm();
    const Eigen::Matrix3d step = angle > 0.0 ? Eigen::AngleAxisd(angle, omega / angle).toRotationMatrix()
                                             : Eigen::Matrix3d::Identity();
    const RigidTransformd increment(step, system.centroid - step * system.centroid + shift);
    current = increment * current;
    result.iterations = iter + 1;

    threshold = std::max(params.reject_factor * median_of(distances), params.reject_floor);
    if (angle < params.rotation_tolerance && shift.norm() < params.translation_tolerance) {
      result.converged = true;
      break;
    }
  }
  result.transform = current;
  return result;
}

}  // namespace reconeval
