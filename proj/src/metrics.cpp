#include "reconeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "reconeval/error.hpp"

namespace reconeval {

const char* to_string(PointStatus status) {
  switch (status) {
    case PointStatus::Included: return "included";
    case PointStatus::OutsideRoi: return "outside-roi";
    case PointStatus::BoundaryExcluded: return "boundary-excluded";
    case PointStatus::NoNormal: return "no-normal";
  }
  return "unknown";
}

Summary aggregate(std::span<const double> values, std::span<const PointStatus> statuses) {
  if (values.size() != statuses.size()) throw std::invalid_argument("aggregate: values and statuses differ in length");
  Summary s;
  std::vector<double> included;
  double mean = 0.0, m2 = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (statuses[i] != PointStatus::Included) continue;
    const double v = values[i];
    included.push_back(v);
    // Welford update, fixed input order.
    const double delta = v - mean;
    mean += delta / static_cast<double>(included.size());
    m2 += delta * (v - mean);
    sum_sq += v * v;
  }
  s.count = included.size();
  if (included.empty()) return s;
  s.empty = false;
  const double n = static_cast<double>(included.size());
  s.mean = mean;
  s.std = std::sqrt(std::max(0.0, m2 / n));
  s.rms = std::sqrt(sum_sq / n);
  s.max = *std::max_element(included.begin(), included.end());
  std::sort(included.begin(), included.end());
  const std::size_t mid = included.size() / 2;
  s.median = included.size() % 2 ? included[mid] : 0.5 * (included[mid - 1] + included[mid]);
  return s;
}

std::size_t SurfaceErrorReport::count(PointStatus s) const {
  return static_cast<std::size_t>(std::count(statuses.begin(), statuses.end(), s));
}

EvaluationTarget::EvaluationTarget(TriangleMesh mesh) : indexed(std::move(mesh)), boundary(boundary_face_mask(indexed.mesh)) {}

SurfaceEvaluation evaluate_surface(const PointCloud& source, const EvaluationTarget& target, const RoiSphere& roi) {
  if (source.size() == 0) throw DegenerateError(DegenerateError::Kind::EmptyInput, "surface evaluation: empty source");
  if (target.indexed.mesh.face_count() == 0) {
    throw DegenerateError(DegenerateError::Kind::EmptyInput, "surface evaluation: target has no faces");
  }
  const auto n = static_cast<std::size_t>(source.size());
  SurfaceEvaluation out;
  out.distance.channel = SurfaceErrorReport::Channel::Distance;
  out.angle.channel = SurfaceErrorReport::Channel::Angle;
  out.distance.values.assign(n, 0.0);
  out.angle.values.assign(n, 0.0);
  out.distance.statuses.assign(n, PointStatus::Included);
  out.angle.statuses.assign(n, PointStatus::Included);

  const auto& mesh = target.indexed.mesh;
  const bool source_normals = source.has_normals();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    const Eigen::Vector3d p = source.points.row(row).transpose();
    if (!source.is_valid(row) || !roi.contains(p)) {
      out.distance.statuses[i] = out.angle.statuses[i] = PointStatus::OutsideRoi;
      if (!source.is_valid(row)) continue;
    }
    const ClosestHit hit = closest_triangle(target.indexed.bvh, mesh, p);
    out.distance.values[i] = hit.distance;

    Eigen::Vector3d interpolated = Eigen::Vector3d::Zero();
    for (int k = 0; k < 3; ++k) {
      interpolated += hit.barycentric[k] * mesh.normals.row(mesh.faces(hit.face_index, k)).transpose();
    }
    const Eigen::Vector3d ns = source_normals ? Eigen::Vector3d(source.normals.row(row).transpose()) : Eigen::Vector3d::Zero();
    const bool has_normal = interpolated.norm() > 0.0 && ns.norm() > 0.0;
    if (has_normal) {
      const double c = std::clamp(ns.normalized().dot(interpolated.normalized()), -1.0, 1.0);
      out.angle.values[i] = std::acos(c) * 180.0 / std::numbers::pi;
    }

    if (out.distance.statuses[i] == PointStatus::OutsideRoi) continue;
    if (target.boundary[static_cast<std::size_t>(hit.face_index)]) {
      out.distance.statuses[i] = out.angle.statuses[i] = PointStatus::BoundaryExcluded;
    } else if (!has_normal) {
      out.angle.statuses[i] = PointStatus::NoNormal;
    }
  }
  out.distance.summary = aggregate(out.distance.values, out.distance.statuses);
  out.angle.summary = aggregate(out.angle.values, out.angle.statuses);
  return out;
}

SurfaceErrorReport surface_distance(const PointCloud& source, const EvaluationTarget& target, const RoiSphere& roi) {
  return evaluate_surface(source, target, roi).distance;
}

SurfaceErrorReport normal_deviation(const PointCloud& source, const EvaluationTarget& target, const RoiSphere& roi) {
  return evaluate_surface(source, target, roi).angle;
}

std::vector<double> colormap_scalar(const SurfaceErrorReport& report) {
  std::vector<double> out(report.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = report.statuses[i] == PointStatus::Included ? report.values[i] : -1.0;
  }
  return out;
}

}  // namespace reconeval
