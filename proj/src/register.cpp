#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "reconeval/error.hpp"
#include "reconeval/registration.hpp"

namespace reconeval {

namespace {

// Median nearest-neighbour spacing, estimated from at most ~1000 evenly
// strided query points.
double median_spacing(const Vertices& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) return 0.0;
  const Eigen::Index stride = std::max<Eigen::Index>(1, n / 1000);
  std::vector<double> nearest;
  for (Eigen::Index i = 0; i < n; i += stride) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, (points.row(i) - points.row(j)).squaredNorm());
    }
    nearest.push_back(std::sqrt(best));
  }
  const auto mid = nearest.begin() + static_cast<std::ptrdiff_t>(nearest.size() / 2);
  std::nth_element(nearest.begin(), mid, nearest.end());
  return *mid;
}

}  // namespace

RegistrationResult register_surfaces(const PointCloud& source, const TriangleMesh& target,
                                     const RegistrationParams& params) {
  if (source.size() == 0 || target.face_count() == 0) {
    throw DegenerateError(DegenerateError::Kind::EmptyInput, "registration needs a non-empty source and target");
  }
  if (!source.has_normals()) throw std::invalid_argument("registration needs source normals");

  const IndexedMesh indexed(target);
  RegistrationReport report;
  report.source_points = static_cast<int>(source.size());
  report.target_points = static_cast<int>(indexed.mesh.vertex_count());
  report.roi = {roi_sphere_center(indexed.mesh), params.roi_radius};

  // Observability of the fine stage, judged on the target alone.
  {
    Vertices pts(0, 3), nrm(0, 3);
    std::vector<Eigen::Index> inside;
    for (Eigen::Index i = 0; i < indexed.mesh.vertex_count(); ++i) {
      if (report.roi.contains(indexed.mesh.vertices.row(i).transpose())) inside.push_back(i);
    }
    pts.resize(static_cast<Eigen::Index>(inside.size()), 3);
    nrm.resize(static_cast<Eigen::Index>(inside.size()), 3);
    for (std::size_t k = 0; k < inside.size(); ++k) {
      pts.row(static_cast<Eigen::Index>(k)) = indexed.mesh.vertices.row(inside[k]);
      nrm.row(static_cast<Eigen::Index>(k)) = indexed.mesh.normals.row(inside[k]);
    }
    const double cond = point_to_plane_condition(pts, nrm);
    if (!(cond <= params.icp.max_condition)) {
      throw DegenerateError(DegenerateError::Kind::UnderConstrained,
                            "target surface inside the ROI is under-constrained (condition number " +
                                std::to_string(cond) +
                                "): symmetric or featureless geometry admits a family of equally good rotations");
    }
  }

  // Coarse stage.
  const PointCloud src_small = downsample(source, params.coarse_leaf);
  const PointCloud tgt_small = downsample(to_point_cloud(indexed.mesh), params.coarse_leaf);
  report.source_downsampled = static_cast<int>(src_small.size());
  report.target_downsampled = static_cast<int>(tgt_small.size());
  const double spacing = median_spacing(tgt_small.points);
  if (!(spacing > 0.0)) throw DegenerateError(DegenerateError::Kind::DegenerateSample, "target collapses to one voxel");

  SpinImageParams spin;
  spin.bin_size = params.bin_scale * spacing;
  spin.width = params.spin_width;
  spin.support_angle_deg = params.support_angle_deg;
  report.bin_size = spin.bin_size;

  const Eigen::Index stride =
      std::max<Eigen::Index>(1, (src_small.size() + params.max_keypoints - 1) / std::max(1, params.max_keypoints));
  std::vector<int> keypoints;
  std::vector<SpinImage> src_desc;
  for (Eigen::Index i = 0; i < src_small.size(); i += stride) {
    keypoints.push_back(static_cast<int>(i));
    src_desc.push_back(compute_spin_image(src_small.points.row(i).transpose(), src_small.normals.row(i).transpose(),
                                          src_small, spin));
  }
  std::vector<SpinImage> tgt_desc;
  tgt_desc.reserve(static_cast<std::size_t>(tgt_small.size()));
  for (Eigen::Index j = 0; j < tgt_small.size(); ++j) {
    tgt_desc.push_back(compute_spin_image(tgt_small.points.row(j).transpose(), tgt_small.normals.row(j).transpose(),
                                          tgt_small, spin));
  }
  report.descriptors = static_cast<int>(src_desc.size());

  CorrespondenceSet matches = match_spin_images(src_desc, tgt_desc, params.match_ratio);
  for (auto& m : matches) m.source = keypoints[static_cast<std::size_t>(m.source)];
  report.correspondences = static_cast<int>(matches.size());
  if (matches.size() < 3) {
    throw DegenerateError(DegenerateError::Kind::TooFewCorrespondences,
                          "spin-image matching kept " + std::to_string(matches.size()) +
                              " distinctive pairs; surfaces may not overlap");
  }

  const RobustEstimate coarse = estimate_rigid_robust(matches, src_small.points, tgt_small.points, params.ransac);
  report.coarse = coarse.transform;
  report.inliers = static_cast<int>(coarse.inliers.size());
  report.inlier_ratio = static_cast<double>(coarse.inliers.size()) / static_cast<double>(matches.size());
  report.ransac_iterations = coarse.iterations;

  // Fine stage on the full-resolution source.
  report.icp = icp_point_to_plane(source, indexed, coarse.transform, report.roi, params.icp);
  return {report.icp.transform, report};
}

}  // namespace reconeval
