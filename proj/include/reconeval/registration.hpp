#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "bvh.hpp"
#include "mesh.hpp"
#include "rigid_transform.hpp"

namespace reconeval {

struct RoiSphere {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 100.0;

  bool contains(const Eigen::Vector3d& p) const { return (p - center).squaredNorm() <= radius * radius; }
};

// ---------------------------------------------------------------------------
// Voxel downsampling

/// One point per occupied voxel of side `leaf`: the centroid of its members,
/// with the renormalized mean normal. Output order follows the first
/// appearance of each voxel in the input. Invalid points are skipped.
PointCloud downsample(const PointCloud& cloud, double leaf);

/// Incremental form of downsample() for inputs that arrive in batches.
class VoxelAccumulator {
 public:
  explicit VoxelAccumulator(double leaf);

  void add(const Eigen::Vector3d& point, const Eigen::Vector3d* normal);
  void add(const PointCloud& cloud);
  PointCloud result() const;
  std::size_t voxel_count() const { return cells_.size(); }

 private:
  struct Cell {
    Eigen::Vector3d point_sum = Eigen::Vector3d::Zero();
    Eigen::Vector3d normal_sum = Eigen::Vector3d::Zero();
    Eigen::Vector3d first_normal = Eigen::Vector3d::Zero();
    int count = 0;
    int normal_count = 0;
  };
  struct KeyHash {
    std::size_t operator()(const std::array<std::int64_t, 3>& k) const noexcept;
  };
  double leaf_;
  bool all_normals_ = true;
  std::vector<Cell> cells_;
  std::unordered_map<std::array<std::int64_t, 3>, std::size_t, KeyHash> index_;
};

// ---------------------------------------------------------------------------
// Spin images

struct SpinImageParams {
  double bin_size = 1.0;           // millimetres per bin
  int width = 15;                  // bins along the radial axis
  double support_angle_deg = 60.0;
};

/// Histogram over (alpha, beta): alpha = radial distance from the basis
/// normal line, beta = signed elevation along the normal. Rows index alpha in
/// [0, width], columns index beta + width*bin in [0, 2*width].
struct SpinImage {
  Eigen::Vector3d basis_point = Eigen::Vector3d::Zero();
  Eigen::Vector3d basis_normal = Eigen::Vector3d::UnitZ();
  double bin_size = 1.0;
  int width = 0;
  Eigen::MatrixXd histogram;
};

/// Each support point within distance width*bin_size of the basis (and whose
/// normal, when present, is within the support angle of the basis normal)
/// spreads unit mass bilinearly over the four bins around its (alpha, beta).
SpinImage compute_spin_image(const Eigen::Vector3d& basis_point, const Eigen::Vector3d& basis_normal,
                             const PointCloud& support, const SpinImageParams& params);

struct Correspondence {
  int source = -1;
  int target = -1;
  double distance = 0.0;
};
using CorrespondenceSet = std::vector<Correspondence>;

/// 1 - Pearson correlation of the two histograms; 1 when either is constant.
double spin_image_distance(const SpinImage& a, const SpinImage& b);

/// Nearest target per source descriptor, kept when best / second-best
/// distance < ratio. Source and target indices refer to positions in the
/// given lists. Throws std::invalid_argument on empty lists or mismatched
/// histogram geometry.
CorrespondenceSet match_spin_images(const std::vector<SpinImage>& source, const std::vector<SpinImage>& target,
                                    double ratio = 0.8);

// ---------------------------------------------------------------------------
// Robust rigid estimation

struct RansacParams {
  int max_iterations = 1000;
  double inlier_threshold = 10.0;  // mm
  double confidence = 0.95;
  std::uint64_t seed = 42;
};

struct RobustEstimate {
  RigidTransformd transform;
  std::vector<int> inliers;  // positions in the canonically ordered correspondence list
  CorrespondenceSet consensus;
  int iterations = 0;
};

/// Least-squares rigid fit of paired points (rows correspond). Throws
/// DegenerateError(DegenerateSample) for fewer than 3 points or a
/// collinear/coincident configuration.
RigidTransformd fit_rigid(const Vertices& from, const Vertices& to);

/// RANSAC over minimal 3-point samples with a closed-form fit per hypothesis,
/// refit on the best consensus. Correspondences are sorted canonically first,
/// so the result does not depend on input order.
RobustEstimate estimate_rigid_robust(const CorrespondenceSet& correspondences, const Vertices& source,
                                     const Vertices& target, const RansacParams& params);

// ---------------------------------------------------------------------------
// Point-to-plane ICP

struct IcpParams {
  int max_iterations = 50;
  double rotation_tolerance = 1e-6;     // radians
  double translation_tolerance = 1e-3;  // mm
  double reject_bootstrap = 50.0;       // mm, first iteration
  double reject_factor = 10.0;          // x median residual of the previous iteration
  double reject_floor = 1.0;            // mm, lower bound of the adaptive threshold
  double normal_angle_deg = 45.0;
  double max_condition = 1e8;
  int min_correspondences = 6;
};

struct IcpResult {
  RigidTransformd transform;
  /// Best RMS point-to-plane residual reached up to each iteration (non-increasing).
  std::vector<double> residuals;
  /// Raw RMS residual measured at each iteration.
  std::vector<double> raw_residuals;
  int iterations = 0;
  int correspondences = 0;
  bool converged = false;
};

/// Target surface prepared for repeated closest-point queries.
struct IndexedMesh {
  TriangleMesh mesh;
  BvhTree bvh;
  std::vector<Eigen::Vector3d> face_normals;

  explicit IndexedMesh(TriangleMesh m);
};

/// Aligns `source` onto the target, using only source points that fall in
/// `roi` after the current estimate. Throws DegenerateError(UnderConstrained)
/// when the 6x6 system is too ill-conditioned and
/// DegenerateError(TooFewCorrespondences) when filtering leaves too little.
IcpResult icp_point_to_plane(const PointCloud& source, const IndexedMesh& target, const RigidTransformd& init,
                             const RoiSphere& roi, const IcpParams& params = {});

/// Condition number of the (scale-normalized) point-to-plane system built
/// from points and normals; used to detect unobservable motions up front.
double point_to_plane_condition(const Vertices& points, const Vertices& normals);

// ---------------------------------------------------------------------------
// Full cascade

struct RegistrationParams {
  double coarse_leaf = 10.0;       // mm
  double bin_scale = 2.0;          // spin-image bin = bin_scale x median spacing
  int spin_width = 15;
  double support_angle_deg = 60.0;
  double match_ratio = 0.8;
  int max_keypoints = 500;
  RansacParams ransac;
  IcpParams icp;
  double roi_radius = 100.0;
};

struct RegistrationReport {
  int source_points = 0;
  int target_points = 0;
  int source_downsampled = 0;
  int target_downsampled = 0;
  double bin_size = 0.0;
  int descriptors = 0;
  int correspondences = 0;
  int inliers = 0;
  double inlier_ratio = 0.0;
  int ransac_iterations = 0;
  RigidTransformd coarse;
  IcpResult icp;
  RoiSphere roi;
};

struct RegistrationResult {
  RigidTransformd transform;  // maps source into the target frame
  RegistrationReport report;
};

/// downsample -> spin images -> ratio-test matching -> RANSAC -> ICP.
/// The source must carry normals. Throws DegenerateError(UnderConstrained)
/// when the target geometry inside the ROI cannot pin down all six degrees of
/// freedom (for example a sphere or a plane).
RegistrationResult register_surfaces(const PointCloud& source, const TriangleMesh& target,
                                     const RegistrationParams& params = {});

}  // namespace reconeval
