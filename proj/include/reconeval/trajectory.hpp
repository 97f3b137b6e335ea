#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Geometry>

#include "rigid_transform.hpp"

namespace reconeval {

/// Camera-to-world pose at a time stamp. Translation in millimetres; the
/// quaternion is unit length with w >= 0.
struct Pose {
  double timestamp = 0.0;
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  RigidTransformd transform() const { return {rotation, translation}; }
};

/// Poses with strictly increasing time stamps.
using Trajectory = std::vector<Pose>;

enum class LengthUnit { Meters, Millimeters };

/// Unit quaternion with the sign chosen so that w >= 0.
Eigen::Quaterniond canonical(const Eigen::Quaterniond& q);

/// Reads "timestamp tx ty tz qx qy qz qw" lines; '#' starts a comment.
/// Throws ParseError on non-numeric fields, wrong field counts, zero
/// quaternions and non-increasing time stamps.
Trajectory parse_trajectory(std::string_view text, LengthUnit unit = LengthUnit::Meters);

std::string format_trajectory(const Trajectory& trajectory, LengthUnit unit = LengthUnit::Meters,
                              std::span<const std::string> comments = {});

struct PosePair {
  std::size_t estimate;
  std::size_t ground_truth;
};

/// Greedy matching by smallest time difference: every candidate pair within
/// `max_dt` seconds is taken in order of |dt| unless either pose is already
/// used. Result is sorted by estimate index.
std::vector<PosePair> associate(const Trajectory& estimate, const Trajectory& ground_truth, double max_dt);

/// Shortest-arc angle between two orientations, degrees in [0, 180].
double rotational_error(const Eigen::Quaterniond& qs, const Eigen::Quaterniond& qt);

/// Distance between the aligned estimated position and the true position, mm.
double translational_error(const Pose& estimate, const Pose& ground_truth, const RigidTransformd& alignment);

/// Rigid transform T minimizing sum |T p_est - p_gt|^2 over the pairs.
/// Throws DegenerateError(DegenerateSample) for fewer than 3 pairs or
/// collinear positions.
RigidTransformd align_trajectories(const Trajectory& estimate, const Trajectory& ground_truth,
                                   std::span<const PosePair> pairs);

struct PoseError {
  std::size_t index = 0;
  double timestamp = 0.0;
  double translational_mm = 0.0;
  double rotational_deg = 0.0;
};

struct AteOptions {
  double max_dt = 0.02;
  /// Report the per-pose profile after alignment (true) or in raw frames.
  bool aligned_profile = true;
};

struct AteResult {
  double rms = 0.0;  // mm
  RigidTransformd alignment;
  std::vector<PosePair> pairs;
  std::vector<PoseError> profile;
};

/// associate -> align -> RMS of aligned translational errors. Throws
/// DegenerateError(TooFewCorrespondences) with fewer than 3 associations.
AteResult rms_ate(const Trajectory& estimate, const Trajectory& ground_truth, const AteOptions& options = {});

/// "index,timestamp,translational_mm,rotational_deg" with a header row.
std::string profile_csv(std::span<const PoseError> profile, std::span<const std::string> comments = {});

}  // namespace reconeval
