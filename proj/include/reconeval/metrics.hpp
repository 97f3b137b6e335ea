#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mesh_io.hpp"
#include "registration.hpp"

namespace reconeval {

/// Per-point outcome. Exclusions are mutually exclusive and assigned in this
/// priority order: outside the ROI, matched to a boundary face, no normal.
enum class PointStatus : std::uint8_t { Included, OutsideRoi, BoundaryExcluded, NoNormal };

const char* to_string(PointStatus status);

/// Statistics over included values. Standard deviation is the population one.
struct Summary {
  std::size_t count = 0;
  bool empty = true;
  double mean = 0.0;
  double std = 0.0;
  double median = 0.0;
  double rms = 0.0;
  double max = 0.0;
};

Summary aggregate(std::span<const double> values, std::span<const PointStatus> statuses);

struct SurfaceErrorReport {
  enum class Channel { Distance, Angle };
  Channel channel = Channel::Distance;
  std::vector<double> values;  // mm for distance, degrees for angle
  std::vector<PointStatus> statuses;
  Summary summary;
  std::size_t count(PointStatus s) const;
};

/// Target surface with everything the metrics need precomputed.
struct EvaluationTarget {
  IndexedMesh indexed;
  std::vector<std::uint8_t> boundary;

  explicit EvaluationTarget(TriangleMesh mesh);
};

struct SurfaceEvaluation {
  SurfaceErrorReport distance;
  SurfaceErrorReport angle;
};

/// Both metrics in one closest-face pass. Distance: exact distance to the
/// closest face. Angle: angle between the source normal and the target vertex
/// normals interpolated at the closest point.
SurfaceEvaluation evaluate_surface(const PointCloud& source, const EvaluationTarget& target, const RoiSphere& roi);

SurfaceErrorReport surface_distance(const PointCloud& source, const EvaluationTarget& target, const RoiSphere& roi);
SurfaceErrorReport normal_deviation(const PointCloud& source, const EvaluationTarget& target, const RoiSphere& roi);

/// Error values as a per-vertex scalar for colour mapping; excluded points get -1.
std::vector<double> colormap_scalar(const SurfaceErrorReport& report);

struct ColormapExport {
  std::string geometry;  // mesh file with the per-vertex "quality" scalar
  std::string sidecar;   // JSON summary of the report
};

/// Geometry with the colormap scalar attached. Throws std::invalid_argument
/// when the report does not have one entry per vertex/point.
ColormapExport export_colormap(const SurfaceErrorReport& report, const PointCloud& cloud,
                               MeshFormat format = MeshFormat::PlyBinaryLe, std::span<const std::string> comments = {});
ColormapExport export_colormap(const SurfaceErrorReport& report, const TriangleMesh& mesh,
                               MeshFormat format = MeshFormat::PlyBinaryLe, std::span<const std::string> comments = {});

}  // namespace reconeval
