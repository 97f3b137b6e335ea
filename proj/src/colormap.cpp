#include <stdexcept>

#include <json.hpp>

#include "reconeval/metrics.hpp"

namespace reconeval {

namespace {

std::string sidecar_json(const SurfaceErrorReport& report, std::span<const std::string> comments) {
  const Summary& s = report.summary;
  nlohmann::json j;
  j["channel"] = report.channel == SurfaceErrorReport::Channel::Distance ? "distance_mm" : "angle_deg";
  j["sentinel"] = -1.0;
  j["points"] = report.values.size();
  j["summary"] = {{"count", s.count}, {"empty", s.empty}};
  if (!s.empty) {
    j["summary"]["mean"] = s.mean;
    j["summary"]["std"] = s.std;
    j["summary"]["median"] = s.median;
    j["summary"]["rms"] = s.rms;
    j["summary"]["max"] = s.max;
  }
  for (auto st : {PointStatus::Included, PointStatus::OutsideRoi, PointStatus::BoundaryExcluded, PointStatus::NoNormal}) {
    j["status"][to_string(st)] = report.count(st);
  }
  if (!comments.empty()) j["comments"] = std::vector<std::string>(comments.begin(), comments.end());
  return j.dump(2) + "\n";
}

void check_size(const SurfaceErrorReport& report, Eigen::Index n) {
  if (report.values.size() != static_cast<std::size_t>(n) || report.statuses.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("colormap: report has " + std::to_string(report.values.size()) + " entries for " +
                                std::to_string(n) + " vertices");
  }
}

}  // namespace

ColormapExport export_colormap(const SurfaceErrorReport& report, const PointCloud& cloud, MeshFormat format,
                               std::span<const std::string> comments) {
  check_size(report, cloud.size());
  const auto scalar = colormap_scalar(report);
  return {write_point_cloud(cloud, format, scalar, comments), sidecar_json(report, comments)};
}

ColormapExport export_colormap(const SurfaceErrorReport& report, const TriangleMesh& mesh, MeshFormat format,
                               std::span<const std::string> comments) {
  check_size(report, mesh.vertex_count());
  const auto scalar = colormap_scalar(report);
  return {write_mesh(mesh, format, scalar, comments), sidecar_json(report, comments)};
}

}  // namespace reconeval
