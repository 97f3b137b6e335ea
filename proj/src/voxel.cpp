#include <cmath>
#include <stdexcept>

#include "reconeval/registration.hpp"

namespace reconeval {

std::size_t VoxelAccumulator::KeyHash::operator()(const std::array<std::int64_t, 3>& k) const noexcept {
  auto h = static_cast<std::uint64_t>(k[0]) * 0x9E3779B97F4A7C15ULL;
  h ^= static_cast<std::uint64_t>(k[1]) * 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
  h ^= static_cast<std::uint64_t>(k[2]) * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h);
}

VoxelAccumulator::VoxelAccumulator(double leaf) : leaf_(leaf) {
  if (!(leaf > 0.0)) throw std::invalid_argument("voxel leaf must be positive");
}

void VoxelAccumulator::add(const Eigen::Vector3d& point, const Eigen::Vector3d* normal) {
  const std::array<std::int64_t, 3> key = {static_cast<std::int64_t>(std::floor(point.x() / leaf_)),
                                           static_cast<std::int64_t>(std::floor(point.y() / leaf_)),
                                           static_cast<std::int64_t>(std::floor(point.z() / leaf_))};
  const auto [it, inserted] = index_.try_emplace(key, cells_.size());
  if (inserted) cells_.emplace_back();
  Cell& cell = cells_[it->second];
  cell.point_sum += point;
  ++cell.count;
  if (normal) {
    if (cell.normal_count == 0) cell.first_normal = *normal;
    cell.normal_sum += *normal;
    ++cell.normal_count;
  } else {
    all_normals_ = false;
  }
}

void VoxelAccumulator::add(const PointCloud& cloud) {
  const bool normals = cloud.has_normals();
  for (Eigen::Index i = 0; i < cloud.size(); ++i) {
    if (!cloud.is_valid(i)) continue;
    const Eigen::Vector3d p = cloud.points.row(i).transpose();
    if (normals) {
      const Eigen::Vector3d n = cloud.normals.row(i).transpose();
      add(p, &n);
    } else {
      add(p, nullptr);
    }
  }
}

PointCloud VoxelAccumulator::result() const {
  PointCloud out;
  const auto n = static_cast<Eigen::Index>(cells_.size());
  out.points.resize(n, 3);
  const bool normals = all_normals_ && n > 0;
  if (normals) out.normals.resize(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Cell& cell = cells_[static_cast<std::size_t>(i)];
    out.points.row(i) = (cell.point_sum / cell.count).transpose();
    if (!normals) continue;
    const double len = cell.normal_sum.norm();
    // Opposing normals cancelling out: keep the first one seen.
    out.normals.row(i) = (len > 1e-12 ? Eigen::Vector3d(cell.normal_sum / len) : cell.first_normal).transpose();
  }
  return out;
}

PointCloud downsample(const PointCloud& cloud, double leaf) {
  VoxelAccumulator acc(leaf);
  acc.add(cloud);
  return acc.result();
}

}  // namespace reconeval
