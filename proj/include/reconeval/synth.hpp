#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mesh.hpp"
#include "trajectory.hpp"

namespace reconeval {

/// Pinhole intrinsics (OpenCV convention: x right, y down, z forward; pixel
/// (u, v) has its centre at (u, v)). `depth_scale` is millimetres per unit.
struct PinholeCamera {
  double fx = 570.0;
  double fy = 570.0;
  double cx = 319.5;
  double cy = 239.5;
  int width = 640;
  int height = 480;
  double depth_scale = 0.1;

  void validate() const;
};

/// 16-bit depth image, row-major, 0 = no measurement.
struct DepthFrame {
  int width = 0;
  int height = 0;
  double timestamp = 0.0;
  std::vector<std::uint16_t> depth;
  /// Optional camera-space unit normals, one per pixel (zero where invalid).
  std::vector<Eigen::Vector3f> normals;

  std::uint16_t at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
};

/// 8-bit RGB image, row-major.
struct ColorFrame {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;
};

struct PointLight {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();  // world, mm
  double weight = 0.5;
};

struct ShadingParams {
  Eigen::Vector3d base_color = Eigen::Vector3d(224.0, 172.0, 150.0);  // uniform skin tone
  std::vector<PointLight> lights;
};

struct RgbdSequence {
  PinholeCamera camera;
  std::vector<DepthFrame> frames;
  std::vector<ColorFrame> colors;  // empty or one per frame
  Trajectory ground_truth;
};

/// Camera positions on a horizontal (xz-plane) arc around `center`, all
/// looking at it with image "up" along +y. Angles start at `start_deg`
/// (0 = camera on the -z side) and advance uniformly over `arc_deg`.
Trajectory circular_trajectory(const Eigen::Vector3d& center, double radius, double arc_deg, int n_frames,
                               double frame_rate, double start_deg);
/// Arc centred on the -z side: start = -arc/2.
Trajectory circular_trajectory(const Eigen::Vector3d& center, double radius, double arc_deg, int n_frames,
                               double frame_rate);

struct RenderOptions {
  bool normals = true;
  double near_plane = 1.0;  // mm; faces with a vertex closer than this are skipped
};

/// Z-buffered software rasterization, perspective-correct, top-left fill
/// rule, no noise and no distortion. Depth is the camera-space z quantized
/// to camera.depth_scale; values beyond 16 bits are dropped.
DepthFrame render_depth(const TriangleMesh& mesh, const PinholeCamera& camera, const Pose& pose,
                        const RenderOptions& options = {});

/// Lambertian shading over a uniform base colour: base * sum_k w_k max(0, n.l_k).
ColorFrame shade_lambertian(const TriangleMesh& mesh, const PinholeCamera& camera, const Pose& pose,
                            const ShadingParams& shading);

/// Two lights above and to either side of the orbit centre, facing the front.
ShadingParams default_shading(const Eigen::Vector3d& center, double standoff);

struct SequenceOptions {
  RenderOptions render;
  std::optional<ShadingParams> shading;  // colour frames only when set
  double max_gap = 0.1;                  // seconds between adjacent frames
};

/// One frame per pose; throws std::invalid_argument when adjacent time stamps
/// are further apart than options.max_gap.
RgbdSequence render_sequence(const TriangleMesh& mesh, const PinholeCamera& camera, const Trajectory& trajectory,
                             const SequenceOptions& options = {});

/// Valid pixels as world points. Normals come from the frame's normal map
/// when present, else from central depth differences (pixels without two
/// valid neighbours per axis are dropped).
PointCloud backproject(const DepthFrame& frame, const PinholeCamera& camera, const Pose& pose);

struct FuseOptions {
  /// Voxel side in mm; 0 disables downsampling, negative picks
  /// footprint_ratio x the pixel footprint at the median depth of the first
  /// frame with valid pixels.
  double leaf = -1.0;
  double footprint_ratio = 0.5;
};

/// Backprojects every frame with its pose and voxel-averages the result.
/// Throws std::invalid_argument when the trajectory has fewer poses than frames.
PointCloud fuse_sequence(const RgbdSequence& sequence, const Trajectory& trajectory, const FuseOptions& options = {});

/// Pixel footprint (mm) at a given depth.
double pixel_footprint(const PinholeCamera& camera, double depth_mm);

// On-disk layout: frame_%05d.pgm (P5, maxval 65535, big-endian), manifest.json,
// groundtruth.txt (metres).

std::string encode_pgm16(const DepthFrame& frame, const std::string& comment = {});
DepthFrame decode_pgm16(std::string_view bytes);
std::string encode_ppm(const ColorFrame& frame);

struct SequenceManifestInfo {
  std::string tool_version;
  std::string config_json;  // embedded verbatim
};

void write_sequence(const std::filesystem::path& dir, const RgbdSequence& sequence, const SequenceManifestInfo& info);
RgbdSequence read_sequence(const std::filesystem::path& dir);

}  // namespace reconeval
