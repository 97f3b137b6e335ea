#include "reconeval/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "reconeval/error.hpp"
#include "reconeval/mesh_io.hpp"
#include "reconeval/registration.hpp"

namespace reconeval {

void PinholeCamera::validate() const {
  if (!(fx > 0.0 && fy > 0.0)) throw std::invalid_argument("camera focal lengths must be positive");
  if (width <= 0 || height <= 0) throw std::invalid_argument("camera size must be positive");
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height)) {
    throw std::invalid_argument("principal point must lie inside the image");
  }
  if (!(depth_scale > 0.0)) throw std::invalid_argument("depth scale must be positive");
}

double pixel_footprint(const PinholeCamera& camera, double depth_mm) {
  return depth_mm * std::max(1.0 / camera.fx, 1.0 / camera.fy);
}

// ---------------------------------------------------------------------------
// Trajectories

Trajectory circular_trajectory(const Eigen::Vector3d& center, double radius, double arc_deg, int n_frames,
                               double frame_rate, double start_deg) {
  if (n_frames < 1) throw std::invalid_argument("trajectory needs at least one frame");
  if (!(radius > 0.0)) throw std::invalid_argument("orbit radius must be positive");
  if (!(frame_rate > 0.0)) throw std::invalid_argument("frame rate must be positive");
  Trajectory out;
  out.reserve(static_cast<std::size_t>(n_frames));
  for (int k = 0; k < n_frames; ++k) {
    const double along = n_frames == 1 ? 0.5 : static_cast<double>(k) / (n_frames - 1);
    const double phi = (start_deg + along * arc_deg) * std::numbers::pi / 180.0;
    const Eigen::Vector3d position = center + radius * Eigen::Vector3d(std::sin(phi), 0.0, -std::cos(phi));
    const Eigen::Vector3d forward = (center - position).normalized();
    const Eigen::Vector3d down = -Eigen::Vector3d::UnitY();
    const Eigen::Vector3d right = down.cross(forward);
    Eigen::Matrix3d r;
    r.col(0) = right;
    r.col(1) = down;
    r.col(2) = forward;
    Pose pose;
    pose.timestamp = k / frame_rate;
    pose.rotation = canonical(Eigen::Quaterniond(r));
    pose.translation = position;
    out.push_back(pose);
  }
  return out;
}

Trajectory circular_trajectory(const Eigen::Vector3d& center, double radius, double arc_deg, int n_frames,
                               double frame_rate) {
  return circular_trajectory(center, radius, arc_deg, n_frames, frame_rate, -arc_deg / 2.0);
}

// ---------------------------------------------------------------------------
// Rasterization

namespace {

struct Raster {
  int width = 0;
  int height = 0;
  std::vector<double> z;  // camera-space depth, +inf where empty
  std::vector<Eigen::Vector3f> normals;
};

Raster rasterize(const TriangleMesh& mesh, const PinholeCamera& camera, const Pose& pose, const RenderOptions& options) {
  camera.validate();
  Raster raster;
  raster.width = camera.width;
  raster.height = camera.height;
  const std::size_t pixels = static_cast<std::size_t>(camera.width) * static_cast<std::size_t>(camera.height);
  raster.z.assign(pixels, std::numeric_limits<double>::infinity());
  if (options.normals) raster.normals.assign(pixels, Eigen::Vector3f::Zero());
  if (mesh.face_count() == 0) return raster;

  const Eigen::Matrix3d rt = pose.rotation.toRotationMatrix().transpose();
  const auto n = mesh.vertex_count();
  std::vector<Eigen::Vector3d> cam(static_cast<std::size_t>(n));
  std::vector<Eigen::Vector2d> screen(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d c = rt * (mesh.vertices.row(i).transpose() - pose.translation);
    cam[static_cast<std::size_t>(i)] = c;
    screen[static_cast<std::size_t>(i)] = {camera.fx * c.x() / c.z() + camera.cx, camera.fy * c.y() / c.z() + camera.cy};
  }
  std::vector<Eigen::Vector3d> cam_normals;
  if (options.normals) {
    const Vertices world = mesh.has_normals() ? mesh.normals : compute_vertex_normals(mesh);
    cam_normals.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) cam_normals[static_cast<std::size_t>(i)] = rt * world.row(i).transpose();
  }

  auto edge = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b, double px, double py) {
    return (b.x() - a.x()) * (py - a.y()) - (b.y() - a.y()) * (px - a.x());
  };
  // Exactly one of two triangles sharing an edge owns pixels on it.
  auto owns = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    const double dy = b.y() - a.y();
    return dy > 0.0 || (dy == 0.0 && b.x() < a.x());
  };

  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    std::array<int, 3> idx = {mesh.faces(f, 0), mesh.faces(f, 1), mesh.faces(f, 2)};
    bool behind = false;
    for (int k : idx) behind |= cam[static_cast<std::size_t>(k)].z() < options.near_plane;
    if (behind) continue;
    double area = edge(screen[static_cast<std::size_t>(idx[0])], screen[static_cast<std::size_t>(idx[1])],
                       screen[static_cast<std::size_t>(idx[2])].x(), screen[static_cast<std::size_t>(idx[2])].y());
    if (area == 0.0) continue;
    if (area < 0.0) {
      std::swap(idx[1], idx[2]);
      area = -area;
    }
    const Eigen::Vector2d& s0 = screen[static_cast<std::size_t>(idx[0])];
    const Eigen::Vector2d& s1 = screen[static_cast<std::size_t>(idx[1])];
    const Eigen::Vector2d& s2 = screen[static_cast<std::size_t>(idx[2])];
    const double min_x = std::min({s0.x(), s1.x(), s2.x()}), max_x = std::max({s0.x(), s1.x(), s2.x()});
    const double min_y = std::min({s0.y(), s1.y(), s2.y()}), max_y = std::max({s0.y(), s1.y(), s2.y()});
    const int u0 = std::max(0, static_cast<int>(std::ceil(min_x)));
    const int u1 = std::min(camera.width - 1, static_cast<int>(std::floor(max_x)));
    const int v0 = std::max(0, static_cast<int>(std::ceil(min_y)));
    const int v1 = std::min(camera.height - 1, static_cast<int>(std::floor(max_y)));
    if (u0 > u1 || v0 > v1) continue;
    const bool own0 = owns(s1, s2), own1 = owns(s2, s0), own2 = owns(s0, s1);
    const double inv_z0 = 1.0 / cam[static_cast<std::size_t>(idx[0])].z();
    const double inv_z1 = 1.0 / cam[static_cast<std::size_t>(idx[1])].z();
    const double inv_z2 = 1.0 / cam[static_cast<std::size_t>(idx[2])].z();

    for (int v = v0; v <= v1; ++v) {
      for (int u = u0; u <= u1; ++u) {
        const double w0 = edge(s1, s2, u, v);
        const double w1 = edge(s2, s0, u, v);
        const double w2 = edge(s0, s1, u, v);
        if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
        if ((w0 == 0.0 && !own0) || (w1 == 0.0 && !own1) || (w2 == 0.0 && !own2)) continue;
        const double b0 = w0 / area * inv_z0, b1 = w1 / area * inv_z1, b2 = w2 / area * inv_z2;
        const double inv = b0 + b1 + b2;
        const double z = 1.0 / inv;
        const std::size_t pix = static_cast<std::size_t>(v) * static_cast<std::size_t>(camera.width) + static_cast<std::size_t>(u);
        if (!(z < raster.z[pix])) continue;
        raster.z[pix] = z;
        if (options.normals) {
          const Eigen::Vector3d nrm = (b0 * cam_normals[static_cast<std::size_t>(idx[0])] +
                                       b1 * cam_normals[static_cast<std::size_t>(idx[1])] +
                                       b2 * cam_normals[static_cast<std::size_t>(idx[2])]) /
                                      inv;
          const double len = nrm.norm();
          raster.normals[pix] = len > 0.0 ? Eigen::Vector3f((nrm / len).cast<float>()) : Eigen::Vector3f::Zero();
        }
      }
    }
  }
  return raster;
}

}  // namespace

DepthFrame render_depth(const TriangleMesh& mesh, const PinholeCamera& camera, const Pose& pose,
                        const RenderOptions& options) {
  Raster raster = rasterize(mesh, camera, pose, options);
  DepthFrame frame;
  frame.width = camera.width;
  frame.height = camera.height;
  frame.timestamp = pose.timestamp;
  frame.depth.assign(raster.z.size(), 0);
  for (std::size_t i = 0; i < raster.z.size(); ++i) {
    if (!std::isfinite(raster.z[i])) continue;
    const double units = std::round(raster.z[i] / camera.depth_scale);
    if (units >= 1.0 && units <= 65535.0) frame.depth[i] = static_cast<std::uint16_t>(units);
  }
  if (options.normals) {
    frame.normals = std::move(raster.normals);
    for (std::size_t i = 0; i < frame.depth.size(); ++i) {
      if (frame.depth[i] == 0) frame.normals[i].setZero();
    }
  }
  return frame;
}

ShadingParams default_shading(const Eigen::Vector3d& center, double standoff) {
  ShadingParams params;
  params.lights = {{center + Eigen::Vector3d(-0.6 * standoff, 0.5 * standoff, -0.8 * standoff), 0.5},
                   {center + Eigen::Vector3d(0.6 * standoff, 0.3 * standoff, -0.8 * standoff), 0.5}};
  return params;
}

ColorFrame shade_lambertian(const TriangleMesh& mesh, const PinholeCamera& camera, const Pose& pose,
                            const ShadingParams& shading) {
  RenderOptions options;
  options.normals = true;
  const Raster raster = rasterize(mesh, camera, pose, options);
  ColorFrame frame;
  frame.width = camera.width;
  frame.height = camera.height;
  frame.rgb.assign(raster.z.size() * 3, 0);
  const Eigen::Matrix3d r = pose.rotation.toRotationMatrix();
  for (int v = 0; v < camera.height; ++v) {
    for (int u = 0; u < camera.width; ++u) {
      const std::size_t pix = static_cast<std::size_t>(v) * static_cast<std::size_t>(camera.width) + static_cast<std::size_t>(u);
      const double z = raster.z[pix];
      if (!std::isfinite(z)) continue;
      const Eigen::Vector3d p_cam((u - camera.cx) * z / camera.fx, (v - camera.cy) * z / camera.fy, z);
      const Eigen::Vector3d p = r * p_cam + pose.translation;
      const Eigen::Vector3d n = r * raster.normals[pix].cast<double>();
      double intensity = 0.0;
      for (const auto& light : shading.lights) {
        intensity += light.weight * std::max(0.0, n.dot((light.position - p).normalized()));
      }
      for (int c = 0; c < 3; ++c) {
        frame.rgb[pix * 3 + static_cast<std::size_t>(c)] =
            static_cast<std::uint8_t>(std::clamp(std::round(shading.base_color[c] * intensity), 0.0, 255.0));
      }
    }
  }
  return frame;
}

RgbdSequence render_sequence(const TriangleMesh& mesh, const PinholeCamera& camera, const Trajectory& trajectory,
                             const SequenceOptions& options) {
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const double gap = trajectory[k].timestamp - trajectory[k - 1].timestamp;
    if (!(gap > 0.0)) throw std::invalid_argument("trajectory timestamps must increase strictly");
    if (gap > options.max_gap + 1e-12) {
      throw std::invalid_argument("frame gap of " + std::to_string(gap) + " s exceeds the " +
                                  std::to_string(options.max_gap) + " s limit");
    }
  }
  RgbdSequence seq;
  seq.camera = camera;
  seq.ground_truth = trajectory;
  TriangleMesh lit = mesh;
  if (!lit.has_normals()) lit.normals = compute_vertex_normals(lit);
  for (const auto& pose : trajectory) {
    seq.frames.push_back(render_depth(lit, camera, pose, options.render));
    if (options.shading) seq.colors.push_back(shade_lambertian(lit, camera, pose, *options.shading));
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Backprojection and fusion

PointCloud backproject(const DepthFrame& frame, const PinholeCamera& camera, const Pose& pose) {
  if (frame.width != camera.width || frame.height != camera.height ||
      frame.depth.size() != static_cast<std::size_t>(frame.width) * static_cast<std::size_t>(frame.height)) {
    throw std::invalid_argument("depth frame does not match the camera");
  }
  const Eigen::Matrix3d r = pose.rotation.toRotationMatrix();
  const bool have_normals = frame.normals.size() == frame.depth.size();

  auto camera_point = [&](int u, int v) {
    const double z = frame.at(u, v) * camera.depth_scale;
    return Eigen::Vector3d((u - camera.cx) * z / camera.fx, (v - camera.cy) * z / camera.fy, z);
  };
  // Neighbour usable for a finite difference: valid and on the same surface.
  auto usable = [&](int u, int v, double z) {
    if (u < 0 || v < 0 || u >= frame.width || v >= frame.height) return false;
    const auto d = frame.at(u, v);
    return d != 0 && std::abs(d * camera.depth_scale - z) < 0.05 * z;
  };

  std::vector<Eigen::Vector3d> points, normals;
  for (int v = 0; v < frame.height; ++v) {
    for (int u = 0; u < frame.width; ++u) {
      if (frame.at(u, v) == 0) continue;
      const Eigen::Vector3d pc = camera_point(u, v);
      Eigen::Vector3d nc;
      if (have_normals) {
        nc = frame.normals[static_cast<std::size_t>(v) * static_cast<std::size_t>(frame.width) + static_cast<std::size_t>(u)]
                 .cast<double>();
        if (nc.squaredNorm() == 0.0) continue;
      } else {
        const double z = pc.z();
        if (!usable(u - 1, v, z) || !usable(u + 1, v, z) || !usable(u, v - 1, z) || !usable(u, v + 1, z)) continue;
        const Eigen::Vector3d du = camera_point(u + 1, v) - camera_point(u - 1, v);
        const Eigen::Vector3d dv = camera_point(u, v + 1) - camera_point(u, v - 1);
        nc = du.cross(dv);
        if (nc.squaredNorm() == 0.0) continue;
        if (nc.dot(pc) > 0.0) nc = -nc;  // face the camera
      }
      points.push_back(r * pc + pose.translation);
      normals.push_back((r * nc).normalized());
    }
  }
  PointCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(points.size()), 3);
  cloud.normals.resize(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    cloud.points.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
    cloud.normals.row(static_cast<Eigen::Index>(i)) = normals[i].transpose();
  }
  return cloud;
}

namespace {

const Pose& pose_for(const Trajectory& trajectory, const DepthFrame& frame, std::size_t index) {
  const auto it = std::lower_bound(trajectory.begin(), trajectory.end(), frame.timestamp - 1e-4,
                                   [](const Pose& p, double t) { return p.timestamp < t; });
  if (it == trajectory.end() || std::abs(it->timestamp - frame.timestamp) > 1e-4) {
    throw std::invalid_argument("no pose for frame " + std::to_string(index) + " at t=" + std::to_string(frame.timestamp));
  }
  return *it;
}

double median_depth(const DepthFrame& frame, double scale) {
  std::vector<std::uint16_t> valid;
  for (auto d : frame.depth) {
    if (d) valid.push_back(d);
  }
  if (valid.empty()) return 0.0;
  const auto mid = valid.begin() + static_cast<std::ptrdiff_t>(valid.size() / 2);
  std::nth_element(valid.begin(), mid, valid.end());
  return *mid * scale;
}

}  // namespace

PointCloud fuse_sequence(const RgbdSequence& sequence, const Trajectory& trajectory, const FuseOptions& options) {
  if (sequence.frames.empty()) return {};
  double leaf = options.leaf;
  if (leaf < 0.0) {
    for (const auto& frame : sequence.frames) {
      const double d = median_depth(frame, sequence.camera.depth_scale);
      if (d > 0.0) {
        leaf = options.footprint_ratio * pixel_footprint(sequence.camera, d);
        break;
      }
    }
    if (leaf < 0.0) return {};  // nothing valid anywhere
  }
  if (leaf == 0.0) {
    std::vector<PointCloud> parts;
    Eigen::Index total = 0;
    for (std::size_t k = 0; k < sequence.frames.size(); ++k) {
      parts.push_back(backproject(sequence.frames[k], sequence.camera, pose_for(trajectory, sequence.frames[k], k)));
      total += parts.back().size();
    }
    PointCloud out;
    out.points.resize(total, 3);
    out.normals.resize(total, 3);
    Eigen::Index row = 0;
    for (const auto& part : parts) {
      out.points.middleRows(row, part.size()) = part.points;
      out.normals.middleRows(row, part.size()) = part.normals;
      row += part.size();
    }
    return out;
  }
  VoxelAccumulator acc(leaf);
  for (std::size_t k = 0; k < sequence.frames.size(); ++k) {
    acc.add(backproject(sequence.frames[k], sequence.camera, pose_for(trajectory, sequence.frames[k], k)));
  }
  return acc.result();
}

// ---------------------------------------------------------------------------
// Files

std::string encode_pgm16(const DepthFrame& frame, const std::string& comment) {
  std::string out = "P5\n";
  if (!comment.empty()) out += "# " + comment + "\n";
  out += std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n65535\n";
  out.reserve(out.size() + frame.depth.size() * 2);
  for (auto d : frame.depth) {
    out += static_cast<char>(d >> 8);
    out += static_cast<char>(d & 0xFF);
  }
  return out;
}

DepthFrame decode_pgm16(std::string_view bytes) {
  std::size_t pos = 0;
  auto fail = [&](ParseError::Kind kind, const std::string& what) {
    return ParseError(kind, ParseError::Location::Byte, pos, what);
  };
  auto token = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
  };
  if (token() != "P5") throw fail(ParseError::Kind::MalformedHeader, "not a binary PGM (P5)");
  long values[3];
  for (long& v : values) {
    const auto t = token();
    char* end = nullptr;
    const std::string s(t);
    v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || v <= 0) throw fail(ParseError::Kind::MalformedHeader, "bad PGM header value");
  }
  if (values[2] > 65535) throw fail(ParseError::Kind::MalformedHeader, "PGM maxval above 65535");
  ++pos;  // single whitespace after maxval
  const int bpp = values[2] > 255 ? 2 : 1;
  DepthFrame frame;
  frame.width = static_cast<int>(values[0]);
  frame.height = static_cast<int>(values[1]);
  const std::size_t count = static_cast<std::size_t>(frame.width) * static_cast<std::size_t>(frame.height);
  if (pos + count * static_cast<std::size_t>(bpp) > bytes.size()) {
    throw fail(ParseError::Kind::TruncatedBody, "PGM pixel data is truncated");
  }
  frame.depth.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (bpp == 2) {
      frame.depth[i] = static_cast<std::uint16_t>((static_cast<unsigned char>(bytes[pos]) << 8) |
                                                  static_cast<unsigned char>(bytes[pos + 1]));
    } else {
      frame.depth[i] = static_cast<unsigned char>(bytes[pos]);
    }
    pos += static_cast<std::size_t>(bpp);
  }
  return frame;
}

std::string encode_ppm(const ColorFrame& frame) {
  std::string out = "P6\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(frame.rgb.data()), frame.rgb.size());
  return out;
}

namespace {

std::string frame_name(const char* prefix, std::size_t k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%05zu.%s", prefix, k, ext);
  return buf;
}

}  // namespace

void write_sequence(const std::filesystem::path& dir, const RgbdSequence& sequence, const SequenceManifestInfo& info) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t k = 0; k < sequence.frames.size(); ++k) {
    const std::string depth_name = frame_name("frame", k, "pgm");
    write_file(dir / depth_name, encode_pgm16(sequence.frames[k], info.tool_version));
    nlohmann::json entry = {{"depth", depth_name}, {"timestamp", sequence.frames[k].timestamp}};
    if (k < sequence.colors.size()) {
      const std::string color_name = frame_name("color", k, "ppm");
      write_file(dir / color_name, encode_ppm(sequence.colors[k]));
      entry["color"] = color_name;
    }
    frames.push_back(entry);
  }
  const std::vector<std::string> comments = {info.tool_version};
  write_file(dir / "groundtruth.txt", format_trajectory(sequence.ground_truth, LengthUnit::Meters, comments));
  const auto& cam = sequence.camera;
  nlohmann::json manifest = {
      {"format", "reconeval-rgbd"},
      {"tool", info.tool_version},
      {"camera",
       {{"fx", cam.fx}, {"fy", cam.fy}, {"cx", cam.cx}, {"cy", cam.cy}, {"width", cam.width}, {"height", cam.height}}},
      {"depth_scale_mm", cam.depth_scale},
      {"frames", frames},
      {"trajectory", "groundtruth.txt"},
      {"trajectory_unit", "m"},
  };
  if (!info.config_json.empty()) manifest["config"] = nlohmann::json::parse(info.config_json);
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

RgbdSequence read_sequence(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.json";
  if (!std::filesystem::exists(manifest_path)) throw IoError("missing manifest " + manifest_path.string());
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Byte, 0, std::string("manifest: ") + e.what());
  }
  RgbdSequence seq;
  try {
    const auto& cam = manifest.at("camera");
    seq.camera.fx = cam.at("fx").get<double>();
    seq.camera.fy = cam.at("fy").get<double>();
    seq.camera.cx = cam.at("cx").get<double>();
    seq.camera.cy = cam.at("cy").get<double>();
    seq.camera.width = cam.at("width").get<int>();
    seq.camera.height = cam.at("height").get<int>();
    seq.camera.depth_scale = manifest.at("depth_scale_mm").get<double>();
    seq.camera.validate();
    for (const auto& entry : manifest.at("frames")) {
      DepthFrame frame = decode_pgm16(read_file(dir / entry.at("depth").get<std::string>()));
      frame.timestamp = entry.at("timestamp").get<double>();
      if (frame.width != seq.camera.width || frame.height != seq.camera.height) {
        throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Byte, 0, "frame size differs from camera");
      }
      seq.frames.push_back(std::move(frame));
    }
    if (manifest.contains("trajectory")) {
      const auto unit = manifest.value("trajectory_unit", std::string("m")) == "mm" ? LengthUnit::Millimeters : LengthUnit::Meters;
      seq.ground_truth = parse_trajectory(read_file(dir / manifest.at("trajectory").get<std::string>()), unit);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Byte, 0, std::string("manifest: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Byte, 0, std::string("manifest: ") + e.what());
  }
  return seq;
}

}  // namespace reconeval
