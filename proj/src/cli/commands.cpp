#include "reconeval/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "reconeval/bvh.hpp"
#include "reconeval/cli/config.hpp"
#include "reconeval/error.hpp"
#include "reconeval/mesh_io.hpp"
#include "reconeval/metrics.hpp"
#include "reconeval/shapes.hpp"

namespace reconeval::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--config", common.config_path, "JSON config with flat dotted keys")->check(CLI::ExistingFile);
  cmd->add_option("--set", common.overrides, "Override one config key, e.g. --set icp.max_iterations=80");
}

EvalConfig load_config(const CommonOptions& common) {
  EvalConfig cfg;
  if (!common.config_path.empty()) cfg.merge_json(read_file(common.config_path));
  for (const auto& kv : common.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

json provenance(const EvalConfig& cfg) { return {{"tool", kToolVersion}, {"config", json::parse(cfg.to_json(false))}}; }

std::vector<std::string> comment_lines(const EvalConfig& cfg) {
  return {kToolVersion, "config " + cfg.to_json(false)};
}

std::string with_comment_lines(const EvalConfig& cfg, const std::string& body) {
  std::string out;
  for (const auto& line : comment_lines(cfg)) out += "# " + line + "\n";
  return out + body;
}

void write_json(const fs::path& path, const json& j) { write_file(path, j.dump(2) + "\n"); }

json vec_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json transform_json(const RigidTransformd& t) {
  const Eigen::Matrix4d m = t.matrix();
  json rows = json::array();
  for (int r = 0; r < 4; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2), m(r, 3)}));
  return {{"quaternion_wxyz", json::array({t.rotation.w(), t.rotation.x(), t.rotation.y(), t.rotation.z()})},
          {"translation_mm", vec_json(t.translation)},
          {"matrix", rows}};
}

RigidTransformd parse_transform(const json& doc) {
  const json& t = doc.contains("transform") ? doc.at("transform") : doc;
  if (t.contains("quaternion_wxyz")) {
    const auto q = t.at("quaternion_wxyz").get<std::vector<double>>();
    const auto p = t.at("translation_mm").get<std::vector<double>>();
    if (q.size() != 4 || p.size() != 3) throw std::invalid_argument("transform needs 4 quaternion and 3 translation values");
    const Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
    if (quat.norm() == 0.0) throw std::invalid_argument("transform quaternion is zero");
    return {quat, Eigen::Vector3d(p[0], p[1], p[2])};
  }
  const auto rows = t.at("matrix").get<std::vector<std::vector<double>>>();
  if (rows.size() < 3) throw std::invalid_argument("transform matrix needs at least 3 rows");
  Eigen::Matrix3d r;
  Eigen::Vector3d p;
  for (int i = 0; i < 3; ++i) {
    if (rows[static_cast<std::size_t>(i)].size() != 4) throw std::invalid_argument("transform matrix rows need 4 values");
    for (int j = 0; j < 3; ++j) r(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    p(i) = rows[static_cast<std::size_t>(i)][3];
  }
  if (!(r.transpose() * r).isApprox(Eigen::Matrix3d::Identity(), 1e-6) || r.determinant() < 0.0) {
    throw std::invalid_argument("transform matrix is not a rotation");
  }
  return RigidTransformd(r, p);
}

RigidTransformd load_transform(const fs::path& path) {
  try {
    return parse_transform(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Byte, 0,
                     path.string() + ": " + e.what());
  }
}

// Inputs keyed by file stem: a single file, or every matching file of a directory.
std::map<std::string, fs::path> collect(const fs::path& path, const std::set<std::string>& extensions) {
  std::map<std::string, fs::path> out;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (!entry.is_regular_file()) continue;
      auto ext = entry.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
      if (extensions.count(ext)) out[entry.path().stem().string()] = entry.path();
    }
    if (out.empty()) throw IoError("no input files in " + path.string());
  } else {
    if (!fs::exists(path)) throw IoError("cannot open " + path.string());
    out[path.stem().string()] = path;
  }
  return out;
}

const std::set<std::string> kGeometryExt = {".ply", ".obj"};
const std::set<std::string> kTrajectoryExt = {".txt", ".tum"};
const std::set<std::string> kJsonExt = {".json"};

// Pairs each source stem with its partner: same stem when `partner` is a
// directory, the single partner file otherwise.
std::map<std::string, fs::path> partners(const std::map<std::string, fs::path>& sources, const fs::path& partner,
                                         const std::set<std::string>& extensions, const char* what) {
  if (!fs::is_directory(partner)) {
    if (!fs::exists(partner)) throw IoError("cannot open " + partner.string());
    std::map<std::string, fs::path> out;
    for (const auto& [stem, _] : sources) out[stem] = partner;
    return out;
  }
  auto found = collect(partner, extensions);
  std::vector<std::string> missing;
  for (const auto& [stem, _] : sources) {
    if (!found.count(stem)) missing.push_back(stem);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw std::invalid_argument(std::string("no ") + what + " for: " + list);
  }
  return found;
}

bool batch_mode(const fs::path& p) { return fs::is_directory(p); }

PointCloud load_source(const fs::path& path, const EvalConfig& cfg) {
  const auto loaded = load_geometry_file(path, {cfg.mesh_unit_scale});
  if (loaded.is_mesh()) {
    PointCloud cloud = to_point_cloud(loaded.mesh());
    if (!cloud.has_normals() && loaded.mesh().face_count() > 0) cloud.normals = compute_vertex_normals(loaded.mesh());
    return cloud;
  }
  return loaded.cloud();
}

TriangleMesh load_target(const fs::path& path, const EvalConfig& cfg) {
  auto loaded = load_geometry_file(path, {cfg.mesh_unit_scale});
  if (!loaded.is_mesh()) throw std::invalid_argument(path.string() + ": target must be a triangle mesh");
  return loaded.mesh();
}

RegistrationParams registration_params(const EvalConfig& cfg) {
  RegistrationParams p = cfg.registration;
  p.roi_radius = cfg.roi_radius;
  p.ransac.seed = cfg.seed;
  return p;
}

json residuals_json(const std::vector<double>& v) { return json(v); }

json summary_json(const Summary& s) {
  if (s.empty) return {{"count", 0}, {"mean", nullptr}, {"std", nullptr}, {"median", nullptr}, {"rms", nullptr}, {"max", nullptr}};
  return {{"count", s.count}, {"mean", s.mean}, {"std", s.std}, {"median", s.median}, {"rms", s.rms}, {"max", s.max}};
}

json status_counts(const SurfaceErrorReport& r) {
  json j = json::object();
  for (auto s : {PointStatus::Included, PointStatus::OutsideRoi, PointStatus::BoundaryExcluded, PointStatus::NoNormal}) {
    j[to_string(s)] = r.count(s);
  }
  return j;
}

std::string fmt(double v, int precision = 3) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

// ---------------------------------------------------------------------------

struct RegisterArgs {
  std::string source, target, output;
};

int cmd_register(const RegisterArgs& a, const EvalConfig& cfg, std::ostream& out) {
  const auto sources = collect(a.source, kGeometryExt);
  const auto targets = partners(sources, a.target, kGeometryExt, "target");
  const bool batch = batch_mode(a.source);
  for (const auto& [stem, source_path] : sources) {
    const PointCloud source = load_source(source_path, cfg);
    const TriangleMesh target = load_target(targets.at(stem), cfg);
    const auto result = register_surfaces(source, target, registration_params(cfg));
    const auto& r = result.report;
    json report = {
        {"source_points", r.source_points},
        {"target_points", r.target_points},
        {"source_downsampled", r.source_downsampled},
        {"target_downsampled", r.target_downsampled},
        {"spin_bin_mm", r.bin_size},
        {"descriptors", r.descriptors},
        {"correspondences", r.correspondences},
        {"inliers", r.inliers},
        {"inlier_ratio", r.inlier_ratio},
        {"ransac_iterations", r.ransac_iterations},
        {"coarse", transform_json(r.coarse)},
        {"icp",
         {{"iterations", r.icp.iterations},
          {"converged", r.icp.converged},
          {"correspondences", r.icp.correspondences},
          {"residuals_mm", residuals_json(r.icp.residuals)},
          {"raw_residuals_mm", residuals_json(r.icp.raw_residuals)}}},
        {"roi", {{"center_mm", vec_json(r.roi.center)}, {"radius_mm", r.roi.radius}}},
    };
    json doc = provenance(cfg);
    doc["dataset"] = stem;
    doc["transform"] = transform_json(result.transform);
    doc["report"] = report;
    const fs::path dest = batch ? fs::path(a.output) / (stem + ".json") : fs::path(a.output);
    write_json(dest, doc);
    out << stem << ": " << r.correspondences << " matches, " << r.inliers << " inliers, icp "
        << r.icp.iterations << " iterations, residual "
        << (r.icp.residuals.empty() ? std::string("n/a") : fmt(r.icp.residuals.back(), 4)) << " mm -> " << dest.string()
        << "\n";
  }
  return kSuccess;
}

struct SurfaceArgs {
  std::string source, target, transform, output, method;
};

int cmd_surface_error(const SurfaceArgs& a, const EvalConfig& cfg, std::ostream& out) {
  const auto sources = collect(a.source, kGeometryExt);
  const auto targets = partners(sources, a.target, kGeometryExt, "target");
  std::map<std::string, fs::path> transforms;
  if (!a.transform.empty()) transforms = partners(sources, a.transform, kJsonExt, "transform");
  const fs::path outdir(a.output);
  const std::string method = a.method.empty() ? outdir.filename().string() : a.method;

  json datasets = json::object();
  std::optional<EvaluationTarget> cached;
  fs::path cached_path;
  for (const auto& [stem, source_path] : sources) {
    PointCloud source = load_source(source_path, cfg);
    if (transforms.count(stem)) source = transformed(source, load_transform(transforms.at(stem)));
    const fs::path& target_path = targets.at(stem);
    if (!cached || cached_path != target_path) {
      cached.emplace(load_target(target_path, cfg));
      cached_path = target_path;
    }
    const RoiSphere roi = cfg.roi(roi_sphere_center(cached->indexed.mesh));
    const SurfaceEvaluation eval = evaluate_surface(source, *cached, roi);

    std::string csv = "index,distance_mm,angle_deg,status\n";
    for (std::size_t i = 0; i < eval.distance.values.size(); ++i) {
      const PointStatus st = eval.distance.statuses[i] != PointStatus::Included ? eval.distance.statuses[i]
                                                                                 : eval.angle.statuses[i];
      csv += std::to_string(i) + "," + fmt(eval.distance.values[i], 6) + "," + fmt(eval.angle.values[i], 6) + "," +
             to_string(st) + "\n";
    }
    write_file(outdir / (stem + "_errors.csv"), with_comment_lines(cfg, csv));

    json summary = provenance(cfg);
    summary["dataset"] = stem;
    summary["method"] = method;
    summary["roi"] = {{"center_mm", vec_json(roi.center)}, {"radius_mm", roi.radius}};
    summary["points"] = source.size();
    summary["distance_mm"] = summary_json(eval.distance.summary);
    summary["distance_mm"]["status"] = status_counts(eval.distance);
    summary["angle_deg"] = summary_json(eval.angle.summary);
    summary["angle_deg"]["status"] = status_counts(eval.angle);
    write_json(outdir / (stem + "_summary.json"), summary);

    const auto comments = comment_lines(cfg);
    for (const auto& [name, report] : {std::pair{"distance", &eval.distance}, std::pair{"normal", &eval.angle}}) {
      const auto exported = export_colormap(*report, source, MeshFormat::PlyBinaryLe, comments);
      write_file(outdir / (stem + "_" + name + ".ply"), exported.geometry);
      write_file(outdir / (stem + "_" + name + ".json"), exported.sidecar);
    }

    datasets[stem] = {{"distance_mm", summary_json(eval.distance.summary)}, {"angle_deg", summary_json(eval.angle.summary)}};
    const auto& d = eval.distance.summary;
    const auto& g = eval.angle.summary;
    out << stem << ": distance " << (d.empty ? "n/a" : fmt(d.mean) + " +/- " + fmt(d.std)) << " mm, normal "
        << (g.empty ? "n/a" : fmt(g.mean) + " +/- " + fmt(g.std)) << " deg, " << eval.distance.summary.count << "/"
        << source.size() << " points included\n";
  }
  json batch = provenance(cfg);
  batch["method"] = method;
  batch["datasets"] = datasets;
  write_json(outdir / "batch_summary.json", batch);
  return kSuccess;
}

struct TrajArgs {
  std::string estimate, ground_truth, output;
};

int cmd_traj_error(const TrajArgs& a, const EvalConfig& cfg, std::ostream& out) {
  const auto estimates = collect(a.estimate, kTrajectoryExt);
  const auto truths = partners(estimates, a.ground_truth, kTrajectoryExt, "ground truth");
  const fs::path outdir(a.output);
  for (const auto& [stem, est_path] : estimates) {
    const Trajectory est = parse_trajectory(read_file(est_path), cfg.traj_unit);
    const Trajectory gt = parse_trajectory(read_file(truths.at(stem)), cfg.traj_unit);
    const AteResult ate = rms_ate(est, gt, cfg.ate_options());
    double rot_sum = 0.0;
    for (const auto& e : ate.profile) rot_sum += e.rotational_deg * e.rotational_deg;
    json doc = provenance(cfg);
    doc["dataset"] = stem;
    doc["rms_ate_mm"] = ate.rms;
    doc["rms_rotational_deg"] = ate.profile.empty() ? 0.0 : std::sqrt(rot_sum / static_cast<double>(ate.profile.size()));
    doc["associated_pairs"] = ate.pairs.size();
    doc["estimate_poses"] = est.size();
    doc["ground_truth_poses"] = gt.size();
    doc["alignment"] = transform_json(ate.alignment);
    doc["profile_aligned"] = cfg.traj_aligned_profile;
    write_json(outdir / (stem + "_ate.json"), doc);
    write_file(outdir / (stem + "_profile.csv"), profile_csv(ate.profile, comment_lines(cfg)));
    out << stem << ": RMS ATE " << fmt(ate.rms, 4) << " mm over " << ate.pairs.size() << " poses\n";
  }
  return kSuccess;
}

struct SynthArgs {
  std::string mesh, output;
  int frames = 0;
};

int cmd_synth(const SynthArgs& a, EvalConfig cfg, std::ostream& out) {
  if (a.frames > 0) cfg.synth.frames = a.frames;
  const TriangleMesh mesh = load_target(a.mesh, cfg);
  const Eigen::Vector3d center = surface_centroid(mesh);
  const Trajectory traj =
      circular_trajectory(center, cfg.synth.radius_mm, cfg.synth.arc_deg, cfg.synth.frames, cfg.synth.fps);
  SequenceOptions options;
  options.max_gap = cfg.synth.max_gap_s;
  if (cfg.synth.color) options.shading = default_shading(center, cfg.synth.radius_mm);
  const RgbdSequence seq = render_sequence(mesh, cfg.camera, traj, options);
  write_sequence(a.output, seq, {kToolVersion, cfg.to_json(false)});
  out << "wrote " << seq.frames.size() << " frames to " << a.output << "\n";
  return kSuccess;
}

struct FuseArgs {
  std::string sequence, trajectory, output;
};

int cmd_fuse(const FuseArgs& a, const EvalConfig& cfg, std::ostream& out) {
  const RgbdSequence seq = read_sequence(a.sequence);
  const Trajectory traj = a.trajectory.empty() ? seq.ground_truth : parse_trajectory(read_file(a.trajectory), cfg.traj_unit);
  FuseOptions options;
  options.footprint_ratio = cfg.fuse_footprint_ratio;
  const PointCloud cloud = fuse_sequence(seq, traj, options);
  write_file(a.output, write_point_cloud(cloud, MeshFormat::PlyBinaryLe, {}, comment_lines(cfg)));
  out << "fused " << seq.frames.size() << " frames into " << cloud.size() << " points -> " << a.output << "\n";
  return kSuccess;
}

struct CompareArgs {
  std::vector<std::string> reports;
  std::string output, metric = "distance";
};

int cmd_compare(const CompareArgs& a, const EvalConfig& cfg, std::ostream& out) {
  if (a.reports.size() < 2) throw std::invalid_argument("compare needs at least two reports");
  const std::string key = a.metric == "distance" ? "distance_mm" : "angle_deg";
  struct Method {
    std::string name;
    std::map<std::string, std::pair<double, double>> stats;  // dataset -> mean, std
  };
  std::vector<Method> methods;
  for (const auto& path : a.reports) {
    json doc;
    try {
      doc = json::parse(read_file(path));
    } catch (const json::exception& e) {
      throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Byte, 0, path + ": " + e.what());
    }
    Method m;
    m.name = doc.value("method", fs::path(path).stem().string());
    std::set<std::string> taken;
    for (const auto& other : methods) taken.insert(other.name);
    for (int k = 2; taken.count(m.name); ++k) m.name = doc.value("method", std::string("method")) + "#" + std::to_string(k);
    if (!doc.contains("datasets") || !doc.at("datasets").is_object()) {
      throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Byte, 0, path + ": missing \"datasets\" object");
    }
    for (const auto& [stem, entry] : doc.at("datasets").items()) {
      const auto& s = entry.at(key);
      if (s.at("mean").is_null()) {
        throw std::invalid_argument(path + ": dataset '" + stem + "' has no included points");
      }
      m.stats[stem] = {s.at("mean").get<double>(), s.at("std").get<double>()};
    }
    methods.push_back(std::move(m));
  }
  // Every report must cover the same datasets.
  for (std::size_t i = 1; i < methods.size(); ++i) {
    std::vector<std::string> only_first, only_other;
    for (const auto& [stem, _] : methods[0].stats) {
      if (!methods[i].stats.count(stem)) only_first.push_back(stem);
    }
    for (const auto& [stem, _] : methods[i].stats) {
      if (!methods[0].stats.count(stem)) only_other.push_back(stem);
    }
    if (!only_first.empty() || !only_other.empty()) {
      std::string msg = "dataset mismatch between '" + methods[0].name + "' and '" + methods[i].name + "':";
      for (const auto& s : only_first) msg += " " + s + " (only in " + methods[0].name + ")";
      for (const auto& s : only_other) msg += " " + s + " (only in " + methods[i].name + ")";
      throw std::invalid_argument(msg);
    }
  }

  json doc = provenance(cfg);
  doc["metric"] = key;
  doc["test"] = cfg.compare_test == PairedTest::SignedRank ? "signed-rank" : "t-test";
  json names = json::array();
  for (const auto& m : methods) names.push_back(m.name);
  doc["methods"] = names;
  json table = json::object();
  for (const auto& [stem, _] : methods[0].stats) {
    for (const auto& m : methods) table[stem][m.name] = {{"mean", m.stats.at(stem).first}, {"std", m.stats.at(stem).second}};
  }
  doc["datasets"] = table;

  json pairs = json::array();
  for (std::size_t i = 0; i < methods.size(); ++i) {
    for (std::size_t j = i + 1; j < methods.size(); ++j) {
      std::vector<double> x, y;
      for (const auto& [stem, v] : methods[i].stats) {
        x.push_back(v.first);
        y.push_back(methods[j].stats.at(stem).first);
      }
      json p = {{"a", methods[i].name}, {"b", methods[j].name}, {"n", x.size()}};
      if (x.size() >= 5) {
        const auto c = compare_methods(x, y, cfg.compare_test);
        p["statistic"] = c.statistic;
        p["p_value"] = c.p_value;
      } else {
        p["statistic"] = nullptr;
        p["p_value"] = nullptr;
        p["note"] = "fewer than 5 paired datasets";
      }
      pairs.push_back(p);
    }
  }
  doc["pairs"] = pairs;
  if (!a.output.empty()) write_json(a.output, doc);

  // Aligned text table.
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"dataset"};
  for (const auto& m : methods) header.push_back(m.name);
  rows.push_back(header);
  for (const auto& [stem, _] : methods[0].stats) {
    std::vector<std::string> row = {stem};
    for (const auto& m : methods) row.push_back(fmt(m.stats.at(stem).first) + " +/- " + fmt(m.stats.at(stem).second));
    rows.push_back(row);
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c] << std::string(widths[c] - row[c].size() + (c + 1 < row.size() ? 2 : 0), ' ');
    }
    out << "\n";
  }
  for (const auto& p : pairs) {
    out << p.at("a").get<std::string>() << " vs " << p.at("b").get<std::string>() << ": p = "
        << (p.at("p_value").is_null() ? std::string("n/a") : fmt(p.at("p_value").get<double>(), 6)) << "\n";
  }
  return kSuccess;
}

struct PhantomArgs {
  std::string output;
  int subdivisions = 5;
};

int cmd_phantom(const PhantomArgs& a, const EvalConfig& cfg, std::ostream& out) {
  const TriangleMesh mesh = make_torso_phantom(a.subdivisions);
  const fs::path path(a.output);
  const MeshFormat format = path.extension() == ".obj" ? MeshFormat::Obj : MeshFormat::PlyBinaryLe;
  write_file(path, write_mesh(mesh, format, {}, comment_lines(cfg)));
  out << "wrote phantom with " << mesh.vertex_count() << " vertices, " << mesh.face_count() << " faces -> "
      << a.output << "\n";
  return kSuccess;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Reconstruction accuracy evaluation: surface registration, surface and trajectory error, "
               "synthetic RGBD sequences and method comparison.",
               "reconeval");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonOptions common;

  RegisterArgs reg;
  auto* c_reg = app.add_subcommand("register", "Coarse-to-fine rigid registration of a source onto a target mesh");
  c_reg->add_option("source", reg.source, "Source mesh/cloud with normals, or a directory")->required();
  c_reg->add_option("target", reg.target, "Target mesh, or a directory keyed by stem")->required();
  c_reg->add_option("-o,--output", reg.output, "Transform JSON (directory in batch mode)")->required();
  add_common(c_reg, common);

  SurfaceArgs surf;
  auto* c_surf = app.add_subcommand("surface-error", "Surface distance and normal deviation inside the ROI");
  c_surf->add_option("source", surf.source, "Reconstruction mesh/cloud, or a directory")->required();
  c_surf->add_option("target", surf.target, "Reference mesh, or a directory keyed by stem")->required();
  c_surf->add_option("-t,--transform", surf.transform, "Transform JSON applied to the source (or a directory)");
  c_surf->add_option("-o,--output", surf.output, "Output directory")->required();
  c_surf->add_option("-m,--method", surf.method, "Method name recorded in batch_summary.json");
  add_common(c_surf, common);

  TrajArgs traj;
  auto* c_traj = app.add_subcommand("traj-error", "RMS absolute trajectory error and per-pose profile");
  c_traj->add_option("estimate", traj.estimate, "Estimated trajectory, or a directory")->required();
  c_traj->add_option("ground_truth", traj.ground_truth, "Ground-truth trajectory, or a directory")->required();
  c_traj->add_option("-o,--output", traj.output, "Output directory")->required();
  add_common(c_traj, common);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Render a synthetic depth sequence on a circular camera arc");
  c_synth->add_option("mesh", synth.mesh, "Mesh to render")->required();
  c_synth->add_option("-o,--output", synth.output, "Sequence directory")->required();
  c_synth->add_option("-n,--frames", synth.frames, "Frame count (overrides synth.frames)")->check(CLI::PositiveNumber);
  add_common(c_synth, common);

  FuseArgs fuse;
  auto* c_fuse = app.add_subcommand("fuse", "Fuse a depth sequence into a point cloud");
  c_fuse->add_option("sequence", fuse.sequence, "Sequence directory with manifest.json")->required();
  c_fuse->add_option("--trajectory", fuse.trajectory, "Poses to use instead of the sequence ground truth");
  c_fuse->add_option("-o,--output", fuse.output, "Output PLY")->required();
  add_common(c_fuse, common);

  CompareArgs cmp;
  auto* c_cmp = app.add_subcommand("compare", "Compare methods across datasets with paired tests");
  c_cmp->add_option("reports", cmp.reports, "batch_summary.json of each method")->required()->expected(2, -1);
  c_cmp->add_option("-o,--output", cmp.output, "Comparison JSON");
  c_cmp->add_option("--metric", cmp.metric, "distance or angle")->check(CLI::IsMember({"distance", "angle"}));
  add_common(c_cmp, common);

  auto* c_cfg = app.add_subcommand("config", "Configuration utilities");
  c_cfg->require_subcommand(1);
  auto* c_dump = c_cfg->add_subcommand("dump", "Print the effective configuration with all defaults");
  add_common(c_dump, common);

  PhantomArgs phantom;
  auto* c_ph = app.add_subcommand("phantom", "Write the built-in asymmetric torso phantom mesh");
  c_ph->add_option("-o,--output", phantom.output, "Output mesh (.ply or .obj)")->required();
  c_ph->add_option("--subdivisions", phantom.subdivisions, "Icosphere subdivision level")->check(CLI::Range(1, 7));
  add_common(c_ph, common);

  std::vector<const char*> argv = {"reconeval"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  return guarded(
      [&]() -> int {
        const EvalConfig cfg = load_config(common);
        if (c_reg->parsed()) return cmd_register(reg, cfg, out);
        if (c_surf->parsed()) return cmd_surface_error(surf, cfg, out);
        if (c_traj->parsed()) return cmd_traj_error(traj, cfg, out);
        if (c_synth->parsed()) return cmd_synth(synth, cfg, out);
        if (c_fuse->parsed()) return cmd_fuse(fuse, cfg, out);
        if (c_cmp->parsed()) return cmd_compare(cmp, cfg, out);
        if (c_ph->parsed()) return cmd_phantom(phantom, cfg, out);
        out << cfg.to_json() << "\n";
        return kSuccess;
      },
      err);
}

}  // namespace reconeval::cli
