#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "../registration.hpp"
#include "../statistics.hpp"
#include "../synth.hpp"
#include "../trajectory.hpp"

namespace reconeval::cli {

inline constexpr const char* kToolVersion = "reconeval 0.1.0";

struct SynthSettings {
  int frames = 608;
  double arc_deg = 180.0;
  double radius_mm = 900.0;
  double fps = 50.0;
  double max_gap_s = 0.1;
  bool color = false;
};

/// Every tunable of the pipeline. Serialized as a flat JSON object with
/// dotted keys ("icp.max_iterations", ...).
struct EvalConfig {
  double roi_radius = 100.0;
  RegistrationParams registration;
  PinholeCamera camera;
  SynthSettings synth;
  double fuse_footprint_ratio = 0.5;
  double traj_max_dt = 0.02;
  LengthUnit traj_unit = LengthUnit::Meters;
  bool traj_aligned_profile = true;
  double mesh_unit_scale = 1.0;
  std::uint64_t seed = 42;
  PairedTest compare_test = PairedTest::SignedRank;

  /// Throws std::invalid_argument naming the first bad key.
  void validate() const;

  std::vector<std::string> keys() const;
  /// Value of one key in its JSON text form.
  std::string get(std::string_view key) const;
  /// Sets one key from text ("1e-3", "true", "mm"). Throws
  /// std::invalid_argument for unknown keys or unparsable values.
  void set(std::string_view key, std::string_view value);

  std::string to_json(bool pretty = true) const;
  /// Keys missing from the text keep their current value.
  void merge_json(std::string_view text);
  static EvalConfig from_json(std::string_view text);

  AteOptions ate_options() const { return {traj_max_dt, traj_aligned_profile}; }
  RoiSphere roi(const Eigen::Vector3d& center) const { return {center, roi_radius}; }
};

bool operator==(const EvalConfig& a, const EvalConfig& b);

}  // namespace reconeval::cli
