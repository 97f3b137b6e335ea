#include "reconeval/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <variant>

#include <json.hpp>

namespace reconeval::cli {
namespace {

using FieldRef = std::variant<double*, int*, bool*, std::uint64_t*, LengthUnit*, PairedTest*>;

struct Field {
  const char* key;
  FieldRef ref;
  double upper = std::numeric_limits<double>::infinity();  // inclusive
};

std::vector<Field> fields(EvalConfig& c) {
  auto& r = c.registration;
  return {
      {"camera.cx", &c.camera.cx},
      {"camera.cy", &c.camera.cy},
      {"camera.fx", &c.camera.fx},
      {"camera.fy", &c.camera.fy},
      {"camera.height", &c.camera.height},
      {"camera.width", &c.camera.width},
      {"coarse.bin_scale", &r.bin_scale},
      {"coarse.leaf_mm", &r.coarse_leaf},
      {"coarse.max_keypoints", &r.max_keypoints},
      {"compare.test", &c.compare_test},
      {"fuse.footprint_ratio", &c.fuse_footprint_ratio},
      {"icp.max_condition", &r.icp.max_condition},
      {"icp.max_iterations", &r.icp.max_iterations},
      {"icp.min_correspondences", &r.icp.min_correspondences},
      {"icp.normal_angle_deg", &r.icp.normal_angle_deg, 180.0},
      {"icp.reject_bootstrap_mm", &r.icp.reject_bootstrap},
      {"icp.reject_factor", &r.icp.reject_factor},
      {"icp.reject_floor_mm", &r.icp.reject_floor},
      {"icp.rotation_tolerance_rad", &r.icp.rotation_tolerance},
      {"icp.translation_tolerance_mm", &r.icp.translation_tolerance},
      {"ransac.confidence", &r.ransac.confidence, 1.0},
      {"ransac.inlier_threshold_mm", &r.ransac.inlier_threshold},
      {"ransac.max_iterations", &r.ransac.max_iterations},
      {"roi.radius_mm", &c.roi_radius},
      {"seed", &c.seed},
      {"spin.match_ratio", &r.match_ratio, 1.0},
      {"spin.support_angle_deg", &r.support_angle_deg, 90.0},
      {"spin.width", &r.spin_width},
      {"synth.arc_deg", &c.synth.arc_deg, 360.0},
      {"synth.color", &c.synth.color},
      {"synth.depth_scale_mm", &c.camera.depth_scale},
      {"synth.fps", &c.synth.fps},
      {"synth.frames", &c.synth.frames},
      {"synth.max_gap_s", &c.synth.max_gap_s},
      {"synth.radius_mm", &c.synth.radius_mm},
      {"traj.aligned_profile", &c.traj_aligned_profile},
      {"traj.max_dt_s", &c.traj_max_dt},
      {"traj.unit", &c.traj_unit},
      {"units.mesh_scale", &c.mesh_unit_scale},
  };
}

Field& find(std::vector<Field>& all, std::string_view key) {
  for (auto& f : all) {
    if (key == f.key) return f;
  }
  throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
}

double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("config key '" + std::string(key) + "' expects a number, got '" + std::string(text) + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

struct Setter {
  std::string_view key;
  std::string_view text;

  void operator()(double* p) const { *p = parse_double(key, text); }
  void operator()(int* p) const {
    const double v = parse_double(key, text);
    if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max()) {
      throw std::invalid_argument("config key '" + std::string(key) + "' expects an integer");
    }
    *p = static_cast<int>(v);
  }
  void operator()(bool* p) const {
    if (text == "true" || text == "1") {
      *p = true;
    } else if (text == "false" || text == "0") {
      *p = false;
    } else {
      throw std::invalid_argument("config key '" + std::string(key) + "' expects true or false");
    }
  }
  void operator()(std::uint64_t* p) const {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      throw std::invalid_argument("config key '" + std::string(key) + "' expects an unsigned integer");
    }
    *p = v;
  }
  void operator()(LengthUnit* p) const {
    if (text == "m") {
      *p = LengthUnit::Meters;
    } else if (text == "mm") {
      *p = LengthUnit::Millimeters;
    } else {
      throw std::invalid_argument("config key '" + std::string(key) + "' expects m or mm");
    }
  }
  void operator()(PairedTest* p) const {
    if (text == "signed-rank") {
      *p = PairedTest::SignedRank;
    } else if (text == "t-test") {
      *p = PairedTest::TTest;
    } else {
      throw std::invalid_argument("config key '" + std::string(key) + "' expects signed-rank or t-test");
    }
  }
};

nlohmann::json to_value(const FieldRef& ref) {
  struct {
    nlohmann::json operator()(double* p) const { return *p; }
    nlohmann::json operator()(int* p) const { return *p; }
    nlohmann::json operator()(bool* p) const { return *p; }
    nlohmann::json operator()(std::uint64_t* p) const { return *p; }
    nlohmann::json operator()(LengthUnit* p) const { return *p == LengthUnit::Meters ? "m" : "mm"; }
    nlohmann::json operator()(PairedTest* p) const { return *p == PairedTest::SignedRank ? "signed-rank" : "t-test"; }
  } visitor;
  return std::visit(visitor, ref);
}

}  // namespace

void EvalConfig::validate() const {
  auto all = fields(const_cast<EvalConfig&>(*this));
  for (const auto& f : all) {
    double v = 0.0;
    if (auto d = std::get_if<double*>(&f.ref)) {
      v = **d;
    } else if (auto i = std::get_if<int*>(&f.ref)) {
      v = **i;
    } else {
      continue;
    }
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("config key '" + std::string(f.key) + "' must be positive");
    }
    if (v > f.upper) {
      throw std::invalid_argument("config key '" + std::string(f.key) + "' must not exceed " + format_double(f.upper));
    }
  }
  camera.validate();
}

std::vector<std::string> EvalConfig::keys() const {
  std::vector<std::string> out;
  for (const auto& f : fields(const_cast<EvalConfig&>(*this))) out.emplace_back(f.key);
  return out;
}

std::string EvalConfig::get(std::string_view key) const {
  auto all = fields(const_cast<EvalConfig&>(*this));
  const auto& f = find(all, key);
  const auto value = to_value(f.ref);
  return value.is_string() ? value.get<std::string>() : value.dump();
}

void EvalConfig::set(std::string_view key, std::string_view value) {
  auto all = fields(*this);
  std::visit(Setter{key, value}, find(all, key).ref);
}

std::string EvalConfig::to_json(bool pretty) const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& f : fields(const_cast<EvalConfig&>(*this))) j[f.key] = to_value(f.ref);
  return pretty ? j.dump(2) : j.dump();
}

void EvalConfig::merge_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) {
      set(key, value.get<std::string>());
    } else if (value.is_number_float()) {
      set(key, format_double(value.get<double>()));
    } else if (value.is_number() || value.is_boolean()) {
      set(key, value.dump());
    } else {
      throw std::invalid_argument("config key '" + key + "' has an unsupported value type");
    }
  }
}

EvalConfig EvalConfig::from_json(std::string_view text) {
  EvalConfig c;
  c.merge_json(text);
  return c;
}

bool operator==(const EvalConfig& a, const EvalConfig& b) { return a.to_json(false) == b.to_json(false); }

}  // namespace reconeval::cli
