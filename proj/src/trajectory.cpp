#include "reconeval/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "reconeval/error.hpp"
#include "reconeval/registration.hpp"

namespace reconeval {

namespace {

template <typename T>
void append_number(std::string& out, T value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

}  // namespace

Eigen::Quaterniond canonical(const Eigen::Quaterniond& q) {
  Eigen::Quaterniond u = q.normalized();
  if (u.w() < 0.0) u.coeffs() *= -1.0;
  return u;
}

Trajectory parse_trajectory(std::string_view text, LengthUnit unit) {
  const double scale = unit == LengthUnit::Meters ? 1000.0 : 1.0;
  Trajectory out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

    double v[8];
    int count = 0;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' || line[i] == ',')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != ',') ++j;
      if (count == 8) throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Line, line_no, "more than 8 fields");
      const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, v[count]);
      if (ec != std::errc() || ptr != line.data() + j || !std::isfinite(v[count])) {
        throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Line, line_no,
                         "not a number: '" + std::string(line.substr(i, j - i)) + "'");
      }
      ++count;
      i = j;
    }
    if (count == 0) continue;
    if (count != 8) {
      throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Line, line_no,
                       "expected 8 fields 'timestamp tx ty tz qx qy qz qw', got " + std::to_string(count));
    }
    const Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);
    if (!(q.norm() > 0.0)) {
      throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Line, line_no, "zero quaternion");
    }
    if (!out.empty() && !(v[0] > out.back().timestamp)) {
      throw ParseError(ParseError::Kind::InvalidValue, ParseError::Location::Line, line_no, "timestamps must increase strictly");
    }
    Pose pose;
    pose.timestamp = v[0];
    pose.translation = Eigen::Vector3d(v[1], v[2], v[3]) * scale;
    pose.rotation = canonical(q);
    out.push_back(pose);
  }
  return out;
}

std::string format_trajectory(const Trajectory& trajectory, LengthUnit unit, std::span<const std::string> comments) {
  const double scale = unit == LengthUnit::Meters ? 1e-3 : 1.0;
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += unit == LengthUnit::Meters ? "# timestamp tx ty tz qx qy qz qw (metres)\n"
                                    : "# timestamp tx ty tz qx qy qz qw (millimetres)\n";
  for (const auto& p : trajectory) {
    append_number(out, p.timestamp);
    for (int k = 0; k < 3; ++k) {
      out += ' ';
      append_number(out, p.translation[k] * scale);
    }
    for (double c : {p.rotation.x(), p.rotation.y(), p.rotation.z(), p.rotation.w()}) {
      out += ' ';
      append_number(out, c);
    }
    out += '\n';
  }
  return out;
}

std::vector<PosePair> associate(const Trajectory& estimate, const Trajectory& ground_truth, double max_dt) {
  if (!(max_dt > 0.0)) throw std::invalid_argument("association window must be positive");
  struct Candidate {
    double dt;
    std::size_t e, g;
  };
  std::vector<Candidate> candidates;
  std::size_t start = 0;
  for (std::size_t e = 0; e < estimate.size(); ++e) {
    const double t = estimate[e].timestamp;
    while (start < ground_truth.size() && ground_truth[start].timestamp < t - max_dt) ++start;
    for (std::size_t g = start; g < ground_truth.size() && ground_truth[g].timestamp <= t + max_dt; ++g) {
      const double dt = std::abs(ground_truth[g].timestamp - t);
      if (dt <= max_dt) candidates.push_back({dt, e, g});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dt != b.dt) return a.dt < b.dt;
    if (a.e != b.e) return a.e < b.e;
    return a.g < b.g;
  });
  std::vector<bool> used_e(estimate.size()), used_g(ground_truth.size());
  std::vector<PosePair> pairs;
  for (const auto& c : candidates) {
    if (used_e[c.e] || used_g[c.g]) continue;
    used_e[c.e] = used_g[c.g] = true;
    pairs.push_back({c.e, c.g});
  }
  std::sort(pairs.begin(), pairs.end(), [](const PosePair& a, const PosePair& b) { return a.estimate < b.estimate; });
  return pairs;
}

double rotational_error(const Eigen::Quaterniond& qs, const Eigen::Quaterniond& qt) {
  const Eigen::Quaterniond relative = qs * qt.conjugate();
  // 2 acos(|w|) written via atan2: same angle for a unit quaternion, but
  // well conditioned near 0 and insensitive to residual norm drift.
  const double half = std::atan2(relative.vec().norm(), std::abs(relative.w()));
  return 2.0 * half * 180.0 / std::numbers::pi;
}

double translational_error(const Pose& estimate, const Pose& ground_truth, const RigidTransformd& alignment) {
  return (alignment * estimate.translation - ground_truth.translation).norm();
}

RigidTransformd align_trajectories(const Trajectory& estimate, const Trajectory& ground_truth,
                                   std::span<const PosePair> pairs) {
  Vertices from(static_cast<Eigen::Index>(pairs.size()), 3), to(static_cast<Eigen::Index>(pairs.size()), 3);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    from.row(static_cast<Eigen::Index>(k)) = estimate.at(pairs[k].estimate).translation.transpose();
    to.row(static_cast<Eigen::Index>(k)) = ground_truth.at(pairs[k].ground_truth).translation.transpose();
  }
  return fit_rigid(from, to);
}

AteResult rms_ate(const Trajectory& estimate, const Trajectory& ground_truth, const AteOptions& options) {
  AteResult out;
  out.pairs = associate(estimate, ground_truth, options.max_dt);
  if (out.pairs.empty()) {
    throw DegenerateError(DegenerateError::Kind::TooFewCorrespondences, "no associations between the trajectories");
  }
  if (out.pairs.size() < 3) {
    throw DegenerateError(DegenerateError::Kind::TooFewCorrespondences,
                          "ATE needs at least 3 associated poses, got " + std::to_string(out.pairs.size()));
  }
  out.alignment = align_trajectories(estimate, ground_truth, out.pairs);
  double sum2 = 0.0;
  for (std::size_t k = 0; k < out.pairs.size(); ++k) {
    const Pose& e = estimate[out.pairs[k].estimate];
    const Pose& g = ground_truth[out.pairs[k].ground_truth];
    const double aligned = translational_error(e, g, out.alignment);
    sum2 += aligned * aligned;
    PoseError err;
    err.index = k;
    err.timestamp = g.timestamp;
    if (options.aligned_profile) {
      err.translational_mm = aligned;
      err.rotational_deg = rotational_error(out.alignment.rotation * e.rotation, g.rotation);
    } else {
      err.translational_mm = translational_error(e, g, RigidTransformd::Identity());
      err.rotational_deg = rotational_error(e.rotation, g.rotation);
    }
    out.profile.push_back(err);
  }
  out.rms = std::sqrt(sum2 / static_cast<double>(out.pairs.size()));
  return out;
}

std::string profile_csv(std::span<const PoseError> profile, std::span<const std::string> comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += "index,timestamp,translational_mm,rotational_deg\n";
  for (const auto& p : profile) {
    append_number(out, p.index);
    out += ',';
    append_number(out, p.timestamp);
    out += ',';
    append_number(out, p.translational_mm);
    out += ',';
    append_number(out, p.rotational_deg);
    out += '\n';
  }
  return out;
}

}  // namespace reconeval
