#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "reconeval/error.hpp"
#include "reconeval/registration.hpp"

namespace reconeval {

namespace {

// Second singular value of the centred point spread relative to the first;
// zero for collinear or coincident points.
double spread_ratio(const Vertices& points) {
  const Eigen::RowVector3d mean = points.colwise().mean();
  const Eigen::Matrix3d scatter = (points.rowwise() - mean).transpose() * (points.rowwise() - mean);
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(scatter).singularValues();
  if (sv[0] <= 0.0) return 0.0;
  return std::sqrt(sv[1] / sv[0]);
}

bool well_spread(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a;
  const double scale = ab.norm() * ac.norm();
  return scale > 0.0 && ab.cross(ac).norm() > 1e-6 * scale;
}

}  // namespace

RigidTransformd fit_rigid(const Vertices& from, const Vertices& to) {
  if (from.rows() != to.rows()) throw std::invalid_argument("fit_rigid: point counts differ");
  if (from.rows() < 3) {
    throw DegenerateError(DegenerateError::Kind::DegenerateSample, "rigid fit needs at least 3 point pairs");
  }
  if (spread_ratio(from) < 1e-6 || spread_ratio(to) < 1e-6) {
    throw DegenerateError(DegenerateError::Kind::DegenerateSample, "rigid fit: points are collinear or coincident");
  }
  const Eigen::Matrix4d m = Eigen::umeyama(from.transpose(), to.transpose(), false);
  return RigidTransformd::from_matrix(m);
}

RobustEstimate estimate_rigid_robust(const CorrespondenceSet& correspondences, const Vertices& source,
                                     const Vertices& target, const RansacParams& params) {
  if (correspondences.size() < 3) {
    throw DegenerateError(DegenerateError::Kind::TooFewCorrespondences,
                          "robust estimation needs at least 3 correspondences, got " +
                              std::to_string(correspondences.size()));
  }
  CorrespondenceSet corrs = correspondences;
  for (const auto& c : corrs) {
    if (c.source < 0 || c.source >= source.rows() || c.target < 0 || c.target >= target.rows()) {
      throw std::invalid_argument("correspondence index out of range");
    }
  }
  std::sort(corrs.begin(), corrs.end(), [](const Correspondence& a, const Correspondence& b) {
    if (a.source != b.source) return a.source < b.source;
    if (a.target != b.target) return a.target < b.target;
    return a.distance < b.distance;
  });

  const auto n = corrs.size();
  auto src = [&](std::size_t i) { return Eigen::Vector3d(source.row(corrs[i].source).transpose()); };
  auto tgt = [&](std::size_t i) { return Eigen::Vector3d(target.row(corrs[i].target).transpose()); };
  const double thr2 = params.inlier_threshold * params.inlier_threshold;

  auto score = [&](const RigidTransformd& t, std::vector<int>* inliers) {
    int count = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = (t * src(i) - tgt(i)).squaredNorm();
      if (d2 <= thr2) {
        ++count;
        sum += d2;
        if (inliers) inliers->push_back(static_cast<int>(i));
      }
    }
    return std::pair<int, double>(count, sum);
  };

  std::mt19937_64 rng(params.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  RigidTransformd best;
  int best_count = -1;
  double best_sum = 0.0;
  bool any_valid = false;
  double needed = static_cast<double>(params.max_iterations);
  int iter = 0;
  for (; iter < params.max_iterations && iter < needed; ++iter) {
    std::size_t i0 = pick(rng), i1 = pick(rng), i2 = pick(rng);
    if (i0 == i1 || i1 == i2 || i0 == i2) continue;
    if (!well_spread(src(i0), src(i1), src(i2)) || !well_spread(tgt(i0), tgt(i1), tgt(i2))) continue;
    Vertices a(3, 3), b(3, 3);
    a << src(i0).transpose(), src(i1).transpose(), src(i2).transpose();
    b << tgt(i0).transpose(), tgt(i1).transpose(), tgt(i2).transpose();
    const RigidTransformd hypothesis = RigidTransformd::from_matrix(Eigen::umeyama(a.transpose(), b.transpose(), false));
    any_valid = true;
    const auto [count, sum] = score(hypothesis, nullptr);
    if (count > best_count || (count == best_count && sum < best_sum)) {
      best = hypothesis;
      best_count = count;
      best_sum = sum;
      const double w = static_cast<double>(count) / static_cast<double>(n);
      const double miss = 1.0 - w * w * w;
      // With no support yet the bound stays at max_iterations.
      if (miss <= 0.0) {
        needed = 0.0;
      } else if (miss < 1.0) {
        needed = std::log(1.0 - params.confidence) / std::log(miss);
      }
    }
  }
  if (!any_valid) {
    throw DegenerateError(DegenerateError::Kind::DegenerateSample,
                          "every sampled correspondence triple was collinear or coincident");
  }
  if (best_count < 3) {
    throw DegenerateError(DegenerateError::Kind::TooFewCorrespondences, "no hypothesis reached 3 inliers");
  }

  RobustEstimate out;
  out.iterations = iter;
  std::vector<int> consensus;
  score(best, &consensus);
  Vertices a(static_cast<Eigen::Index>(consensus.size()), 3), b(static_cast<Eigen::Index>(consensus.size()), 3);
  for (std::size_t k = 0; k < consensus.size(); ++k) {
    a.row(static_cast<Eigen::Index>(k)) = src(static_cast<std::size_t>(consensus[k])).transpose();
    b.row(static_cast<Eigen::Index>(k)) = tgt(static_cast<std::size_t>(consensus[k])).transpose();
  }
  out.transform = fit_rigid(a, b);
  score(out.transform, &out.inliers);
  if (out.inliers.size() < consensus.size()) {
    // The refit lost support: stay with the sampled hypothesis.
    out.transform = best;
    out.inliers = consensus;
  }
  for (int i : out.inliers) out.consensus.push_back(corrs[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace reconeval
