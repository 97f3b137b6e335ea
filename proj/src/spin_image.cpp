#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "reconeval/registration.hpp"

namespace reconeval {

SpinImage compute_spin_image(const Eigen::Vector3d& basis_point, const Eigen::Vector3d& basis_normal,
                             const PointCloud& support, const SpinImageParams& params) {
  if (!(params.bin_size > 0.0) || params.width <= 0) throw std::invalid_argument("spin image needs bin > 0, width > 0");
  if (!(params.support_angle_deg > 0.0 && params.support_angle_deg <= 90.0)) {
    throw std::invalid_argument("support angle must be in (0, 90] degrees");
  }
  SpinImage image;
  image.basis_point = basis_point;
  image.basis_normal = basis_normal;
  image.bin_size = params.bin_size;
  image.width = params.width;
  const int rows = params.width + 1;
  const int cols = 2 * params.width + 1;
  image.histogram = Eigen::MatrixXd::Zero(rows, cols);

  const double reach = params.width * params.bin_size;
  const double min_cos = std::cos(params.support_angle_deg * std::numbers::pi / 180.0);
  const bool normals = support.has_normals();

  for (Eigen::Index i = 0; i < support.size(); ++i) {
    if (!support.is_valid(i)) continue;
    const Eigen::Vector3d d = support.points.row(i).transpose() - basis_point;
    const double d2 = d.squaredNorm();
    if (d2 > reach * reach) continue;
    if (normals && basis_normal.dot(support.normals.row(i).transpose()) < min_cos) continue;
    const double beta = basis_normal.dot(d);
    const double alpha = std::sqrt(std::max(0.0, d2 - beta * beta));
    const double a = alpha / params.bin_size;
    const double b = (beta + reach) / params.bin_size;
    const int ia = static_cast<int>(std::floor(a));
    const int ib = static_cast<int>(std::floor(b));
    const double fa = a - ia;
    const double fb = b - ib;
    const double w[2][2] = {{(1 - fa) * (1 - fb), (1 - fa) * fb}, {fa * (1 - fb), fa * fb}};
    for (int da = 0; da < 2; ++da) {
      for (int db = 0; db < 2; ++db) {
        const int r = ia + da, c = ib + db;
        if (w[da][db] == 0.0 || r < 0 || r >= rows || c < 0 || c >= cols) continue;
        image.histogram(r, c) += w[da][db];
      }
    }
  }
  return image;
}

namespace {

// Zero-mean, unit-norm copy of the histogram; false when it is constant.
bool standardized(const SpinImage& s, Eigen::VectorXd& out) {
  out = Eigen::Map<const Eigen::VectorXd>(s.histogram.data(), s.histogram.size());
  out.array() -= out.mean();
  const double norm = out.norm();
  if (norm <= 0.0) {
    out.setZero();
    return false;
  }
  out /= norm;
  return true;
}

}  // namespace

double spin_image_distance(const SpinImage& a, const SpinImage& b) {
  if (a.histogram.rows() != b.histogram.rows() || a.histogram.cols() != b.histogram.cols()) {
    throw std::invalid_argument("spin images have different geometry");
  }
  Eigen::VectorXd va, vb;
  if (!standardized(a, va) || !standardized(b, vb)) return 1.0;
  return 1.0 - std::clamp(va.dot(vb), -1.0, 1.0);
}

CorrespondenceSet match_spin_images(const std::vector<SpinImage>& source, const std::vector<SpinImage>& target,
                                    double ratio) {
  if (source.empty() || target.empty()) throw std::invalid_argument("match_spin_images: empty descriptor list");
  const auto rows = source.front().histogram.rows();
  const auto cols = source.front().histogram.cols();
  const auto dims = rows * cols;
  auto check = [&](const SpinImage& s) {
    if (s.histogram.rows() != rows || s.histogram.cols() != cols || s.bin_size != source.front().bin_size) {
      throw std::invalid_argument("match_spin_images: descriptors differ in histogram geometry");
    }
  };

  auto stack = [&](const std::vector<SpinImage>& list, std::vector<bool>& informative) {
    Eigen::MatrixXd m(dims, static_cast<Eigen::Index>(list.size()));
    informative.resize(list.size());
    Eigen::VectorXd v;
    for (std::size_t i = 0; i < list.size(); ++i) {
      check(list[i]);
      informative[i] = standardized(list[i], v);
      m.col(static_cast<Eigen::Index>(i)) = v;
    }
    return m;
  };
  std::vector<bool> src_ok, tgt_ok;
  const Eigen::MatrixXd s = stack(source, src_ok);
  const Eigen::MatrixXd t = stack(target, tgt_ok);
  const Eigen::MatrixXd correlation = s.transpose() * t;

  CorrespondenceSet out;
  for (Eigen::Index i = 0; i < correlation.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    int best_index = -1;
    for (Eigen::Index j = 0; j < correlation.cols(); ++j) {
      const bool ok = src_ok[static_cast<std::size_t>(i)] && tgt_ok[static_cast<std::size_t>(j)];
      const double d = ok ? 1.0 - std::clamp(correlation(i, j), -1.0, 1.0) : 1.0;
      if (d < best) {
        second = best;
        best = d;
        best_index = static_cast<int>(j);
      } else if (d < second) {
        second = d;
      }
    }
    // A lone target has no runner-up to compare against.
    const bool distinctive = correlation.cols() == 1 ? best < 1.0 : best < ratio * second;
    if (best_index >= 0 && distinctive) out.push_back({static_cast<int>(i), best_index, best});
  }
  return out;
}

}  // namespace reconeval
