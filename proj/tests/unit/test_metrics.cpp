#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <json.hpp>

#include "oracles.hpp"
#include "reconeval/error.hpp"
#include "reconeval/metrics.hpp"
#include "reconeval/shapes.hpp"
#include "reconeval/statistics.hpp"

using namespace reconeval;

namespace {

const RoiSphere kEverywhere{Eigen::Vector3d::Zero(), 1e9};

PointCloud vertices_of(const TriangleMesh& m) { return to_point_cloud(m); }

// Interpolated target normal at the closest point found by full scan.
double oracle_angle_deg(const TriangleMesh& target, const Eigen::Vector3d& p, const Eigen::Vector3d& n) {
  const int f = oracle::linear_scan(target, p).first;
  const Eigen::Vector3d a = target.corner(f, 0), b = target.corner(f, 1), c = target.corner(f, 2);
  const Eigen::Vector3d q = oracle::region_closest_point(p, a, b, c);
  const double area = (b - a).cross(c - a).norm();
  const double wa = (b - q).cross(c - q).norm() / area;
  const double wb = (c - q).cross(a - q).norm() / area;
  const double wc = (a - q).cross(b - q).norm() / area;
  const Eigen::Vector3d interp = (wa * target.normals.row(target.faces(f, 0)) + wb * target.normals.row(target.faces(f, 1)) +
                                  wc * target.normals.row(target.faces(f, 2)))
                                     .transpose()
                                     .normalized();
  return std::acos(std::clamp(interp.dot(n.normalized()), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

// Two-sided p of Student t by Simpson integration of the density.
double t_two_sided(double t, int dof) {
  const double nu = dof;
  const double c = std::tgamma((nu + 1) / 2) / (std::sqrt(nu * std::numbers::pi) * std::tgamma(nu / 2));
  auto pdf = [&](double x) { return c * std::pow(1 + x * x / nu, -(nu + 1) / 2); };
  const int steps = 200000;
  const double h = std::abs(t) / steps;
  double s = pdf(0) + pdf(std::abs(t));
  for (int i = 1; i < steps; ++i) s += (i % 2 ? 4 : 2) * pdf(i * h);
  return 1.0 - 2.0 * (s * h / 3.0);
}

}  // namespace

TEST(Aggregate, SmallExample) {
  const std::vector<double> v = {1, 2, 3, 4, 100};
  const std::vector<PointStatus> s(5, PointStatus::Included);
  std::vector<PointStatus> drop = s;
  drop[4] = PointStatus::OutsideRoi;
  const Summary a = aggregate(v, drop);
  EXPECT_EQ(a.count, 4u);
  EXPECT_DOUBLE_EQ(a.mean, 2.5);
  EXPECT_DOUBLE_EQ(a.median, 2.5);
  EXPECT_DOUBLE_EQ(a.max, 4.0);
  EXPECT_DOUBLE_EQ(a.rms, std::sqrt(7.5));
  EXPECT_DOUBLE_EQ(a.std, std::sqrt(1.25));
  EXPECT_DOUBLE_EQ(aggregate(v, s).median, 3.0);
}

TEST(Aggregate, NothingIncludedIsEmpty) {
  const std::vector<double> v = {1, 2};
  const std::vector<PointStatus> s = {PointStatus::NoNormal, PointStatus::BoundaryExcluded};
  const Summary a = aggregate(v, s);
  EXPECT_TRUE(a.empty);
  EXPECT_EQ(a.count, 0u);
  EXPECT_THROW(aggregate(v, std::vector<PointStatus>(1)), std::invalid_argument);
}

TEST(Aggregate, MatchesTwoPassOnOffsetData) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(1e6, 0.01);
  std::vector<double> v(20000);
  for (auto& x : v) x = g(rng);
  const Summary a = aggregate(v, std::vector<PointStatus>(v.size(), PointStatus::Included));
  const auto [mean, sd] = oracle::two_pass_moments(v);
  // Summation rounding alone is ~n * eps * 1e6 on the mean; a one-pass sum of
  // squares would miss the 0.01 spread entirely.
  EXPECT_NEAR(a.mean, mean, 1e-12 * 1e6);
  EXPECT_NEAR(a.std, sd, 1e-6 * sd);
}

TEST(SurfaceMetrics, ScaledSphere) {
  TriangleMesh target = make_icosphere(100.0, 3);
  TriangleMesh scaled = target;
  scaled.vertices *= 1.1;
  const EvaluationTarget t(target);
  const auto eval = evaluate_surface(vertices_of(scaled), t, kEverywhere);
  ASSERT_EQ(eval.distance.summary.count, static_cast<std::size_t>(scaled.vertex_count()));
  for (std::size_t i = 0; i < eval.distance.values.size(); ++i) {
    const Eigen::Vector3d p = scaled.vertices.row(static_cast<Eigen::Index>(i)).transpose();
    EXPECT_NEAR(eval.distance.values[i], std::sqrt(oracle::linear_scan(target, p).second), 1e-9);
  }
  EXPECT_NEAR(eval.distance.summary.mean, 10.0, 0.2);
  EXPECT_LT(eval.angle.summary.max, 1e-6);
}

TEST(SurfaceMetrics, FlippedNormalsGiveHalfTurn) {
  const TriangleMesh target = make_icosphere(50.0, 2);
  PointCloud src = vertices_of(target);
  src.normals = -src.normals;
  const auto eval = evaluate_surface(src, EvaluationTarget(target), kEverywhere);
  for (double a : eval.angle.values) EXPECT_NEAR(a, 180.0, 1e-6);
  EXPECT_NEAR(eval.distance.summary.max, 0.0, 1e-12);
}

TEST(SurfaceMetrics, CoarseVersusFineMatchesDirectOracle) {
  const TriangleMesh fine = make_icosphere(80.0, 4);
  const TriangleMesh coarse = make_icosphere(80.0, 2);
  const PointCloud src = vertices_of(fine);
  const auto eval = evaluate_surface(src, EvaluationTarget(coarse), kEverywhere);
  for (Eigen::Index i = 0; i < src.size(); i += 5) {
    const Eigen::Vector3d p = src.points.row(i).transpose();
    const auto k = static_cast<std::size_t>(i);
    EXPECT_NEAR(eval.distance.values[k], std::sqrt(oracle::linear_scan(coarse, p).second), 1e-9);
    EXPECT_NEAR(eval.angle.values[k], oracle_angle_deg(coarse, p, src.normals.row(i).transpose()), 1e-6);
  }
}

TEST(SurfaceMetrics, SeparateEntryPointsAgreeWithCombined) {
  const TriangleMesh target = make_torso_phantom(3);
  const PointCloud src = sample_surface(target, 2000, 3);
  const EvaluationTarget t(target);
  const RoiSphere roi{roi_sphere_center(target), 100.0};
  const auto both = evaluate_surface(src, t, roi);
  EXPECT_EQ(surface_distance(src, t, roi).values, both.distance.values);
  EXPECT_EQ(normal_deviation(src, t, roi).values, both.angle.values);
}

TEST(SurfaceMetrics, StatusPriorityAndBoundary) {
  const TriangleMesh hemi = make_hemisphere(100.0, 16, 32);
  PointCloud src;
  src.points.resize(3, 3);
  src.points << 100, 0, 0,  // on the open rim
      0, 0, -100,           // pole, interior
      500, 500, 500;        // far away
  const RoiSphere roi{Eigen::Vector3d::Zero(), 200.0};
  const auto eval = evaluate_surface(src, EvaluationTarget(hemi), roi);
  EXPECT_EQ(eval.distance.statuses[0], PointStatus::BoundaryExcluded);
  EXPECT_EQ(eval.distance.statuses[1], PointStatus::Included);
  EXPECT_EQ(eval.distance.statuses[2], PointStatus::OutsideRoi);
  // No source normals: the angle channel reports no-normal after the other rules.
  EXPECT_EQ(eval.angle.statuses[0], PointStatus::BoundaryExcluded);
  EXPECT_EQ(eval.angle.statuses[1], PointStatus::NoNormal);
  EXPECT_EQ(eval.angle.statuses[2], PointStatus::OutsideRoi);
}

TEST(SurfaceMetrics, InvalidPointsAreOutsideRoi) {
  const TriangleMesh target = make_icosphere(10.0, 1);
  PointCloud src = vertices_of(target);
  src.valid.assign(static_cast<std::size_t>(src.size()), 1);
  src.valid[0] = 0;
  const auto eval = evaluate_surface(src, EvaluationTarget(target), kEverywhere);
  EXPECT_EQ(eval.distance.statuses[0], PointStatus::OutsideRoi);
  EXPECT_EQ(eval.distance.count(PointStatus::OutsideRoi), 1u);
}

TEST(SurfaceMetrics, EmptyInputs) {
  const TriangleMesh target = make_icosphere(10.0, 1);
  EXPECT_THROW(evaluate_surface(PointCloud{}, EvaluationTarget(target), kEverywhere), DegenerateError);
  EXPECT_THROW(evaluate_surface(vertices_of(target), EvaluationTarget(TriangleMesh{}), kEverywhere), DegenerateError);
}

TEST(SurfaceMetrics, FacePermutationInvariance) {
  const TriangleMesh target = make_torso_phantom(3);
  TriangleMesh permuted = target;
  std::vector<int> order(static_cast<std::size_t>(target.face_count()));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(8);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t f = 0; f < order.size(); ++f) permuted.faces.row(static_cast<Eigen::Index>(f)) = target.faces.row(order[f]);
  const PointCloud src = sample_surface(make_torso_phantom(4), 3000, 9);
  const RoiSphere roi{roi_sphere_center(target), 100.0};
  const auto a = evaluate_surface(src, EvaluationTarget(target), roi);
  const auto b = evaluate_surface(src, EvaluationTarget(permuted), roi);
  ASSERT_EQ(a.distance.statuses, b.distance.statuses);
  for (std::size_t i = 0; i < a.distance.values.size(); ++i) {
    EXPECT_NEAR(a.distance.values[i], b.distance.values[i], 1e-9);
    EXPECT_NEAR(a.angle.values[i], b.angle.values[i], 1e-6);
  }
}

TEST(SurfaceMetrics, RigidMotionInvariance) {
  const TriangleMesh target = make_torso_phantom(3);
  const PointCloud src = sample_surface(make_torso_phantom(4), 3000, 10);
  const RoiSphere roi{roi_sphere_center(target), 100.0};
  const RigidTransformd g(Eigen::Quaterniond(Eigen::AngleAxisd(0.6, Eigen::Vector3d(2, 1, -1).normalized())),
                          Eigen::Vector3d(-30, 60, 15));
  const auto a = evaluate_surface(src, EvaluationTarget(target), roi);
  const auto b = evaluate_surface(transformed(src, g), EvaluationTarget(transformed(target, g)), RoiSphere{g * roi.center, 100.0});
  ASSERT_EQ(a.distance.summary.count, b.distance.summary.count);
  EXPECT_NEAR(a.distance.summary.mean, b.distance.summary.mean, 1e-9);
  EXPECT_NEAR(a.angle.summary.mean, b.angle.summary.mean, 1e-6);
}

TEST(SurfaceMetrics, RoiGrowthOnlyAddsPoints) {
  const TriangleMesh target = make_torso_phantom(3);
  const PointCloud src = sample_surface(target, 3000, 12);
  const EvaluationTarget t(target);
  const Eigen::Vector3d c = roi_sphere_center(target);
  std::vector<PointStatus> previous;
  for (double r : {20.0, 60.0, 100.0, 200.0}) {
    const auto rep = surface_distance(src, t, {c, r});
    if (!previous.empty()) {
      for (std::size_t i = 0; i < previous.size(); ++i) {
        if (previous[i] == PointStatus::Included) {
          EXPECT_EQ(rep.statuses[i], PointStatus::Included);
        }
      }
    }
    previous = rep.statuses;
  }
}

TEST(Colormap, ZeroErrorsAndSentinel) {
  const TriangleMesh target = make_icosphere(30.0, 2);
  PointCloud src = vertices_of(target);
  src.valid.assign(static_cast<std::size_t>(src.size()), 1);
  src.valid[3] = 0;
  const auto rep = surface_distance(src, EvaluationTarget(target), kEverywhere);
  const auto scalar = colormap_scalar(rep);
  for (std::size_t i = 0; i < scalar.size(); ++i) EXPECT_EQ(scalar[i], i == 3 ? -1.0 : 0.0);
}

TEST(Colormap, ExportRoundTrip) {
  const TriangleMesh target = make_icosphere(30.0, 2);
  TriangleMesh src = target;
  src.vertices *= 1.05;
  const RoiSphere roi{Eigen::Vector3d(0, 0, -30), 30.0};
  const auto rep = surface_distance(to_point_cloud(src), EvaluationTarget(target), roi);
  const std::vector<std::string> comments = {"test"};
  const auto out = export_colormap(rep, src, MeshFormat::PlyBinaryLe, comments);
  const auto back = load_mesh(out.geometry, MeshFormat::PlyBinaryLe);
  const auto scalar = colormap_scalar(rep);
  ASSERT_EQ(back.quality.size(), scalar.size());
  for (std::size_t i = 0; i < scalar.size(); ++i) EXPECT_NEAR(back.quality[i], scalar[i], 1e-5);
  EXPECT_TRUE(std::ranges::count(back.quality, -1.0) > 0);

  const auto j = nlohmann::json::parse(out.sidecar);
  EXPECT_EQ(j["channel"], "distance_mm");
  EXPECT_EQ(j["sentinel"], -1.0);
  EXPECT_EQ(j["status"]["included"].get<std::size_t>(), rep.count(PointStatus::Included));
  EXPECT_NEAR(j["summary"]["mean"].get<double>(), rep.summary.mean, 1e-12);

  PointCloud wrong;
  wrong.points.resize(2, 3);
  EXPECT_THROW(export_colormap(rep, wrong), std::invalid_argument);
}

TEST(SignedRank, MatchesEnumeration) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 5 + trial % 14;
    std::vector<double> a(static_cast<std::size_t>(n)), b(a.size());
    std::uniform_int_distribution<int> small(-4, 4);  // forces ties and zeros
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = small(rng) * 0.5;
      b[static_cast<std::size_t>(i)] = small(rng) * 0.5;
    }
    const auto r = wilcoxon_signed_rank(a, b);
    EXPECT_NEAR(r.p_value, oracle::signed_rank_enumeration(a, b), 1e-12) << "trial " << trial;
  }
}

TEST(SignedRank, IdenticalSamplesGiveOne) {
  const std::vector<double> a = {1, 2, 3, 4, 5, 6};
  const auto r = wilcoxon_signed_rank(a, a);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.effective_n, 0);
}

TEST(SignedRank, LargeSampleUsesApproximation) {
  std::vector<double> a(40), b(40);
  for (int i = 0; i < 40; ++i) {
    a[static_cast<std::size_t>(i)] = i + 1.0;
    b[static_cast<std::size_t>(i)] = i;
  }
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_FALSE(r.exact);
  EXPECT_LT(r.p_value, 1e-6);
  EXPECT_DOUBLE_EQ(r.statistic, 40.0 * 41.0 / 2.0);
}

TEST(TTest, MatchesIntegratedDensity) {
  const std::vector<double> a = {2, 4, 6, 8, 10}, b = {1, 2, 3, 4, 5};
  const auto r = paired_t_test(a, b);
  EXPECT_EQ(r.degrees_of_freedom, 4);
  EXPECT_NEAR(r.statistic, 3.0 / (std::sqrt(2.5) / std::sqrt(5.0)), 1e-12);
  EXPECT_NEAR(r.p_value, t_two_sided(r.statistic, 4), 1e-8);
}

TEST(CompareMethods, ShiftedCloneIsSignificant) {
  std::vector<double> a(12), b(12);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  for (std::size_t i = 0; i < 12; ++i) {
    a[i] = u(rng);
    b[i] = a[i] + 0.2;
  }
  EXPECT_LT(compare_methods(a, b).p_value, 0.01);
  EXPECT_LT(compare_methods(a, b, PairedTest::TTest).p_value, 0.01);
  EXPECT_EQ(compare_methods(a, a).p_value, 1.0);
}

TEST(CompareMethods, InputChecks) {
  const std::vector<double> four = {1, 2, 3, 4}, five = {1, 2, 3, 4, 5};
  EXPECT_THROW(compare_methods(four, four), std::invalid_argument);
  EXPECT_THROW(compare_methods(five, four), std::invalid_argument);
}
