#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace reconeval {

template <typename Scalar>
struct TriangleProjection {
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  Vector3 point;
  Vector3 barycentric;  // weights of (a, b, c); nonnegative, sum to one
  Scalar squared_distance;
  Scalar distance;
};

/// Closest point of a closed triangle together with the face it came from.
struct ClosestHit {
  int face_index = -1;
  Eigen::Vector3d closest_point = Eigen::Vector3d::Zero();
  Eigen::Vector3d barycentric = Eigen::Vector3d::Zero();
  double squared_distance = std::numeric_limits<double>::infinity();
  double distance = std::numeric_limits<double>::infinity();
};

namespace detail {

template <typename Scalar>
TriangleProjection<Scalar> finish_projection(const Eigen::Matrix<Scalar, 3, 1>& p,
                                             const Eigen::Matrix<Scalar, 3, 1>& a,
                                             const Eigen::Matrix<Scalar, 3, 1>& b,
                                             const Eigen::Matrix<Scalar, 3, 1>& c,
                                             const Eigen::Matrix<Scalar, 3, 1>& weights) {
  TriangleProjection<Scalar> out;
  out.barycentric = weights;
  out.point = weights[0] * a + weights[1] * b + weights[2] * c;
  out.squared_distance = (p - out.point).squaredNorm();
  out.distance = std::sqrt(out.squared_distance);
  return out;
}

// Closed segment x -> y; returns the parameter of the closest point.
template <typename Scalar, typename Vec>
Scalar segment_parameter(const Vec& p, const Vec& x, const Vec& y) {
  const Vec d = y - x;
  const Scalar len2 = d.squaredNorm();
  if (len2 <= Scalar(0)) return Scalar(0);
  return std::clamp<Scalar>((p - x).dot(d) / len2, Scalar(0), Scalar(1));
}

}  // namespace detail

/// Exact closest point on the closed triangle (a, b, c).
///
/// The query is expressed in an orthonormal frame of the triangle plane, the
/// in-plane foot is classified against the three edge lines in 2D, and when it
/// falls outside, the nearest point is searched only on the edges whose outer
/// side contains it. A triangle with (numerically) zero area collapses to its
/// longest edge.
template <typename DerivedP, typename DerivedA, typename DerivedB, typename DerivedC>
TriangleProjection<typename DerivedP::Scalar> closest_point_on_triangle(const Eigen::MatrixBase<DerivedP>& query,
                                                                        const Eigen::MatrixBase<DerivedA>& va,
                                                                        const Eigen::MatrixBase<DerivedB>& vb,
                                                                        const Eigen::MatrixBase<DerivedC>& vc) {
  using Scalar = typename DerivedP::Scalar;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
  const Vector3 p = query;
  const Vector3 a = va;
  const Vector3 b = vb;
  const Vector3 c = vc;

  const Vector3 e0 = b - a;
  const Vector3 e1 = c - a;
  const Vector3 n = e0.cross(e1);
  const std::array<Scalar, 3> edge2 = {e0.squaredNorm(), (c - b).squaredNorm(), e1.squaredNorm()};
  const Scalar longest2 = *std::max_element(edge2.begin(), edge2.end());

  if (n.norm() <= Scalar(1e-12) * longest2 || longest2 <= Scalar(0)) {
    // Degenerate: the closed triangle is the hull of its longest edge.
    Vector3 w = Vector3::Zero();
    if (longest2 <= Scalar(0)) {
      w[0] = Scalar(1);
    } else if (edge2[0] >= edge2[1] && edge2[0] >= edge2[2]) {
      const Scalar t = detail::segment_parameter<Scalar>(p, a, b);
      w[0] = Scalar(1) - t;
      w[1] = t;
    } else if (edge2[1] >= edge2[2]) {
      const Scalar t = detail::segment_parameter<Scalar>(p, b, c);
      w[1] = Scalar(1) - t;
      w[2] = t;
    } else {
      const Scalar t = detail::segment_parameter<Scalar>(p, c, a);
      w[2] = Scalar(1) - t;
      w[0] = t;
    }
    return detail::finish_projection<Scalar>(p, a, b, c, w);
  }

  const Scalar len0 = std::sqrt(edge2[0]);
  const Vector3 u = e0 / len0;
  const Vector3 v = n.normalized().cross(u);
  const Vector3 ap = p - a;

  const std::array<Vector2, 3> corner = {Vector2(Scalar(0), Scalar(0)), Vector2(len0, Scalar(0)),
                                         Vector2(e1.dot(u), e1.dot(v))};
  const Vector2 foot(ap.dot(u), ap.dot(v));

  auto cross2 = [](const Vector2& x, const Vector2& y) { return x[0] * y[1] - x[1] * y[0]; };
  // Signed doubled area of (corner[k], corner[k+1], foot): >= 0 on the inner side.
  std::array<Scalar, 3> side{};
  for (int k = 0; k < 3; ++k) {
    const Vector2& from = corner[k];
    const Vector2& to = corner[(k + 1) % 3];
    side[k] = cross2(to - from, foot - from);
  }

  Vector3 w;
  if (side[0] >= Scalar(0) && side[1] >= Scalar(0) && side[2] >= Scalar(0)) {
    const Scalar area2 = len0 * corner[2][1];
    // side[k] is opposite to corner k+2.
    w << side[1] / area2, side[2] / area2, side[0] / area2;
    const Scalar sum = w.sum();
    w /= sum;
  } else {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    w.setZero();
    for (int k = 0; k < 3; ++k) {
      if (side[k] >= Scalar(0)) continue;
      const Vector2& from = corner[k];
      const Vector2& to = corner[(k + 1) % 3];
      const Scalar t = detail::segment_parameter<Scalar>(foot, from, to);
      const Scalar d2 = (foot - (from + t * (to - from))).squaredNorm();
      if (d2 < best) {
        best = d2;
        w.setZero();
        w[k] = Scalar(1) - t;
        w[(k + 1) % 3] = t;
      }
    }
  }
  return detail::finish_projection<Scalar>(p, a, b, c, w);
}

}  // namespace reconeval
