#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "mesh.hpp"

namespace reconeval {

/// Proper rigid motion x -> R x + t with R stored as a unit quaternion.
template <typename Scalar>
struct RigidTransform {
  using Quaternion = Eigen::Quaternion<Scalar>;
  using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

  Quaternion rotation = Quaternion::Identity();
  Vector3 translation = Vector3::Zero();

  RigidTransform() = default;
  RigidTransform(const Quaternion& q, const Vector3& t) : rotation(q.normalized()), translation(t) {}
  RigidTransform(const Matrix3& r, const Vector3& t) : rotation(Quaternion(r).normalized()), translation(t) {}

  static RigidTransform Identity() { return {}; }

  static RigidTransform from_matrix(const Matrix4& m) {
    return RigidTransform(Matrix3(m.template topLeftCorner<3, 3>()), Vector3(m.template topRightCorner<3, 1>()));
  }

  Matrix3 rotation_matrix() const { return rotation.toRotationMatrix(); }

  Matrix4 matrix() const {
    Matrix4 m = Matrix4::Identity();
    m.template topLeftCorner<3, 3>() = rotation_matrix();
    m.template topRightCorner<3, 1>() = translation;
    return m;
  }

  template <typename Derived>
  Vector3 operator*(const Eigen::MatrixBase<Derived>& p) const {
    return rotation * Vector3(p) + translation;
  }

  /// (a * b)(x) = a(b(x)).
  RigidTransform operator*(const RigidTransform& other) const {
    RigidTransform out;
    out.rotation = (rotation * other.rotation).normalized();
    out.translation = rotation * other.translation + translation;
    return out;
  }

  RigidTransform inverse() const {
    RigidTransform out;
    out.rotation = rotation.conjugate();
    out.translation = -(out.rotation * translation);
    return out;
  }

  /// Rotation angle of R in radians, in [0, pi].
  Scalar angle() const {
    using std::abs;
    using std::atan2;
    return Scalar(2) * atan2(rotation.vec().norm(), abs(rotation.w()));
  }

  template <typename NewScalar>
  RigidTransform<NewScalar> cast() const {
    return RigidTransform<NewScalar>(rotation.template cast<NewScalar>(), translation.template cast<NewScalar>());
  }
};

using RigidTransformd = RigidTransform<double>;

/// Applies `t` to every row of an N x 3 point matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 3, Eigen::RowMajor> transform_points(
    const RigidTransform<typename Derived::Scalar>& t, const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, 3, 3> r = t.rotation_matrix();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 3, Eigen::RowMajor> out = (points * r.transpose());
  out.rowwise() += t.translation.transpose();
  return out;
}

/// Rotates every row of an N x 3 direction matrix.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 3, Eigen::RowMajor> rotate_directions(
    const RigidTransform<typename Derived::Scalar>& t, const Eigen::MatrixBase<Derived>& directions) {
  return directions * t.rotation_matrix().transpose();
}

inline TriangleMesh transformed(const TriangleMesh& mesh, const RigidTransformd& t) {
  TriangleMesh out = mesh;
  out.vertices = transform_points(t, mesh.vertices);
  if (mesh.normals.rows() > 0) out.normals = rotate_directions(t, mesh.normals);
  return out;
}

inline PointCloud transformed(const PointCloud& cloud, const RigidTransformd& t) {
  PointCloud out = cloud;
  out.points = transform_points(t, cloud.points);
  if (cloud.normals.rows() > 0) out.normals = rotate_directions(t, cloud.normals);
  return out;
}

}  // namespace reconeval
