#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "oracles.hpp"
#include "reconeval/bvh.hpp"
#include "reconeval/closest_point.hpp"
#include "reconeval/error.hpp"
#include "reconeval/mesh.hpp"
#include "reconeval/mesh_io.hpp"
#include "reconeval/rigid_transform.hpp"
#include "reconeval/shapes.hpp"

using namespace reconeval;

namespace {

const char* kTrianglePly =
    "ply\n"
    "format ascii 1.0\n"
    "element vertex 3\n"
    "property float x\n"
    "property float y\n"
    "property float z\n"
    "element face 1\n"
    "property list uchar int vertex_indices\n"
    "end_header\n"
    "0 0 0\n"
    "1 0 0\n"
    "0 1 0\n"
    "3 0 1 2\n";

TriangleMesh unit_square() {
  TriangleMesh m;
  m.vertices.resize(4, 3);
  m.vertices << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0;
  m.faces.resize(2, 3);
  m.faces << 0, 1, 2, 0, 2, 3;
  return m;
}

ParseError::Kind parse_kind(const std::string& bytes, MeshFormat format) {
  try {
    load_mesh(bytes, format);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no parse error";
  return ParseError::Kind::InvalidValue;
}

}  // namespace

TEST(LoadMesh, MinimalAsciiPly) {
  const auto g = load_mesh(kTrianglePly, MeshFormat::PlyAscii);
  ASSERT_TRUE(g.is_mesh());
  EXPECT_EQ(g.mesh().vertex_count(), 3);
  EXPECT_EQ(g.mesh().face_count(), 1);
  EXPECT_TRUE(g.warnings.empty());
}

TEST(LoadMesh, VertexOnlyFileIsPointCloud) {
  const std::string ply =
      "ply\nformat ascii 1.0\nelement vertex 2\nproperty double x\nproperty double y\nproperty double z\nend_header\n"
      "1 2 3\n4 5 6\n";
  const auto g = load_mesh(ply, MeshFormat::PlyAscii);
  ASSERT_FALSE(g.is_mesh());
  EXPECT_EQ(g.cloud().size(), 2);
  EXPECT_DOUBLE_EQ(g.cloud().points(1, 2), 6.0);
}

TEST(LoadMesh, UnknownPropertyWarns) {
  const std::string ply =
      "ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\nproperty float y\nproperty float z\n"
      "property float confidence\nelement face 1\nproperty list uchar int vertex_indices\nend_header\n"
      "0 0 0 0.5\n1 0 0 0.5\n0 1 0 0.5\n3 0 1 2\n";
  const auto g = load_mesh(ply, MeshFormat::PlyAscii);
  ASSERT_TRUE(g.is_mesh());
  ASSERT_FALSE(g.warnings.empty());
  EXPECT_NE(g.warnings.front().find("confidence"), std::string::npos);
}

TEST(LoadMesh, TruncatedBody) {
  std::string ply =
      "ply\nformat ascii 1.0\nelement vertex 10\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
  for (int i = 0; i < 7; ++i) ply += "0 0 0\n";
  EXPECT_EQ(parse_kind(ply, MeshFormat::PlyAscii), ParseError::Kind::TruncatedBody);
}

TEST(LoadMesh, TruncatedBinaryBodyNamesByteOffset) {
  TriangleMesh m = make_tetrahedron(10.0);
  std::string bytes = write_mesh(m, MeshFormat::PlyBinaryLe);
  bytes.resize(bytes.size() - 5);
  try {
    load_mesh(bytes, MeshFormat::PlyBinaryLe);
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::TruncatedBody);
    EXPECT_EQ(e.location(), ParseError::Location::Byte);
    EXPECT_GT(e.offset(), 0u);
  }
}

TEST(LoadMesh, MalformedHeader) {
  EXPECT_EQ(parse_kind("plx\nformat ascii 1.0\nend_header\n", MeshFormat::PlyAscii), ParseError::Kind::MalformedHeader);
  EXPECT_EQ(parse_kind("ply\nformat ascii 1.0\nelement vertex 3\nproperty float x\n", MeshFormat::PlyAscii),
            ParseError::Kind::MalformedHeader);
}

TEST(LoadMesh, FaceIndexOutOfRange) {
  std::string ply = kTrianglePly;
  ply.replace(ply.rfind("3 0 1 2"), 7, "3 0 1 7");
  EXPECT_EQ(parse_kind(ply, MeshFormat::PlyAscii), ParseError::Kind::IndexOutOfRange);
  EXPECT_EQ(parse_kind("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n", MeshFormat::Obj), ParseError::Kind::IndexOutOfRange);
}

TEST(LoadMesh, BigEndianUnsupported) {
  const std::string ply = "ply\nformat binary_big_endian 1.0\nelement vertex 0\nend_header\n";
  EXPECT_EQ(parse_kind(ply, MeshFormat::PlyBinaryLe), ParseError::Kind::UnsupportedFormat);
}

TEST(LoadMesh, ObjFacesNormalsAndPolygons) {
  const std::string obj =
      "# quad\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 2\nvn 0 0 1\nvn 0 0 1\nvn 0 0 1\n"
      "f 1//1 2//2 3//3 4//4\n";
  const auto g = load_mesh(obj, MeshFormat::Obj);
  ASSERT_TRUE(g.is_mesh());
  EXPECT_EQ(g.mesh().face_count(), 2);
  ASSERT_TRUE(g.mesh().has_normals());
  EXPECT_NEAR(g.mesh().normals.row(0).norm(), 1.0, 1e-12);
  const auto neg = load_mesh("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n", MeshFormat::Obj);
  EXPECT_EQ(neg.mesh().faces(0, 2), 2);
}

TEST(LoadMesh, NonNumericObjReportsLine) {
  try {
    load_mesh("v 0 0 0\nv 1 x 0\n", MeshFormat::Obj);
    FAIL() << "no error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.location(), ParseError::Location::Line);
    EXPECT_EQ(e.offset(), 2u);
  }
}

TEST(LoadMesh, UnitScale) {
  const auto g = load_mesh(kTrianglePly, MeshFormat::PlyAscii, {1000.0});
  EXPECT_DOUBLE_EQ(g.mesh().vertices(1, 0), 1000.0);
}

TEST(LoadMesh, ArbitraryBytesNeverCrash) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> byte(0, 255);
  const std::string base = write_mesh(make_tetrahedron(5.0), MeshFormat::PlyBinaryLe);
  for (int trial = 0; trial < 300; ++trial) {
    std::string bytes = base;
    for (int k = 0; k < 4; ++k) bytes[static_cast<std::size_t>(byte(rng)) % bytes.size()] = static_cast<char>(byte(rng));
    bytes.resize(static_cast<std::size_t>(byte(rng)) % (bytes.size() + 1));
    for (auto fmt : {MeshFormat::PlyBinaryLe, MeshFormat::PlyAscii, MeshFormat::Obj}) {
      try {
        const auto g = load_mesh(bytes, fmt);
        if (g.is_mesh()) validate(g.mesh());
      } catch (const ParseError&) {
      }
    }
  }
}

TEST(WriteMesh, RoundTripAllFormats) {
  TriangleMesh m = make_torso_phantom(2);
  for (auto fmt : {MeshFormat::PlyAscii, MeshFormat::PlyBinaryLe, MeshFormat::Obj}) {
    const auto back = load_mesh(write_mesh(m, fmt), fmt);
    ASSERT_TRUE(back.is_mesh());
    EXPECT_EQ(back.mesh().vertices, m.vertices);
    EXPECT_EQ(back.mesh().faces, m.faces);
    // Written bytes are stable under a second round trip.
    EXPECT_EQ(write_mesh(back.mesh(), fmt), write_mesh(m, fmt));
  }
}

TEST(WriteMesh, TetrahedronRoundTrip) {
  const TriangleMesh m = make_tetrahedron(1.0);
  const auto back = load_mesh(write_mesh(m, MeshFormat::PlyAscii), MeshFormat::PlyAscii);
  EXPECT_EQ(back.mesh().vertices, m.vertices);
  EXPECT_EQ(back.mesh().faces, m.faces);
}

TEST(WriteMesh, ScalarChannel) {
  const TriangleMesh m = make_tetrahedron(1.0);
  const std::vector<double> zeros(4, 0.0);
  const auto back = load_mesh(write_mesh(m, MeshFormat::PlyBinaryLe, zeros), MeshFormat::PlyBinaryLe);
  ASSERT_EQ(back.quality.size(), 4u);
  for (double q : back.quality) EXPECT_EQ(q, 0.0);
  EXPECT_NE(write_mesh(m, MeshFormat::PlyAscii, zeros).find("property float quality"), std::string::npos);

  const std::vector<double> short_channel(3, 1.0);
  EXPECT_THROW(write_mesh(m, MeshFormat::PlyAscii, short_channel), std::invalid_argument);
  EXPECT_THROW(write_mesh(m, MeshFormat::Obj, zeros), std::invalid_argument);
}

TEST(WriteMesh, CommentsLandInHeader) {
  const std::vector<std::string> comments = {"made by a test"};
  const std::string ply = write_mesh(make_tetrahedron(1.0), MeshFormat::PlyAscii, {}, comments);
  EXPECT_NE(ply.find("comment made by a test"), std::string::npos);
}

TEST(DetectFormat, ByExtensionAndHeader) {
  EXPECT_EQ(detect_format("a.obj", ""), MeshFormat::Obj);
  EXPECT_EQ(detect_format("a.PLY", "ply\nformat ascii 1.0\n"), MeshFormat::PlyAscii);
  EXPECT_EQ(detect_format("a.ply", "ply\nformat binary_little_endian 1.0\n"), MeshFormat::PlyBinaryLe);
  EXPECT_THROW(detect_format("a.stl", ""), ParseError);
}

TEST(VertexNormals, UnitSquare) {
  const Vertices n = compute_vertex_normals(unit_square());
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(n(i, 2), 1.0, 1e-15);
    EXPECT_NEAR(n.row(i).head<2>().norm(), 0.0, 1e-15);
  }
}

TEST(VertexNormals, TetrahedronMatchesFaceSum) {
  const TriangleMesh m = make_tetrahedron(3.0);
  const Vertices n = compute_vertex_normals(m);
  for (int v = 0; v < 4; ++v) {
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (int f = 0; f < 4; ++f) {
      for (int k = 0; k < 3; ++k) {
        if (m.faces(f, k) == v) {
          const Eigen::Vector3d a = m.corner(f, 0), b = m.corner(f, 1), c = m.corner(f, 2);
          sum += (b - a).cross(c - a).normalized();
        }
      }
    }
    EXPECT_NEAR((n.row(v).transpose() - sum.normalized()).norm(), 0.0, 1e-12);
  }
}

TEST(VertexNormals, IcosphereCloseToRadial) {
  TriangleMesh m = make_icosphere(1.0, 3);
  const Vertices n = compute_vertex_normals(m);
  for (Eigen::Index i = 0; i < m.vertex_count(); ++i) {
    const double c = std::clamp(n.row(i).dot(m.vertices.row(i).normalized()), -1.0, 1.0);
    EXPECT_LT(std::acos(c) * 180.0 / 3.14159265358979, 2.0);
  }
}

TEST(VertexNormals, IsolatedVertexFlaggedZero) {
  TriangleMesh m = unit_square();
  m.vertices.conservativeResize(5, 3);
  m.vertices.row(4) << 5, 5, 5;
  const Vertices n = compute_vertex_normals(m);
  EXPECT_EQ(n.row(4).squaredNorm(), 0.0);
}

TEST(VertexNormals, TranslationInvariantRotationEquivariant) {
  const TriangleMesh m = make_torso_phantom(2);
  const Vertices n = compute_vertex_normals(m);
  const RigidTransformd g(Eigen::Quaterniond(Eigen::AngleAxisd(0.8, Eigen::Vector3d(1, 2, 3).normalized())),
                          Eigen::Vector3d(40, -10, 7));
  TriangleMesh moved = m;
  moved.vertices = transform_points(g, m.vertices);
  const Vertices nm = compute_vertex_normals(moved);
  EXPECT_LT((nm - rotate_directions(g, n)).cwiseAbs().maxCoeff(), 1e-9);
  TriangleMesh shifted = m;
  shifted.vertices.rowwise() += Eigen::RowVector3d(100, 200, 300);
  EXPECT_LT((compute_vertex_normals(shifted) - n).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Boundary, ClosedTetrahedronIsEmpty) { EXPECT_TRUE(detect_boundary_triangles(make_tetrahedron(1.0)).empty()); }

TEST(Boundary, SingleTriangle) {
  TriangleMesh m = unit_square();
  m.faces.conservativeResize(1, 3);
  EXPECT_EQ(detect_boundary_triangles(m), std::vector<int>{0});
}

TEST(Boundary, GridMatchesEnumeration) {
  const TriangleMesh grid = make_grid(3, 1.0);
  ASSERT_EQ(grid.face_count(), 8);
  const auto expected = oracle::boundary_by_enumeration(grid);
  std::vector<int> want;
  for (std::size_t f = 0; f < expected.size(); ++f) {
    if (expected[f]) want.push_back(static_cast<int>(f));
  }
  EXPECT_EQ(detect_boundary_triangles(grid), want);

  const TriangleMesh big = make_grid(6, 1.0);
  const auto big_expected = oracle::boundary_by_enumeration(big);
  EXPECT_EQ(boundary_face_mask(big), big_expected);
}

TEST(Boundary, WatertightFixturesAreEmpty) {
  EXPECT_TRUE(detect_boundary_triangles(make_icosphere(1.0, 2)).empty());
  EXPECT_TRUE(detect_boundary_triangles(make_uv_sphere(1.0, 8, 12)).empty());
  EXPECT_TRUE(detect_boundary_triangles(make_torso_phantom(2)).empty());
  EXPECT_FALSE(detect_boundary_triangles(make_hemisphere(1.0, 8, 12)).empty());
}

TEST(ClosestPoint, InteriorProjection) {
  const auto r = closest_point_on_triangle(Eigen::Vector3d(0.2, 0.3, 1.0), Eigen::Vector3d(0, 0, 0),
                                           Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0));
  EXPECT_NEAR(r.distance, 1.0, 1e-15);
  EXPECT_NEAR((r.point - Eigen::Vector3d(0.2, 0.3, 0.0)).norm(), 0.0, 1e-15);
}

TEST(ClosestPoint, FootAtVertexOfRightAngle) {
  const auto r = closest_point_on_triangle(Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 0, 0),
                                           Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0));
  EXPECT_NEAR(r.distance, 1.0, 1e-15);
  EXPECT_NEAR(r.point.norm(), 0.0, 1e-15);
  EXPECT_NEAR(r.barycentric(0), 1.0, 1e-15);
}

TEST(ClosestPoint, VertexRegion) {
  const auto r = closest_point_on_triangle(Eigen::Vector3d(2, 0, 0), Eigen::Vector3d(0, 0, 0),
                                           Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0));
  EXPECT_NEAR(r.distance, 1.0, 1e-15);
  EXPECT_NEAR((r.point - Eigen::Vector3d(1, 0, 0)).norm(), 0.0, 1e-15);
}

TEST(ClosestPoint, EdgeRegion) {
  const auto r = closest_point_on_triangle(Eigen::Vector3d(1, 1, 0), Eigen::Vector3d(0, 0, 0),
                                           Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0));
  EXPECT_NEAR(r.distance, std::sqrt(0.5), 1e-15);
  EXPECT_NEAR((r.point - Eigen::Vector3d(0.5, 0.5, 0)).norm(), 0.0, 1e-15);
}

TEST(ClosestPoint, DegenerateTriangleUsesLongestEdge) {
  // Collinear vertices: the segment from (0,0,0) to (4,0,0).
  const Eigen::Vector3d a(0, 0, 0), b(1, 0, 0), c(4, 0, 0);
  const auto r = closest_point_on_triangle(Eigen::Vector3d(3, 2, 0), a, b, c);
  EXPECT_NEAR(r.distance, 2.0, 1e-12);
  EXPECT_NEAR((r.point - Eigen::Vector3d(3, 0, 0)).norm(), 0.0, 1e-12);
  const auto p = closest_point_on_triangle(Eigen::Vector3d(1, 1, 1), a, a, a);
  EXPECT_NEAR(p.distance, std::sqrt(3.0), 1e-12);
}

TEST(ClosestPoint, RandomPairsMatchBothOracles) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const Eigen::Vector3d a(u(rng), u(rng), u(rng)), b(u(rng), u(rng), u(rng)), c(u(rng), u(rng), u(rng));
    const Eigen::Vector3d p(2 * u(rng), 2 * u(rng), 2 * u(rng));
    const auto r = closest_point_on_triangle(p, a, b, c);
    const Eigen::Vector3d ref = oracle::region_closest_point(p, a, b, c);
    ASSERT_NEAR((r.point - ref).norm(), 0.0, 1e-9);
    ASSERT_NEAR(r.distance, oracle::sampled_distance(p, a, b, c), 1e-3);
    // Hit invariants.
    ASSERT_GE(r.barycentric.minCoeff(), 0.0);
    ASSERT_NEAR(r.barycentric.sum(), 1.0, 1e-9);
    ASSERT_NEAR(r.distance, (p - r.point).norm(), 1e-9);
  }
}

TEST(Bvh, VertexQueriesHaveZeroDistance) {
  const TriangleMesh m = make_torso_phantom(2);
  const BvhTree bvh(m);
  for (Eigen::Index i = 0; i < m.vertex_count(); i += 7) {
    EXPECT_EQ(closest_triangle(bvh, m, m.vertices.row(i).transpose()).distance, 0.0);
  }
}

TEST(Bvh, EveryFaceInExactlyOneLeafAndBoxesNest) {
  const TriangleMesh m = make_torso_phantom(3);
  const BvhTree bvh(m);
  std::vector<int> seen(static_cast<std::size_t>(m.face_count()), 0);
  for (const auto& node : bvh.nodes()) {
    if (!node.is_leaf()) continue;
    for (int k = 0; k < node.count; ++k) {
      const int f = bvh.face_order()[static_cast<std::size_t>(node.first + k)];
      ++seen[static_cast<std::size_t>(f)];
      for (int c = 0; c < 3; ++c) EXPECT_TRUE(node.box.contains(m.corner(f, c)));
    }
  }
  EXPECT_TRUE(std::ranges::all_of(seen, [](int s) { return s == 1; }));
}

TEST(Bvh, MatchesLinearScan) {
  const TriangleMesh m = make_icosphere(50.0, 4);
  const BvhTree bvh(m);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-80.0, 80.0);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d p(u(rng), u(rng), u(rng));
    const auto hit = closest_triangle(bvh, m, p);
    const auto [face, sq] = oracle::linear_scan(m, p);
    ASSERT_EQ(hit.face_index, face);
    ASSERT_EQ(hit.squared_distance, sq);
  }
}

TEST(Bvh, TieBreaksOnLowestFaceIndex) {
  // Query above a shared vertex of a flat grid: every incident face is at the same distance.
  const TriangleMesh grid = make_grid(4, 1.0);
  const BvhTree bvh(grid);
  const Eigen::Vector3d p(1.0, 1.0, 2.0);
  const auto hit = closest_triangle(bvh, grid, p);
  EXPECT_EQ(hit.face_index, oracle::linear_scan(grid, p).first);
  for (Eigen::Index f = 0; f < hit.face_index; ++f) {
    EXPECT_GT(closest_point_on_face(grid, static_cast<int>(f), p).squared_distance, hit.squared_distance);
  }
}

TEST(Bvh, EmptyMeshThrows) {
  const TriangleMesh empty;
  const BvhTree bvh(empty);
  EXPECT_THROW(closest_triangle(bvh, empty, Eigen::Vector3d::Zero()), DegenerateError);
}

TEST(RoiCenter, UnitSphereFront) {
  const Eigen::Vector3d c = roi_sphere_center(make_icosphere(1.0, 3));
  EXPECT_NEAR((c - Eigen::Vector3d(0, 0, -1)).norm(), 0.0, 1e-9);
}

TEST(RoiCenter, FlatSquare) {
  TriangleMesh sq = unit_square();
  sq.vertices.col(2).setConstant(0.9);
  const Eigen::Vector3d c = roi_sphere_center(sq);
  EXPECT_NEAR((c - Eigen::Vector3d(0.5, 0.5, 0.9)).norm(), 0.0, 1e-12);
}

TEST(RoiCenter, MissingLineThrows) {
  // Two squares far apart: the centroid line falls in the gap.
  TriangleMesh m;
  m.vertices.resize(8, 3);
  m.vertices << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 10, 0, 0, 11, 0, 0, 11, 1, 0, 10, 1, 0;
  m.faces.resize(4, 3);
  m.faces << 0, 1, 2, 0, 2, 3, 4, 5, 6, 4, 6, 7;
  EXPECT_THROW(roi_sphere_center(m), DegenerateError);
}

TEST(RoiCenter, PhantomMatchesRayCast) {
  const TriangleMesh m = make_torso_phantom(4);
  // Area-weighted centroid and a Moller-Trumbore cast along +z from far below.
  Eigen::Vector3d weighted = Eigen::Vector3d::Zero();
  double area = 0.0;
  for (Eigen::Index f = 0; f < m.face_count(); ++f) {
    const Eigen::Vector3d a = m.corner(f, 0), b = m.corner(f, 1), c = m.corner(f, 2);
    const double w = 0.5 * (b - a).cross(c - a).norm();
    weighted += w * (a + b + c) / 3.0;
    area += w;
  }
  const Eigen::Vector3d centroid = weighted / area;
  const Eigen::Vector3d origin(centroid.x(), centroid.y(), -1e4), dir(0, 0, 1);
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index f = 0; f < m.face_count(); ++f) {
    const Eigen::Vector3d a = m.corner(f, 0), e1 = m.corner(f, 1) - a, e2 = m.corner(f, 2) - a;
    const Eigen::Vector3d pv = dir.cross(e2);
    const double det = e1.dot(pv);
    if (std::abs(det) < 1e-15) continue;
    const Eigen::Vector3d tv = origin - a;
    const double u = tv.dot(pv) / det;
    const Eigen::Vector3d qv = tv.cross(e1);
    const double v = dir.dot(qv) / det;
    if (u < 0 || v < 0 || u + v > 1) continue;
    best = std::min(best, e2.dot(qv) / det);
  }
  ASSERT_TRUE(std::isfinite(best));
  const Eigen::Vector3d expected = origin + best * dir;
  EXPECT_NEAR((roi_sphere_center(m) - expected).norm(), 0.0, 1e-9);
}

TEST(Validate, RejectsBadMeshes) {
  TriangleMesh m = unit_square();
  m.faces(1, 2) = 9;
  EXPECT_THROW(validate(m), std::invalid_argument);
  m = unit_square();
  m.faces(0, 1) = 0;
  EXPECT_THROW(validate(m), std::invalid_argument);
  m = unit_square();
  m.normals = Vertices::Constant(4, 3, 1.0);
  EXPECT_THROW(validate(m), std::invalid_argument);
}
