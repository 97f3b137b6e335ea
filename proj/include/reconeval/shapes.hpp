#pragma once

#include <cstdint>

#include "mesh.hpp"

namespace reconeval {

/// Geodesic sphere from a subdivided icosahedron; vertex normals are exact.
TriangleMesh make_icosphere(double radius, int subdivisions);

/// Latitude/longitude sphere with its poles on the z axis, so (0,0,-r) is a vertex.
TriangleMesh make_uv_sphere(double radius, int rings, int segments);

/// The z <= 0 half of a uv sphere (open rim at z = 0, facing -z).
TriangleMesh make_hemisphere(double radius, int rings, int segments);

/// Regular tetrahedron inscribed in a sphere of the given radius, outward winding.
TriangleMesh make_tetrahedron(double radius);

/// (n x n)-vertex planar grid in z = 0 with spacing `step`, split into triangles.
TriangleMesh make_grid(int n, double step);

/// Closed, deliberately asymmetric torso-like surface in millimetres: an
/// ellipsoid with a flatter back, two unequal breast mounds facing -z and an
/// off-centre bump on the back. y is up; the front faces a camera on -z.
TriangleMesh make_torso_phantom(int subdivisions = 5);

/// Uniform random samples on the surface with interpolated vertex normals
/// (the mesh must carry normals). Deterministic for a given seed.
PointCloud sample_surface(const TriangleMesh& mesh, int count, std::uint64_t seed);

}  // namespace reconeval
