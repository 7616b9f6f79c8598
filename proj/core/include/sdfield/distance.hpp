#pragma once

#include "sdfield/math.hpp"
#include "sdfield/mesh.hpp"

namespace sdfield {

// Closest point on triangle abc to p, in double precision.
Vec3d closest_point_on_triangle(const Vec3d& p, const Vec3d& a, const Vec3d& b, const Vec3d& c);

double point_triangle_distance(const Vec3d& p, const Vec3d& a, const Vec3d& b, const Vec3d& c);

// Unsigned distance from p to the mesh surface: brute-force minimum over all
// non-degenerate triangles, double precision throughout. Returns +inf for a
// mesh with no usable triangles. This is the reference every approximate
// field is measured against, so it favors accuracy over speed.
double exact_distance(const TriangleMesh& mesh, const Vec3& p);

} // namespace sdfield
