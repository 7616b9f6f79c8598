#pragma once

#include "sdfield/mesh.hpp"

namespace sdfield {

// Unit-radius icosphere centered at the origin with vertices on the z axis
// at both poles. subdivisions = 0 gives the base icosahedron (20 faces);
// each level quadruples the face count.
TriangleMesh make_icosphere(int subdivisions, float radius = 1.f);

// Axis-aligned box [min, max], 12 triangles, outward normals.
TriangleMesh make_box(const Vec3& min, const Vec3& max);

// Rectangle in the z = height plane spanning [x0,x1] x [y0,y1], two
// triangles, normal +z.
TriangleMesh make_quad(float x0, float x1, float y0, float y1, float height);

} // namespace sdfield
