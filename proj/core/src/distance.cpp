#include "sdfield/distance.hpp"

#include <cmath>
#include <limits>

namespace sdfield {

// Voronoi-region walk (vertex, edge, face cases), double precision.
Vec3d closest_point_on_triangle(const Vec3d& p, const Vec3d& a, const Vec3d& b, const Vec3d& c) {
    Vec3d ab = b - a, ac = c - a, ap = p - a;
    double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    Vec3d bp = p - b;
    double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        double v = d1 / (d1 - d3);
        return a + ab * v;
    }

    Vec3d cp = p - c;
    double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        double w = d2 / (d2 - d6);
        return a + ac * w;
    }

    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }

    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return a + ab * v + ac * w;
}

double point_triangle_distance(const Vec3d& p, const Vec3d& a, const Vec3d& b, const Vec3d& c) {
    Vec3d q = closest_point_on_triangle(p, a, b, c);
    return length(p - q);
}

double exact_distance(const TriangleMesh& mesh, const Vec3& p) {
    Vec3d pd = p.cast<double>();
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < mesh.triangles.size(); ++i) {
        if (mesh.degenerate[i]) continue;
        const auto& t = mesh.triangles[i];
        double d = point_triangle_distance(pd, mesh.vertices[t[0]].cast<double>(),
                                           mesh.vertices[t[1]].cast<double>(),
                                           mesh.vertices[t[2]].cast<double>());
        if (d < best) best = d;
    }
    return best;
}

} // namespace sdfield
