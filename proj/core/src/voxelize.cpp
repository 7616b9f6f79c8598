#include "sdfield/voxelize.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "sdfield/parallel.hpp"

namespace sdfield {

namespace {

inline double edge(double px, double py, double qx, double qy, double sx, double sy) {
    return (qx - px) * (sy - py) - (qy - py) * (sx - px);
}

// Marking a voxel occupied is an idempotent store, so concurrent writers
// need no ordering.
inline void mark(SeedGrid& grid, size_t index) {
    std::atomic_ref<uint8_t> cell(grid.data[index]);
    cell.store(1, std::memory_order_relaxed);
}

} // namespace

void rasterize_triangle(const Vec3& a, const Vec3& b, const Vec3& c, int axis,
                        const GridSpec& spec, int supersample, SeedGrid& out) {
    int u = (axis + 1) % 3;
    int v = (axis + 2) % 3;

    // Projected 2D triangle in the (u, v) plane, doubles so coverage of a
    // sample point is decided identically for triangles sharing an edge.
    double ax = a[u], ay = a[v];
    double bx = b[u], by = b[v];
    double cx = c[u], cy = c[v];
    double area2 = edge(ax, ay, bx, by, cx, cy);
    if (area2 == 0.0) return;

    double h = spec.voxel_size;
    double ou = spec.origin[u], ov = spec.origin[v];

    double min_u = std::min({ax, bx, cx}), max_u = std::max({ax, bx, cx});
    double min_v = std::min({ay, by, cy}), max_v = std::max({ay, by, cy});
    int i0 = std::max(0, int(std::floor((min_u - ou) / h)));
    int i1 = std::min(spec.resolution[u] - 1, int(std::floor((max_u - ou) / h)));
    int j0 = std::max(0, int(std::floor((min_v - ov) / h)));
    int j1 = std::min(spec.resolution[v] - 1, int(std::floor((max_v - ov) / h)));
    if (i0 > i1 || j0 > j1) return;

    double inv_area2 = 1.0 / area2;
    int s = std::max(1, supersample);

    for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
            for (int sj = 0; sj < s; ++sj) {
                for (int si = 0; si < s; ++si) {
                    double su = ou + (double(i) + (double(si) + 0.5) / double(s)) * h;
                    double sv = ov + (double(j) + (double(sj) + 0.5) / double(s)) * h;

                    double e0 = edge(bx, by, cx, cy, su, sv);   // opposite a
                    double e1 = edge(cx, cy, ax, ay, su, sv);   // opposite b
                    double e2 = edge(ax, ay, bx, by, su, sv);   // opposite c
                    // Inclusive rule, either winding: samples exactly on an
                    // edge count as covered for both neighbors.
                    bool inside = (e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0) ||
                                  (e0 <= 0.0 && e1 <= 0.0 && e2 <= 0.0);
                    if (!inside) continue;

                    double w0 = e0 * inv_area2, w1 = e1 * inv_area2, w2 = e2 * inv_area2;
                    double depth = w0 * a[axis] + w1 * b[axis] + w2 * c[axis];
                    int k = int(std::floor((depth - spec.origin[axis]) / h));
                    if (k < 0 || k >= spec.resolution[axis]) continue;

                    int coords[3];
                    coords[axis] = k;
                    coords[u] = i;
                    coords[v] = j;
                    mark(out, spec.index(coords[0], coords[1], coords[2]));
                }
            }
        }
    }
}

SeedGrid voxelize(const TriangleMesh& mesh, const GridSpec& spec, const VoxelizeParams& params) {
    if (params.supersample < 1) throw std::invalid_argument("supersample must be >= 1");
    SeedGrid grid(spec, 0);
    for (int axis = 0; axis < 3; ++axis) {
        parallel_for(mesh.triangle_count(), [&](size_t i) {
            if (mesh.degenerate[i]) return;
            const auto& t = mesh.triangles[i];
            rasterize_triangle(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                               axis, spec, params.supersample, grid);
        });
    }
    return grid;
}

} // namespace sdfield
