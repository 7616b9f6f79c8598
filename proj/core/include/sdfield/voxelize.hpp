#pragma once

#include "sdfield/grid.hpp"
#include "sdfield/mesh.hpp"

namespace sdfield {

// Boolean occupancy: 1 marks a voxel whose center region received at least
// one rasterized surface sample.
using SeedGrid = Grid3<uint8_t>;

struct VoxelizeParams {
    int supersample = 1;   // samples per pixel edge, >= 1
};

// Conservative surface voxelization by orthographic rasterization along the
// +x, +y and +z axes with the pixel grid aligned to the voxel grid. Each
// covered sample writes the voxel containing the interpolated surface point;
// the three axis passes are unioned. Writes are idempotent set-to-one stores,
// so the result is identical for any thread count.
SeedGrid voxelize(const TriangleMesh& mesh, const GridSpec& spec,
                  const VoxelizeParams& params = {});

// Rasterizes one triangle along a single axis (0 = x, 1 = y, 2 = z) into the
// grid. Sample coverage uses an inclusive edge rule for either winding: points
// exactly on an edge are covered. Triangles with zero projected area on the
// chosen axis contribute nothing. Exposed for tests.
void rasterize_triangle(const Vec3& a, const Vec3& b, const Vec3& c, int axis,
                        const GridSpec& spec, int supersample, SeedGrid& out);

} // namespace sdfield
