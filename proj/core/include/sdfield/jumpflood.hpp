#pragma once

#include <cstdint>

#include "sdfield/grid.hpp"
#include "sdfield/voxelize.hpp"

namespace sdfield {

// Per-voxel linear index of the nearest seed voxel, or kNoSeed when the grid
// holds no seeds at all.
struct NearestSeedGrid {
    static constexpr int32_t kNoSeed = -1;
    GridSpec spec;
    std::vector<int32_t> nearest;

    NearestSeedGrid() = default;
    explicit NearestSeedGrid(const GridSpec& spec_)
        : spec(spec_), nearest(spec_.voxel_count(), kNoSeed) {}
};

struct JfaParams {
    // Bias subtracted from every distance, in world units. Pushes the zero
    // level set outward so the dilated surface stays watertight under
    // sphere tracing. Must stay below voxel_size * sqrt(3).
    float sign_bias = 0.f;
};

// Jump flooding over the seed grid. Distances are compared as exact integer
// squared index-space distances, ties broken by lexicographically smaller
// (x, y, z) seed coordinate, so the result is unique and thread-count
// independent.
NearestSeedGrid jfa_flood(const SeedGrid& seeds);

// Exhaustive nearest-seed scan with the same metric and tie rule as
// jfa_flood. Slow but independent of the flooding algorithm; used to verify
// it.
NearestSeedGrid exact_nearest(const SeedGrid& seeds);

// Distance field from a nearest-seed assignment: voxel_size * ||voxel -
// seed|| - sign_bias per voxel, +inf where no seed exists. Validates
// params.sign_bias < voxel_size * sqrt(3).
ScalarGrid coarse_sdf(const NearestSeedGrid& nearest, const JfaParams& params);

} // namespace sdfield
