#pragma once

#include <cstdint>

#include "sdfield/bvh.hpp"
#include "sdfield/grid.hpp"
#include "sdfield/rng.hpp"

namespace sdfield {

struct RefineParams {
    // Texels whose interpolated coarse distance is at most this get
    // ray-traced; the rest pass the coarse value through. World units, at
    // least one fine voxel.
    float refine_distance = 0.f;
    // Exponential history weight in [0, 1]: 1 never forgets, 0 keeps only
    // the current frame.
    float decay = 0.9f;
    int rays_per_texel = 8;
    GridSpec fine_spec;
    uint64_t seed = 0;
};

// Per-texel temporal state. distance holds the unsigned magnitude (+inf at
// refined texels no ray has reached yet); sign_front/sign_back are the
// decayed facing tallies that vote the sign.
struct FineSdfState {
    ScalarGrid distance;
    ScalarGrid sign_front;
    ScalarGrid sign_back;
    uint64_t frame = 0;

    FineSdfState() = default;
    explicit FineSdfState(const GridSpec& fine_spec)
        : distance(fine_spec, kInf), sign_front(fine_spec, 0.f), sign_back(fine_spec, 0.f) {}
};

// 1 where the interpolated coarse distance at the fine texel center is at
// most refine_distance.
MaskGrid select_refine_mask(const ScalarGrid& coarse, const RefineParams& params);

struct DistanceSample {
    float distance = kInf;   // nearest hit over all rays, +inf if all missed
    uint32_t front_hits = 0;
    uint32_t back_hits = 0;
};

// Casts `rays` uniform unit directions (z = 2u1 - 1, phi = 2 pi u2) from
// origin and returns the closest hit distance plus facing tallies.
DistanceSample trace_distance_sample(const Bvh& bvh, const Vec3& origin, int rays, RngStream& rng);

// Blended-minimum update. Per texel, with c = interpolated coarse sample at
// the texel center: inside the mask
//   f = min(decay * f_prev + (1 - decay) * |c|, r)
// where an infinite f_prev stays out of the blend so the first ray sample
// wins outright; outside the mask f = c bit-exactly. Magnitudes stay
// unsigned here, the sign vote is applied separately. Throws on grid shape
// mismatch.
ScalarGrid accumulate_fine(const ScalarGrid& f_prev, const ScalarGrid& coarse,
                           const ScalarGrid& samples, const MaskGrid& mask,
                           const RefineParams& params);

// Decays both tallies and adds this frame's counts, then returns the signed
// field: refined texels get state magnitude negated where decayed back hits
// strictly exceed front hits (ties stay positive); other texels keep their
// stored pass-through value.
ScalarGrid update_sign(FineSdfState& state, const Grid3<uint32_t>& front,
                       const Grid3<uint32_t>& back, const MaskGrid& mask, float decay);

// Advances the temporal fine field by one frame: mask selection, per-texel
// ray tracing, blended-minimum accumulation, sign vote. Mutates state and
// returns the signed result. Validates that the fine resolution is an
// integer multiple of the coarse resolution per axis and that
// refine_distance is at least one fine voxel. Ray directions for texel v,
// frame t, ray i depend only on (seed, v, t, i), so results are identical
// for any thread count.
ScalarGrid build_fine_sdf(const Bvh& scene, const ScalarGrid& coarse, FineSdfState& state,
                          const RefineParams& params);

} // namespace sdfield
