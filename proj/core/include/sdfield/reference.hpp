#pragma once

#include <cstdint>

#include "sdfield/bvh.hpp"
#include "sdfield/image.hpp"
#include "sdfield/shadow.hpp"

namespace sdfield {

struct ReferenceParams {
    int samples_per_pixel = 256;       // K, >= 1
    Vec3 light_dir{0.f, 0.f, 1.f};     // unit, toward the light
    float light_angular_radius = 0.f;  // radians, > 0
    uint64_t seed = 0;
    float t_max = kInf;                // occlusion counted only within this range

    void validate() const;
};

// Fraction of K shadow rays that hit nothing within t_max. Directions are
// uniform over the solid-angle cone of half-angle light_angular_radius
// around light_dir (cos g = 1 - u1 (1 - cos theta)). The caller offsets p
// off the surface (by 1e-4 along the normal); cell keys the deterministic
// sample stream, typically the pixel index.
float reference_visibility(const Bvh& scene, const Vec3& p, const ReferenceParams& params,
                           uint64_t cell);

// Ground-truth visibility image: camera rays against exact geometry, each
// hit point offset 1e-4 along the geometric normal toward the ray, then cone
// sampled. Misses are fully lit.
VisibilityImage render_reference(const Bvh& scene, const Camera& camera,
                                 const ReferenceParams& params);

} // namespace sdfield
