#pragma once

#include <cstdint>

#include "sdfield/bvh.hpp"
#include "sdfield/grid.hpp"
#include "sdfield/image.hpp"
#include "sdfield/rng.hpp"

namespace sdfield {

struct ShadowParams {
    float epsilon = 0.f;               // termination distance, >= 1 fine voxel
    int max_steps = 128;
    float max_step_size = 0.f;         // >= epsilon
    Vec3 light_dir{0.f, 0.f, 1.f};     // unit, toward the light
    float light_angular_radius = 0.f;  // radians, > 0
    float penumbra_w = 0.f;            // tan(light_angular_radius)
    float jitter_amplitude = 0.f;      // world units
    float history_blend = 0.f;         // [0, 1)
    float t_max = kInf;

    void derive_penumbra_width() { penumbra_w = std::tan(light_angular_radius); }
    // Throws std::invalid_argument when a field is out of range.
    void validate(float fine_voxel_size) const;
};

struct Camera {
    Vec3 position{};
    Vec3 look_at{};
    Vec3 up{0.f, 0.f, 1.f};
    float fov = 0.9f;      // vertical, radians, in (0, pi)
    int width = 128;
    int height = 128;

    // Ray through the center of pixel (px, py), origin at position,
    // direction normalized. Throws when fov is outside (0, pi).
    Ray pixel_ray(int px, int py) const;
};

using VisibilityImage = GrayImage;

struct MarchResult {
    float visibility = 1.f;   // in [0, 1]
    int steps = 0;            // samples taken, <= max_steps
    float max_gap = 0.f;      // largest spacing between consecutive samples
};

// Sphere-traces from origin toward the light with the start pushed out by
// epsilon plus a jitter drawn from rng. Penumbra size comes from the
// closest-approach point triangulated between the current and previous
// samples:
//   y = h^2 / (2 h_prev), d_close = sqrt(max(h^2 - y^2, 0)),
//   res = min(res, d_close / (penumbra_w * max(t - y, 0)))
// with the first sample treated as h_prev = +inf. The march advances by
// clamp(h, epsilon, max_step_size), returns 0 when h < epsilon, and
// clamp(res, 0, 1) past t_max or max_steps. A non-finite sample contributes
// no occlusion and advances a full max_step_size.
MarchResult march_shadow(const ScalarGrid& sdf, const Vec3& origin, const ShadowParams& params,
                         RngStream& rng);

float soft_shadow_visibility(const ScalarGrid& sdf, const Vec3& origin,
                             const ShadowParams& params, RngStream& rng);

struct FrameImages {
    ColorImage color;
    VisibilityImage visibility;
};

// Renders one frame: primary hits by exact scene rays, shadow visibility by
// marching the signed fine SDF, shading = lambert * visibility + ambient.
// Pixels with no primary hit get the background and visibility 1. The jitter
// for pixel p at frame t depends only on (seed, p, t). When history is given
// the visibility buffer is blended as h * history + (1 - h) * current before
// shading.
FrameImages render_frame(const Bvh& scene, const ScalarGrid& fine_sdf, const Camera& camera,
                         const ShadowParams& params, uint64_t frame, uint64_t seed, float ambient,
                         const VisibilityImage* history);

} // namespace sdfield
