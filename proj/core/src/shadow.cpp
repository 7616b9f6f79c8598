#include "sdfield/shadow.hpp"

#include <cmath>
#include <stdexcept>

#include "sdfield/parallel.hpp"

namespace sdfield {

void ShadowParams::validate(float fine_voxel_size) const {
    if (!(epsilon >= fine_voxel_size)) {
        throw std::invalid_argument("epsilon must be at least one fine voxel");
    }
    if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
    if (!(max_step_size >= epsilon)) {
        throw std::invalid_argument("max_step_size must be >= epsilon");
    }
    if (!(light_angular_radius > 0.f)) {
        throw std::invalid_argument("light_angular_radius must be positive");
    }
    if (!(history_blend >= 0.f && history_blend < 1.f)) {
        throw std::invalid_argument("history_blend must be in [0, 1)");
    }
    float len = length(light_dir);
    if (!(std::fabs(len - 1.f) < 1e-3f)) {
        throw std::invalid_argument("light_dir must be a unit vector");
    }
}

Ray Camera::pixel_ray(int px, int py) const {
    if (!(fov > 0.f && fov < 3.14159265f)) {
        throw std::invalid_argument("camera fov must be in (0, pi)");
    }
    Vec3 forward = normalize(look_at - position);
    Vec3 right = normalize(cross(forward, up));
    Vec3 true_up = cross(right, forward);

    float tan_half = std::tan(fov * 0.5f);
    float aspect = float(width) / float(height);
    float ndc_x = (2.f * (float(px) + 0.5f) / float(width) - 1.f) * tan_half * aspect;
    float ndc_y = (1.f - 2.f * (float(py) + 0.5f) / float(height)) * tan_half;

    Ray ray;
    ray.origin = position;
    ray.dir = normalize(forward + right * ndc_x + true_up * ndc_y);
    return ray;
}

MarchResult march_shadow(const ScalarGrid& sdf, const Vec3& origin, const ShadowParams& params,
                         RngStream& rng) {
    MarchResult out;
    float res = 1.f;
    float jitter = params.jitter_amplitude * rng.next_float();
    float t = params.epsilon + jitter;
    float h_prev = kInf;
    float t_prev = t;

    for (int step = 0; step < params.max_steps; ++step) {
        if (t > params.t_max) break;
        float h = sample_trilinear(sdf, origin + params.light_dir * t);
        ++out.steps;

        if (!std::isfinite(h)) {
            // Sentinel region (empty scene or unreached texels): no surface
            // information here, push on at full stride.
            t_prev = t;
            t += params.max_step_size;
            h_prev = kInf;
            continue;
        }
        if (h < params.epsilon) {
            out.visibility = 0.f;
            out.max_gap = std::max(out.max_gap, t - t_prev);
            return out;
        }

        // Closest approach of the occluder sphere pair (h_prev, h):
        // penumbra narrows res by the cone ratio at that point.
        float y = std::isfinite(h_prev) ? h * h / (2.f * h_prev) : 0.f;
        float d_close = std::sqrt(std::max(h * h - y * y, 0.f));
        float denom = params.penumbra_w * std::max(t - y, 0.f);
        if (denom > 0.f) res = std::min(res, d_close / denom);

        h_prev = h;
        out.max_gap = std::max(out.max_gap, t - t_prev);
        t_prev = t;
        t += clamp(h, params.epsilon, params.max_step_size);
    }

    out.visibility = clamp(res, 0.f, 1.f);
    return out;
}

float soft_shadow_visibility(const ScalarGrid& sdf, const Vec3& origin,
                             const ShadowParams& params, RngStream& rng) {
    return march_shadow(sdf, origin, params, rng).visibility;
}

FrameImages render_frame(const Bvh& scene, const ScalarGrid& fine_sdf, const Camera& camera,
                         const ShadowParams& params, uint64_t frame, uint64_t seed, float ambient,
                         const VisibilityImage* history) {
    params.validate(fine_sdf.spec.voxel_size);
    if (history && (history->width != camera.width || history->height != camera.height)) {
        throw std::invalid_argument("history buffer size mismatch");
    }
    // Fail here, on the caller's thread, rather than inside a worker.
    if (!(camera.fov > 0.f && camera.fov < 3.14159265f)) {
        throw std::invalid_argument("camera fov must be in (0, pi)");
    }
    if (length_squared(camera.look_at - camera.position) == 0.f) {
        throw std::invalid_argument("camera look_at must differ from position");
    }

    const Vec3 background{0.55f, 0.67f, 0.82f};
    const Vec3 surface{0.85f, 0.83f, 0.78f};

    FrameImages out;
    out.color = ColorImage(camera.width, camera.height);
    out.visibility = VisibilityImage(camera.width, camera.height, 1.f);

    size_t pixel_count = size_t(camera.width) * size_t(camera.height);
    std::vector<uint8_t> is_surface(pixel_count, 0);
    std::vector<float> lambert(pixel_count, 0.f);

    parallel_for(pixel_count, [&](size_t i) {
        int px = int(i % size_t(camera.width));
        int py = int(i / size_t(camera.width));
        Ray ray = camera.pixel_ray(px, py);

        auto hit = scene.closest_hit(ray);
        if (!hit) return;

        Vec3 p = ray.origin + ray.dir * hit->t;
        Vec3 n = scene.mesh()->face_normals[hit->triangle];
        if (dot(n, ray.dir) > 0.f) n = n * -1.f;   // shade the visible side

        RngStream rng = make_stream(seed, RngUse::shadow_jitter, i, frame);
        float vis = soft_shadow_visibility(fine_sdf, p, params, rng);

        is_surface[i] = 1;
        lambert[i] = std::max(0.f, dot(n, params.light_dir));
        out.visibility.pixels[i] = vis;
    });

    // Temporal resolve before shading, so the color image reflects the
    // blended visibility.
    if (history) {
        float h = params.history_blend;
        for (size_t i = 0; i < pixel_count; ++i) {
            float blended = h * history->pixels[i] + (1.f - h) * out.visibility.pixels[i];
            out.visibility.pixels[i] = clamp(blended, 0.f, 1.f);
        }
    }

    for (size_t i = 0; i < pixel_count; ++i) {
        if (!is_surface[i]) {
            out.color.pixels[i] = {background.x, background.y, background.z};
            continue;
        }
        float shade = clamp(lambert[i] * out.visibility.pixels[i] + ambient, 0.f, 1.f);
        out.color.pixels[i] = {surface.x * shade, surface.y * shade, surface.z * shade};
    }
    return out;
}

} // namespace sdfield
