#include "sdfield/reference.hpp"

#include <cmath>
#include <stdexcept>

#include "sdfield/parallel.hpp"

namespace sdfield {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// Orthonormal frame with w as the third column.
void build_frame(const Vec3& w, Vec3& u, Vec3& v) {
    Vec3 a = std::fabs(w.x) < 0.9f ? Vec3{1.f, 0.f, 0.f} : Vec3{0.f, 1.f, 0.f};
    u = normalize(cross(a, w));
    v = cross(w, u);
}

} // namespace

void ReferenceParams::validate() const {
    if (samples_per_pixel < 1) throw std::invalid_argument("samples_per_pixel must be >= 1");
    if (!(light_angular_radius > 0.f)) {
        throw std::invalid_argument("light_angular_radius must be positive");
    }
    float len = length(light_dir);
    if (!(std::fabs(len - 1.f) < 1e-3f)) {
        throw std::invalid_argument("light_dir must be a unit vector");
    }
}

float reference_visibility(const Bvh& scene, const Vec3& p, const ReferenceParams& params,
                           uint64_t cell) {
    Vec3 u, v;
    build_frame(params.light_dir, u, v);
    float cos_theta = std::cos(params.light_angular_radius);

    RngStream rng = make_stream(params.seed, RngUse::reference_cone, cell);
    int unoccluded = 0;
    for (int s = 0; s < params.samples_per_pixel; ++s) {
        // Uniform over the solid-angle cone: cos g = 1 - u1 (1 - cos theta).
        float u1 = rng.next_float();
        float u2 = rng.next_float();
        float cos_g = 1.f - u1 * (1.f - cos_theta);
        float sin_g = std::sqrt(std::max(0.f, 1.f - cos_g * cos_g));
        float phi = float(kTwoPi * double(u2));
        Vec3 dir = u * (sin_g * std::cos(phi)) + v * (sin_g * std::sin(phi)) +
                   params.light_dir * cos_g;

        Ray ray{p, dir, 0.f, params.t_max};
        if (!scene.closest_hit(ray)) ++unoccluded;
    }
    return float(unoccluded) / float(params.samples_per_pixel);
}

VisibilityImage render_reference(const Bvh& scene, const Camera& camera,
                                 const ReferenceParams& params) {
    params.validate();
    if (!(camera.fov > 0.f && camera.fov < 3.14159265f)) {
        throw std::invalid_argument("camera fov must be in (0, pi)");
    }

    VisibilityImage img(camera.width, camera.height, 1.f);
    size_t pixel_count = size_t(camera.width) * size_t(camera.height);
    parallel_for(pixel_count, [&](size_t i) {
        int px = int(i % size_t(camera.width));
        int py = int(i / size_t(camera.width));
        Ray ray = camera.pixel_ray(px, py);

        auto hit = scene.closest_hit(ray);
        if (!hit) return;

        Vec3 p = ray.origin + ray.dir * hit->t;
        Vec3 n = scene.mesh()->face_normals[hit->triangle];
        if (dot(n, ray.dir) > 0.f) n = n * -1.f;
        img.pixels[i] = reference_visibility(scene, p + n * 1e-4f, params, i);
    });
    return img;
}

} // namespace sdfield
