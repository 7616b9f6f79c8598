#include <doctest.h>

#include <cmath>
#include <vector>

#include "sdfield/shadow.hpp"

using namespace sdfield;

namespace {

ShadowParams basic_params(float eps, float max_step, float t_max) {
    ShadowParams p;
    p.epsilon = eps;
    p.max_steps = 128;
    p.max_step_size = max_step;
    p.light_dir = Vec3{0.f, 0.f, 1.f};
    p.light_angular_radius = 0.0523599f;   // 3 degrees
    p.derive_penumbra_width();
    p.jitter_amplitude = 0.f;
    p.history_blend = 0.f;
    p.t_max = t_max;
    return p;
}

// Fills a grid with an analytic field evaluated at texel centers.
template <typename F>
ScalarGrid field_grid(const GridSpec& spec, F&& f) {
    ScalarGrid g(spec, 0.f);
    for (size_t i = 0; i < g.size(); ++i) {
        auto c = spec.coords(i);
        g[i] = f(spec.center(c[0], c[1], c[2]));
    }
    return g;
}

} // namespace

TEST_CASE("pixel rays shoot through the view center and follow image axes") {
    Camera cam;
    cam.position = Vec3{0.f, -3.f, 0.f};
    cam.look_at = Vec3{0.f, 0.f, 0.f};
    cam.fov = 1.5707963f;
    cam.width = cam.height = 3;

    Ray center = cam.pixel_ray(1, 1);
    CHECK(length(center.dir - Vec3{0.f, 1.f, 0.f}) < 1e-6f);

    // Image x grows toward world +x (right), image y grows downward.
    CHECK(cam.pixel_ray(2, 1).dir.x > 0.f);
    CHECK(cam.pixel_ray(0, 1).dir.x < 0.f);
    CHECK(cam.pixel_ray(1, 0).dir.z > 0.f);
    CHECK(cam.pixel_ray(1, 2).dir.z < 0.f);

    Camera bad = cam;
    bad.fov = 3.5f;
    CHECK_THROWS_AS(bad.pixel_ray(0, 0), std::invalid_argument);
}

TEST_CASE("parameter validation rejects out-of-range fields") {
    ShadowParams p = basic_params(1.f, 4.f, 100.f);
    CHECK_NOTHROW(p.validate(1.f));
    CHECK_THROWS_AS(p.validate(2.f), std::invalid_argument);   // eps below one voxel

    ShadowParams small_step = p;
    small_step.max_step_size = 0.5f;
    CHECK_THROWS_AS(small_step.validate(1.f), std::invalid_argument);

    ShadowParams bad_light = p;
    bad_light.light_dir = Vec3{0.f, 0.f, 2.f};
    CHECK_THROWS_AS(bad_light.validate(1.f), std::invalid_argument);

    ShadowParams bad_blend = p;
    bad_blend.history_blend = 1.f;
    CHECK_THROWS_AS(bad_blend.validate(1.f), std::invalid_argument);
}

TEST_CASE("a march with nothing in the way reports full visibility") {
    GridSpec spec(8, 8, 8, Vec3{}, 1.f);
    ScalarGrid sdf(spec, 10.f);
    ShadowParams p = basic_params(1.f, 10.f, 20.f);
    RngStream rng = make_stream(1, RngUse::test_data);
    MarchResult r = march_shadow(sdf, Vec3{4.f, 4.f, 1.f}, p, rng);
    CHECK(r.visibility == 1.f);
    CHECK(r.steps <= p.max_steps);
}

TEST_CASE("a sample below epsilon terminates as hard shadow") {
    GridSpec spec(8, 8, 8, Vec3{}, 1.f);
    ScalarGrid sdf(spec, 0.1f);
    ShadowParams p = basic_params(1.f, 10.f, 20.f);
    RngStream rng = make_stream(1, RngUse::test_data);
    MarchResult r = march_shadow(sdf, Vec3{4.f, 4.f, 1.f}, p, rng);
    CHECK(r.visibility == 0.f);
    CHECK(r.steps == 1);
}

TEST_CASE("the step budget is never exceeded and the result stays in range") {
    GridSpec spec(8, 8, 8, Vec3{}, 1.f);
    ScalarGrid sdf(spec, 1.f);   // exactly epsilon: never terminates early
    ShadowParams p = basic_params(1.f, 8.f, kInf);
    p.max_steps = 16;
    RngStream rng = make_stream(1, RngUse::test_data);
    MarchResult r = march_shadow(sdf, Vec3{4.f, 4.f, 0.5f}, p, rng);
    CHECK(r.steps == 16);
    CHECK(r.visibility >= 0.f);
    CHECK(r.visibility <= 1.f);
}

TEST_CASE("consecutive samples are never farther apart than the step clamp") {
    GridSpec spec(8, 8, 8, Vec3{}, 1.f);
    ScalarGrid sdf(spec, 1000.f);   // wants huge steps
    ShadowParams p = basic_params(1.f, 2.f, 50.f);
    RngStream rng = make_stream(1, RngUse::test_data);
    MarchResult r = march_shadow(sdf, Vec3{4.f, 4.f, 0.5f}, p, rng);
    CHECK(r.max_gap <= 2.f + 1e-6f);
    CHECK(r.visibility == 1.f);
}

TEST_CASE("sentinel regions contribute no occlusion and advance at full stride") {
    GridSpec spec(8, 8, 8, Vec3{}, 1.f);
    ScalarGrid sdf(spec, kInf);
    ShadowParams p = basic_params(1.f, 4.f, 10.f);
    RngStream rng = make_stream(1, RngUse::test_data);
    MarchResult r = march_shadow(sdf, Vec3{4.f, 4.f, 0.5f}, p, rng);
    CHECK(r.visibility == 1.f);
    // Start at t = 1, stride 4: samples at 1, 5, 9, stop past 10.
    CHECK(r.steps == 3);
}

TEST_CASE("visibility rises monotonically across a straight occluder edge") {
    // Analytic distance to the half-plane sheet {z = 2, x <= 0}: marching up
    // from the ground, points far under the sheet are black, points past its
    // edge are lit, and the triangulation estimator must not wobble on the
    // way up by more than sampling noise.
    GridSpec spec(64, 64, 64, Vec3{-4.f, -4.f, -1.f}, 0.125f);
    ScalarGrid sdf = field_grid(spec, [](const Vec3& p) {
        float dx = std::max(p.x, 0.f);
        float dz = p.z - 2.f;
        return std::sqrt(dx * dx + dz * dz);
    });
    ShadowParams p = basic_params(0.125f, 1.f, 10.f);

    float prev = -1.f;
    bool saw_umbra = false, saw_lit = false;
    for (int i = 0; i <= 60; ++i) {
        float x = -3.f + float(i) * 0.1f;
        RngStream rng = make_stream(1, RngUse::test_data, uint64_t(i));
        float v = soft_shadow_visibility(sdf, Vec3{x, 0.f, 0.f}, p, rng);
        CHECK(v >= prev - 0.02f);
        prev = std::max(prev, v);
        if (v < 0.05f) saw_umbra = true;
        if (v > 0.95f) saw_lit = true;
    }
    CHECK(saw_umbra);
    CHECK(saw_lit);
}

TEST_CASE("temporal accumulation lowers visibility variance in the penumbra") {
    // Sphere over a ground plane, analytic SDF; the jitter seed is the only
    // source of randomness, so variance across seeds isolates the temporal
    // blend's effect.
    GridSpec spec(48, 48, 48, Vec3{-3.f, -3.f, -0.5f}, 0.125f);
    Vec3 center{0.f, 0.f, 1.5f};
    ScalarGrid sdf = field_grid(spec, [&](const Vec3& p) {
        return std::min(length(p - center) - 0.75f, p.z);
    });
    ShadowParams p = basic_params(0.125f, 1.f, 10.f);
    p.light_angular_radius = 0.1745f;   // 10 degrees widens the band under test
    p.derive_penumbra_width();
    p.jitter_amplitude = 0.5f;

    const int kSeeds = 8, kFrames = 8, kPoints = 40;
    const float blend = 0.8f;
    std::vector<float> single_mean(kPoints, 0.f), single_m2(kPoints, 0.f);
    std::vector<float> accum_mean(kPoints, 0.f), accum_m2(kPoints, 0.f);

    for (int s = 0; s < kSeeds; ++s) {
        for (int i = 0; i < kPoints; ++i) {
            Vec3 origin{0.3f + float(i) * 0.02f, 0.f, 0.f};   // spans the penumbra arc
            float resolved = 0.f;
            float first = 0.f;
            for (int f = 0; f < kFrames; ++f) {
                RngStream rng =
                    make_stream(uint64_t(s), RngUse::shadow_jitter, uint64_t(i), uint64_t(f));
                float v = soft_shadow_visibility(sdf, origin, p, rng);
                resolved = f == 0 ? v : blend * resolved + (1.f - blend) * v;
                if (f == 0) first = v;
            }
            single_mean[i] += first;
            single_m2[i] += first * first;
            accum_mean[i] += resolved;
            accum_m2[i] += resolved * resolved;
        }
    }

    float var_single = 0.f, var_accum = 0.f;
    int band = 0;
    for (int i = 0; i < kPoints; ++i) {
        float ms = single_mean[i] / kSeeds, ma = accum_mean[i] / kSeeds;
        if (ms < 0.05f || ms > 0.95f) continue;   // outside the penumbra band
        ++band;
        var_single += single_m2[i] / kSeeds - ms * ms;
        var_accum += accum_m2[i] / kSeeds - ma * ma;
    }
    REQUIRE(band > 5);
    CHECK(var_accum < var_single);
}

TEST_CASE("rendering an empty scene gives background and full visibility") {
    TriangleMesh none;
    Bvh bvh(none);
    GridSpec spec(8, 8, 8, Vec3{-2.f, -2.f, -2.f}, 0.5f);
    ScalarGrid sdf(spec, kInf);

    Camera cam;
    cam.position = Vec3{0.f, -3.f, 1.f};
    cam.look_at = Vec3{0.f, 0.f, 0.f};
    cam.fov = 0.8f;
    cam.width = cam.height = 16;

    ShadowParams p = basic_params(0.5f, 2.f, 50.f);
    FrameImages images = render_frame(bvh, sdf, cam, p, 0, 1, 0.1f, nullptr);
    for (int i = 0; i < 16 * 16; ++i) {
        CHECK(images.visibility.pixels[i] == 1.f);
        CHECK(images.color.pixels[i] == std::array<float, 3>{0.55f, 0.67f, 0.82f});
    }
}

TEST_CASE("zero history blend reproduces the single-frame image") {
    TriangleMesh none;
    Bvh bvh(none);
    GridSpec spec(8, 8, 8, Vec3{-2.f, -2.f, -2.f}, 0.5f);
    ScalarGrid sdf(spec, kInf);

    Camera cam;
    cam.position = Vec3{0.f, -3.f, 1.f};
    cam.look_at = Vec3{0.f, 0.f, 0.f};
    cam.fov = 0.8f;
    cam.width = cam.height = 8;

    ShadowParams p = basic_params(0.5f, 2.f, 50.f);
    p.history_blend = 0.f;

    FrameImages fresh = render_frame(bvh, sdf, cam, p, 3, 1, 0.1f, nullptr);
    VisibilityImage history(8, 8, 0.25f);
    FrameImages blended = render_frame(bvh, sdf, cam, p, 3, 1, 0.1f, &history);
    CHECK(fresh.visibility.pixels == blended.visibility.pixels);
    CHECK(fresh.color.pixels == blended.color.pixels);
}

TEST_CASE("render rejects a mismatched history buffer and a bad camera") {
    TriangleMesh none;
    Bvh bvh(none);
    GridSpec spec(8, 8, 8, Vec3{-2.f, -2.f, -2.f}, 0.5f);
    ScalarGrid sdf(spec, kInf);
    ShadowParams p = basic_params(0.5f, 2.f, 50.f);

    Camera cam;
    cam.position = Vec3{0.f, -3.f, 1.f};
    cam.look_at = Vec3{0.f, 0.f, 0.f};
    cam.fov = 0.8f;
    cam.width = cam.height = 8;

    VisibilityImage wrong(4, 4, 1.f);
    CHECK_THROWS_AS(render_frame(bvh, sdf, cam, p, 0, 1, 0.1f, &wrong),
                    std::invalid_argument);

    Camera degenerate = cam;
    degenerate.look_at = degenerate.position;
    CHECK_THROWS_AS(render_frame(bvh, sdf, degenerate, p, 0, 1, 0.1f, nullptr),
                    std::invalid_argument);
}
