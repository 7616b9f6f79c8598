#include <doctest.h>

#include <cmath>

#include "sdfield/distance.hpp"
#include "sdfield/jumpflood.hpp"
#include "sdfield/parallel.hpp"
#include "sdfield/refine.hpp"
#include "sdfield/shapes.hpp"
#include "sdfield/voxelize.hpp"

using namespace sdfield;

namespace {

// Constant fields make the trilinear resample exact, so branch arithmetic
// can be checked for bit equality.
RefineParams flat_params(const GridSpec& spec, float d, float decay) {
    RefineParams p;
    p.refine_distance = d;
    p.decay = decay;
    p.fine_spec = spec;
    return p;
}

struct SphereField {
    GridSpec coarse_spec;
    ScalarGrid coarse;
    TriangleMesh mesh;
    Bvh bvh;

    SphereField() {
        mesh = make_icosphere(2, 1.f);
        bvh = Bvh(mesh);
        coarse_spec = GridSpec(8, 8, 8, Vec3{-1.4f, -1.4f, -1.4f}, 0.35f);
        SeedGrid seeds = voxelize(mesh, coarse_spec);
        coarse = coarse_sdf(jfa_flood(seeds), {0.5f * coarse_spec.voxel_size});
    }
};

} // namespace

TEST_CASE("blended history loses to a closer ray sample, bit exactly") {
    GridSpec spec(4, 4, 4, Vec3{}, 1.f);
    ScalarGrid coarse(spec, 0.5f), f_prev(spec, 1.0f), samples(spec, 0.8f);
    RefineParams p = flat_params(spec, 1.0f, 0.9f);
    MaskGrid mask = select_refine_mask(coarse, p);
    for (size_t i = 0; i < mask.size(); ++i) REQUIRE(mask[i] == 1);

    ScalarGrid out = accumulate_fine(f_prev, coarse, samples, mask, p);
    for (size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 0.8f);
}

TEST_CASE("texels beyond the refinement radius pass the coarse value through") {
    GridSpec spec(4, 4, 4, Vec3{}, 1.f);
    ScalarGrid coarse(spec, 2.0f), f_prev(spec, 0.123f), samples(spec, 0.001f);
    RefineParams p = flat_params(spec, 1.0f, 0.9f);
    MaskGrid mask = select_refine_mask(coarse, p);
    for (size_t i = 0; i < mask.size(); ++i) REQUIRE(mask[i] == 0);

    ScalarGrid out = accumulate_fine(f_prev, coarse, samples, mask, p);
    for (size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 2.0f);
}

TEST_CASE("decay 1 reduces the update to a running minimum") {
    GridSpec spec(4, 4, 4, Vec3{}, 1.f);
    ScalarGrid coarse(spec, 0.5f);
    RefineParams p = flat_params(spec, 1.0f, 1.0f);
    MaskGrid mask = select_refine_mask(coarse, p);

    ScalarGrid f(spec, 1.0f);
    float expected = 1.0f;
    for (float r : {0.9f, 0.7f, 0.8f, 0.75f}) {
        ScalarGrid samples(spec, r);
        ScalarGrid next = accumulate_fine(f, coarse, samples, mask, p);
        expected = std::min(expected, r);
        for (size_t i = 0; i < next.size(); ++i) {
            CHECK(next[i] == expected);
            CHECK(next[i] <= f[i]);   // non-increasing
        }
        f = next;
    }
}

TEST_CASE("infinite history falls through to the ray minimum") {
    GridSpec spec(4, 4, 4, Vec3{}, 1.f);
    ScalarGrid coarse(spec, 0.5f), f_prev(spec, kInf), samples(spec, 0.6f);
    RefineParams p = flat_params(spec, 1.0f, 0.9f);
    MaskGrid mask = select_refine_mask(coarse, p);
    ScalarGrid out = accumulate_fine(f_prev, coarse, samples, mask, p);
    for (size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 0.6f);
}

TEST_CASE("accumulate rejects mismatched grid shapes") {
    GridSpec spec(4, 4, 4, Vec3{}, 1.f);
    GridSpec other(4, 4, 5, Vec3{}, 1.f);
    ScalarGrid coarse(spec, 0.5f), f_prev(other, 1.f), samples(spec, 1.f);
    RefineParams p = flat_params(spec, 1.0f, 0.9f);
    MaskGrid mask(spec, 1);
    CHECK_THROWS_AS(accumulate_fine(f_prev, coarse, samples, mask, p), std::invalid_argument);
}

TEST_CASE("mask selection handles the sentinel and the everything cases") {
    GridSpec spec(4, 4, 4, Vec3{}, 1.f);
    RefineParams p = flat_params(spec, 100.f, 0.9f);

    ScalarGrid empty(spec, kInf);
    MaskGrid none = select_refine_mask(empty, p);
    for (size_t i = 0; i < none.size(); ++i) CHECK(none[i] == 0);

    ScalarGrid finite(spec, 3.f);
    MaskGrid all = select_refine_mask(finite, p);
    for (size_t i = 0; i < all.size(); ++i) CHECK(all[i] == 1);
}

TEST_CASE("rays from inside a closed mesh only see back faces") {
    SphereField s;
    RngStream rng = make_stream(1, RngUse::test_data);
    DistanceSample d = trace_distance_sample(s.bvh, Vec3{0.f, 0.f, 0.f}, 64, rng);
    CHECK(d.front_hits == 0);
    CHECK(d.back_hits == 64);
    CHECK(d.distance > 0.85f);
    CHECK(d.distance <= 1.f);
}

TEST_CASE("ray minimum bounds the exact distance from above") {
    SphereField s;
    Vec3 p{1.5f, 0.2f, -0.1f};
    double exact = exact_distance(s.mesh, p);

    RngStream rng = make_stream(2, RngUse::test_data);
    DistanceSample many = trace_distance_sample(s.bvh, p, 4096, rng);
    CHECK(double(many.distance) >= exact - 1e-6);
    CHECK(double(many.distance) <= exact + 0.02);
}

TEST_CASE("trace output is a pure function of the stream") {
    SphereField s;
    RngStream a = make_stream(7, RngUse::refine_rays, 123, 4);
    RngStream b = make_stream(7, RngUse::refine_rays, 123, 4);
    Vec3 p{0.3f, 1.2f, 0.4f};
    DistanceSample da = trace_distance_sample(s.bvh, p, 16, a);
    DistanceSample db = trace_distance_sample(s.bvh, p, 16, b);
    CHECK(da.distance == db.distance);
    CHECK(da.front_hits == db.front_hits);
    CHECK(da.back_hits == db.back_hits);
}

TEST_CASE("an empty scene yields all misses") {
    TriangleMesh none;
    Bvh bvh(none);
    RngStream rng = make_stream(3, RngUse::test_data);
    DistanceSample d = trace_distance_sample(bvh, Vec3{0.f, 0.f, 0.f}, 8, rng);
    CHECK(std::isinf(d.distance));
    CHECK(d.front_hits == 0);
    CHECK(d.back_hits == 0);
}

TEST_CASE("sign votes flip only on a strict back majority") {
    GridSpec spec(2, 2, 2, Vec3{}, 1.f);
    Grid3<uint32_t> front(spec, 0), back(spec, 0);
    MaskGrid mask(spec, 1);

    FineSdfState state(spec);
    for (size_t i = 0; i < state.distance.size(); ++i) state.distance[i] = 3.f;

    front.at(0, 0, 0) = 10;                          // clear front majority
    front.at(1, 0, 0) = 4; back.at(1, 0, 0) = 4;     // tie
    back.at(0, 1, 0) = 5; front.at(0, 1, 0) = 2;     // back majority
    ScalarGrid out = update_sign(state, front, back, mask, 0.9f);
    CHECK(out.at(0, 0, 0) == 3.f);
    CHECK(out.at(1, 0, 0) == 3.f);
    CHECK(out.at(0, 1, 0) == -3.f);
    CHECK(state.sign_front.at(0, 0, 0) == 10.f);
    CHECK(state.sign_back.at(0, 1, 0) == 5.f);
}

TEST_CASE("sign accumulators decay before the new counts are added") {
    GridSpec spec(2, 2, 2, Vec3{}, 1.f);
    FineSdfState state(spec);
    state.distance[0] = 1.f;
    state.sign_front[0] = 5.f;
    Grid3<uint32_t> front(spec, 0), back(spec, 0);
    back[0] = 3;
    MaskGrid mask(spec, 1);

    ScalarGrid out = update_sign(state, front, back, mask, 0.5f);
    CHECK(state.sign_front[0] == 2.5f);   // 0.5 * 5 + 0
    CHECK(state.sign_back[0] == 3.f);     // 0.5 * 0 + 3
    CHECK(out[0] == -1.f);                // 3 > 2.5 flips
}

TEST_CASE("unmasked texels keep their stored value whatever the votes say") {
    GridSpec spec(2, 2, 2, Vec3{}, 1.f);
    FineSdfState state(spec);
    state.distance[0] = -0.25f;   // stored coarse pass-through, already signed
    Grid3<uint32_t> front(spec, 0), back(spec, 0);
    back[0] = 100;
    MaskGrid mask(spec, 0);
    ScalarGrid out = update_sign(state, front, back, mask, 0.9f);
    CHECK(out[0] == -0.25f);
}

TEST_CASE("frame update validates its inputs") {
    SphereField s;
    GridSpec fine16(16, 16, 16, s.coarse_spec.origin, s.coarse_spec.voxel_size * 0.5f);

    RefineParams p = flat_params(fine16, 4.f * fine16.voxel_size, 0.9f);
    FineSdfState state(fine16);

    RefineParams bad_scale = p;
    bad_scale.fine_spec = GridSpec(12, 12, 12, s.coarse_spec.origin, 1.f);
    FineSdfState bad_state(bad_scale.fine_spec);
    CHECK_THROWS_AS(build_fine_sdf(s.bvh, s.coarse, bad_state, bad_scale),
                    std::invalid_argument);

    RefineParams bad_d = p;
    bad_d.refine_distance = 0.5f * fine16.voxel_size;
    CHECK_THROWS_AS(build_fine_sdf(s.bvh, s.coarse, state, bad_d), std::invalid_argument);

    RefineParams bad_decay = p;
    bad_decay.decay = 1.5f;
    CHECK_THROWS_AS(build_fine_sdf(s.bvh, s.coarse, state, bad_decay), std::invalid_argument);

    RefineParams bad_rays = p;
    bad_rays.rays_per_texel = 0;
    CHECK_THROWS_AS(build_fine_sdf(s.bvh, s.coarse, state, bad_rays), std::invalid_argument);
}

TEST_CASE("an empty scene refines to the sentinel field without tracing") {
    GridSpec cs(4, 4, 4, Vec3{}, 1.f);
    GridSpec fs(8, 8, 8, Vec3{}, 0.5f);
    ScalarGrid coarse(cs, kInf);
    TriangleMesh none;
    Bvh bvh(none);
    FineSdfState state(fs);
    RefineParams p = flat_params(fs, 2.f, 0.9f);

    ScalarGrid out = build_fine_sdf(bvh, coarse, state, p);
    for (size_t i = 0; i < out.size(); ++i) {
        CHECK(std::isinf(out[i]));
        CHECK(out[i] > 0.f);
    }
    CHECK(state.frame == 1);
}

TEST_CASE("static scene with decay 1 never increases a refined texel") {
    SphereField s;
    GridSpec fine(16, 16, 16, s.coarse_spec.origin, s.coarse_spec.voxel_size * 0.5f);
    RefineParams p = flat_params(fine, 4.f * fine.voxel_size, 1.0f);
    p.rays_per_texel = 8;
    p.seed = 9;

    FineSdfState state(fine);
    MaskGrid mask = select_refine_mask(s.coarse, p);
    std::vector<float> prev;
    for (int frame = 0; frame < 3; ++frame) {
        build_fine_sdf(s.bvh, s.coarse, state, p);
        if (!prev.empty()) {
            for (size_t i = 0; i < mask.size(); ++i) {
                if (mask[i]) CHECK(state.distance[i] <= prev[i]);
            }
        }
        prev = state.distance.data;
    }
}

TEST_CASE("refinement is independent of the thread count") {
    SphereField s;
    GridSpec fine(16, 16, 16, s.coarse_spec.origin, s.coarse_spec.voxel_size * 0.5f);
    RefineParams p = flat_params(fine, 4.f * fine.voxel_size, 0.9f);
    p.seed = 31;

    unsigned saved = thread_count();
    auto run = [&](unsigned threads) {
        set_thread_count(threads);
        FineSdfState state(fine);
        ScalarGrid a = build_fine_sdf(s.bvh, s.coarse, state, p);
        ScalarGrid b = build_fine_sdf(s.bvh, s.coarse, state, p);
        return std::pair{a.data, b.data};
    };
    auto serial = run(1);
    auto parallel = run(8);
    set_thread_count(saved);
    CHECK(serial.first == parallel.first);
    CHECK(serial.second == parallel.second);
}
