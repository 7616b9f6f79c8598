#include "sdfield/refine.hpp"

#include <cmath>
#include <stdexcept>

#include "sdfield/parallel.hpp"

namespace sdfield {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

void check_same_spec(const GridSpec& a, const GridSpec& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid spec mismatch");
}

} // namespace

MaskGrid select_refine_mask(const ScalarGrid& coarse, const RefineParams& params) {
    MaskGrid mask(params.fine_spec, 0);
    const GridSpec& fs = params.fine_spec;
    parallel_for(fs.voxel_count(), [&](size_t i) {
        auto c = fs.coords(i);
        float value = sample_trilinear(coarse, fs.center(c[0], c[1], c[2]));
        mask[i] = value <= params.refine_distance ? 1 : 0;
    });
    return mask;
}

DistanceSample trace_distance_sample(const Bvh& bvh, const Vec3& origin, int rays,
                                     RngStream& rng) {
    DistanceSample sample;
    for (int i = 0; i < rays; ++i) {
        // Uniform sphere direction: z = 2u - 1, phi = 2 pi u.
        float z = 2.f * rng.next_float() - 1.f;
        float phi = float(kTwoPi * double(rng.next_float()));
        float r = std::sqrt(std::max(0.f, 1.f - z * z));
        Vec3 dir{r * std::cos(phi), r * std::sin(phi), z};

        Ray ray{origin, dir, 0.f, kInf};
        if (auto hit = bvh.closest_hit(ray)) {
            sample.distance = std::min(sample.distance, hit->t);
            if (hit->facing == Facing::front) {
                ++sample.front_hits;
            } else {
                ++sample.back_hits;
            }
        }
    }
    return sample;
}

ScalarGrid accumulate_fine(const ScalarGrid& f_prev, const ScalarGrid& coarse,
                           const ScalarGrid& samples, const MaskGrid& mask,
                           const RefineParams& params) {
    check_same_spec(f_prev.spec, params.fine_spec, "accumulate_fine f_prev");
    check_same_spec(samples.spec, params.fine_spec, "accumulate_fine samples");
    check_same_spec(mask.spec, params.fine_spec, "accumulate_fine mask");

    const GridSpec& fs = params.fine_spec;
    ScalarGrid out(fs, kInf);
    parallel_for(fs.voxel_count(), [&](size_t i) {
        auto ci = fs.coords(i);
        float c = sample_trilinear(coarse, fs.center(ci[0], ci[1], ci[2]));
        if (!mask[i]) {
            out[i] = c;   // pass-through branch, bit-exact
            return;
        }
        // Blend on unsigned magnitudes; the sign vote is applied later. An
        // infinite history would poison the blend (and 0 * inf is NaN), so
        // it falls straight through to the ray minimum.
        float prev = f_prev[i];
        float blended = std::isfinite(prev)
                            ? params.decay * prev + (1.f - params.decay) * std::fabs(c)
                            : kInf;
        out[i] = std::min(blended, samples[i]);
    });
    return out;
}

ScalarGrid update_sign(FineSdfState& state, const Grid3<uint32_t>& front,
                       const Grid3<uint32_t>& back, const MaskGrid& mask, float decay) {
    check_same_spec(front.spec, state.distance.spec, "update_sign front");
    check_same_spec(back.spec, state.distance.spec, "update_sign back");
    check_same_spec(mask.spec, state.distance.spec, "update_sign mask");

    const GridSpec& fs = state.distance.spec;
    ScalarGrid out(fs, kInf);
    parallel_for(fs.voxel_count(), [&](size_t i) {
        float f = decay * state.sign_front[i] + float(front[i]);
        float b = decay * state.sign_back[i] + float(back[i]);
        state.sign_front[i] = f;
        state.sign_back[i] = b;
        if (mask[i]) {
            // Ties stay positive: only a strict back majority flips.
            out[i] = b > f ? -state.distance[i] : state.distance[i];
        } else {
            out[i] = state.distance[i];
        }
    });
    return out;
}

ScalarGrid build_fine_sdf(const Bvh& scene, const ScalarGrid& coarse, FineSdfState& state,
                          const RefineParams& params) {
    const GridSpec& fs = params.fine_spec;
    const GridSpec& cs = coarse.spec;
    for (int a = 0; a < 3; ++a) {
        if (fs.resolution[a] % cs.resolution[a] != 0) {
            throw std::invalid_argument("fine resolution must be a multiple of coarse");
        }
    }
    if (!(params.refine_distance >= fs.voxel_size)) {
        throw std::invalid_argument("refine_distance must be at least one fine voxel");
    }
    if (!(params.decay >= 0.f && params.decay <= 1.f)) {
        throw std::invalid_argument("decay must be in [0, 1]");
    }
    if (params.rays_per_texel < 1) {
        throw std::invalid_argument("rays_per_texel must be >= 1");
    }
    check_same_spec(state.distance.spec, fs, "build_fine_sdf state");

    MaskGrid mask = select_refine_mask(coarse, params);

    ScalarGrid ray_min(fs, kInf);
    Grid3<uint32_t> front(fs, 0), back(fs, 0);
    parallel_for(fs.voxel_count(), [&](size_t i) {
        if (!mask[i]) return;
        auto c = fs.coords(i);
        RngStream rng = make_stream(params.seed, RngUse::refine_rays, i, state.frame);
        DistanceSample s =
            trace_distance_sample(scene, fs.center(c[0], c[1], c[2]), params.rays_per_texel, rng);
        ray_min[i] = s.distance;
        front[i] = s.front_hits;
        back[i] = s.back_hits;
    });

    state.distance = accumulate_fine(state.distance, coarse, ray_min, mask, params);
    ScalarGrid signed_field = update_sign(state, front, back, mask, params.decay);
    ++state.frame;
    return signed_field;
}

} // namespace sdfield
