#include "sdfield/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "sdfield/bvh.hpp"
#include "sdfield/image.hpp"
#include "sdfield/jumpflood.hpp"
#include "sdfield/mesh.hpp"
#include "sdfield/parallel.hpp"
#include "sdfield/reference.hpp"
#include "sdfield/refine.hpp"
#include "sdfield/sdf_io.hpp"
#include "sdfield/shadow.hpp"
#include "sdfield/voxelize.hpp"

namespace sdfield {

namespace {

constexpr float kDegToRad = 3.14159265358979323846f / 180.f;
constexpr float kPenumbraTau = 0.05f;

struct LoadedScene {
    std::vector<TriangleMesh> meshes;   // parallel to config.objects
};

LoadedScene load_scene(const RenderConfig& config) {
    LoadedScene scene;
    for (const ObjectConfig& obj : config.objects) {
        MeshLoadStats stats;
        TriangleMesh mesh;
        try {
            mesh = load_obj(obj.path, &stats);
        } catch (const std::exception& e) {
            throw PipelineError("stage load, object '" + obj.name + "': " + e.what());
        }
        if (stats.degenerate_faces) {
            std::cerr << "warning: " << obj.path << ": " << stats.degenerate_faces
                      << " degenerate faces excluded\n";
        }
        size_t ignored = stats.ignored_normals + stats.ignored_texcoords +
                         stats.ignored_groups + stats.ignored_materials + stats.ignored_other;
        if (ignored) {
            std::cerr << "note: " << obj.path << ": ignored " << stats.ignored_normals
                      << " normals, " << stats.ignored_texcoords << " texcoords, "
                      << stats.ignored_groups << " groups, " << stats.ignored_materials
                      << " material records, " << stats.ignored_other << " other records\n";
        }
        scene.meshes.push_back(std::move(mesh));
    }
    return scene;
}

GridPair size_grids_for(const RenderConfig& config, const LoadedScene& scene) {
    Aabb swept;
    for (size_t i = 0; i < scene.meshes.size(); ++i) {
        if (scene.meshes[i].vertices.empty()) continue;
        Aabb base = scene.meshes[i].bounds();
        const Vec3& step = config.objects[i].translate_per_frame;
        for (int t = 0; t < config.frames; ++t) {
            Vec3 off = step * float(t);
            swept.expand(base.min + off);
            swept.expand(base.max + off);
        }
    }
    if (swept.empty()) {
        // No geometry at all: a fixed unit domain keeps the empty-scene
        // pipeline well defined (all-sentinel fields, background images).
        swept = Aabb{Vec3{-1.f, -1.f, -1.f}, Vec3{1.f, 1.f, 1.f}};
    }

    int res = config.coarse_res;
    Vec3 extent = swept.extent();
    // Voxel size chosen so the swept geometry spans at most res - 4 voxels
    // per axis, guaranteeing a 2-voxel empty border all around.
    float h = 0.f;
    for (int a = 0; a < 3; ++a) h = std::max(h, extent[a] / float(res - 4));
    if (!(h > 0.f)) h = 1.f / float(res - 4);

    Vec3 center = swept.center();
    Vec3 origin = center - Vec3{float(res), float(res), float(res)} * (h * 0.5f);

    GridPair grids;
    grids.coarse = GridSpec(res, res, res, origin, h);
    int fres = res * config.fine_scale;
    grids.fine = GridSpec(fres, fres, fres, origin, h / float(config.fine_scale));
    return grids;
}

TriangleMesh bake_frame(const RenderConfig& config, const LoadedScene& scene, int frame) {
    std::vector<SceneInstance> instances;
    for (size_t i = 0; i < scene.meshes.size(); ++i) {
        SceneInstance inst;
        inst.mesh = &scene.meshes[i];
        inst.transform.translation = config.objects[i].translate_per_frame * float(frame);
        instances.push_back(inst);
    }
    return merge_instances(instances);
}

Camera make_camera(const RenderConfig& config) {
    Camera cam;
    cam.position = config.camera_pos;
    cam.look_at = config.camera_lookat;
    cam.fov = config.camera_fov_deg * kDegToRad;
    cam.width = config.image_width;
    cam.height = config.image_height;
    return cam;
}

ShadowParams make_shadow_params(const RenderConfig& config, float fine_voxel) {
    ShadowParams p;
    p.epsilon = config.epsilon_voxels * fine_voxel;
    p.max_steps = config.max_steps;
    p.max_step_size = config.max_step_voxels * fine_voxel;
    p.light_dir = config.light_dir;
    p.light_angular_radius = config.light_angle_deg * kDegToRad;
    p.derive_penumbra_width();
    p.jitter_amplitude = config.jitter_voxels * fine_voxel;
    p.history_blend = config.history_blend;
    p.t_max = config.t_max_world;
    return p;
}

std::filesystem::path frame_path(const std::filesystem::path& dir, const char* stem, int frame,
                                 const char* ext) {
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04d.%s", stem, frame, ext);
    return dir / name;
}

// Metrics are computed on 8-bit-quantized values, so comparing the written
// PGM files reproduces metrics.json exactly.
GrayImage quantized_copy(const GrayImage& img) {
    GrayImage out(img.width, img.height);
    for (size_t i = 0; i < img.pixels.size(); ++i) {
        out.pixels[i] = float(quantize8(img.pixels[i])) / 255.f;
    }
    return out;
}

Metrics metrics_for(const RenderConfig& config, const GrayImage& sdf_vis,
                    const GrayImage& ref_vis) {
    GrayImage qs = quantized_copy(sdf_vis);
    GrayImage qr = quantized_copy(ref_vis);
    Metrics m;
    m.rmse_value = rmse(qs, qr);
    m.penumbra_sdf = penumbra_area(qs, kPenumbraTau);
    m.penumbra_ref = penumbra_area(qr, kPenumbraTau);
    m.frames = config.frames;
    m.config_hash = config_hash(config);
    return m;
}

using Clock = std::chrono::steady_clock;

double ms_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double, std::milli>(b - a).count();
}

} // namespace

GridPair size_grids(const RenderConfig& config) {
    return size_grids_for(config, load_scene(config));
}

PipelineResult run_pipeline(const RenderConfig& config, PipelineMode mode) {
    config.validate();
    set_thread_count(unsigned(config.threads));

    LoadedScene scene = load_scene(config);
    GridPair grids = size_grids_for(config, scene);

    std::filesystem::path out_dir(config.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw PipelineError("cannot create output dir: " + out_dir.string());

    RefineParams refine_params;
    refine_params.refine_distance = config.refine_distance_voxels * grids.fine.voxel_size;
    refine_params.decay = config.decay;
    refine_params.rays_per_texel = config.rays_per_texel;
    refine_params.fine_spec = grids.fine;
    refine_params.seed = config.rng_seed;

    JfaParams jfa_params;
    jfa_params.sign_bias = config.beta_voxels * grids.coarse.voxel_size;

    ShadowParams shadow_params = make_shadow_params(config, grids.fine.voxel_size);
    Camera camera = make_camera(config);
    ReferenceParams ref_params;
    ref_params.samples_per_pixel = config.reference_samples;
    ref_params.light_dir = config.light_dir;
    ref_params.light_angular_radius = config.light_angle_deg * kDegToRad;
    ref_params.seed = config.rng_seed;
    ref_params.t_max = config.t_max_world;

    FineSdfState state(grids.fine);
    VisibilityImage history;
    bool have_history = false;

    ScalarGrid last_coarse, last_fine;
    Bvh last_bvh;
    TriangleMesh last_mesh;
    GrayImage last_vis;

    nlohmann::ordered_json timing_frames = nlohmann::ordered_json::array();

    auto run_stage = [&](const char* stage, int frame, auto&& body) {
        try {
            return body();
        } catch (const PipelineError&) {
            throw;
        } catch (const std::exception& e) {
            throw PipelineError("frame " + std::to_string(frame) + ", stage " + stage + ": " +
                                e.what());
        }
    };

    for (int frame = 0; frame < config.frames; ++frame) {
        auto t0 = Clock::now();
        TriangleMesh merged =
            run_stage("bake", frame, [&] { return bake_frame(config, scene, frame); });
        Bvh bvh(merged);

        auto t1 = Clock::now();
        SeedGrid seeds = run_stage("voxelize", frame, [&] {
            return voxelize(merged, grids.coarse, VoxelizeParams{config.supersample});
        });

        auto t2 = Clock::now();
        ScalarGrid coarse = run_stage("flood", frame, [&] {
            NearestSeedGrid nearest = jfa_flood(seeds);
            return coarse_sdf(nearest, jfa_params);
        });

        auto t3 = Clock::now();
        ScalarGrid fine = run_stage("refine", frame,
                                    [&] { return build_fine_sdf(bvh, coarse, state, refine_params); });

        auto t4 = Clock::now();
        if (mode == PipelineMode::render) {
            FrameImages images = run_stage("render", frame, [&] {
                return render_frame(bvh, fine, camera, shadow_params, uint64_t(frame),
                                    config.rng_seed, config.ambient,
                                    have_history ? &history : nullptr);
            });
            history = images.visibility;
            have_history = true;

            auto t5 = Clock::now();
            run_stage("write", frame, [&] {
                save_ppm(frame_path(out_dir, "frame", frame, "ppm"), images.color);
                save_pgm(frame_path(out_dir, "vis", frame, "pgm"), images.visibility);
                return 0;
            });
            auto t6 = Clock::now();

            last_vis = std::move(images.visibility);
            timing_frames.push_back({{"frame", frame},
                                     {"bake_ms", ms_between(t0, t1)},
                                     {"voxelize_ms", ms_between(t1, t2)},
                                     {"flood_ms", ms_between(t2, t3)},
                                     {"refine_ms", ms_between(t3, t4)},
                                     {"render_ms", ms_between(t4, t5)},
                                     {"write_ms", ms_between(t5, t6)},
                                     {"total_ms", ms_between(t0, t6)}});
        } else {
            timing_frames.push_back({{"frame", frame},
                                     {"bake_ms", ms_between(t0, t1)},
                                     {"voxelize_ms", ms_between(t1, t2)},
                                     {"flood_ms", ms_between(t2, t3)},
                                     {"refine_ms", ms_between(t3, t4)},
                                     {"total_ms", ms_between(t0, t4)}});
        }

        if (frame == config.frames - 1) {
            last_coarse = std::move(coarse);
            last_fine = std::move(fine);
            last_mesh = std::move(merged);
            last_bvh = Bvh(last_mesh);
        }
    }

    run_stage("write", config.frames - 1, [&] {
        save_sdf(out_dir / "coarse.sdf", last_coarse);
        save_sdf(out_dir / "fine.sdf", last_fine);
        save_sdf(out_dir / "sign_front.sdf", state.sign_front);
        save_sdf(out_dir / "sign_back.sdf", state.sign_back);
        return 0;
    });

    PipelineResult result;
    result.output_dir = out_dir;
    result.frames = config.frames;

    if (mode == PipelineMode::render && config.render_reference) {
        int final_frame = config.frames - 1;
        GrayImage ref = run_stage("reference", final_frame,
                                  [&] { return render_reference(last_bvh, camera, ref_params); });
        run_stage("write", final_frame, [&] {
            save_pgm(frame_path(out_dir, "ref", final_frame, "pgm"), ref);
            return 0;
        });
        Metrics m = metrics_for(config, last_vis, ref);
        run_stage("write", final_frame, [&] {
            save_metrics(out_dir / "metrics.json", m);
            return 0;
        });
        result.metrics = m;
    }

    std::ofstream timing_out(out_dir / "timings.json");
    if (timing_out) {
        nlohmann::ordered_json root;
        root["frames"] = std::move(timing_frames);
        timing_out << root.dump(2) << '\n';
    }

    return result;
}

PipelineResult run_reference(const RenderConfig& config) {
    config.validate();
    set_thread_count(unsigned(config.threads));

    LoadedScene scene = load_scene(config);
    int final_frame = config.frames - 1;
    TriangleMesh merged = bake_frame(config, scene, final_frame);
    Bvh bvh(merged);

    ReferenceParams params;
    params.samples_per_pixel = config.reference_samples;
    params.light_dir = config.light_dir;
    params.light_angular_radius = config.light_angle_deg * kDegToRad;
    params.seed = config.rng_seed;
    params.t_max = config.t_max_world;

    std::filesystem::path out_dir(config.output_dir);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw PipelineError("cannot create output dir: " + out_dir.string());

    GrayImage ref;
    try {
        ref = render_reference(bvh, make_camera(config), params);
    } catch (const std::exception& e) {
        throw PipelineError(std::string("stage reference: ") + e.what());
    }
    save_pgm(frame_path(out_dir, "ref", final_frame, "pgm"), ref);

    PipelineResult result;
    result.output_dir = out_dir;
    result.frames = config.frames;
    return result;
}

Metrics compare(const RenderConfig& config, const std::filesystem::path& sdf_image,
                const std::filesystem::path& ref_image) {
    GrayImage a, b;
    try {
        a = load_pgm(sdf_image);
        b = load_pgm(ref_image);
    } catch (const std::exception& e) {
        throw PipelineError(std::string("compare: ") + e.what());
    }
    if (a.width != b.width || a.height != b.height) {
        throw PipelineError("compare: image dimensions differ");
    }
    return metrics_for(config, a, b);
}

} // namespace sdfield
