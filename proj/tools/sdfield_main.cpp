#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdfield/bvh.hpp"
#include "sdfield/config.hpp"
#include "sdfield/jumpflood.hpp"
#include "sdfield/mesh.hpp"
#include "sdfield/parallel.hpp"
#include "sdfield/pipeline.hpp"
#include "sdfield/refine.hpp"
#include "sdfield/voxelize.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
    CLI::Option* threads = nullptr;
    CLI::Option* frames = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* seed = nullptr;
    int threads_value = 0;
    int frames_value = 1;
    std::string out_value;
    uint64_t seed_value = 0;
};

sdfield::RenderConfig load_config(const std::string& path, const Overrides& ov) {
    sdfield::RenderConfig config;
    if (!path.empty()) config = sdfield::parse_config(path);
    if (ov.threads->count()) config.threads = ov.threads_value;
    if (ov.frames->count()) config.frames = ov.frames_value;
    if (ov.out->count()) config.output_dir = ov.out_value;
    if (ov.seed->count()) config.rng_seed = ov.seed_value;
    config.validate();
    return config;
}

int run_bench(const sdfield::RenderConfig& base) {
    using Clock = std::chrono::steady_clock;
    auto ms_since = [](Clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    };

    sdfield::set_thread_count(unsigned(base.threads));

    std::vector<sdfield::TriangleMesh> meshes;
    std::vector<sdfield::SceneInstance> instances;
    for (const auto& obj : base.objects) meshes.push_back(sdfield::load_obj(obj.path));
    for (auto& mesh : meshes) instances.push_back({&mesh, {}});
    sdfield::TriangleMesh merged = sdfield::merge_instances(instances);
    sdfield::Bvh bvh(merged);

    std::cout << "res   voxelize_ms   flood_ms   refine_ms\n";
    for (int res : {32, 48, 64, 96}) {
        sdfield::RenderConfig config = base;
        config.coarse_res = res;
        config.frames = 1;
        sdfield::GridPair grids = sdfield::size_grids(config);

        auto t0 = Clock::now();
        sdfield::SeedGrid seeds =
            sdfield::voxelize(merged, grids.coarse, sdfield::VoxelizeParams{config.supersample});
        double voxelize_ms = ms_since(t0);

        t0 = Clock::now();
        sdfield::NearestSeedGrid nearest = sdfield::jfa_flood(seeds);
        sdfield::ScalarGrid coarse = sdfield::coarse_sdf(
            nearest, sdfield::JfaParams{config.beta_voxels * grids.coarse.voxel_size});
        double flood_ms = ms_since(t0);

        sdfield::RefineParams params;
        params.refine_distance = config.refine_distance_voxels * grids.fine.voxel_size;
        params.decay = config.decay;
        params.rays_per_texel = config.rays_per_texel;
        params.fine_spec = grids.fine;
        params.seed = config.rng_seed;
        sdfield::FineSdfState state(grids.fine);

        t0 = Clock::now();
        sdfield::build_fine_sdf(bvh, coarse, state, params);
        double refine_ms = ms_since(t0);

        std::printf("%-5d %11.2f %10.2f %11.2f\n", res, voxelize_ms, flood_ms, refine_ms);
    }
    return 0;
}

void print_metrics(const sdfield::Metrics& m) {
    nlohmann::ordered_json j;
    j["rmse"] = m.rmse_value;
    j["penumbra_sdf"] = m.penumbra_sdf;
    j["penumbra_ref"] = m.penumbra_ref;
    j["frames"] = m.frames;
    j["config_hash"] = m.config_hash;
    std::cout << j.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-level SDF soft shadow renderer"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    Overrides ov;
    app.add_option("--config", config_path, "configuration file (key = value)");
    ov.threads = app.add_option("--threads", ov.threads_value, "worker threads (0 = all cores)");
    ov.frames = app.add_option("--frames", ov.frames_value, "number of frames");
    ov.out = app.add_option("--out", ov.out_value, "output directory");
    ov.seed = app.add_option("--seed", ov.seed_value, "RNG seed");

    CLI::App* cmd_build = app.add_subcommand("build", "run voxelize/flood/refine, write SDF dumps");
    CLI::App* cmd_render = app.add_subcommand("render", "run the full pipeline");
    CLI::App* cmd_reference =
        app.add_subcommand("reference", "render the ground-truth visibility image");
    CLI::App* cmd_compare =
        app.add_subcommand("compare", "metrics between two visibility images");
    CLI::App* cmd_bench = app.add_subcommand("bench", "timing sweep over grid resolutions");

    std::vector<std::string> compare_images;
    cmd_compare->add_option("images", compare_images, "SDF and reference PGM")
        ->expected(2)
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        sdfield::RenderConfig config = load_config(config_path, ov);

        if (cmd_build->parsed()) {
            sdfield::run_pipeline(config, sdfield::PipelineMode::build);
        } else if (cmd_render->parsed()) {
            sdfield::PipelineResult result = sdfield::run_pipeline(config);
            if (result.metrics) print_metrics(*result.metrics);
        } else if (cmd_reference->parsed()) {
            sdfield::run_reference(config);
        } else if (cmd_compare->parsed()) {
            print_metrics(sdfield::compare(config, compare_images[0], compare_images[1]));
        } else if (cmd_bench->parsed()) {
            return run_bench(config);
        }
        return 0;
    } catch (const sdfield::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}
