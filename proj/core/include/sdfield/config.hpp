#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdfield/math.hpp"

namespace sdfield {

// Invalid or unknown configuration input. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ObjectConfig {
    std::string name;
    std::string path;                 // OBJ file
    Vec3 translate_per_frame{};      // rigid translation applied each frame
};

// Every pipeline tunable. Resolution-relative keys carry their unit in the
// name (beta_voxels is in coarse voxels; epsilon_voxels, refine_distance_voxels,
// max_step_voxels and jitter_voxels are in fine voxels) and are converted to
// world units once the grids are sized.
struct RenderConfig {
    std::vector<ObjectConfig> objects;

    int coarse_res = 64;              // cubic coarse resolution
    int fine_scale = 2;               // fine resolution multiplier per axis
    int supersample = 1;

    float beta_voxels = 0.5f;         // sign bias, coarse voxels
    float refine_distance_voxels = 4.f;
    float decay = 0.9f;
    int rays_per_texel = 8;

    float epsilon_voxels = 1.f;
    int max_steps = 128;
    float max_step_voxels = 8.f;
    float jitter_voxels = 1.f;
    Vec3 light_dir{0.f, 0.f, 1.f};
    float light_angle_deg = 3.f;
    float history_blend = 0.9f;
    float t_max_world = 100.f;

    int reference_samples = 256;
    bool render_reference = false;

    Vec3 camera_pos{0.f, -3.f, 2.f};
    Vec3 camera_lookat{};
    float camera_fov_deg = 45.f;
    int image_width = 128;
    int image_height = 128;
    float ambient = 0.1f;

    int frames = 1;
    uint64_t rng_seed = 0;
    std::string output_dir = "out";
    int threads = 0;                  // 0 = hardware concurrency

    // Re-checks every cross-field invariant; throws ConfigError.
    void validate() const;
};

// Flat key = value file, TOML-compatible: strings in double quotes, numbers,
// true/false, [a, b, c] arrays, # comments. Scene objects are declared as
//   scene = ["sphere", "ground"]
//   sphere.path = "scenes/icosphere.obj"
//   sphere.translate_per_frame = [0.1, 0.0, 0.0]
// Unknown keys are rejected. Throws ConfigError.
RenderConfig parse_config(const std::filesystem::path& path);
RenderConfig parse_config_text(const std::string& text);

// FNV-1a 64 over the canonical serialization of every field that affects
// rendered values. output_dir and threads are excluded so relocating output
// or changing parallelism cannot change the hash. Hex string.
std::string config_hash(const RenderConfig& config);

} // namespace sdfield
