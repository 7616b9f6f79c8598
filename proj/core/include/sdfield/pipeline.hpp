#pragma once

#include <filesystem>
#include <optional>

#include "sdfield/config.hpp"
#include "sdfield/grid.hpp"
#include "sdfield/metrics.hpp"

namespace sdfield {

// Pipeline failure outside configuration: missing scene file, unwritable
// output, internal stage error. Carries the stage name and frame index. The
// CLI maps this to exit code 3.
struct PipelineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridPair {
    GridSpec coarse;
    GridSpec fine;
};

// Sizes the cubic coarse grid (and the fine grid at fine_scale times the
// resolution) from the union of scene bounds swept over all animation
// frames, leaving at least a two-voxel empty border on every side. An empty
// scene falls back to a [-1,1]^3 domain so the pipeline stays well defined.
GridPair size_grids(const RenderConfig& config);

struct PipelineResult {
    std::filesystem::path output_dir;
    int frames = 0;
    std::optional<Metrics> metrics;   // present when the reference was rendered
};

enum class PipelineMode {
    build,    // SDF dumps only, no rendering
    render,   // full pipeline
};

// Runs the per-frame loop: bake animation, voxelize, flood, refine (carrying
// temporal state), render. Writes frame_%04d.ppm and vis_%04d.pgm per frame,
// coarse/fine/sign SDF dumps for the final frame, timings.json, and, when
// the reference renderer is enabled, ref_%04d.pgm plus metrics.json for the
// final frame. Every artifact byte depends only on (config, seed), never on
// thread count.
PipelineResult run_pipeline(const RenderConfig& config, PipelineMode mode = PipelineMode::render);

// Ground truth only: renders the reference visibility image for the final
// frame's scene pose and writes ref_%04d.pgm.
PipelineResult run_reference(const RenderConfig& config);

// Reads two visibility images and emits the metrics object for them.
Metrics compare(const RenderConfig& config, const std::filesystem::path& sdf_image,
                const std::filesystem::path& ref_image);

} // namespace sdfield
