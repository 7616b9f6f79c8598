#pragma once

#include <filesystem>

#include "sdfield/grid.hpp"

namespace sdfield {

// Binary scalar grid dump. Layout, all little-endian:
//   magic "SDF1"
//   u32 nx, ny, nz
//   f32 voxel_size
//   f32 origin x, y, z
//   f32 values, x-fastest then y then z
// +inf is stored as the IEEE f32 infinity bit pattern.
void save_sdf(const std::filesystem::path& path, const ScalarGrid& grid);

// Throws std::runtime_error on bad magic, truncation, or size overflow.
ScalarGrid load_sdf(const std::filesystem::path& path);

} // namespace sdfield
