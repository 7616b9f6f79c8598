#include "sdfield/sdf_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sdfield {

namespace {

static_assert(std::endian::native == std::endian::little,
              "SDF1 writer assumes a little-endian host");

void put_u32(std::ostream& out, uint32_t v) { out.write(reinterpret_cast<char*>(&v), 4); }
void put_f32(std::ostream& out, float v) { out.write(reinterpret_cast<char*>(&v), 4); }

uint32_t get_u32(std::istream& in) {
    uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
}

float get_f32(std::istream& in) {
    float v = 0;
    in.read(reinterpret_cast<char*>(&v), 4);
    return v;
}

} // namespace

void save_sdf(const std::filesystem::path& path, const ScalarGrid& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write sdf file: " + path.string());

    out.write("SDF1", 4);
    put_u32(out, uint32_t(grid.spec.resolution[0]));
    put_u32(out, uint32_t(grid.spec.resolution[1]));
    put_u32(out, uint32_t(grid.spec.resolution[2]));
    put_f32(out, grid.spec.voxel_size);
    put_f32(out, grid.spec.origin.x);
    put_f32(out, grid.spec.origin.y);
    put_f32(out, grid.spec.origin.z);
    out.write(reinterpret_cast<const char*>(grid.data.data()),
              std::streamsize(grid.data.size() * sizeof(float)));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

ScalarGrid load_sdf(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open sdf file: " + path.string());

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "SDF1", 4) != 0) {
        throw std::runtime_error("not an SDF1 file: " + path.string());
    }

    uint32_t nx = get_u32(in), ny = get_u32(in), nz = get_u32(in);
    float voxel_size = get_f32(in);
    Vec3 origin{get_f32(in), get_f32(in), get_f32(in)};
    if (!in) throw std::runtime_error("truncated SDF1 header: " + path.string());
    if (nx < 2 || ny < 2 || nz < 2 || uint64_t(nx) * ny * nz > (uint64_t(1) << 31)) {
        throw std::runtime_error("bad SDF1 dimensions: " + path.string());
    }

    ScalarGrid grid(GridSpec(int(nx), int(ny), int(nz), origin, voxel_size));
    in.read(reinterpret_cast<char*>(grid.data.data()),
            std::streamsize(grid.data.size() * sizeof(float)));
    if (!in) throw std::runtime_error("truncated SDF1 payload: " + path.string());
    return grid;
}

} // namespace sdfield
