#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sdfield/math.hpp"

namespace sdfield {

// Placement of a grid of cubic voxels in world space. Values live at voxel
// centers: center(i) = origin + (i + 0.5) * voxel_size.
struct GridSpec {
    std::array<int, 3> resolution{2, 2, 2};
    Vec3 origin{};
    float voxel_size = 1.f;

    GridSpec() = default;
    GridSpec(int nx, int ny, int nz, Vec3 origin_, float voxel_size_)
        : resolution{nx, ny, nz}, origin(origin_), voxel_size(voxel_size_) {
        if (nx < 2 || ny < 2 || nz < 2) throw std::invalid_argument("grid resolution must be >= 2 per axis");
        if (!(voxel_size_ > 0.f)) throw std::invalid_argument("voxel_size must be positive");
    }

    size_t voxel_count() const {
        return size_t(resolution[0]) * size_t(resolution[1]) * size_t(resolution[2]);
    }

    size_t index(int x, int y, int z) const {
        return size_t(x) + size_t(resolution[0]) * (size_t(y) + size_t(resolution[1]) * size_t(z));
    }

    std::array<int, 3> coords(size_t idx) const {
        int x = int(idx % size_t(resolution[0]));
        size_t rest = idx / size_t(resolution[0]);
        int y = int(rest % size_t(resolution[1]));
        int z = int(rest / size_t(resolution[1]));
        return {x, y, z};
    }

    bool in_bounds(int x, int y, int z) const {
        return x >= 0 && y >= 0 && z >= 0 && x < resolution[0] && y < resolution[1] &&
               z < resolution[2];
    }

    Vec3 center(int x, int y, int z) const {
        return {origin.x + (float(x) + 0.5f) * voxel_size,
                origin.y + (float(y) + 0.5f) * voxel_size,
                origin.z + (float(z) + 0.5f) * voxel_size};
    }

    Aabb bounds() const {
        Vec3 ext{float(resolution[0]) * voxel_size, float(resolution[1]) * voxel_size,
                 float(resolution[2]) * voxel_size};
        return Aabb{origin, origin + ext};
    }

    // The voxel containing p, or nullopt-ish {-1,..} when outside.
    std::array<int, 3> voxel_of(const Vec3& p) const {
        std::array<int, 3> v;
        for (int a = 0; a < 3; ++a) {
            float f = (p[a] - origin[a]) / voxel_size;
            int i = int(std::floor(f));
            v[a] = (i >= 0 && i < resolution[a]) ? i : -1;
        }
        return v;
    }

    bool operator==(const GridSpec& o) const {
        return resolution == o.resolution && origin == o.origin && voxel_size == o.voxel_size;
    }
};

template <typename T>
struct Grid3 {
    GridSpec spec;
    std::vector<T> data;

    Grid3() = default;
    explicit Grid3(const GridSpec& spec_, T fill = T{}) : spec(spec_), data(spec_.voxel_count(), fill) {}

    T& at(int x, int y, int z) { return data[spec.index(x, y, z)]; }
    const T& at(int x, int y, int z) const { return data[spec.index(x, y, z)]; }
    T& operator[](size_t i) { return data[i]; }
    const T& operator[](size_t i) const { return data[i]; }
    size_t size() const { return data.size(); }
};

using ScalarGrid = Grid3<float>;  // one world-unit float per voxel
using MaskGrid = Grid3<uint8_t>;

// Trilinear interpolation of the 8 surrounding voxel centers, clamp-to-edge
// outside the grid. An infinite tap short-circuits to +inf so that the empty
// scene sentinel never turns into inf-minus-inf NaNs.
inline float sample_trilinear(const ScalarGrid& grid, const Vec3& p) {
    const auto& spec = grid.spec;
    float fx = (p.x - spec.origin.x) / spec.voxel_size - 0.5f;
    float fy = (p.y - spec.origin.y) / spec.voxel_size - 0.5f;
    float fz = (p.z - spec.origin.z) / spec.voxel_size - 0.5f;
    int ix = int(std::floor(fx)), iy = int(std::floor(fy)), iz = int(std::floor(fz));
    float tx = clamp(fx - float(ix), 0.f, 1.f);
    float ty = clamp(fy - float(iy), 0.f, 1.f);
    float tz = clamp(fz - float(iz), 0.f, 1.f);

    int x0 = clamp(ix, 0, spec.resolution[0] - 1), x1 = clamp(ix + 1, 0, spec.resolution[0] - 1);
    int y0 = clamp(iy, 0, spec.resolution[1] - 1), y1 = clamp(iy + 1, 0, spec.resolution[1] - 1);
    int z0 = clamp(iz, 0, spec.resolution[2] - 1), z1 = clamp(iz + 1, 0, spec.resolution[2] - 1);

    float c000 = grid.at(x0, y0, z0), c100 = grid.at(x1, y0, z0);
    float c010 = grid.at(x0, y1, z0), c110 = grid.at(x1, y1, z0);
    float c001 = grid.at(x0, y0, z1), c101 = grid.at(x1, y0, z1);
    float c011 = grid.at(x0, y1, z1), c111 = grid.at(x1, y1, z1);

    if (std::isinf(c000) || std::isinf(c100) || std::isinf(c010) || std::isinf(c110) ||
        std::isinf(c001) || std::isinf(c101) || std::isinf(c011) || std::isinf(c111)) {
        return kInf;
    }

    float x00 = lerp(c000, c100, tx), x10 = lerp(c010, c110, tx);
    float x01 = lerp(c001, c101, tx), x11 = lerp(c011, c111, tx);
    float y0v = lerp(x00, x10, ty), y1v = lerp(x01, x11, ty);
    return lerp(y0v, y1v, tz);
}

} // namespace sdfield
