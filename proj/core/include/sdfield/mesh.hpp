#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sdfield/math.hpp"

namespace sdfield {

// Indexed triangle soup. Geometric (face) normals are precomputed at build
// time; zero-area faces keep a zero normal and are marked degenerate so that
// spatial queries can skip them.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<uint32_t, 3>> triangles;
    std::vector<Vec3> face_normals;        // unit length, zero for degenerate faces
    std::vector<uint8_t> degenerate;       // 1 = zero-area face

    size_t triangle_count() const { return triangles.size(); }
    Aabb bounds() const;

    // Recomputes face_normals and degenerate flags from current geometry.
    void finalize();
};

// Per-record counts of OBJ content that the loader ignores.
struct MeshLoadStats {
    size_t ignored_normals = 0;
    size_t ignored_texcoords = 0;
    size_t ignored_groups = 0;
    size_t ignored_materials = 0;
    size_t ignored_other = 0;
    size_t degenerate_faces = 0;
};

// Reads a Wavefront OBJ. Supports 1-based and negative (relative) vertex
// indices, and triangulates polygons with more than three vertices as a fan
// around the first vertex. Normal/texcoord records and material or group
// statements are counted in stats and otherwise ignored. Throws
// std::runtime_error on malformed geometry or unreadable files.
TriangleMesh load_obj(const std::filesystem::path& path, MeshLoadStats* stats = nullptr);

void save_obj(const std::filesystem::path& path, const TriangleMesh& mesh);

// Rigid placement: rotation then translation. The rotation matrix must be
// orthonormal; validate() enforces this.
struct RigidTransform {
    Mat3 rotation = Mat3::identity();
    Vec3 translation{};

    Vec3 apply_point(const Vec3& p) const { return rotation * p + translation; }
    Vec3 apply_vector(const Vec3& v) const { return rotation * v; }
    bool valid(float tol = 1e-5f) const { return rotation.is_orthonormal(tol); }
};

struct SceneInstance {
    const TriangleMesh* mesh = nullptr;
    RigidTransform transform;
};

// Bakes instances into one world-space mesh and recomputes normals.
TriangleMesh merge_instances(const std::vector<SceneInstance>& instances);

} // namespace sdfield
