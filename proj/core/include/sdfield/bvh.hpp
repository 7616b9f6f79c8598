#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sdfield/math.hpp"
#include "sdfield/mesh.hpp"

namespace sdfield {

struct Ray {
    Vec3 origin{};
    Vec3 dir{};          // need not be normalized
    float t_min = 0.f;
    float t_max = kInf;
};

enum class Facing : uint8_t { front, back };

struct Hit {
    float t = kInf;
    uint32_t triangle = 0;
    Facing facing = Facing::front;
};

// Watertight ray/triangle test state: vertices are translated to the ray
// origin and sheared into a space where the ray is the +z axis, then edge
// functions are evaluated in double so shared edges produce exactly negated
// values for adjacent triangles. No ray can slip between two triangles that
// share an edge, and no boundary hit is counted twice.
struct RayContext {
    Vec3 origin;
    int kx, ky, kz;      // axis permutation, kz = dominant direction axis
    double sx, sy, sz;   // shear constants
    explicit RayContext(const Ray& ray);
};

// Intersects one triangle. On a hit within (t_min, t_max] fills t and the
// barycentric-independent facing (front when the ray direction opposes the
// stored geometric normal).
bool intersect_triangle(const RayContext& ctx, const Ray& ray, const Vec3& a, const Vec3& b,
                        const Vec3& c, float& t_out);

// Binary BVH over mesh triangles, built by median split on the longest
// centroid axis (deterministic for a given mesh). Degenerate triangles are
// excluded at build time.
class Bvh {
public:
    Bvh() = default;
    explicit Bvh(const TriangleMesh& mesh);

    // Nearest intersection along the ray. Ties in t go to the lower triangle
    // index so results do not depend on traversal order.
    std::optional<Hit> closest_hit(const Ray& ray) const;

    bool empty() const { return nodes_.empty(); }
    const TriangleMesh* mesh() const { return mesh_; }

private:
    struct Node {
        Aabb box;
        uint32_t first = 0;   // leaf: offset into prims_; inner: left child index
        uint32_t count = 0;   // leaf: primitive count; inner: 0
        uint32_t right = 0;   // inner: right child index
    };

    static constexpr uint32_t kLeafSize = 4;

    uint32_t build(std::vector<uint32_t>& prims, uint32_t begin, uint32_t end,
                   const std::vector<Vec3>& centroids);

    const TriangleMesh* mesh_ = nullptr;
    std::vector<Node> nodes_;
    std::vector<uint32_t> prims_;
};

} // namespace sdfield
