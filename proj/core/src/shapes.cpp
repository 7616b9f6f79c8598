#include "sdfield/shapes.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <utility>

namespace sdfield {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Midpoint of an edge, cached so shared edges produce one shared vertex.
uint32_t edge_midpoint(TriangleMesh& mesh, std::map<std::pair<uint32_t, uint32_t>, uint32_t>& cache,
                       uint32_t a, uint32_t b) {
    auto key = std::minmax(a, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Vec3 m = (mesh.vertices[a] + mesh.vertices[b]) * 0.5f;
    uint32_t idx = uint32_t(mesh.vertices.size());
    mesh.vertices.push_back(m);
    cache.emplace(key, idx);
    return idx;
}

} // namespace

TriangleMesh make_icosphere(int subdivisions, float radius) {
    TriangleMesh mesh;

    // Icosahedron as two poles on the z axis plus two latitude rings of
    // five, so the poles are exact vertices at (0, 0, +-radius).
    float h = 1.f / std::sqrt(5.f);
    float r = 2.f / std::sqrt(5.f);
    mesh.vertices.push_back({0.f, 0.f, 1.f});
    for (int k = 0; k < 5; ++k) {
        double a = 2.0 * kPi * k / 5.0;
        mesh.vertices.push_back({r * float(std::cos(a)), r * float(std::sin(a)), h});
    }
    for (int k = 0; k < 5; ++k) {
        double a = 2.0 * kPi * k / 5.0 + kPi / 5.0;
        mesh.vertices.push_back({r * float(std::cos(a)), r * float(std::sin(a)), -h});
    }
    mesh.vertices.push_back({0.f, 0.f, -1.f});

    auto upper = [](int k) { return uint32_t(1 + k % 5); };
    auto lower = [](int k) { return uint32_t(6 + k % 5); };
    for (int k = 0; k < 5; ++k) {
        mesh.triangles.push_back({0, upper(k), upper(k + 1)});
        mesh.triangles.push_back({upper(k), lower(k), upper(k + 1)});
        mesh.triangles.push_back({upper(k + 1), lower(k), lower(k + 1)});
        mesh.triangles.push_back({11, lower(k + 1), lower(k)});
    }

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<uint32_t, uint32_t>, uint32_t> cache;
        std::vector<std::array<uint32_t, 3>> next;
        next.reserve(mesh.triangles.size() * 4);
        for (const auto& t : mesh.triangles) {
            uint32_t ab = edge_midpoint(mesh, cache, t[0], t[1]);
            uint32_t bc = edge_midpoint(mesh, cache, t[1], t[2]);
            uint32_t ca = edge_midpoint(mesh, cache, t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.triangles = std::move(next);
    }

    for (Vec3& v : mesh.vertices) v = normalize(v) * radius;
    mesh.finalize();
    return mesh;
}

TriangleMesh make_box(const Vec3& lo, const Vec3& hi) {
    TriangleMesh mesh;
    // Corner index bit k selects hi on axis k.
    for (int i = 0; i < 8; ++i) {
        mesh.vertices.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y,
                                 (i & 4) ? hi.z : lo.z});
    }
    const std::array<uint32_t, 3> faces[12] = {
        {0, 4, 6}, {0, 6, 2},   // -x
        {1, 3, 7}, {1, 7, 5},   // +x
        {0, 1, 5}, {0, 5, 4},   // -y
        {2, 6, 7}, {2, 7, 3},   // +y
        {0, 2, 3}, {0, 3, 1},   // -z
        {4, 5, 7}, {4, 7, 6},   // +z
    };
    mesh.triangles.assign(faces, faces + 12);
    mesh.finalize();
    return mesh;
}

TriangleMesh make_quad(float x0, float x1, float y0, float y1, float height) {
    TriangleMesh mesh;
    mesh.vertices = {{x0, y0, height}, {x1, y0, height}, {x1, y1, height}, {x0, y1, height}};
    mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
    mesh.finalize();
    return mesh;
}

} // namespace sdfield
