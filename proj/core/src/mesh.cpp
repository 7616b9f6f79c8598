#include "sdfield/mesh.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdfield {

Aabb TriangleMesh::bounds() const {
    Aabb box;
    for (const Vec3& v : vertices) box.expand(v);
    return box;
}

void TriangleMesh::finalize() {
    face_normals.assign(triangles.size(), Vec3{});
    degenerate.assign(triangles.size(), 0);
    for (size_t i = 0; i < triangles.size(); ++i) {
        const auto& t = triangles[i];
        Vec3 n = cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
        float len = length(n);
        if (len > 0.f && std::isfinite(len)) {
            face_normals[i] = n * (1.f / len);
        } else {
            degenerate[i] = 1;
        }
    }
}

namespace {

// OBJ indices are 1-based; negative values count back from the current end
// of the vertex list.
uint32_t resolve_index(long long raw, size_t vertex_count, size_t line_no) {
    long long idx = raw > 0 ? raw - 1 : raw + (long long)vertex_count;
    if (idx < 0 || idx >= (long long)vertex_count) {
        throw std::runtime_error("obj line " + std::to_string(line_no) +
                                 ": vertex index out of range");
    }
    return uint32_t(idx);
}

// A face corner may be "v", "v/vt", "v//vn" or "v/vt/vn"; only v is used.
long long parse_corner(const std::string& token, size_t line_no) {
    size_t slash = token.find('/');
    std::string head = slash == std::string::npos ? token : token.substr(0, slash);
    long long value = 0;
    auto res = std::from_chars(head.data(), head.data() + head.size(), value);
    if (res.ec != std::errc{} || res.ptr != head.data() + head.size() || value == 0) {
        throw std::runtime_error("obj line " + std::to_string(line_no) +
                                 ": bad face index '" + token + "'");
    }
    return value;
}

} // namespace

TriangleMesh load_obj(const std::filesystem::path& path, MeshLoadStats* stats) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open obj file: " + path.string());

    TriangleMesh mesh;
    MeshLoadStats local;
    std::string line;
    size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;

        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v.x >> v.y >> v.z)) {
                throw std::runtime_error("obj line " + std::to_string(line_no) +
                                         ": malformed vertex");
            }
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<uint32_t> corners;
            std::string token;
            while (ls >> token) {
                corners.push_back(
                    resolve_index(parse_corner(token, line_no), mesh.vertices.size(), line_no));
            }
            if (corners.size() < 3) {
                throw std::runtime_error("obj line " + std::to_string(line_no) +
                                         ": face needs at least 3 vertices");
            }
            for (size_t i = 2; i < corners.size(); ++i) {
                mesh.triangles.push_back({corners[0], corners[i - 1], corners[i]});
            }
        } else if (tag == "vn") {
            ++local.ignored_normals;
        } else if (tag == "vt") {
            ++local.ignored_texcoords;
        } else if (tag == "g" || tag == "o" || tag == "s") {
            ++local.ignored_groups;
        } else if (tag == "mtllib" || tag == "usemtl") {
            ++local.ignored_materials;
        } else {
            ++local.ignored_other;
        }
    }

    mesh.finalize();
    for (uint8_t d : mesh.degenerate) local.degenerate_faces += d;
    if (stats) *stats = local;
    return mesh;
}

void save_obj(const std::filesystem::path& path, const TriangleMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write obj file: " + path.string());
    out.precision(9);
    for (const Vec3& v : mesh.vertices) {
        out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
    }
    for (const auto& t : mesh.triangles) {
        out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

TriangleMesh merge_instances(const std::vector<SceneInstance>& instances) {
    TriangleMesh merged;
    for (const SceneInstance& inst : instances) {
        if (!inst.mesh) continue;
        if (!inst.transform.valid()) {
            throw std::invalid_argument("instance transform is not orthonormal");
        }
        uint32_t base = uint32_t(merged.vertices.size());
        for (const Vec3& v : inst.mesh->vertices) {
            merged.vertices.push_back(inst.transform.apply_point(v));
        }
        for (const auto& t : inst.mesh->triangles) {
            merged.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
        }
    }
    merged.finalize();
    return merged;
}

} // namespace sdfield
