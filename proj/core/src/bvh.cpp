#include "sdfield/bvh.hpp"

#include <algorithm>
#include <cmath>

namespace sdfield {

RayContext::RayContext(const Ray& ray) : origin(ray.origin) {
    Vec3 d = ray.dir;
    Vec3 ad{std::fabs(d.x), std::fabs(d.y), std::fabs(d.z)};
    kz = 0;
    if (ad.y > ad[kz]) kz = 1;
    if (ad.z > ad[kz]) kz = 2;
    kx = (kz + 1) % 3;
    ky = (kx + 1) % 3;
    if (d[kz] < 0.f) std::swap(kx, ky);   // keep winding consistent
    sx = double(d[kx]) / double(d[kz]);
    sy = double(d[ky]) / double(d[kz]);
    sz = 1.0 / double(d[kz]);
}

bool intersect_triangle(const RayContext& ctx, const Ray& ray, const Vec3& a, const Vec3& b,
                        const Vec3& c, float& t_out) {
    // Vertices relative to the origin, sheared so the ray is the +z axis.
    // Edge functions in double are exactly antisymmetric across a shared
    // edge, which is what makes the test watertight.
    Vec3d A = (a - ctx.origin).cast<double>();
    Vec3d B = (b - ctx.origin).cast<double>();
    Vec3d C = (c - ctx.origin).cast<double>();

    double Ax = A[ctx.kx] - ctx.sx * A[ctx.kz];
    double Ay = A[ctx.ky] - ctx.sy * A[ctx.kz];
    double Bx = B[ctx.kx] - ctx.sx * B[ctx.kz];
    double By = B[ctx.ky] - ctx.sy * B[ctx.kz];
    double Cx = C[ctx.kx] - ctx.sx * C[ctx.kz];
    double Cy = C[ctx.ky] - ctx.sy * C[ctx.kz];

    double U = Cx * By - Cy * Bx;
    double V = Ax * Cy - Ay * Cx;
    double W = Bx * Ay - By * Ax;

    if ((U < 0.0 || V < 0.0 || W < 0.0) && (U > 0.0 || V > 0.0 || W > 0.0)) return false;

    double det = U + V + W;
    if (det == 0.0) return false;

    double Az = ctx.sz * A[ctx.kz];
    double Bz = ctx.sz * B[ctx.kz];
    double Cz = ctx.sz * C[ctx.kz];
    double t = (U * Az + V * Bz + W * Cz) / det;

    if (!(t > double(ray.t_min) && t <= double(ray.t_max))) return false;
    t_out = float(t);
    return true;
}

Bvh::Bvh(const TriangleMesh& mesh) : mesh_(&mesh) {
    std::vector<uint32_t> prims;
    prims.reserve(mesh.triangle_count());
    for (uint32_t i = 0; i < mesh.triangle_count(); ++i) {
        if (!mesh.degenerate[i]) prims.push_back(i);
    }
    if (prims.empty()) return;

    std::vector<Vec3> centroids(mesh.triangle_count());
    for (uint32_t i : prims) {
        const auto& t = mesh.triangles[i];
        centroids[i] =
            (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) * (1.f / 3.f);
    }

    nodes_.reserve(prims.size() * 2);
    build(prims, 0, uint32_t(prims.size()), centroids);
    prims_ = std::move(prims);
}

uint32_t Bvh::build(std::vector<uint32_t>& prims, uint32_t begin, uint32_t end,
                    const std::vector<Vec3>& centroids) {
    uint32_t node_index = uint32_t(nodes_.size());
    nodes_.emplace_back();

    Aabb box;
    Aabb cbox;
    for (uint32_t i = begin; i < end; ++i) {
        const auto& t = mesh_->triangles[prims[i]];
        box.expand(mesh_->vertices[t[0]]);
        box.expand(mesh_->vertices[t[1]]);
        box.expand(mesh_->vertices[t[2]]);
        cbox.expand(centroids[prims[i]]);
    }
    nodes_[node_index].box = box;

    uint32_t count = end - begin;
    Vec3 cext = cbox.extent();
    if (count <= kLeafSize || (cext.x == 0.f && cext.y == 0.f && cext.z == 0.f)) {
        nodes_[node_index].first = begin;
        nodes_[node_index].count = count;
        return node_index;
    }

    int axis = cbox.longest_axis();
    uint32_t mid = begin + count / 2;
    // Total order (centroid component, then index) keeps the split unique.
    std::nth_element(prims.begin() + begin, prims.begin() + mid, prims.begin() + end,
                     [&](uint32_t a, uint32_t b) {
                         float ca = centroids[a][axis], cb = centroids[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });

    uint32_t left = build(prims, begin, mid, centroids);
    uint32_t right = build(prims, mid, end, centroids);
    nodes_[node_index].first = left;
    nodes_[node_index].count = 0;
    nodes_[node_index].right = right;
    return node_index;
}

namespace {

// Slab test. The ternaries keep NaN (0 * inf from a ray parallel to a slab
// it starts on) out of the running bounds, which is conservative, and unlike
// fmin/fmax they compile to bare min/max instructions.
inline bool hit_box(const Aabb& box, const Vec3& origin, const Vec3& inv_dir, float t_limit,
                    float& tnear_out) {
    float tnear = 0.f, tfar = t_limit;
    for (int a = 0; a < 3; ++a) {
        float t0 = (box.min[a] - origin[a]) * inv_dir[a];
        float t1 = (box.max[a] - origin[a]) * inv_dir[a];
        if (inv_dir[a] < 0.f) std::swap(t0, t1);
        tnear = t0 > tnear ? t0 : tnear;
        tfar = t1 < tfar ? t1 : tfar;
    }
    tnear_out = tnear;
    return tnear <= tfar;
}

} // namespace

std::optional<Hit> Bvh::closest_hit(const Ray& ray) const {
    if (nodes_.empty()) return std::nullopt;

    RayContext ctx(ray);
    Vec3 inv_dir{1.f / ray.dir.x, 1.f / ray.dir.y, 1.f / ray.dir.z};

    float best_t = ray.t_max;
    uint32_t best_tri = UINT32_MAX;
    bool found = false;

    uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;

    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        // Re-test against the current best_t: it may have shrunk since this
        // node was pushed. Equal-t hits must stay visible so a lower
        // triangle index can claim the tie, hence strict pruning only.
        float tnear;
        if (!hit_box(node.box, ray.origin, inv_dir, best_t, tnear)) continue;
        if (tnear > best_t) continue;

        if (node.count > 0) {
            for (uint32_t i = node.first; i < node.first + node.count; ++i) {
                uint32_t tri = prims_[i];
                const auto& t = mesh_->triangles[tri];
                float t_hit;
                Ray probe = ray;
                probe.t_max = best_t;
                if (intersect_triangle(ctx, probe, mesh_->vertices[t[0]], mesh_->vertices[t[1]],
                                       mesh_->vertices[t[2]], t_hit)) {
                    if (t_hit < best_t || (t_hit == best_t && tri < best_tri)) {
                        best_t = t_hit;
                        best_tri = tri;
                        found = true;
                    }
                }
            }
        } else {
            uint32_t left = node.first, right = node.right;
            float tl = kInf, tr = kInf;
            bool hl = hit_box(nodes_[left].box, ray.origin, inv_dir, best_t, tl);
            bool hr = hit_box(nodes_[right].box, ray.origin, inv_dir, best_t, tr);
            if (hl && hr) {
                // Near child on top of the stack.
                if (tl <= tr) {
                    stack[top++] = right;
                    stack[top++] = left;
                } else {
                    stack[top++] = left;
                    stack[top++] = right;
                }
            } else if (hl) {
                stack[top++] = left;
            } else if (hr) {
                stack[top++] = right;
            }
        }
    }

    if (!found) return std::nullopt;
    Hit hit;
    hit.t = best_t;
    hit.triangle = best_tri;
    hit.facing =
        dot(ray.dir, mesh_->face_normals[best_tri]) < 0.f ? Facing::front : Facing::back;
    return hit;
}

} // namespace sdfield
