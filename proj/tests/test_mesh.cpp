#include <doctest.h>

#include <cmath>
#include <fstream>

#include "sdfield/mesh.hpp"
#include "sdfield/shapes.hpp"
#include "test_util.hpp"

using namespace sdfield;

namespace {

std::filesystem::path write_obj(const TempDir& dir, const std::string& name,
                                const std::string& text) {
    auto p = dir / name;
    std::ofstream out(p);
    out << text;
    return p;
}

} // namespace

TEST_CASE("minimal single-triangle file loads") {
    TempDir dir("obj");
    auto p = write_obj(dir, "tri.obj",
                       "v 0 0 0\n"
                       "v 1 0 0\n"
                       "v 0 1 0\n"
                       "f 1 2 3\n");
    TriangleMesh m = load_obj(p);
    REQUIRE(m.triangle_count() == 1);
    CHECK(m.vertices.size() == 3);
    CHECK(length(m.face_normals[0] - Vec3{0.f, 0.f, 1.f}) < 1e-6f);
}

TEST_CASE("quad faces fan-triangulate around the first vertex") {
    TempDir dir("obj");
    auto p = write_obj(dir, "quad.obj",
                       "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
                       "f 1 2 3 4\n");
    TriangleMesh m = load_obj(p);
    REQUIRE(m.triangle_count() == 2);
    CHECK(m.triangles[0] == std::array<uint32_t, 3>{0, 1, 2});
    CHECK(m.triangles[1] == std::array<uint32_t, 3>{0, 2, 3});
}

TEST_CASE("negative indices address vertices relative to the end") {
    TempDir dir("obj");
    auto p = write_obj(dir, "neg.obj",
                       "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
                       "f -3 -2 -1\n");
    TriangleMesh m = load_obj(p);
    REQUIRE(m.triangle_count() == 1);
    CHECK(m.triangles[0] == std::array<uint32_t, 3>{0, 1, 2});
}

TEST_CASE("slash corner forms parse and non-geometry records are counted") {
    TempDir dir("obj");
    auto p = write_obj(dir, "full.obj",
                       "mtllib scene.mtl\n"
                       "o thing\n"
                       "vn 0 0 1\n"
                       "vt 0.5 0.5\n"
                       "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
                       "usemtl white\n"
                       "s off\n"
                       "f 1/1/1 2/1/1 3/1/1\n");
    MeshLoadStats stats;
    TriangleMesh m = load_obj(p, &stats);
    CHECK(m.triangle_count() == 1);
    CHECK(stats.ignored_normals == 1);
    CHECK(stats.ignored_texcoords == 1);
    CHECK(stats.ignored_materials == 2);
    CHECK(stats.ignored_groups == 2);
}

TEST_CASE("zero-area faces are flagged degenerate") {
    TempDir dir("obj");
    auto p = write_obj(dir, "degen.obj",
                       "v 0 0 0\nv 1 0 0\nv 2 0 0\nv 0 1 0\n"
                       "f 1 2 3\n"
                       "f 1 2 4\n");
    MeshLoadStats stats;
    TriangleMesh m = load_obj(p, &stats);
    REQUIRE(m.triangle_count() == 2);
    CHECK(m.degenerate[0]);
    CHECK(!m.degenerate[1]);
    CHECK(stats.degenerate_faces == 1);
    CHECK(m.face_normals[0] == Vec3{0.f, 0.f, 0.f});
}

TEST_CASE("load errors carry the offending line number") {
    TempDir dir("obj");
    CHECK_THROWS_AS(load_obj(dir / "missing.obj"), std::runtime_error);

    auto bad_vertex = write_obj(dir, "badv.obj", "v 0 0\nf 1 2 3\n");
    CHECK_THROWS_WITH_AS(load_obj(bad_vertex), doctest::Contains("line 1"), std::runtime_error);

    auto bad_index = write_obj(dir, "badi.obj", "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 7\n");
    CHECK_THROWS_WITH_AS(load_obj(bad_index), doctest::Contains("line 4"), std::runtime_error);
}

TEST_CASE("subdivided icosphere has 1280 unit-normal faces") {
    TriangleMesh m = make_icosphere(3, 1.f);
    REQUIRE(m.triangle_count() == 1280);
    for (size_t i = 0; i < m.triangle_count(); ++i) {
        CHECK(!m.degenerate[i]);
        CHECK(std::fabs(length(m.face_normals[i]) - 1.f) < 1e-6f);
    }
    // Every vertex sits on the unit sphere.
    for (const Vec3& v : m.vertices) CHECK(std::fabs(length(v) - 1.f) < 1e-6f);
}

TEST_CASE("save and reload preserves geometry") {
    TempDir dir("obj");
    TriangleMesh box = make_box(Vec3{-1.f, -2.f, 0.f}, Vec3{1.f, 2.f, 3.f});
    auto p = dir / "box.obj";
    save_obj(p, box);
    TriangleMesh back = load_obj(p);
    REQUIRE(back.triangle_count() == box.triangle_count());
    REQUIRE(back.vertices.size() == box.vertices.size());
    for (size_t i = 0; i < box.vertices.size(); ++i) {
        CHECK(length(back.vertices[i] - box.vertices[i]) < 1e-6f);
    }
    CHECK(back.triangles == box.triangles);
}

TEST_CASE("instance merge applies rigid transforms and rejects others") {
    TriangleMesh tri;
    tri.vertices = {Vec3{0.f, 0.f, 0.f}, Vec3{1.f, 0.f, 0.f}, Vec3{0.f, 1.f, 0.f}};
    tri.triangles = {{0, 1, 2}};
    tri.finalize();

    RigidTransform shift;
    shift.translation = Vec3{0.f, 0.f, 2.f};
    TriangleMesh merged = merge_instances({{&tri, shift}, {&tri, RigidTransform{}}});
    REQUIRE(merged.triangle_count() == 2);
    CHECK(merged.vertices[0].z == 2.f);
    CHECK(merged.vertices[3].z == 0.f);
    // Second triangle indexes the second vertex block.
    CHECK(merged.triangles[1] == std::array<uint32_t, 3>{3, 4, 5});

    RigidTransform scaled;
    scaled.rotation = Mat3::identity();
    scaled.rotation.m[0] = 2.f;
    CHECK_THROWS_AS(merge_instances({{&tri, scaled}}), std::invalid_argument);
}
