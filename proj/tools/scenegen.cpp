// Writes the bundled test scenes as OBJ files.

#include <filesystem>
#include <iostream>

#include "sdfield/mesh.hpp"
#include "sdfield/shapes.hpp"

int main(int argc, char** argv) {
    std::filesystem::path dir = argc > 1 ? argv[1] : "scenes";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        std::cerr << "cannot create " << dir << '\n';
        return 1;
    }

    using namespace sdfield;

    // 1280-face sphere, radius 1, resting one radius above the ground plane.
    TriangleMesh sphere = make_icosphere(3, 1.f);
    for (Vec3& v : sphere.vertices) v.z += 1.5f;
    save_obj(dir / "icosphere.obj", sphere);

    // Ground: a large quad at z = 0.
    save_obj(dir / "ground.obj", make_quad(-6.f, 6.f, -6.f, 6.f, 0.f));

    // Unit box used by the moving-object scene.
    save_obj(dir / "box.obj", make_box({-0.5f, -0.5f, 0.2f}, {0.5f, 0.5f, 1.2f}));

    // Zero-thickness horizontal quad floating just above the ground,
    // deliberately thinner than a coarse voxel.
    save_obj(dir / "thin_quad.obj", make_quad(-2.f, 2.f, -2.f, 2.f, 0.12f));

    std::cout << "wrote 4 scenes to " << dir << '\n';
    return 0;
}
