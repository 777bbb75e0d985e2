#pragma once

// Shared hand-built meshes for the test suites. Everything here is
// constructed explicitly so expected values can be counted by hand.

#include <string>

#include "lodfill/surface_mesh.hpp"

namespace lodfill::testing {

// Unit cube [0,1]^3, 8 vertices, 12 triangles, outward winding.
inline SurfaceMesh make_cube() {
    SurfaceMesh m;
    // z=0: 0..3, z=1: 4..7, both CCW seen from +z
    m.add_vertex({0, 0, 0});  // 0
    m.add_vertex({1, 0, 0});  // 1
    m.add_vertex({1, 1, 0});  // 2
    m.add_vertex({0, 1, 0});  // 3
    m.add_vertex({0, 0, 1});  // 4
    m.add_vertex({1, 0, 1});  // 5
    m.add_vertex({1, 1, 1});  // 6
    m.add_vertex({0, 1, 1});  // 7
    // bottom (normal -z)
    m.add_face(0, 2, 1);  // f0
    m.add_face(0, 3, 2);  // f1
    // top (normal +z)
    m.add_face(4, 5, 6);  // f2
    m.add_face(4, 6, 7);  // f3
    // y=0 (normal -y)
    m.add_face(0, 1, 5);  // f4
    m.add_face(0, 5, 4);  // f5
    // x=1 (normal +x)
    m.add_face(1, 2, 6);  // f6
    m.add_face(1, 6, 5);  // f7
    // y=1 (normal +y)
    m.add_face(2, 3, 7);  // f8
    m.add_face(2, 7, 6);  // f9
    // x=0 (normal -x)
    m.add_face(3, 0, 4);  // f10
    m.add_face(3, 4, 7);  // f11
    m.rebuild_connectivity();
    return m;
}

// Cube with the two roof triangles (f2, f3) removed: a square hole rim.
inline SurfaceMesh make_cube_missing_roof() {
    SurfaceMesh m = make_cube();
    m.remove_face(2);
    m.remove_face(3);
    m.compact();
    return m;
}

inline std::string cube_obj() {
    return
        "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
        "v 0 0 1\nv 1 0 1\nv 1 1 1\nv 0 1 1\n"
        "f 1 3 2\nf 1 4 3\n"
        "f 5 6 7\nf 5 7 8\n"
        "f 1 2 6\nf 1 6 5\n"
        "f 2 3 7\nf 2 7 6\n"
        "f 3 4 8\nf 3 8 7\n"
        "f 4 1 5\nf 4 5 8\n";
}

// Square grid torus: nu segments around the tube axis, nv around the tube.
inline SurfaceMesh make_torus(int nu = 10, int nv = 6, double R = 1.0, double r = 0.3) {
    SurfaceMesh m;
    for (int i = 0; i < nu; ++i) {
        const double a = 2.0 * M_PI * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double b = 2.0 * M_PI * j / nv;
            m.add_vertex({(R + r * std::cos(b)) * std::cos(a),
                          (R + r * std::cos(b)) * std::sin(a), r * std::sin(b)});
        }
    }
    auto vid = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            m.add_face(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1));
            m.add_face(vid(i, j), vid(i + 1, j + 1), vid(i, j + 1));
        }
    }
    m.rebuild_connectivity();
    return m;
}

}  // namespace lodfill::testing
