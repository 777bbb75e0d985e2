#include "lodfill/remesh.hpp"

#include <gtest/gtest.h>

#include <map>

#include "lodfill/preprocess.hpp"
#include "fixtures.hpp"

namespace lodfill {
namespace {

using testing::make_cube;
using testing::make_cube_missing_roof;

RepairConfig default_cfg() { return RepairConfig{}; }

TEST(FillHole, SquareRoofHoleBecomesWatertight) {
    SurfaceMesh m = make_cube_missing_roof();
    const auto holes = detect_holes(m, default_cfg());
    ASSERT_EQ(holes.true_holes.size(), 1u);

    const auto before_points = m.points();
    const auto res = fill_hole(m, holes.true_holes[0], default_cfg());
    EXPECT_TRUE(res.filled);
    EXPECT_EQ(res.faces_added, 2);
    EXPECT_EQ(res.rejected_degenerate, 0);
    EXPECT_EQ(res.rejected_self_intersecting, 0);
    EXPECT_DOUBLE_EQ(res.plane_residual, 0.0);

    EXPECT_EQ(m.points(), before_points);  // no vertex moved or added
    const auto topo = euler_and_borders(m);
    EXPECT_EQ(topo.border_halfedges, 0);
    EXPECT_EQ(topo.euler, 2);
    EXPECT_TRUE(m.check_valid().empty()) << m.check_valid();

    // the original faces pass through untouched, the patch is appended
    const SurfaceMesh original = make_cube_missing_roof();
    for (FaceId f = 0; f < 10; ++f) EXPECT_EQ(m.face(f), original.face(f));
}

TEST(FillHole, PatchWindingMatchesNeighbors) {
    SurfaceMesh m = make_cube_missing_roof();
    const auto holes = detect_holes(m, default_cfg());
    fill_hole(m, holes.true_holes[0], default_cfg());
    // every edge has exactly two half-edges of opposite direction
    for (EdgeId e = 0; e < static_cast<EdgeId>(m.edge_count()); ++e) {
        const auto& rec = m.edge(e);
        ASSERT_EQ(rec.halfedges.size(), 2u);
        EXPECT_EQ(m.halfedge(rec.halfedges[0]).origin, m.target(rec.halfedges[1]));
    }
    // inserted roof faces point up (consistent outward orientation)
    for (FaceId f = 10; f < static_cast<FaceId>(m.face_count()); ++f) {
        const Triangle3 t = m.face_triangle(f);
        EXPECT_GT(cross(t.b - t.a, t.c - t.a).z, 0.0);
    }
}

TEST(FillHole, BentRingUsesOnlyOriginalVertices) {
    // hole spanning the roof/wall corner: remove one roof and one wall face
    SurfaceMesh m = make_cube();
    m.remove_face(2);  // roof (4,5,6)
    m.remove_face(7);  // wall (1,6,5)
    m.compact();
    const auto holes = detect_holes(m, default_cfg());
    ASSERT_EQ(holes.true_holes.size(), 1u);

    const size_t nv = m.vertex_count();
    const auto res = fill_hole(m, holes.true_holes[0], default_cfg());
    EXPECT_TRUE(res.filled);
    EXPECT_GT(res.faces_added, 0);
    EXPECT_GT(res.plane_residual, 0.0);  // genuinely non-planar ring
    EXPECT_EQ(m.vertex_count(), nv);
    for (FaceId f = 10; f < static_cast<FaceId>(m.face_count()); ++f) {
        for (VertexId v : m.face(f)) EXPECT_LT(v, static_cast<VertexId>(nv));
    }
    EXPECT_EQ(euler_and_borders(m).border_halfedges, 0);
}

TEST(FillHole, PolygonFaceCountIsRingSizeMinusTwo) {
    // interior L-shaped hole (8-vertex ring) in a flat 4x4-cell patch;
    // the patch's own outer rim is not a fillable hole (its corner
    // triangles land on kept faces) and must come back rejected
    SurfaceMesh roof;
    std::map<std::pair<int, int>, VertexId> grid;
    for (int i = 0; i <= 4; ++i) {
        for (int j = 0; j <= 4; ++j) {
            grid[{i, j}] = roof.add_vertex({i / 4.0, j / 4.0, 1.0});
        }
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if ((i == 1 && j == 1) || (i == 2 && j == 1) || (i == 1 && j == 2)) continue;
            const VertexId v00 = grid[{i, j}], v10 = grid[{i + 1, j}];
            const VertexId v11 = grid[{i + 1, j + 1}], v01 = grid[{i, j + 1}];
            roof.add_face(v00, v10, v11);
            roof.add_face(v00, v11, v01);
        }
    }
    roof.rebuild_connectivity();

    const auto holes = detect_holes(roof, default_cfg());
    // the interior L plus the patch's own outer rim (collinear rim
    // triangles are degenerate and collected unconditionally)
    const BorderRing* lring = nullptr;
    for (const auto& r : holes.true_holes) {
        if (r.edges.size() == 8) lring = &r;
    }
    ASSERT_NE(lring, nullptr);

    const auto res = fill_hole(roof, *lring, default_cfg());
    EXPECT_TRUE(res.filled);
    EXPECT_EQ(res.ring_size, 8);
    EXPECT_EQ(res.faces_added, 6);  // n - 2
}

TEST(FillHole, OpenRingRefused) {
    SurfaceMesh m = make_cube_missing_roof();
    BorderRing ring;
    ring.edges = {{4, 5, RingEdgeOrigin::Traversed}, {5, 6, RingEdgeOrigin::Traversed}};
    ring.closed = false;
    const auto res = fill_hole(m, ring, default_cfg());
    EXPECT_FALSE(res.filled);
    EXPECT_EQ(res.faces_added, 0);
    EXPECT_EQ(res.fail_reason, "ring-not-closed");
}

TEST(FillHole, CollinearRingReported) {
    SurfaceMesh m;
    for (int i = 0; i < 4; ++i) m.add_vertex({static_cast<double>(i), 0, 0});
    m.add_face(0, 1, 2);
    m.rebuild_connectivity();
    BorderRing ring;
    ring.closed = true;
    ring.edges = {{0, 1, RingEdgeOrigin::Traversed},
                  {1, 2, RingEdgeOrigin::Traversed},
                  {2, 3, RingEdgeOrigin::Traversed},
                  {3, 0, RingEdgeOrigin::Traversed}};
    const auto res = fill_hole(m, ring, default_cfg());
    EXPECT_FALSE(res.filled);
    EXPECT_EQ(res.fail_reason, "degenerate-plane");
}

TEST(FillHole, FoldedProjectionReported) {
    // an hourglass ring in 3D whose projection self-crosses
    SurfaceMesh m;
    const VertexId a = m.add_vertex({0, 0, 0});
    const VertexId b = m.add_vertex({1, 0, 0});
    const VertexId c = m.add_vertex({0, 1, 0.02});
    const VertexId d = m.add_vertex({1, 1, 0.02});
    m.add_face(a, b, c);  // dummy face so vertices are referenced
    m.rebuild_connectivity();
    BorderRing ring;
    ring.closed = true;
    ring.edges = {{a, b, RingEdgeOrigin::Traversed},
                  {b, c, RingEdgeOrigin::Traversed},
                  {c, d, RingEdgeOrigin::Traversed},
                  {d, a, RingEdgeOrigin::Traversed}};
    const auto res = fill_hole(m, ring, default_cfg());
    EXPECT_FALSE(res.filled);
    EXPECT_EQ(res.fail_reason, "projection-fold");
}

TEST(FillHole, DuplicateRingVerticesCollapse) {
    // square hole where one rim corner exists twice (weldable duplicates)
    SurfaceMesh m = make_cube_missing_roof();
    const VertexId dup = m.add_vertex({1, 1, 1});  // copy of vertex 6
    // re-point one rim face corner at the duplicate
    for (FaceId f = 0; f < static_cast<FaceId>(m.face_count()); ++f) {
        auto fc = m.face(f);
        if (fc[0] == 1 && fc[1] == 2 && fc[2] == 6) {
            m.set_face(f, fc[0], fc[1], dup);
        }
    }
    m.compact();
    RepairConfig cfg;
    preprocess(m, cfg);
    const auto holes = detect_holes(m, cfg);
    ASSERT_EQ(holes.true_holes.size(), 1u);
    const auto res = fill_hole(m, holes.true_holes[0], cfg);
    EXPECT_EQ(res.ring_size, 4);  // duplicates collapsed
    EXPECT_EQ(res.faces_added, 2);
    // patch references the representative, not the duplicate
    for (FaceId f = 10; f < static_cast<FaceId>(m.face_count()); ++f) {
        for (VertexId v : m.face(f)) EXPECT_NE(v, dup);
    }
}

TEST(FillAll, EmptyHoleSetNoChange) {
    SurfaceMesh m = make_cube();
    const auto faces = m.faces();
    HoleSet holes;
    const auto results = fill_all(m, holes, default_cfg());
    EXPECT_TRUE(results.empty());
    EXPECT_EQ(m.faces(), faces);
}

TEST(FillAll, TwoHolesDeterministicOrder) {
    // two separated holes on one closed box: remove a bottom and a top face pair
    SurfaceMesh m = make_cube();
    m.remove_face(2);
    m.remove_face(3);  // roof square (vertices 4..7)
    m.remove_face(0);
    m.remove_face(1);  // floor square (vertices 0..3)
    m.compact();
    const auto holes = detect_holes(m, default_cfg());
    ASSERT_EQ(holes.true_holes.size(), 2u);
    const auto results = fill_all(m, holes, default_cfg());
    ASSERT_EQ(results.size(), 2u);
    EXPECT_TRUE(results[0].filled);
    EXPECT_TRUE(results[1].filled);
    const auto topo = euler_and_borders(m);
    EXPECT_EQ(topo.border_halfedges, 0);
    EXPECT_EQ(topo.euler, 2);

    // the first result corresponds to the floor ring (lower vertex ids)
    SurfaceMesh m2 = make_cube();
    m2.remove_face(2);
    m2.remove_face(3);
    m2.remove_face(0);
    m2.remove_face(1);
    m2.compact();
    const auto holes2 = detect_holes(m2, default_cfg());
    const auto results2 = fill_all(m2, holes2, default_cfg());
    ASSERT_EQ(results2.size(), 2u);
    EXPECT_EQ(results2[0].faces_added, results[0].faces_added);
}

TEST(FillAll, PatchInteriorEdgesAreManifold) {
    SurfaceMesh m = make_cube_missing_roof();
    const size_t faces_before = m.face_count();
    const auto holes = detect_holes(m, default_cfg());
    fill_all(m, holes, default_cfg());
    // every edge of an inserted face is manifold: former border edges got
    // their twin, interior patch edges are shared by exactly two faces
    for (FaceId f = static_cast<FaceId>(faces_before); f < static_cast<FaceId>(m.face_count());
         ++f) {
        for (int k = 0; k < 3; ++k) {
            const EdgeId e = m.find_edge(m.face(f)[k], m.face(f)[(k + 1) % 3]);
            ASSERT_NE(e, kInvalidId);
            EXPECT_EQ(m.edge(e).halfedges.size(), 2u);
        }
    }
}

TEST(FillAll, BorderCountNeverIncreases) {
    SurfaceMesh m = make_cube();
    m.remove_face(2);
    m.compact();  // single triangular hole
    const size_t before = m.border_halfedge_count();
    const auto holes = detect_holes(m, default_cfg());
    fill_all(m, holes, default_cfg());
    EXPECT_LE(m.border_halfedge_count(), before);
    EXPECT_EQ(m.border_halfedge_count(), 0u);
}

}  // namespace
}  // namespace lodfill
