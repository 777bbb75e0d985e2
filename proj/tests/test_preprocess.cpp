#include "lodfill/preprocess.hpp"

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

namespace lodfill {
namespace {

using testing::make_cube;

RepairConfig default_cfg() { return RepairConfig{}; }

TEST(MarkDuplicates, AllFarApartAreSingletons) {
    SurfaceMesh m = make_cube();
    const auto groups = mark_duplicates(m, default_cfg());
    EXPECT_EQ(groups.nontrivial_groups, 0);
    for (VertexId v = 0; v < 8; ++v) EXPECT_EQ(m.duplicate_group(v), v);
}

TEST(MarkDuplicates, ClosePairGrouped) {
    SurfaceMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({0.0005, 0, 0});  // eps_dup/2 away
    m.add_vertex({1, 0, 0});
    m.add_vertex({0, 1, 0});
    m.add_face(0, 2, 3);
    m.add_face(1, 2, 3);
    m.rebuild_connectivity();
    const auto groups = mark_duplicates(m, default_cfg());
    EXPECT_EQ(groups.nontrivial_groups, 1);
    EXPECT_EQ(m.duplicate_group(1), 0);
    EXPECT_EQ(m.duplicate_group(0), 0);
}

// independent O(n^2) oracle with its own union-find
std::vector<int> quadratic_groups(const std::vector<Point3>& pts, double eps) {
    std::vector<int> parent(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int a) {
        return parent[a] == a ? a : parent[a] = find(parent[a]);
    };
    for (size_t i = 0; i < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            if (distance(pts[i], pts[j]) <= eps) {
                int a = find(static_cast<int>(i)), b = find(static_cast<int>(j));
                if (a > b) std::swap(a, b);
                if (a != b) parent[b] = a;
            }
        }
    }
    std::vector<int> out(pts.size());
    for (size_t i = 0; i < pts.size(); ++i) out[i] = find(static_cast<int>(i));
    return out;
}

TEST(MarkDuplicates, MatchesQuadraticOracle) {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    SurfaceMesh m;
    for (int i = 0; i < 100; ++i) m.add_vertex({uni(rng), uni(rng), uni(rng)});
    // a dummy face so the mesh is non-empty; grouping only needs vertices
    m.add_face(0, 1, 2);
    m.rebuild_connectivity();

    RepairConfig cfg;
    cfg.eps_duplicate = 0.3 * std::sqrt(3.0);  // 0.3 of the bounding box diagonal-ish
    cfg.eps_distance = 1.0;
    mark_duplicates(m, cfg);
    const auto oracle = quadratic_groups(m.points(), cfg.eps_duplicate);
    for (VertexId v = 0; v < 100; ++v) {
        EXPECT_EQ(m.duplicate_group(v), oracle[v]) << "vertex " << v;
    }
}

TEST(MarkOverlaps, CleanCubeAllNone) {
    SurfaceMesh m = make_cube();
    RepairConfig cfg;
    mark_duplicates(m, cfg);
    const auto marks = mark_overlapping_edges(m, cfg);
    EXPECT_EQ(marks.degenerate, 0);
    EXPECT_EQ(marks.same_endpoints, 0);
    EXPECT_EQ(marks.collinear_distinct, 0);
}

TEST(MarkOverlaps, SameEndpointGroups) {
    // two edges converging at duplicated vertices
    SurfaceMesh m;
    m.add_vertex({0, 0, 0});      // 0
    m.add_vertex({1, 0, 0});      // 1
    m.add_vertex({0.5, 1, 0});    // 2
    m.add_vertex({0, 0, 0});      // 3 dup of 0
    m.add_vertex({1, 0, 0});      // 4 dup of 1
    m.add_vertex({0.5, -1, 0});   // 5
    m.add_face(0, 1, 2);
    m.add_face(4, 3, 5);  // shares the duplicated edge endpoints
    m.rebuild_connectivity();
    RepairConfig cfg;
    mark_duplicates(m, cfg);
    const auto marks = mark_overlapping_edges(m, cfg);
    EXPECT_EQ(marks.same_endpoints, 2);
    const EdgeId e1 = m.find_edge(0, 1);
    const EdgeId e2 = m.find_edge(3, 4);
    ASSERT_NE(e1, kInvalidId);
    ASSERT_NE(e2, kInvalidId);
    EXPECT_EQ(m.edge(e1).mark, OverlapClass::SameEndpoints);
    EXPECT_EQ(m.edge(e2).mark, OverlapClass::SameEndpoints);
    ASSERT_EQ(m.edge(e1).overlap_partners.size(), 1u);
    EXPECT_EQ(m.edge(e1).overlap_partners[0], e2);
}

TEST(MarkOverlaps, CollinearDistinct) {
    SurfaceMesh m;
    m.add_vertex({0, 0, 0});      // 0
    m.add_vertex({2, 0, 0});      // 1
    m.add_vertex({1, 2, 0});      // 2
    m.add_vertex({0.5, 0, 0});    // 3
    m.add_vertex({1.5, 0, 0});    // 4
    m.add_vertex({1, -2, 0});     // 5
    m.add_face(0, 1, 2);
    m.add_face(4, 3, 5);
    m.rebuild_connectivity();
    RepairConfig cfg;
    mark_duplicates(m, cfg);
    const auto marks = mark_overlapping_edges(m, cfg);
    EXPECT_EQ(marks.collinear_distinct, 2);
    EXPECT_EQ(m.edge(m.find_edge(0, 1)).mark, OverlapClass::CollinearDistinct);
    EXPECT_EQ(m.edge(m.find_edge(3, 4)).mark, OverlapClass::CollinearDistinct);
}

TEST(MarkOverlaps, DegenerateEdge) {
    SurfaceMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({0.0002, 0, 0});  // within eps_dup of vertex 0
    m.add_vertex({1, 1, 0});
    m.add_face(0, 1, 2);
    m.rebuild_connectivity();
    RepairConfig cfg;
    mark_duplicates(m, cfg);
    const auto marks = mark_overlapping_edges(m, cfg);
    EXPECT_EQ(marks.degenerate, 1);
    EXPECT_EQ(m.edge(m.find_edge(0, 1)).mark, OverlapClass::Degenerate);
}

// Two unit squares side by side whose shared boundary exists twice,
// once per square, through duplicated corner vertices.
SurfaceMesh two_squares_with_seam() {
    SurfaceMesh m;
    m.add_vertex({0, 0, 0});  // 0
    m.add_vertex({1, 0, 0});  // 1  seam bottom (left copy)
    m.add_vertex({1, 1, 0});  // 2  seam top (left copy)
    m.add_vertex({0, 1, 0});  // 3
    m.add_vertex({1, 0, 0});  // 4  seam bottom (right copy)
    m.add_vertex({2, 0, 0});  // 5
    m.add_vertex({2, 1, 0});  // 6
    m.add_vertex({1, 1, 0});  // 7  seam top (right copy)
    m.add_face(0, 1, 2);
    m.add_face(0, 2, 3);
    m.add_face(4, 5, 6);
    m.add_face(4, 6, 7);
    m.rebuild_connectivity();
    return m;
}

TEST(Stitch, TwoSquaresSeamWelds) {
    SurfaceMesh m = two_squares_with_seam();
    EXPECT_EQ(m.border_halfedge_count(), 8u);
    PreprocessReport rep;
    const int stitched = stitch_pseudo_holes(m, default_cfg(), &rep);
    EXPECT_EQ(stitched, 1);  // one matching border pair on the seam
    EXPECT_EQ(m.face_count(), 4u);
    // no border remains along x=1
    for (HalfedgeId h : m.border_halfedges()) {
        const Point3 a = m.point(m.halfedge(h).origin);
        const Point3 b = m.point(m.target(h));
        EXPECT_FALSE(a.x == 1.0 && b.x == 1.0);
    }
    EXPECT_EQ(m.border_halfedge_count(), 6u);
}

// A two-edge slit inside a strip: the middle vertex of the path is
// duplicated so the slit has matching border pairs on both sides
// (seam interior duplicated, endpoints shared).
SurfaceMesh pinched_slit_strip() {
    SurfaceMesh m;
    m.add_vertex({0, 0, 0});    // 0
    m.add_vertex({1, 0, 0});    // 1
    m.add_vertex({2, 0, 0});    // 2
    m.add_vertex({2, 2, 0});    // 3
    m.add_vertex({1, 2, 0});    // 4
    m.add_vertex({0, 2, 0});    // 5
    m.add_vertex({1, 1, 0});    // 6 path middle, left copy
    m.add_vertex({1, 1, 0});    // 7 path middle, right copy
    // left of the slit x<1 uses 6, right uses 7; slit path 1 -> mid -> 4
    m.add_face(0, 1, 6);
    m.add_face(0, 6, 5);
    m.add_face(5, 6, 4);
    m.add_face(1, 2, 7);
    m.add_face(2, 3, 7);
    m.add_face(7, 3, 4);
    m.rebuild_connectivity();
    return m;
}

TEST(Stitch, PinchedSlitWeldsBothPairs) {
    SurfaceMesh m = pinched_slit_strip();
    EXPECT_EQ(m.border_halfedge_count(), 10u);  // outer rim 6 + slit 4
    PreprocessReport rep;
    const int stitched = stitch_pseudo_holes(m, default_cfg(), &rep);
    EXPECT_EQ(stitched, 2);
    EXPECT_EQ(m.border_halfedge_count(), 6u);  // only the outer rim remains
    EXPECT_EQ(m.face_count(), 6u);
}

TEST(Stitch, ClosedCubeNothingToDo) {
    SurfaceMesh m = make_cube();
    EXPECT_EQ(stitch_pseudo_holes(m, default_cfg(), nullptr), 0);
}

TEST(Stitch, TrueHoleWiderThanEpsIsPreserved) {
    // gap of 10 * eps_dup between the two squares: a true hole, no stitch
    SurfaceMesh m;
    const double gap = 0.01;
    m.add_vertex({0, 0, 0});
    m.add_vertex({1, 0, 0});
    m.add_vertex({1, 1, 0});
    m.add_vertex({0, 1, 0});
    m.add_vertex({1 + gap, 0, 0});
    m.add_vertex({2, 0, 0});
    m.add_vertex({2, 1, 0});
    m.add_vertex({1 + gap, 1, 0});
    m.add_face(0, 1, 2);
    m.add_face(0, 2, 3);
    m.add_face(4, 5, 6);
    m.add_face(4, 6, 7);
    m.rebuild_connectivity();
    EXPECT_EQ(stitch_pseudo_holes(m, default_cfg(), nullptr), 0);
    EXPECT_EQ(m.border_halfedge_count(), 8u);
}

TEST(Stitch, NeverMovesVerticesFar) {
    SurfaceMesh m = two_squares_with_seam();
    const auto before = m.points();
    stitch_pseudo_holes(m, default_cfg(), nullptr);
    ASSERT_EQ(m.points().size(), before.size());
    for (size_t v = 0; v < before.size(); ++v) {
        EXPECT_EQ(m.point(static_cast<VertexId>(v)).x, before[v].x);
        EXPECT_EQ(m.point(static_cast<VertexId>(v)).y, before[v].y);
        EXPECT_EQ(m.point(static_cast<VertexId>(v)).z, before[v].z);
    }
    // welded corners reference vertices within eps_dup of the originals
    RepairConfig cfg;
    for (const auto& f : m.faces()) {
        for (VertexId v : f) {
            EXPECT_LE(distance(m.point(v), m.point(m.duplicate_group(v))), cfg.eps_duplicate);
        }
    }
}

TEST(SelfIntersect, DisjointTrianglesUntouched) {
    SurfaceMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({1, 0, 0});
    m.add_vertex({0, 1, 0});
    m.add_vertex({5, 0, 0});
    m.add_vertex({6, 0, 0});
    m.add_vertex({5, 1, 0});
    m.add_face(0, 1, 2);
    m.add_face(3, 4, 5);
    m.rebuild_connectivity();
    PreprocessReport rep;
    resolve_self_intersections(m, default_cfg(), rep);
    EXPECT_EQ(rep.self_intersection_pairs, 0);
    EXPECT_EQ(m.face_count(), 2u);
}

TEST(SelfIntersect, SharedEdgeIsNotIntersection) {
    SurfaceMesh m;
    m.add_vertex({0, 0, 0});
    m.add_vertex({1, 0, 0});
    m.add_vertex({0.5, 1, 0});
    m.add_vertex({0.5, 0.5, 1});
    m.add_face(0, 1, 2);
    m.add_face(1, 0, 3);
    m.rebuild_connectivity();
    PreprocessReport rep;
    resolve_self_intersections(m, default_cfg(), rep);
    EXPECT_EQ(rep.self_intersection_pairs, 0);
}

TEST(SelfIntersect, PerpendicularCrossConservesArea) {
    SurfaceMesh m;
    // horizontal triangle in z=0
    m.add_vertex({-1, -1, 0});
    m.add_vertex({2, -1, 0});
    m.add_vertex({0.5, 2, 0});
    // vertical triangle in y=0 crossing through the first one's interior
    m.add_vertex({0, 0, -1});
    m.add_vertex({1, 0, -1});
    m.add_vertex({0.5, 0, 1});
    m.add_face(0, 1, 2);
    m.add_face(3, 4, 5);
    m.rebuild_connectivity();

    const double area0 = m.face_area(0);
    const double area1 = m.face_area(1);

    PreprocessReport rep;
    resolve_self_intersections(m, default_cfg(), rep);
    EXPECT_EQ(rep.self_intersection_pairs, 1);
    EXPECT_GT(m.face_count(), 2u);

    // classify sub-faces by supporting plane and sum areas
    double sum_z0 = 0.0, sum_y0 = 0.0;
    for (FaceId f = 0; f < static_cast<FaceId>(m.face_count()); ++f) {
        const Triangle3 t = m.face_triangle(f);
        bool on_z0 = std::abs(t.a.z) < 1e-9 && std::abs(t.b.z) < 1e-9 && std::abs(t.c.z) < 1e-9;
        if (on_z0) sum_z0 += area(t);
        else sum_y0 += area(t);
    }
    EXPECT_NEAR(sum_z0, area0, 1e-9);
    EXPECT_NEAR(sum_y0, area1, 1e-9);

    // every added vertex lies on one of the two original planes
    for (VertexId v = 6; v < static_cast<VertexId>(m.vertex_count()); ++v) {
        const Point3 p = m.point(v);
        EXPECT_TRUE(std::abs(p.z) < 1e-9 || std::abs(p.y) < 1e-9);
    }
    EXPECT_TRUE(m.check_valid().empty()) << m.check_valid();
}

TEST(SelfIntersect, ResolutionIsIdempotent) {
    SurfaceMesh m;
    m.add_vertex({-1, -1, 0});
    m.add_vertex({2, -1, 0});
    m.add_vertex({0.5, 2, 0});
    m.add_vertex({0, 0, -1});
    m.add_vertex({1, 0, -1});
    m.add_vertex({0.5, 0, 1});
    m.add_face(0, 1, 2);
    m.add_face(3, 4, 5);
    m.rebuild_connectivity();

    PreprocessReport rep1;
    resolve_self_intersections(m, default_cfg(), rep1);
    EXPECT_EQ(rep1.self_intersection_pairs, 1);
    const auto faces_after = m.faces();

    PreprocessReport rep2;
    resolve_self_intersections(m, default_cfg(), rep2);
    EXPECT_EQ(rep2.self_intersection_pairs, 0);
    EXPECT_EQ(m.faces(), faces_after);
}

TEST(Preprocess, PipelineIsIdempotent) {
    SurfaceMesh m = pinched_slit_strip();
    preprocess(m, default_cfg());
    const auto faces_once = m.faces();
    const auto points_once = m.points();
    preprocess(m, default_cfg());
    EXPECT_EQ(m.faces(), faces_once);
    EXPECT_EQ(m.points().size(), points_once.size());
}

TEST(Preprocess, StitchFixedPointHasNoMatchingBorders) {
    SurfaceMesh m = pinched_slit_strip();
    preprocess(m, default_cfg());
    const auto borders = m.border_halfedges();
    for (HalfedgeId h1 : borders) {
        for (HalfedgeId h2 : borders) {
            if (h1 == h2) continue;
            const bool match =
                m.duplicate_group(m.halfedge(h1).origin) == m.duplicate_group(m.target(h2)) &&
                m.duplicate_group(m.target(h1)) == m.duplicate_group(m.halfedge(h2).origin);
            EXPECT_FALSE(match && m.duplicate_group(m.halfedge(h1).origin) !=
                                      m.duplicate_group(m.target(h1)));
        }
    }
}

}  // namespace
}  // namespace lodfill
