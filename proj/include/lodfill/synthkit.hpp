#pragma once

#include <cmath>
#include <functional>
#include <tuple>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lodfill/surface_mesh.hpp"

namespace lodfill::synthkit {

class RecipeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sides carry their own lattice grid; cell (i,j) and grid point (i,j)
// are addressed in side-local coordinates.
enum class Side { Bottom, Top, XMin, XMax, YMin, YMax, RoofSouth, RoofNorth, Torus };

struct Defect {
    enum class Kind {
        RemovePatch,      // cells [i0..i1] x [j0..j1] of a side
        DuplicateSeam,    // pinched vertex split along a lattice path
        OverlapPair,      // hole-rim edge re-pointed at duplicated vertices
        NonmanifoldFin,   // two fin faces on a hole-rim edge
        Sliver,           // coincident sliver face over kept faces
        SelfIntersectFin, // free quad crossing the top side
        SplitRing,        // hole rim covered by a coincident second component
    };
    Kind kind{};
    char box = 'a';  // for the two-box base
    Side side = Side::Top;
    int i0 = 0, j0 = 0, i1 = 0, j1 = 0;
    bool horizontal = true;                   // lattice edge orientation
    std::vector<std::pair<int, int>> path;    // DuplicateSeam
    double p0 = 0, p1 = 0, p2 = 0, p3 = 0;    // SelfIntersectFin params
};

struct Recipe {
    enum class Base { Box, House, Torus, TwoBoxes };
    Base base = Base::Box;
    // box / house / two-box dimensions and divisions
    double sx = 1, sy = 1, sz = 1;
    int nx = 1, ny = 1, nz = 1;
    double ridge = 0.5;  // house: ridge height above the walls
    double gap = 0.5;    // two-box separation
    // torus
    double torus_R = 1.0, torus_r = 0.3;
    int torus_nu = 12, torus_nv = 8;
    unsigned seed = 0;
    std::vector<Defect> defects;
};

struct GroundTruth {
    int true_holes = 0;
    std::vector<std::vector<VertexId>> hole_rings;  // expected vertex sets, each sorted
    int expected_stitched_pairs = 0;
    int pseudo_candidates_min = 0;
    bool expect_unclosable = false;
    int self_intersection_pairs_min = 0;
    bool genus_limitation = false;
    bool split_ring_limitation = false;
    bool watertight_after_repair = true;
    int expected_exit = 0;
};

struct Generated {
    SurfaceMesh mesh;
    GroundTruth truth;
};

namespace detail {

// Mutable mesh-under-construction: faces can be tombstoned before the
// final SurfaceMesh is assembled, keeping anchor ids stable meanwhile.
struct Build {
    std::vector<Point3> points;
    std::vector<std::array<VertexId, 3>> faces;
    std::vector<char> removed;

    VertexId add_point(const Point3& p) {
        points.push_back(p);
        return static_cast<VertexId>(points.size()) - 1;
    }
    FaceId add_face(VertexId a, VertexId b, VertexId c) {
        faces.push_back({a, b, c});
        removed.push_back(0);
        return static_cast<FaceId>(faces.size()) - 1;
    }
};

struct SideGrid {
    int ni = 0, nj = 0;                       // cell counts
    std::vector<VertexId> verts;              // (ni+1) x (nj+1) lattice, row-major in i
    std::vector<std::pair<FaceId, FaceId>> cells;

    VertexId vertex(int i, int j) const {
        if (i < 0 || j < 0 || i > ni || j > nj) throw RecipeError("lattice point out of range");
        return verts[i * (nj + 1) + j];
    }
    std::pair<FaceId, FaceId> cell(int i, int j) const {
        if (i < 0 || j < 0 || i >= ni || j >= nj) throw RecipeError("cell out of range");
        return cells[i * nj + j];
    }
};

struct BaseMesh {
    Build build;
    std::map<std::pair<char, Side>, SideGrid> sides;
    Vec3 side_normal(Side s) const {
        switch (s) {
            case Side::Bottom: return {0, 0, -1};
            case Side::Top: return {0, 0, 1};
            case Side::XMin: return {-1, 0, 0};
            case Side::XMax: return {1, 0, 0};
            case Side::YMin: return {0, -1, 0};
            case Side::YMax: return {0, 1, 0};
            default: return {0, 0, 1};
        }
    }
};

// grid side helper: positions parameterized over (i,j), faces wound so
// the normal points along `outward`
inline SideGrid make_grid_side(Build& b, int ni, int nj,
                               const std::function<Point3(int, int)>& pos, const Vec3& outward,
                               std::map<std::tuple<long, long, long>, VertexId>* lattice_cache,
                               double quant = 1e7) {
    SideGrid g;
    g.ni = ni;
    g.nj = nj;
    g.verts.resize((ni + 1) * (nj + 1));
    auto key_of = [&](const Point3& p) {
        return std::make_tuple(std::lround(p.x * quant), std::lround(p.y * quant),
                               std::lround(p.z * quant));
    };
    for (int i = 0; i <= ni; ++i) {
        for (int j = 0; j <= nj; ++j) {
            const Point3 p = pos(i, j);
            VertexId v;
            const auto key = key_of(p);
            auto it = lattice_cache->find(key);
            if (it != lattice_cache->end()) {
                v = it->second;
            } else {
                v = b.add_point(p);
                lattice_cache->emplace(key, v);
            }
            g.verts[i * (nj + 1) + j] = v;
        }
    }
    g.cells.resize(ni * nj);
    for (int i = 0; i < ni; ++i) {
        for (int j = 0; j < nj; ++j) {
            const VertexId v00 = g.vertex(i, j), v10 = g.vertex(i + 1, j);
            const VertexId v11 = g.vertex(i + 1, j + 1), v01 = g.vertex(i, j + 1);
            // orient by the requested outward normal
            const Triangle3 t{b.points[v00], b.points[v10], b.points[v11]};
            FaceId f1, f2;
            if (dot(cross(t.b - t.a, t.c - t.a), outward) >= 0) {
                f1 = b.add_face(v00, v10, v11);
                f2 = b.add_face(v00, v11, v01);
            } else {
                f1 = b.add_face(v00, v11, v10);
                f2 = b.add_face(v00, v01, v11);
            }
            g.cells[i * nj + j] = {f1, f2};
        }
    }
    return g;
}

inline void build_box(BaseMesh& out, char box, const Point3& origin, double sx, double sy,
                      double sz, int nx, int ny, int nz,
                      std::map<std::tuple<long, long, long>, VertexId>& cache) {
    Build& b = out.build;
    auto at = [&](double x, double y, double z) {
        return Point3{origin.x + x, origin.y + y, origin.z + z};
    };
    const double dx = sx / nx, dy = sy / ny, dz = sz / nz;
    out.sides[{box, Side::Bottom}] = make_grid_side(
        b, nx, ny, [&](int i, int j) { return at(i * dx, j * dy, 0); }, {0, 0, -1}, &cache);
    out.sides[{box, Side::Top}] = make_grid_side(
        b, nx, ny, [&](int i, int j) { return at(i * dx, j * dy, sz); }, {0, 0, 1}, &cache);
    out.sides[{box, Side::YMin}] = make_grid_side(
        b, nx, nz, [&](int i, int j) { return at(i * dx, 0, j * dz); }, {0, -1, 0}, &cache);
    out.sides[{box, Side::YMax}] = make_grid_side(
        b, nx, nz, [&](int i, int j) { return at(i * dx, sy, j * dz); }, {0, 1, 0}, &cache);
    out.sides[{box, Side::XMin}] = make_grid_side(
        b, ny, nz, [&](int i, int j) { return at(0, i * dy, j * dz); }, {-1, 0, 0}, &cache);
    out.sides[{box, Side::XMax}] = make_grid_side(
        b, ny, nz, [&](int i, int j) { return at(sx, i * dy, j * dz); }, {1, 0, 0}, &cache);
}

inline void build_house(BaseMesh& out, const Recipe& r,
                        std::map<std::tuple<long, long, long>, VertexId>& cache) {
    Build& b = out.build;
    const double wz = r.sz;             // wall height
    const double rz = wz + r.ridge;     // ridge height
    const double dx = r.sx / r.nx, dy = r.sy / r.ny, dz = r.sz / r.nz;
    out.sides[{'a', Side::Bottom}] = make_grid_side(
        b, r.nx, r.ny, [&](int i, int j) { return Point3{i * dx, j * dy, 0}; }, {0, 0, -1},
        &cache);
    out.sides[{'a', Side::YMin}] = make_grid_side(
        b, r.nx, r.nz, [&](int i, int j) { return Point3{i * dx, 0, j * dz}; }, {0, -1, 0},
        &cache);
    out.sides[{'a', Side::YMax}] = make_grid_side(
        b, r.nx, r.nz, [&](int i, int j) { return Point3{i * dx, r.sy, j * dz}; }, {0, 1, 0},
        &cache);
    out.sides[{'a', Side::XMin}] = make_grid_side(
        b, r.ny, r.nz, [&](int i, int j) { return Point3{0, i * dy, j * dz}; }, {-1, 0, 0},
        &cache);
    out.sides[{'a', Side::XMax}] = make_grid_side(
        b, r.ny, r.nz, [&](int i, int j) { return Point3{r.sx, i * dy, j * dz}; }, {1, 0, 0},
        &cache);
    // roof slopes up to the ridge at y = sy/2
    out.sides[{'a', Side::RoofSouth}] = make_grid_side(
        b, r.nx, 1,
        [&](int i, int j) {
            return j == 0 ? Point3{i * dx, 0, wz} : Point3{i * dx, r.sy / 2, rz};
        },
        {0, -1, 1}, &cache);
    out.sides[{'a', Side::RoofNorth}] = make_grid_side(
        b, r.nx, 1,
        [&](int i, int j) {
            return j == 0 ? Point3{i * dx, r.sy, wz} : Point3{i * dx, r.sy / 2, rz};
        },
        {0, 1, 1}, &cache);
    // gables: fan from the ridge end over the wall-top lattice
    for (double x : {0.0, r.sx}) {
        const Vec3 outward = x == 0.0 ? Vec3{-1, 0, 0} : Vec3{1, 0, 0};
        std::vector<VertexId> rim;
        for (int j = 0; j <= r.ny; ++j) {
            const Point3 p{x, j * dy, wz};
            const auto key = std::make_tuple(std::lround(p.x * 1e7), std::lround(p.y * 1e7),
                                             std::lround(p.z * 1e7));
            rim.push_back(cache.at(key));
        }
        const Point3 ridge_pt{x, r.sy / 2, rz};
        const auto rkey = std::make_tuple(std::lround(ridge_pt.x * 1e7),
                                          std::lround(ridge_pt.y * 1e7),
                                          std::lround(ridge_pt.z * 1e7));
        VertexId ridge_v;
        auto it = cache.find(rkey);
        if (it != cache.end()) ridge_v = it->second;
        else {
            ridge_v = b.add_point(ridge_pt);
            cache.emplace(rkey, ridge_v);
        }
        for (int j = 0; j < r.ny; ++j) {
            const Triangle3 t{b.points[rim[j]], b.points[rim[j + 1]], b.points[ridge_v]};
            if (dot(cross(t.b - t.a, t.c - t.a), outward) >= 0) {
                b.add_face(rim[j], rim[j + 1], ridge_v);
            } else {
                b.add_face(rim[j + 1], rim[j], ridge_v);
            }
        }
    }
}

inline void build_torus(BaseMesh& out, const Recipe& r) {
    Build& b = out.build;
    SideGrid g;
    g.ni = r.torus_nu;
    g.nj = r.torus_nv;
    std::vector<VertexId> ring(r.torus_nu * r.torus_nv);
    for (int i = 0; i < r.torus_nu; ++i) {
        const double a = 2.0 * M_PI * i / r.torus_nu;
        for (int j = 0; j < r.torus_nv; ++j) {
            const double t = 2.0 * M_PI * j / r.torus_nv;
            ring[i * r.torus_nv + j] =
                b.add_point({(r.torus_R + r.torus_r * std::cos(t)) * std::cos(a),
                             (r.torus_R + r.torus_r * std::cos(t)) * std::sin(a),
                             r.torus_r * std::sin(t)});
        }
    }
    auto vid = [&](int i, int j) {
        return ring[(i % r.torus_nu) * r.torus_nv + (j % r.torus_nv)];
    };
    // lattice with wraparound; the SideGrid stores one extra row/column
    // referencing the wrapped vertices so cell/vertex addressing works
    g.verts.resize((g.ni + 1) * (g.nj + 1));
    for (int i = 0; i <= g.ni; ++i) {
        for (int j = 0; j <= g.nj; ++j) g.verts[i * (g.nj + 1) + j] = vid(i, j);
    }
    g.cells.resize(g.ni * g.nj);
    for (int i = 0; i < g.ni; ++i) {
        for (int j = 0; j < g.nj; ++j) {
            const FaceId f1 = b.add_face(vid(i, j), vid(i + 1, j), vid(i + 1, j + 1));
            const FaceId f2 = b.add_face(vid(i, j), vid(i + 1, j + 1), vid(i, j + 1));
            g.cells[i * g.nj + j] = {f1, f2};
        }
    }
    out.sides[{'a', Side::Torus}] = g;
}

}  // namespace detail

Recipe parse_recipe(const std::string& text);
Generated generate(const Recipe& recipe);

namespace detail {

inline const SideGrid& grid_of(const BaseMesh& base, char box, Side side) {
    const auto it = base.sides.find({box, side});
    if (it == base.sides.end()) throw RecipeError("side not present on this base shape");
    return it->second;
}

// faces of the cells strictly on the clockwise side of the path at an
// interior path vertex, looking along the travel direction
inline std::vector<FaceId> right_side_faces(const BaseMesh& base, const SideGrid& g,
                                            std::pair<int, int> prev, std::pair<int, int> at,
                                            std::pair<int, int> next) {
    const double a_out = std::atan2(static_cast<double>(next.second - at.second),
                                    static_cast<double>(next.first - at.first));
    const double a_back = std::atan2(static_cast<double>(prev.second - at.second),
                                     static_cast<double>(prev.first - at.first));
    auto cw_delta = [&](double x) {
        double d = std::fmod(a_out - x, 2.0 * M_PI);
        if (d < 0) d += 2.0 * M_PI;
        return d;
    };
    std::vector<FaceId> out;
    const double limit = cw_delta(a_back);
    for (int di = -1; di <= 0; ++di) {
        for (int dj = -1; dj <= 0; ++dj) {
            const int ci = at.first + di, cj = at.second + dj;
            if (ci < 0 || cj < 0 || ci >= g.ni || cj >= g.nj) continue;
            const double ang = std::atan2(dj + 0.5, di + 0.5);
            const double d = cw_delta(ang);
            if (d > 1e-9 && d < limit - 1e-9) {
                const auto [f1, f2] = g.cell(ci, cj);
                out.push_back(f1);
                out.push_back(f2);
            }
        }
    }
    (void)base;
    return out;
}

struct EdgeRef {
    VertexId a = kInvalidId, b = kInvalidId;
};

inline EdgeRef lattice_edge(const SideGrid& g, int i, int j, bool horizontal) {
    EdgeRef e;
    e.a = g.vertex(i, j);
    e.b = horizontal ? g.vertex(i + 1, j) : g.vertex(i, j + 1);
    return e;
}

// kept faces that use the undirected edge (a,b)
inline std::vector<FaceId> faces_on_edge(const Build& b, VertexId a, VertexId v) {
    std::vector<FaceId> out;
    for (FaceId f = 0; f < static_cast<FaceId>(b.faces.size()); ++f) {
        if (b.removed[f]) continue;
        const auto& fc = b.faces[f];
        bool has_a = false, has_b = false;
        for (VertexId x : fc) {
            has_a |= x == a;
            has_b |= x == v;
        }
        if (has_a && has_b) out.push_back(f);
    }
    return out;
}

}  // namespace detail

/*
 * Deterministic fixture generator: a clean base solid plus an ordered
 * list of injected defects, with the ground truth derived from the
 * construction itself (which faces were removed from the clean
 * manifold, which defects are documented limitations).
 */
inline Generated generate(const Recipe& recipe) {
    using namespace detail;
    BaseMesh base;
    std::map<std::tuple<long, long, long>, VertexId> cache;
    switch (recipe.base) {
        case Recipe::Base::Box:
            build_box(base, 'a', {0, 0, 0}, recipe.sx, recipe.sy, recipe.sz, recipe.nx, recipe.ny,
                      recipe.nz, cache);
            break;
        case Recipe::Base::House:
            build_house(base, recipe, cache);
            break;
        case Recipe::Base::Torus:
            build_torus(base, recipe);
            break;
        case Recipe::Base::TwoBoxes: {
            build_box(base, 'a', {0, 0, 0}, recipe.sx, recipe.sy, recipe.sz, recipe.nx, recipe.ny,
                      recipe.nz, cache);
            std::map<std::tuple<long, long, long>, VertexId> cache_b;  // no vertex sharing
            build_box(base, 'b', {recipe.sx + recipe.gap, 0, 0}, recipe.sx, recipe.sy, recipe.sz,
                      recipe.nx, recipe.ny, recipe.nz, cache_b);
            break;
        }
    }
    Build& b = base.build;
    GroundTruth truth;

    // pass 1: face removals decide the expected hole rims
    for (const auto& d : recipe.defects) {
        if (d.kind != Defect::Kind::RemovePatch && d.kind != Defect::Kind::SplitRing) continue;
        if (d.kind == Defect::Kind::RemovePatch) {
            const SideGrid& g = grid_of(base, d.box, d.side);
            for (int i = d.i0; i <= d.i1; ++i) {
                for (int j = d.j0; j <= d.j1; ++j) {
                    const auto [f1, f2] = g.cell(i, j);
                    b.removed[f1] = 1;
                    b.removed[f2] = 1;
                }
            }
        } else {
            // SplitRing removes the top row of the XMax wall
            const SideGrid& g = grid_of(base, d.box, Side::XMax);
            for (int i = 0; i < g.ni; ++i) {
                const auto [f1, f2] = g.cell(i, g.nj - 1);
                b.removed[f1] = 1;
                b.removed[f2] = 1;
            }
        }
    }

    // expected rims: edges with exactly one kept and one removed face on
    // the clean base (pure lattice combinatorics, independent of the
    // detection machinery)
    {
        std::map<std::pair<VertexId, VertexId>, std::pair<int, int>> edge_count;  // kept, removed
        for (FaceId f = 0; f < static_cast<FaceId>(b.faces.size()); ++f) {
            for (int k = 0; k < 3; ++k) {
                VertexId x = b.faces[f][k], y = b.faces[f][(k + 1) % 3];
                if (x > y) std::swap(x, y);
                auto& cnt = edge_count[{x, y}];
                (b.removed[f] ? cnt.second : cnt.first)++;
            }
        }
        std::map<VertexId, std::vector<VertexId>> adj;
        for (const auto& [e, cnt] : edge_count) {
            if (cnt.first == 1 && cnt.second >= 1) {
                adj[e.first].push_back(e.second);
                adj[e.second].push_back(e.first);
            }
        }
        std::set<VertexId> seen;
        for (const auto& [v, nbrs] : adj) {
            if (seen.count(v)) continue;
            std::vector<VertexId> comp, stack{v};
            seen.insert(v);
            while (!stack.empty()) {
                const VertexId cur = stack.back();
                stack.pop_back();
                comp.push_back(cur);
                for (VertexId w : adj[cur]) {
                    if (seen.insert(w).second) stack.push_back(w);
                }
            }
            std::sort(comp.begin(), comp.end());
            truth.hole_rings.push_back(comp);
        }
        std::sort(truth.hole_rings.begin(), truth.hole_rings.end());
        truth.true_holes = static_cast<int>(truth.hole_rings.size());
    }

    // pass 2: the remaining defects mutate the face/vertex data
    for (const auto& d : recipe.defects) {
        switch (d.kind) {
            case Defect::Kind::RemovePatch:
                break;  // handled above
            case Defect::Kind::DuplicateSeam: {
                const SideGrid& g = grid_of(base, d.box, d.side);
                if (d.path.size() < 3) throw RecipeError("seam path needs >= 3 lattice points");
                for (size_t t = 0; t + 1 < d.path.size(); ++t) {
                    const auto [di, dj] = std::pair{d.path[t + 1].first - d.path[t].first,
                                                    d.path[t + 1].second - d.path[t].second};
                    if (std::abs(di) + std::abs(dj) != 1) {
                        throw RecipeError("seam path must follow lattice edges");
                    }
                }
                for (size_t t = 1; t + 1 < d.path.size(); ++t) {
                    const auto [pi, pj] = d.path[t];
                    if (pi <= 0 || pj <= 0 || pi >= g.ni || pj >= g.nj) {
                        throw RecipeError("seam path interior points must be interior lattice points");
                    }
                }
                for (size_t t = 1; t + 1 < d.path.size(); ++t) {
                    const VertexId v = g.vertex(d.path[t].first, d.path[t].second);
                    const VertexId v2 = b.add_point(b.points[v]);
                    for (FaceId f :
                         right_side_faces(base, g, d.path[t - 1], d.path[t], d.path[t + 1])) {
                        if (b.removed[f]) continue;
                        for (auto& x : b.faces[f]) {
                            if (x == v) x = v2;
                        }
                    }
                }
                truth.expected_stitched_pairs += static_cast<int>(d.path.size()) - 1;
                break;
            }
            case Defect::Kind::OverlapPair: {
                // rim edge re-pointed at a duplicated far endpoint: the two
                // edge copies originate apart and converge at the duplicate
                const SideGrid& g = grid_of(base, d.box, d.side);
                const EdgeRef e = lattice_edge(g, d.i0, d.j0, d.horizontal);
                const auto kept = faces_on_edge(b, e.a, e.b);
                if (kept.size() != 1) {
                    throw RecipeError("overlap-pair edge must border a removed patch");
                }
                const VertexId b2 = b.add_point(b.points[e.b]);
                for (auto& x : b.faces[kept[0]]) {
                    if (x == e.b) x = b2;
                }
                break;
            }
            case Defect::Kind::NonmanifoldFin: {
                const SideGrid& g = grid_of(base, d.box, d.side);
                const EdgeRef e = lattice_edge(g, d.i0, d.j0, d.horizontal);
                if (faces_on_edge(b, e.a, e.b).size() != 1) {
                    throw RecipeError("nonmanifold-fin edge must border a removed patch");
                }
                const Point3 mid = (b.points[e.a] + b.points[e.b]) * 0.5;
                const Vec3 n = base.side_normal(d.side);
                const Vec3 along = normalized(b.points[e.b] - b.points[e.a]);
                const VertexId t1 = b.add_point(mid + n * 0.4 + along * 0.05);
                const VertexId t2 = b.add_point(mid + n * 0.4 - along * 0.05);
                b.add_face(e.a, e.b, t1);
                b.add_face(e.a, e.b, t2);
                truth.pseudo_candidates_min += 2;
                truth.watertight_after_repair = false;
                break;
            }
            case Defect::Kind::Sliver: {
                const SideGrid& g = grid_of(base, d.box, d.side);
                const EdgeRef e = lattice_edge(g, d.i0, d.j0, d.horizontal);
                if (faces_on_edge(b, e.a, e.b).empty()) {
                    throw RecipeError("sliver edge must have kept faces");
                }
                const VertexId a2 = b.add_point(b.points[e.a]);
                const VertexId b2 = b.add_point(b.points[e.b]);
                // apex inside an adjacent cell, on the side's plane
                const Point3 mid = (b.points[e.a] + b.points[e.b]) * 0.5;
                const Vec3 along = normalized(b.points[e.b] - b.points[e.a]);
                const Vec3 inplane = cross(base.side_normal(d.side), along);
                const VertexId w = b.add_point(mid + inplane * 0.2);
                b.add_face(a2, b2, w);
                truth.pseudo_candidates_min += 1;
                truth.watertight_after_repair = false;
                break;
            }
            case Defect::Kind::SelfIntersectFin: {
                const double cx = d.p0, cy = d.p1, hw = d.p2, hh = d.p3;
                const double top = recipe.sz;
                const VertexId v1 = b.add_point({cx - hw, cy, top - hh});
                const VertexId v2 = b.add_point({cx + hw, cy, top - hh});
                const VertexId v3 = b.add_point({cx + hw, cy, top + hh});
                const VertexId v4 = b.add_point({cx - hw, cy, top + hh});
                b.add_face(v1, v2, v3);
                b.add_face(v1, v3, v4);
                truth.self_intersection_pairs_min = 1;
                // the fin's rim survives as an open, unclosable candidate:
                // its collinear stretches are collected (degenerate virtual
                // triangles) while the corners are covered by the fin itself
                truth.expect_unclosable = true;
                truth.watertight_after_repair = false;
                truth.expected_exit = 2;
                break;
            }
            case Defect::Kind::SplitRing: {
                // coincident slab over the whole XMax wall, as a second
                // component: the rim pieces on the wall plane are covered,
                // so the ring cannot close (documented limitation)
                const SideGrid& g = grid_of(base, d.box, Side::XMax);
                const VertexId c00 = b.add_point(b.points[g.vertex(0, 0)]);
                const VertexId c10 = b.add_point(b.points[g.vertex(g.ni, 0)]);
                const VertexId c11 = b.add_point(b.points[g.vertex(g.ni, g.nj)]);
                const VertexId c01 = b.add_point(b.points[g.vertex(0, g.nj)]);
                b.add_face(c00, c10, c11);
                b.add_face(c00, c11, c01);
                truth.true_holes = 0;
                truth.hole_rings.clear();
                truth.expect_unclosable = true;
                truth.split_ring_limitation = true;
                truth.watertight_after_repair = false;
                truth.expected_exit = 2;
                break;
            }
        }
    }

    if (recipe.base == Recipe::Base::Torus && truth.true_holes > 0) {
        truth.genus_limitation = true;
    }

    Generated out;
    for (const auto& p : b.points) out.mesh.add_vertex(p);
    for (FaceId f = 0; f < static_cast<FaceId>(b.faces.size()); ++f) {
        if (!b.removed[f]) out.mesh.add_face(b.faces[f][0], b.faces[f][1], b.faces[f][2]);
    }
    out.mesh.rebuild_connectivity();
    out.truth = truth;
    return out;
}

namespace detail {

inline Side parse_side(const std::string& tok, char* box) {
    std::string s = tok;
    *box = 'a';
    if (s.size() > 2 && s[1] == ':') {
        *box = s[0];
        if (*box != 'a' && *box != 'b') throw RecipeError("box prefix must be a: or b:");
        s = s.substr(2);
    }
    if (s == "bottom") return Side::Bottom;
    if (s == "top") return Side::Top;
    if (s == "xmin") return Side::XMin;
    if (s == "xmax") return Side::XMax;
    if (s == "ymin") return Side::YMin;
    if (s == "ymax") return Side::YMax;
    if (s == "roof-south") return Side::RoofSouth;
    if (s == "roof-north") return Side::RoofNorth;
    if (s == "torus") return Side::Torus;
    throw RecipeError("unknown side: " + tok);
}

}  // namespace detail

/*
 * Line-based recipe text:
 *
 *   base box SX SY SZ NX NY NZ
 *   base house SX SY WALL_H RIDGE_H NX NY NZ
 *   base torus R r NU NV
 *   base twoboxes SX SY SZ NX NY NZ GAP
 *   seed N
 *   remove-patch SIDE I0 J0 I1 J1
 *   duplicate-seam SIDE I,J I,J I,J ...
 *   overlap-pair SIDE I J h|v
 *   nonmanifold-fin SIDE I J h|v
 *   sliver SIDE I J h|v
 *   self-intersect-fin CX CY HALF_W HALF_H
 *   split-ring
 *
 * SIDE is one of bottom top xmin xmax ymin ymax roof-south roof-north
 * torus, optionally prefixed a: or b: for the two-box base. '#' starts
 * a comment.
 */
inline Recipe parse_recipe(const std::string& text) {
    Recipe r;
    std::istringstream in(text);
    std::string line;
    bool have_base = false;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string cmd;
        if (!(ls >> cmd)) continue;
        try {
            if (cmd == "base") {
                std::string kind;
                ls >> kind;
                if (kind == "box") {
                    r.base = Recipe::Base::Box;
                    if (!(ls >> r.sx >> r.sy >> r.sz >> r.nx >> r.ny >> r.nz)) {
                        throw RecipeError("base box needs 6 arguments");
                    }
                } else if (kind == "house") {
                    r.base = Recipe::Base::House;
                    if (!(ls >> r.sx >> r.sy >> r.sz >> r.ridge >> r.nx >> r.ny >> r.nz)) {
                        throw RecipeError("base house needs 7 arguments");
                    }
                } else if (kind == "torus") {
                    r.base = Recipe::Base::Torus;
                    if (!(ls >> r.torus_R >> r.torus_r >> r.torus_nu >> r.torus_nv)) {
                        throw RecipeError("base torus needs 4 arguments");
                    }
                } else if (kind == "twoboxes") {
                    r.base = Recipe::Base::TwoBoxes;
                    if (!(ls >> r.sx >> r.sy >> r.sz >> r.nx >> r.ny >> r.nz >> r.gap)) {
                        throw RecipeError("base twoboxes needs 7 arguments");
                    }
                } else {
                    throw RecipeError("unknown base: " + kind);
                }
                have_base = true;
            } else if (cmd == "seed") {
                ls >> r.seed;
            } else if (cmd == "remove-patch") {
                Defect d;
                d.kind = Defect::Kind::RemovePatch;
                std::string side;
                if (!(ls >> side >> d.i0 >> d.j0 >> d.i1 >> d.j1)) {
                    throw RecipeError("remove-patch needs SIDE I0 J0 I1 J1");
                }
                d.side = detail::parse_side(side, &d.box);
                r.defects.push_back(d);
            } else if (cmd == "duplicate-seam") {
                Defect d;
                d.kind = Defect::Kind::DuplicateSeam;
                std::string side;
                ls >> side;
                d.side = detail::parse_side(side, &d.box);
                std::string pt;
                while (ls >> pt) {
                    const size_t comma = pt.find(',');
                    if (comma == std::string::npos) throw RecipeError("seam point must be I,J");
                    d.path.emplace_back(std::stoi(pt.substr(0, comma)),
                                        std::stoi(pt.substr(comma + 1)));
                }
                r.defects.push_back(d);
            } else if (cmd == "overlap-pair" || cmd == "nonmanifold-fin" || cmd == "sliver") {
                Defect d;
                d.kind = cmd == "overlap-pair" ? Defect::Kind::OverlapPair
                         : cmd == "nonmanifold-fin" ? Defect::Kind::NonmanifoldFin
                                                    : Defect::Kind::Sliver;
                std::string side, orient;
                if (!(ls >> side >> d.i0 >> d.j0 >> orient)) {
                    throw RecipeError(cmd + " needs SIDE I J h|v");
                }
                d.side = detail::parse_side(side, &d.box);
                if (orient != "h" && orient != "v") throw RecipeError("orientation must be h or v");
                d.horizontal = orient == "h";
                r.defects.push_back(d);
            } else if (cmd == "self-intersect-fin") {
                Defect d;
                d.kind = Defect::Kind::SelfIntersectFin;
                if (!(ls >> d.p0 >> d.p1 >> d.p2 >> d.p3)) {
                    throw RecipeError("self-intersect-fin needs CX CY HALF_W HALF_H");
                }
                r.defects.push_back(d);
            } else if (cmd == "split-ring") {
                Defect d;
                d.kind = Defect::Kind::SplitRing;
                r.defects.push_back(d);
            } else {
                throw RecipeError("unknown directive: " + cmd);
            }
        } catch (const std::exception& e) {
            throw RecipeError("recipe line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!have_base) throw RecipeError("recipe has no base line");
    return r;
}

}  // namespace lodfill::synthkit
