#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "lodfill/surface_mesh.hpp"

namespace lodfill {

class ObjParseError : public std::runtime_error {
public:
    ObjParseError(size_t line, const std::string& what)
        : std::runtime_error("OBJ line " + std::to_string(line) + ": " + what), line_(line) {}
    size_t line() const { return line_; }

private:
    size_t line_;
};

namespace detail {

inline std::string_view next_token(std::string_view& rest) {
    size_t i = 0;
    while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t' || rest[i] == '\r')) ++i;
    size_t j = i;
    while (j < rest.size() && rest[j] != ' ' && rest[j] != '\t' && rest[j] != '\r') ++j;
    std::string_view tok = rest.substr(i, j - i);
    rest.remove_prefix(j);
    return tok;
}

inline bool parse_double(std::string_view tok, double& out) {
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace detail

/*
 * Wavefront OBJ reader. Supports `v x y z` and `f i j k ...` with
 * 1-based indices; `i/t/n` style references use only the position
 * index. Faces with more than three corners are fan-triangulated around
 * their first corner. Unsupported directives are ignored.
 *
 * Non-manifold input is accepted: edges with more than two incident
 * faces come out with kNonManifoldTwin markers after connectivity
 * rebuild, never as a load failure.
 */
inline SurfaceMesh load_obj(std::string_view text) {
    SurfaceMesh mesh;
    size_t line_no = 0;
    size_t pos = 0;
    std::vector<VertexId> poly;

    while (pos <= text.size()) {
        const size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string_view rest = line;
        const std::string_view head = detail::next_token(rest);
        if (head.empty() || head[0] == '#') continue;

        if (head == "v") {
            double c[3];
            for (int k = 0; k < 3; ++k) {
                const std::string_view tok = detail::next_token(rest);
                if (!detail::parse_double(tok, c[k])) {
                    throw ObjParseError(line_no, "malformed vertex coordinate");
                }
            }
            mesh.add_vertex({c[0], c[1], c[2]});
        } else if (head == "f") {
            poly.clear();
            for (;;) {
                std::string_view tok = detail::next_token(rest);
                if (tok.empty()) break;
                const size_t slash = tok.find('/');
                if (slash != std::string_view::npos) tok = tok.substr(0, slash);
                long idx = 0;
                const char* b = tok.data();
                auto [ptr, ec] = std::from_chars(b, b + tok.size(), idx);
                if (ec != std::errc() || ptr != b + tok.size()) {
                    throw ObjParseError(line_no, "malformed face index");
                }
                if (idx < 1 || idx > static_cast<long>(mesh.vertex_count())) {
                    throw ObjParseError(line_no, "face references out-of-range vertex");
                }
                poly.push_back(static_cast<VertexId>(idx - 1));
            }
            if (poly.size() < 3) throw ObjParseError(line_no, "face needs at least 3 vertices");
            for (size_t k = 1; k + 1 < poly.size(); ++k) {
                mesh.add_face(poly[0], poly[k], poly[k + 1]);
            }
        }
        // everything else (vn, vt, usemtl, o, g, s, l, ...) is ignored
    }

    mesh.rebuild_connectivity();
    return mesh;
}

/*
 * Deterministic OBJ writer: vertices then faces, both in id order,
 * coordinates with 9 significant digits, LF line endings. Duplicate and
 * unreferenced vertices are written as-is; no welding happens here.
 */
inline std::string save_obj(const SurfaceMesh& mesh) {
    std::string out;
    out.reserve(mesh.vertex_count() * 32 + mesh.face_count() * 16);
    char buf[96];
    for (const Point3& p : mesh.points()) {
        const int n = std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", p.x, p.y, p.z);
        out.append(buf, n);
    }
    for (const auto& f : mesh.faces()) {
        const int n = std::snprintf(buf, sizeof buf, "f %d %d %d\n", f[0] + 1, f[1] + 1, f[2] + 1);
        out.append(buf, n);
    }
    return out;
}

}  // namespace lodfill
