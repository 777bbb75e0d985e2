#pragma once

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "lodfill/geometry.hpp"

namespace lodfill {

/// Uniform hash grid over axis-aligned boxes. Used as a broad phase for
/// face/edge pair queries; results are candidate ids, callers do the
/// exact tests.
class SpatialGrid {
public:
    explicit SpatialGrid(double cell_size) : cell_(cell_size > 0.0 ? cell_size : 1.0) {}

    void insert(int id, const BBox3& box) {
        if (!box.valid()) return;
        for_cells(box, [&](std::int64_t key) { cells_[key].push_back(id); });
        if (static_cast<size_t>(id) >= boxes_.size()) boxes_.resize(id + 1);
        boxes_[id] = box;
    }

    /// Candidate ids whose cells overlap `box`; may contain duplicates
    /// filtered here, and false positives (cell-level only).
    std::vector<int> query(const BBox3& box) const {
        std::vector<int> out;
        if (!box.valid()) return out;
        for_cells(box, [&](std::int64_t key) {
            auto it = cells_.find(key);
            if (it == cells_.end()) return;
            for (int id : it->second) {
                if (boxes_[id].overlaps(box)) out.push_back(id);
            }
        });
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    template <typename F>
    void for_cells(const BBox3& box, F&& fn) const {
        const auto lo = cell_index(box.lo);
        const auto hi = cell_index(box.hi);
        for (std::int64_t x = lo[0]; x <= hi[0]; ++x)
            for (std::int64_t y = lo[1]; y <= hi[1]; ++y)
                for (std::int64_t z = lo[2]; z <= hi[2]; ++z)
                    fn(hash_cell(x, y, z));
    }

    std::array<std::int64_t, 3> cell_index(const Point3& p) const {
        return {static_cast<std::int64_t>(std::floor(p.x / cell_)),
                static_cast<std::int64_t>(std::floor(p.y / cell_)),
                static_cast<std::int64_t>(std::floor(p.z / cell_))};
    }

    static std::int64_t hash_cell(std::int64_t x, std::int64_t y, std::int64_t z) {
        return x * 73856093 ^ y * 19349663 ^ z * 83492791;
    }

    double cell_;
    std::unordered_map<std::int64_t, std::vector<int>> cells_;
    std::vector<BBox3> boxes_;
};

}  // namespace lodfill
