#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "lodfill/geometry.hpp"

namespace lodfill {

/// Static 3-d tree over a point set, built once, queried by radius.
class KdTree3 {
public:
    explicit KdTree3(const std::vector<Point3>& points) : points_(points) {
        index_.resize(points.size());
        std::iota(index_.begin(), index_.end(), 0);
        nodes_.reserve(points.size());
        if (!points.empty()) root_ = build(0, static_cast<int>(points.size()), 0);
    }

    /// Indices of all points within `radius` of `query`, ascending.
    std::vector<int> radius_search(const Point3& query, double radius) const {
        std::vector<int> out;
        if (root_ >= 0) search(root_, query, radius * radius, radius, out);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    struct Node {
        int point;       // index into points_
        int left = -1;
        int right = -1;
        int axis;
    };

    int build(int lo, int hi, int depth) {
        if (lo >= hi) return -1;
        const int axis = depth % 3;
        const int mid = (lo + hi) / 2;
        std::nth_element(index_.begin() + lo, index_.begin() + mid, index_.begin() + hi,
                         [&](int a, int b) {
                             const double ca = coord(points_[a], axis), cb = coord(points_[b], axis);
                             return ca < cb || (ca == cb && a < b);
                         });
        Node node;
        node.point = index_[mid];
        node.axis = axis;
        const int self = static_cast<int>(nodes_.size());
        nodes_.push_back(node);
        nodes_[self].left = build(lo, mid, depth + 1);
        nodes_[self].right = build(mid + 1, hi, depth + 1);
        return self;
    }

    void search(int ni, const Point3& q, double r2, double r, std::vector<int>& out) const {
        const Node& n = nodes_[ni];
        const Point3& p = points_[n.point];
        if (squared_norm(p - q) <= r2) out.push_back(n.point);
        const double delta = coord(q, n.axis) - coord(p, n.axis);
        if (n.left >= 0 && delta <= r) search(n.left, q, r2, r, out);
        if (n.right >= 0 && delta >= -r) search(n.right, q, r2, r, out);
    }

    static double coord(const Point3& p, int axis) {
        return axis == 0 ? p.x : axis == 1 ? p.y : p.z;
    }

    const std::vector<Point3>& points_;
    std::vector<int> index_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace lodfill
