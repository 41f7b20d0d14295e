#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "lensfield/vec.hpp"

namespace lensfield {

struct Aabb {
    Vec3 lo{std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    void grow(Vec3 p) {
        lo = {std::fmin(lo.x, p.x), std::fmin(lo.y, p.y), std::fmin(lo.z, p.z)};
        hi = {std::fmax(hi.x, p.x), std::fmax(hi.y, p.y), std::fmax(hi.z, p.z)};
    }
    void grow(const Aabb& b) {
        grow(b.lo);
        grow(b.hi);
    }
    Vec3 centroid() const { return (lo + hi) * 0.5; }
    int longest_axis() const {
        Vec3 d = hi - lo;
        if (d.x >= d.y && d.x >= d.z) return 0;
        return d.y >= d.z ? 1 : 2;
    }
    bool contains(const Aabb& b, double slack) const {
        return b.lo.x >= lo.x - slack && b.lo.y >= lo.y - slack && b.lo.z >= lo.z - slack &&
               b.hi.x <= hi.x + slack && b.hi.y <= hi.y + slack && b.hi.z <= hi.z + slack;
    }
};

// Slab test against [tmin, tmax]; relies on IEEE inf semantics for
// axis-parallel rays.
inline bool hit_aabb(const Aabb& box, Vec3 origin, Vec3 inv_dir, double tmin, double tmax) {
    double t0 = (box.lo.x - origin.x) * inv_dir.x;
    double t1 = (box.hi.x - origin.x) * inv_dir.x;
    if (inv_dir.x < 0.0) std::swap(t0, t1);
    tmin = std::fmax(tmin, t0);
    tmax = std::fmin(tmax, t1);
    t0 = (box.lo.y - origin.y) * inv_dir.y;
    t1 = (box.hi.y - origin.y) * inv_dir.y;
    if (inv_dir.y < 0.0) std::swap(t0, t1);
    tmin = std::fmax(tmin, t0);
    tmax = std::fmin(tmax, t1);
    t0 = (box.lo.z - origin.z) * inv_dir.z;
    t1 = (box.hi.z - origin.z) * inv_dir.z;
    if (inv_dir.z < 0.0) std::swap(t0, t1);
    tmin = std::fmax(tmin, t0);
    tmax = std::fmin(tmax, t1);
    return tmin <= tmax;
}

// Median-split BVH over primitive bounding boxes. Leaf ranges are sorted by
// primitive index so the tree layout is fully deterministic.
class Bvh {
public:
    struct Node {
        Aabb box;
        int left = -1, right = -1;  // internal children
        int first = 0, count = 0;   // leaf range into order()
        bool is_leaf() const { return count > 0; }
    };

    void build(const std::vector<Aabb>& boxes, int max_leaf_size = 4) {
        nodes_.clear();
        order_.resize(boxes.size());
        std::iota(order_.begin(), order_.end(), 0);
        if (boxes.empty())
            return;
        nodes_.reserve(boxes.size() * 2);
        build_node(boxes, 0, static_cast<int>(boxes.size()), max_leaf_size);
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<int>& order() const { return order_; }
    bool empty() const { return nodes_.empty(); }

    // Calls visit(prim_index, tmax&) for every primitive in a leaf the ray
    // touches; visit may shrink tmax to prune farther nodes.
    template <typename Visit>
    void traverse(Vec3 origin, Vec3 dir, double tmin, double& tmax, Visit&& visit) const {
        if (nodes_.empty())
            return;
        Vec3 inv{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
        int stack[64];
        int top = 0;
        stack[top++] = 0;
        while (top > 0) {
            const Node& node = nodes_[stack[--top]];
            if (!hit_aabb(node.box, origin, inv, tmin, tmax))
                continue;
            if (node.is_leaf()) {
                for (int i = node.first; i < node.first + node.count; ++i)
                    visit(order_[i], tmax);
            } else {
                stack[top++] = node.right;
                stack[top++] = node.left;
            }
        }
    }

private:
    int build_node(const std::vector<Aabb>& boxes, int begin, int end, int max_leaf) {
        int index = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        Aabb bounds;
        Aabb centroid_bounds;
        for (int i = begin; i < end; ++i) {
            bounds.grow(boxes[order_[i]]);
            centroid_bounds.grow(boxes[order_[i]].centroid());
        }
        nodes_[index].box = bounds;
        int count = end - begin;
        if (count <= max_leaf) {
            std::sort(order_.begin() + begin, order_.begin() + end);
            nodes_[index].first = begin;
            nodes_[index].count = count;
            return index;
        }
        int axis = centroid_bounds.longest_axis();
        int mid = begin + count / 2;
        auto key = [&](int prim) {
            Vec3 c = boxes[prim].centroid();
            return axis == 0 ? c.x : (axis == 1 ? c.y : c.z);
        };
        std::nth_element(order_.begin() + begin, order_.begin() + mid,
                         order_.begin() + end, [&](int a, int b) {
                             double ka = key(a), kb = key(b);
                             return ka < kb || (ka == kb && a < b);
                         });
        int left = build_node(boxes, begin, mid, max_leaf);
        int right = build_node(boxes, mid, end, max_leaf);
        nodes_[index].left = left;
        nodes_[index].right = right;
        return index;
    }

    std::vector<Node> nodes_;
    std::vector<int> order_;
};

}  // namespace lensfield
