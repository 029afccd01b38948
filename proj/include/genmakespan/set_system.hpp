#pragma once

#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace gms {

// Pure incidence structure: which tasks load which resources.
struct SetSystemInstance {
    int n_tasks = 0;
    int n_resources = 0;
    std::vector<std::vector<int>> resource_tasks;  // per resource, sorted task ids
    std::vector<std::vector<int>> task_resources;  // per task, sorted resource ids

    // Builds the inverse lists and validates ids/sortedness.
    static SetSystemInstance from_resource_tasks(int n_tasks,
                                                 std::vector<std::vector<int>> lists);
    void validate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Tasks are integer intervals [lo, hi] over points 0..num_points-1;
// resources are the points.
struct LineGeometry {
    int num_points = 0;
    std::vector<std::pair<int, int>> intervals;
};

// Tasks are the unique tree paths between endpoint pairs; resources are
// the vertices.
struct TreeGeometry {
    int num_vertices = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::pair<int, int>> paths;
};

// Tasks are closed axis-aligned boxes; resources are representative points
// of the arrangement faces, deduplicated by containment signature.
struct RectGeometry {
    struct Rect {
        double x1, y1, x2, y2;  // x1 < x2, y1 < y2
        bool contains(Point p) const {
            return p.x >= x1 && p.x <= x2 && p.y >= y1 && p.y <= y2;
        }
    };
    std::vector<Rect> rects;
};

// Tasks are closed disks; resources as for rectangles.
struct DiskGeometry {
    struct Disk {
        double cx, cy, r;
        bool contains(Point p) const {
            double dx = p.x - cx, dy = p.y - cy;
            return dx * dx + dy * dy <= r * r;
        }
    };
    std::vector<Disk> disks;
};

using GeometryFamily = std::variant<LineGeometry, TreeGeometry, RectGeometry, DiskGeometry>;

enum class FamilyKind { kLine, kTree, kRect, kDisk, kExplicit };

// Marked-resource structure produced by extend(): M contains the dangerous
// set D, and every resource i gets a small cover R_i with
// L_i intersect L(D) included in L(R_i).
struct ExtendResult {
    std::vector<int> marked;              // M, sorted
    std::vector<std::vector<int>> cover;  // R_i per resource, sorted, subset of M
    int lambda = 0;                       // documented |R_i| bound for the family
};

// Uniform 13x13 lattice with spacing side/4 over the square of side 3*side
// concentric with the given cell. Any disk of diameter >= side that
// intersects the cell contains one of these points.
std::vector<Point> q_points(Point cell_min_corner, double side);

class SetSystem {
public:
    static SetSystem materialize(const GeometryFamily& family);
    static SetSystem from_explicit(SetSystemInstance inst);

    const SetSystemInstance& instance() const { return inst_; }
    FamilyKind kind() const { return kind_; }
    const GeometryFamily& family() const;

    // Representative point of a resource (rect/disk families).
    Point rep_point(int resource) const;

    // Documented per-family cover-size bound.
    int lambda() const;

    // dangerous must be a nonempty sorted set of resource ids.
    ExtendResult extend(const std::vector<int>& dangerous) const;

    static constexpr int kLineLambda = 2;
    static constexpr int kTreeLambda = 2;
    static constexpr int kRectLambda = 4;
    // Worst case of the two-case construction: a full grid of q-point sets
    // (10^4 cells x 169 points) plus one more q-point set.
    static constexpr int kFatLambda = 1690169;

private:
    SetSystem() = default;

    void materialize_planar(int n_tasks);

    ExtendResult extend_line(const std::vector<int>& d) const;
    ExtendResult extend_tree(const std::vector<int>& d) const;
    ExtendResult extend_rect(const std::vector<int>& d) const;
    ExtendResult extend_fat(const std::vector<int>& d) const;
    ExtendResult extend_explicit(const std::vector<int>& d) const;

    // Exact signature match, else minimal strict superset, else -1.
    int map_signature(const std::vector<int>& sig) const;
    std::vector<int> signature_at(Point p) const;

    FamilyKind kind_ = FamilyKind::kExplicit;
    std::optional<GeometryFamily> family_;
    SetSystemInstance inst_;
    std::vector<Point> rep_points_;
    std::map<std::vector<int>, int> sig_to_resource_;
};

// Projection onto a task subset. keep must be sorted, unique, in range.
// Resources are preserved (possibly with empty task lists).
struct RestrictResult {
    SetSystemInstance instance;
    std::vector<int> task_map;  // new task id -> old task id
};
RestrictResult restrict_tasks(const SetSystemInstance& sys, const std::vector<int>& keep);

// Block-diagonal combination; resources shared between parts become
// distinct copies.
struct DisjointUnionResult {
    SetSystemInstance instance;
    std::vector<int> task_offset;      // per part
    std::vector<int> resource_offset;  // per part
};
DisjointUnionResult disjoint_union(const std::vector<SetSystemInstance>& parts);

} // namespace gms
