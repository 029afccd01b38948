#include "genmakespan/set_system.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "genmakespan/errors.hpp"
#include "genmakespan/tree_util.hpp"

namespace gms {

SetSystemInstance SetSystemInstance::from_resource_tasks(int n_tasks,
                                                         std::vector<std::vector<int>> lists) {
    SetSystemInstance sys;
    sys.n_tasks = n_tasks;
    sys.n_resources = int(lists.size());
    sys.resource_tasks = std::move(lists);
    sys.task_resources.assign(n_tasks, {});
    for (int i = 0; i < sys.n_resources; ++i) {
        for (int j : sys.resource_tasks[i]) {
            if (j < 0 || j >= n_tasks)
                throw ValidationError("set system: task id out of range");
            sys.task_resources[j].push_back(i);
        }
    }
    sys.validate();
    return sys;
}

void SetSystemInstance::validate() const {
    if (n_tasks < 0 || n_resources < 0) throw ValidationError("set system: negative size");
    if (int(resource_tasks.size()) != n_resources || int(task_resources.size()) != n_tasks)
        throw ValidationError("set system: list count mismatch");
    for (const auto& list : resource_tasks) {
        for (size_t a = 0; a < list.size(); ++a) {
            if (list[a] < 0 || list[a] >= n_tasks)
                throw ValidationError("set system: task id out of range");
            if (a > 0 && list[a] <= list[a - 1])
                throw ValidationError("set system: resource list not sorted unique");
        }
    }
    // Inverse lists must agree exactly with the forward lists.
    std::vector<std::vector<int>> expect(n_tasks);
    for (int i = 0; i < n_resources; ++i)
        for (int j : resource_tasks[i]) expect[j].push_back(i);
    if (expect != task_resources)
        throw ValidationError("set system: task_resources inconsistent with resource_tasks");
}

std::vector<Point> q_points(Point cell_min_corner, double side) {
    if (!(side > 0.0)) throw ArgumentError("q_points: side must be positive");
    std::vector<Point> pts;
    pts.reserve(13 * 13);
    const double step = side / 4.0;
    const double x0 = cell_min_corner.x - side;
    const double y0 = cell_min_corner.y - side;
    for (int a = 0; a < 13; ++a)
        for (int b = 0; b < 13; ++b)
            pts.push_back({x0 + step * a, y0 + step * b});
    return pts;
}

namespace {

SetSystemInstance materialize_line(const LineGeometry& g) {
    if (g.num_points <= 0) throw ValidationError("line: needs at least one point");
    std::vector<std::vector<int>> lists(g.num_points);
    for (int j = 0; j < int(g.intervals.size()); ++j) {
        auto [a, b] = g.intervals[j];
        if (a < 0 || b < a || b >= g.num_points)
            throw ValidationError("line: bad interval " + std::to_string(j));
        for (int i = a; i <= b; ++i) lists[i].push_back(j);
    }
    return SetSystemInstance::from_resource_tasks(int(g.intervals.size()), std::move(lists));
}

SetSystemInstance materialize_tree(const TreeGeometry& g) {
    TreeTopology topo(g.num_vertices, g.edges);  // validates shape
    std::vector<std::vector<int>> lists(g.num_vertices);
    for (int j = 0; j < int(g.paths.size()); ++j) {
        for (int v : topo.path_vertices(g.paths[j].first, g.paths[j].second))
            lists[v].push_back(j);
    }
    for (auto& list : lists) std::sort(list.begin(), list.end());
    return SetSystemInstance::from_resource_tasks(int(g.paths.size()), std::move(lists));
}

} // namespace

SetSystem SetSystem::materialize(const GeometryFamily& family) {
    SetSystem sys;
    sys.family_ = family;
    if (const auto* line = std::get_if<LineGeometry>(&family)) {
        sys.kind_ = FamilyKind::kLine;
        sys.inst_ = materialize_line(*line);
    } else if (const auto* tree = std::get_if<TreeGeometry>(&family)) {
        sys.kind_ = FamilyKind::kTree;
        sys.inst_ = materialize_tree(*tree);
    } else if (const auto* rect = std::get_if<RectGeometry>(&family)) {
        sys.kind_ = FamilyKind::kRect;
        sys.materialize_planar(int(rect->rects.size()));
    } else {
        sys.kind_ = FamilyKind::kDisk;
        sys.materialize_planar(int(std::get<DiskGeometry>(family).disks.size()));
    }
    return sys;
}

// Shared candidate-sweep for the planar families: evaluate candidate points
// in a deterministic order, keep one representative per distinct nonempty
// containment signature.
void SetSystem::materialize_planar(int n_tasks) {
    std::vector<Point> candidates;
    if (kind_ == FamilyKind::kRect) {
        const auto& rects = std::get<RectGeometry>(*family_).rects;
        std::vector<double> xs, ys;
        for (const auto& r : rects) {
            if (!(r.x1 < r.x2) || !(r.y1 < r.y2) || !std::isfinite(r.x1 + r.x2 + r.y1 + r.y2))
                throw ValidationError("rect: corners must be finite with x1<x2, y1<y2");
            xs.push_back(r.x1); xs.push_back(r.x2);
            ys.push_back(r.y1); ys.push_back(r.y2);
        }
        std::sort(xs.begin(), xs.end()); xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        std::sort(ys.begin(), ys.end()); ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        // One candidate per cell of the coordinate grid; cell midpoints hit
        // every arrangement face of closed boxes.
        for (size_t a = 0; a + 1 < xs.size(); ++a)
            for (size_t b = 0; b + 1 < ys.size(); ++b)
                candidates.push_back({(xs[a] + xs[a + 1]) / 2.0, (ys[b] + ys[b + 1]) / 2.0});
    } else {
        const auto& disks = std::get<DiskGeometry>(*family_).disks;
        double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
        bool first = true;
        for (const auto& d : disks) {
            if (!(d.r > 0.0) || !std::isfinite(d.cx + d.cy + d.r))
                throw ValidationError("disk: needs finite center and positive radius");
            if (first) { lo_x = d.cx - d.r; hi_x = d.cx + d.r; lo_y = d.cy - d.r; hi_y = d.cy + d.r; first = false; }
            lo_x = std::min(lo_x, d.cx - d.r); hi_x = std::max(hi_x, d.cx + d.r);
            lo_y = std::min(lo_y, d.cy - d.r); hi_y = std::max(hi_y, d.cy + d.r);
        }
        double eps = 1e-6 * std::hypot(hi_x - lo_x, hi_y - lo_y);
        if (!(eps > 0.0)) eps = 1e-9;
        for (const auto& d : disks) {
            candidates.push_back({d.cx, d.cy});
            // Interior points hugging the boundary catch faces of disks that
            // nest without their circles crossing.
            candidates.push_back({d.cx + (d.r - eps), d.cy});
            candidates.push_back({d.cx - (d.r - eps), d.cy});
            candidates.push_back({d.cx, d.cy + (d.r - eps)});
            candidates.push_back({d.cx, d.cy - (d.r - eps)});
        }
        for (size_t a = 0; a < disks.size(); ++a) {
            for (size_t b = a + 1; b < disks.size(); ++b) {
                const auto &da = disks[a], &db = disks[b];
                double dx = db.cx - da.cx, dy = db.cy - da.cy;
                double dist = std::hypot(dx, dy);
                if (dist == 0.0 || dist > da.r + db.r || dist < std::abs(da.r - db.r)) continue;
                double along = (da.r * da.r - db.r * db.r + dist * dist) / (2.0 * dist);
                double h2 = da.r * da.r - along * along;
                double h = h2 > 0.0 ? std::sqrt(h2) : 0.0;
                double bx = da.cx + along * dx / dist, by = da.cy + along * dy / dist;
                double px = -dy / dist, py = dx / dist;
                for (double sgn : {1.0, -1.0}) {
                    Point v{bx + sgn * h * px, by + sgn * h * py};
                    for (double ox : {-eps, 0.0, eps})
                        for (double oy : {-eps, 0.0, eps})
                            if (ox != 0.0 || oy != 0.0)
                                candidates.push_back({v.x + ox, v.y + oy});
                }
            }
        }
    }

    std::vector<std::vector<int>> lists;
    for (const Point& p : candidates) {
        std::vector<int> sig = signature_at(p);
        if (sig.empty()) continue;
        auto [it, inserted] = sig_to_resource_.try_emplace(sig, int(rep_points_.size()));
        if (!inserted) continue;
        rep_points_.push_back(p);
        lists.push_back(std::move(sig));
    }
    inst_ = SetSystemInstance::from_resource_tasks(n_tasks, std::move(lists));
}

SetSystem SetSystem::from_explicit(SetSystemInstance inst) {
    inst.validate();
    SetSystem sys;
    sys.kind_ = FamilyKind::kExplicit;
    sys.inst_ = std::move(inst);
    return sys;
}

const GeometryFamily& SetSystem::family() const {
    if (!family_) throw ArgumentError("set system: explicit instances carry no geometry");
    return *family_;
}

Point SetSystem::rep_point(int resource) const {
    if (kind_ != FamilyKind::kRect && kind_ != FamilyKind::kDisk)
        throw ArgumentError("set system: rep_point is only defined for planar families");
    return rep_points_.at(resource);
}

int SetSystem::lambda() const {
    switch (kind_) {
        case FamilyKind::kLine: return kLineLambda;
        case FamilyKind::kTree: return kTreeLambda;
        case FamilyKind::kRect: return kRectLambda;
        case FamilyKind::kDisk: return kFatLambda;
        case FamilyKind::kExplicit: return 1;
    }
    return 0;
}

std::vector<int> SetSystem::signature_at(Point p) const {
    std::vector<int> sig;
    if (kind_ == FamilyKind::kRect) {
        const auto& rects = std::get<RectGeometry>(*family_).rects;
        for (int j = 0; j < int(rects.size()); ++j)
            if (rects[j].contains(p)) sig.push_back(j);
    } else {
        const auto& disks = std::get<DiskGeometry>(*family_).disks;
        for (int j = 0; j < int(disks.size()); ++j)
            if (disks[j].contains(p)) sig.push_back(j);
    }
    return sig;
}

int SetSystem::map_signature(const std::vector<int>& sig) const {
    auto it = sig_to_resource_.find(sig);
    if (it != sig_to_resource_.end()) return it->second;
    // Fall back to the smallest strict superset; any resource whose task set
    // contains sig preserves the covering property.
    int best = -1;
    size_t best_size = std::numeric_limits<size_t>::max();
    for (int i = 0; i < inst_.n_resources; ++i) {
        const auto& list = inst_.resource_tasks[i];
        if (list.size() < sig.size() || list.size() >= best_size) continue;
        if (std::includes(list.begin(), list.end(), sig.begin(), sig.end())) {
            best = i;
            best_size = list.size();
        }
    }
    return best;
}

RestrictResult restrict_tasks(const SetSystemInstance& sys, const std::vector<int>& keep) {
    for (size_t a = 0; a < keep.size(); ++a) {
        if (keep[a] < 0 || keep[a] >= sys.n_tasks)
            throw ArgumentError("restrict_tasks: task id out of range");
        if (a > 0 && keep[a] <= keep[a - 1])
            throw ArgumentError("restrict_tasks: keep must be sorted unique");
    }
    std::vector<int> remap(sys.n_tasks, -1);
    for (int jn = 0; jn < int(keep.size()); ++jn) remap[keep[jn]] = jn;
    std::vector<std::vector<int>> lists(sys.n_resources);
    for (int i = 0; i < sys.n_resources; ++i)
        for (int j : sys.resource_tasks[i])
            if (remap[j] >= 0) lists[i].push_back(remap[j]);
    RestrictResult out;
    out.instance = SetSystemInstance::from_resource_tasks(int(keep.size()), std::move(lists));
    out.task_map = keep;
    return out;
}

DisjointUnionResult disjoint_union(const std::vector<SetSystemInstance>& parts) {
    DisjointUnionResult out;
    int tasks = 0, resources = 0;
    for (const auto& part : parts) {
        out.task_offset.push_back(tasks);
        out.resource_offset.push_back(resources);
        tasks += part.n_tasks;
        resources += part.n_resources;
    }
    std::vector<std::vector<int>> lists;
    lists.reserve(resources);
    for (size_t p = 0; p < parts.size(); ++p) {
        for (const auto& list : parts[p].resource_tasks) {
            std::vector<int> shifted;
            shifted.reserve(list.size());
            for (int j : list) shifted.push_back(j + out.task_offset[p]);
            lists.push_back(std::move(shifted));
        }
    }
    out.instance = SetSystemInstance::from_resource_tasks(tasks, std::move(lists));
    return out;
}

} // namespace gms
