#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include "genmakespan/errors.hpp"
#include "genmakespan/set_system.hpp"
#include "genmakespan/tree_util.hpp"

namespace gms {

namespace {

double dist(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

void validate_dangerous(const std::vector<int>& d, int m) {
    if (d.empty()) throw ArgumentError("extend: dangerous set must be nonempty");
    for (size_t a = 0; a < d.size(); ++a) {
        if (d[a] < 0 || d[a] >= m) throw ArgumentError("extend: resource id out of range");
        if (a > 0 && d[a] <= d[a - 1]) throw ArgumentError("extend: dangerous set must be sorted unique");
    }
}

} // namespace

ExtendResult SetSystem::extend(const std::vector<int>& dangerous) const {
    validate_dangerous(dangerous, inst_.n_resources);
    ExtendResult res;
    switch (kind_) {
        case FamilyKind::kLine: res = extend_line(dangerous); break;
        case FamilyKind::kTree: res = extend_tree(dangerous); break;
        case FamilyKind::kRect: res = extend_rect(dangerous); break;
        case FamilyKind::kDisk: res = extend_fat(dangerous); break;
        case FamilyKind::kExplicit: res = extend_explicit(dangerous); break;
    }
    for (const auto& r : res.cover)
        if (int(r.size()) > res.lambda) throw InternalError("extend: cover exceeds documented bound");
    return res;
}

// Points on a line: the nearest dangerous point on each side screens
// everything beyond it, because tasks are intervals.
ExtendResult SetSystem::extend_line(const std::vector<int>& d) const {
    ExtendResult res;
    res.lambda = kLineLambda;
    res.marked = d;
    res.cover.resize(inst_.n_resources);
    for (int i = 0; i < inst_.n_resources; ++i) {
        auto it = std::lower_bound(d.begin(), d.end(), i);
        std::set<int> r;
        if (it != d.end()) r.insert(*it);
        if (it != d.begin()) r.insert(*std::prev(it));
        res.cover[i].assign(r.begin(), r.end());
    }
    return res;
}

// Tree paths: mark the dangerous vertices plus the branch vertices of their
// Steiner subtree T'. From any vertex, walking T' from the nearest T' vertex
// reaches a marked vertex in each of at most two directions, and any path
// through the vertex into T' must cross one of those.
ExtendResult SetSystem::extend_tree(const std::vector<int>& d) const {
    const auto& g = std::get<TreeGeometry>(*family_);
    const int n = g.num_vertices;
    TreeTopology topo(n, g.edges);

    // T' = union of all d[0]-to-d[j] paths = vertices whose subtree, rooted
    // at d[0], contains a dangerous vertex.
    std::vector<int> parent(n, -2), depth(n, 0), order;
    order.reserve(n);
    parent[d[0]] = -1;
    order.push_back(d[0]);
    for (size_t head = 0; head < order.size(); ++head)
        for (int v : topo.neighbors(order[head]))
            if (parent[v] == -2) {
                parent[v] = order[head];
                order.push_back(v);
            }
    std::vector<char> in_t(n, 0);
    for (int v : d) in_t[v] = 1;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (in_t[*it] && parent[*it] >= 0) in_t[parent[*it]] = 1;

    std::vector<int> t_deg(n, 0);
    for (int v = 0; v < n; ++v)
        if (in_t[v])
            for (int u : topo.neighbors(v))
                if (in_t[u]) ++t_deg[v];

    std::set<int> mset(d.begin(), d.end());
    for (int v = 0; v < n; ++v)
        if (in_t[v] && t_deg[v] >= 3) mset.insert(v);

    ExtendResult res;
    res.lambda = kTreeLambda;
    res.marked.assign(mset.begin(), mset.end());
    res.cover.resize(n);
    std::vector<int> bfs_dist(n);
    for (int i = 0; i < n; ++i) {
        std::fill(bfs_dist.begin(), bfs_dist.end(), -1);
        std::vector<int> queue{i};
        bfs_dist[i] = 0;
        for (size_t head = 0; head < queue.size(); ++head)
            for (int u : topo.neighbors(queue[head]))
                if (bfs_dist[u] < 0) {
                    bfs_dist[u] = bfs_dist[queue[head]] + 1;
                    queue.push_back(u);
                }
        int vi = -1;
        for (int v = 0; v < n; ++v)
            if (in_t[v] && (vi < 0 || bfs_dist[v] < bfs_dist[vi])) vi = v;
        if (mset.count(vi)) {
            res.cover[i] = {vi};
            continue;
        }
        // vi is unmarked, so it is an interior T' vertex of degree exactly 2;
        // walk both ways until the first marked vertex.
        std::set<int> r;
        for (int start : topo.neighbors(vi)) {
            if (!in_t[start]) continue;
            int prev = vi, cur = start;
            while (!mset.count(cur)) {
                int next = -1;
                for (int u : topo.neighbors(cur))
                    if (in_t[u] && u != prev) next = u;
                if (next < 0) throw InternalError("extend: T' walk fell off an unmarked leaf");
                prev = cur;
                cur = next;
            }
            r.insert(cur);
        }
        res.cover[i].assign(r.begin(), r.end());
    }
    return res;
}

// Boxes: mark one representative per cell of the coordinate grid spanned by
// the dangerous representatives. A box containing p and a dangerous
// representative contains a corner of p's bracketing grid cell.
ExtendResult SetSystem::extend_rect(const std::vector<int>& d) const {
    std::vector<double> xs, ys;
    for (int r : d) {
        xs.push_back(rep_points_[r].x);
        ys.push_back(rep_points_[r].y);
    }
    std::sort(xs.begin(), xs.end()); xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end()); ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    std::set<int> mset(d.begin(), d.end());
    for (double x : xs)
        for (double y : ys) {
            std::vector<int> sig = signature_at({x, y});
            if (sig.empty()) continue;
            int id = map_signature(sig);
            if (id >= 0) mset.insert(id);
        }

    ExtendResult res;
    res.lambda = kRectLambda;
    res.marked.assign(mset.begin(), mset.end());
    res.cover.resize(inst_.n_resources);
    for (int i = 0; i < inst_.n_resources; ++i) {
        Point p = rep_points_[i];
        auto bracket = [](const std::vector<double>& coords, double v, double out[2]) {
            auto it = std::lower_bound(coords.begin(), coords.end(), v);
            int cnt = 0;
            if (it != coords.end()) out[cnt++] = *it;
            if (it != coords.begin() && (cnt == 0 || *std::prev(it) != out[0])) out[cnt++] = *std::prev(it);
            return cnt;
        };
        double bx[2], by[2];
        int nx = bracket(xs, p.x, bx), ny = bracket(ys, p.y, by);
        std::set<int> r;
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b) {
                std::vector<int> sig = signature_at({bx[a], by[b]});
                if (sig.empty()) continue;
                int id = map_signature(sig);
                if (id >= 0 && mset.count(id)) r.insert(id);
            }
        res.cover[i].assign(r.begin(), r.end());
    }
    return res;
}

// Disks (fat objects): grid-and-lattice construction. For each dangerous
// representative q and each pairwise distance theta, lay a 100x100 grid of
// side 10*theta around q and mark the resources hit by a fixed 13x13 lattice
// around each grid cell. Covers come from the single cell containing the
// querying representative (plus a whole small-diameter grid in the clustered
// case).
ExtendResult SetSystem::extend_fat(const std::vector<int>& d) const {
    const auto& disks = std::get<DiskGeometry>(*family_).disks;
    const int n = inst_.n_tasks, m = inst_.n_resources;
    if (n > 64) throw ResourceLimitError("disk extend supports at most 64 tasks");

    std::vector<uint64_t> res_mask(m, 0);
    std::unordered_map<uint64_t, int> exact;
    for (int i = 0; i < m; ++i) {
        for (int j : inst_.resource_tasks[i]) res_mask[i] |= uint64_t(1) << j;
        exact.emplace(res_mask[i], i);
    }
    auto mask_at = [&](Point p) {
        uint64_t mm = 0;
        for (int j = 0; j < n; ++j)
            if (disks[j].contains(p)) mm |= uint64_t(1) << j;
        return mm;
    };
    auto map_mask = [&](uint64_t mm) -> int {
        auto it = exact.find(mm);
        if (it != exact.end()) return it->second;
        int best = -1, best_pc = 65;
        for (int i = 0; i < m; ++i) {
            int pc = std::popcount(res_mask[i]);
            if (pc >= best_pc) continue;
            if ((res_mask[i] & mm) == mm) {
                best = i;
                best_pc = pc;
            }
        }
        return best;
    };

    auto cell_ids = [&](Point center, double theta, int cx, int cy, std::set<int>& out) {
        Point corner{center.x - 5.0 * theta + 0.1 * theta * cx,
                     center.y - 5.0 * theta + 0.1 * theta * cy};
        for (Point q : q_points(corner, 0.1 * theta)) {
            uint64_t mm = mask_at(q);
            if (mm == 0) continue;
            int id = map_mask(mm);
            if (id >= 0) out.insert(id);
        }
    };
    std::map<std::pair<int, double>, std::vector<int>> grid_cache;
    auto grid_ids = [&](int center_res, double theta) -> const std::vector<int>& {
        auto key = std::make_pair(center_res, theta);
        auto it = grid_cache.find(key);
        if (it != grid_cache.end()) return it->second;
        std::set<int> acc;
        for (int cx = 0; cx < 100; ++cx)
            for (int cy = 0; cy < 100; ++cy) cell_ids(rep_points_[center_res], theta, cx, cy, acc);
        return grid_cache.emplace(key, std::vector<int>(acc.begin(), acc.end())).first->second;
    };

    std::vector<double> pair_dist;
    for (size_t a = 0; a < d.size(); ++a)
        for (size_t b = a + 1; b < d.size(); ++b) pair_dist.push_back(dist(rep_points_[d[a]], rep_points_[d[b]]));
    std::sort(pair_dist.begin(), pair_dist.end());
    pair_dist.erase(std::unique(pair_dist.begin(), pair_dist.end()), pair_dist.end());

    std::set<int> mset(d.begin(), d.end());
    for (int q : d)
        for (double theta : pair_dist)
            for (int id : grid_ids(q, theta)) mset.insert(id);

    ExtendResult res;
    res.lambda = kFatLambda;
    res.marked.assign(mset.begin(), mset.end());
    res.cover.resize(m);
    for (int i = 0; i < m; ++i) {
        Point p = rep_points_[i];
        int qi = -1;
        double dd = std::numeric_limits<double>::infinity();
        for (int r : d)
            if (dist(rep_points_[r], p) < dd) {
                dd = dist(rep_points_[r], p);
                qi = r;
            }
        double theta1 = -1.0;
        for (double theta : pair_dist)
            if (theta >= dd / 5.0 && theta <= 5.0 * dd) {
                theta1 = theta;
                break;
            }
        std::set<int> r;
        auto own_cell = [&](int center_res, double theta) {
            Point c = rep_points_[center_res];
            int cx = int(std::floor((p.x - (c.x - 5.0 * theta)) / (0.1 * theta)));
            int cy = int(std::floor((p.y - (c.y - 5.0 * theta)) / (0.1 * theta)));
            cx = std::clamp(cx, 0, 99);
            cy = std::clamp(cy, 0, 99);
            cell_ids(c, theta, cx, cy, r);
        };
        if (theta1 > 0.0) {
            own_cell(qi, theta1);
        } else {
            // All of D is either huddled within dd/5 of the nearest
            // representative or further than 5*dd from it.
            std::vector<int> d0;
            for (int rr : d)
                if (dist(rep_points_[rr], rep_points_[qi]) <= dd / 5.0) d0.push_back(rr);
            if (d0.size() == 1) {
                r.insert(qi);
            } else {
                double diam = 0.0;
                for (size_t a = 0; a < d0.size(); ++a)
                    for (size_t b = a + 1; b < d0.size(); ++b)
                        diam = std::max(diam, dist(rep_points_[d0[a]], rep_points_[d0[b]]));
                for (int id : grid_ids(qi, diam)) r.insert(id);
            }
            int qp = -1;
            double dp = std::numeric_limits<double>::infinity();
            for (int rr : d) {
                if (std::binary_search(d0.begin(), d0.end(), rr)) continue;
                if (dist(rep_points_[rr], p) < dp) {
                    dp = dist(rep_points_[rr], p);
                    qp = rr;
                }
            }
            if (qp >= 0) {
                double theta2 = dist(rep_points_[qi], rep_points_[qp]);
                if (dp <= 4.0 * dd - 1e-9 * (1.0 + dp))
                    throw InternalError("extend: far representative is too close");
                if (theta2 < 0.75 * dp - 1e-9 * (1.0 + dp) || theta2 > 1.25 * dp + 1e-9 * (1.0 + dp))
                    throw InternalError("extend: far grid scale out of range");
                own_cell(qp, theta2);
            }
        }
        res.cover[i].assign(r.begin(), r.end());
    }
    return res;
}

// Explicit incidence lists carry no geometry to exploit; covering each
// resource by itself is always safe, at the price of marking everything.
ExtendResult SetSystem::extend_explicit(const std::vector<int>& d) const {
    (void)d;
    ExtendResult res;
    res.lambda = 1;
    res.marked.resize(inst_.n_resources);
    res.cover.resize(inst_.n_resources);
    for (int i = 0; i < inst_.n_resources; ++i) {
        res.marked[i] = i;
        res.cover[i] = {i};
    }
    return res;
}

} // namespace gms
