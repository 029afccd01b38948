#include "genmakespan/tree_util.hpp"

#include <algorithm>
#include <string>

#include "genmakespan/errors.hpp"

namespace gms {

TreeTopology::TreeTopology(int num_vertices, const std::vector<std::pair<int, int>>& edges) {
    if (num_vertices <= 0) throw ValidationError("tree: needs at least one vertex");
    if (int(edges.size()) != num_vertices - 1)
        throw ValidationError("tree: expected " + std::to_string(num_vertices - 1) + " edges, got " +
                              std::to_string(edges.size()));
    adj_.assign(num_vertices, {});
    for (auto [u, v] : edges) {
        if (u < 0 || u >= num_vertices || v < 0 || v >= num_vertices || u == v)
            throw ValidationError("tree: bad edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& list : adj_) std::sort(list.begin(), list.end());

    parent_.assign(num_vertices, -2);
    depth_.assign(num_vertices, 0);
    order_.clear();
    order_.reserve(num_vertices);
    parent_[0] = -1;
    order_.push_back(0);
    for (size_t head = 0; head < order_.size(); ++head) {
        int u = order_[head];
        for (int v : adj_[u]) {
            if (parent_[v] != -2) continue;
            parent_[v] = u;
            depth_[v] = depth_[u] + 1;
            order_.push_back(v);
        }
    }
    // n-1 edges plus full reachability from 0 rules out cycles and repeats.
    if (int(order_.size()) != num_vertices) throw ValidationError("tree: edge list is not connected");
}

int TreeTopology::lca(int u, int v) const {
    while (depth_[u] > depth_[v]) u = parent_[u];
    while (depth_[v] > depth_[u]) v = parent_[v];
    while (u != v) {
        u = parent_[u];
        v = parent_[v];
    }
    return u;
}

std::vector<int> TreeTopology::path_vertices(int u, int v) const {
    if (u < 0 || u >= size() || v < 0 || v >= size())
        throw ValidationError("tree: path endpoint out of range");
    int meet = lca(u, v);
    std::vector<int> up, down;
    for (int w = u; w != meet; w = parent_[w]) up.push_back(w);
    up.push_back(meet);
    for (int w = v; w != meet; w = parent_[w]) down.push_back(w);
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

} // namespace gms
