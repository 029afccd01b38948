#pragma once

#include <utility>
#include <vector>

namespace gms {

// Rooted view of an undirected tree on vertices 0..n-1, rooted at 0.
// Construction validates that the edge list forms a single tree.
class TreeTopology {
public:
    TreeTopology(int num_vertices, const std::vector<std::pair<int, int>>& edges);

    int size() const { return int(adj_.size()); }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int parent(int v) const { return parent_[v]; }
    int depth(int v) const { return depth_[v]; }

    // Vertices in order 0..n-1 such that parents precede children.
    const std::vector<int>& bfs_order() const { return order_; }

    int lca(int u, int v) const;

    // Vertices of the unique u-v path, in walk order from u to v.
    std::vector<int> path_vertices(int u, int v) const;

private:
    std::vector<std::vector<int>> adj_;
    std::vector<int> parent_;
    std::vector<int> depth_;
    std::vector<int> order_;
};

} // namespace gms
