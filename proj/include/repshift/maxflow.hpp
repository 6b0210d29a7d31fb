#pragma once

#include <cstdint>
#include <vector>

namespace repshift {

/// s-t max-flow / min-cut on a directed graph with double capacities,
/// solved by augmenting paths along BFS level graphs (Dinic). Terminal
/// capacities accumulate, so unaries can be folded in edge by edge.
class MaxFlowGraph {
public:
    explicit MaxFlowGraph(int node_count);

    /// Residual pair (u -> v, cap_uv) and (v -> u, cap_vu).
    void add_edge(int u, int v, double cap_uv, double cap_vu);

    /// Adds source -> node and node -> sink capacity.
    void add_terminal_weights(int node, double from_source, double to_sink);

    double max_flow();

    /// Valid after max_flow(): true when the node is on the source side of
    /// the minimum cut (reachable in the final residual graph).
    bool in_source_side(int node) const;

private:
    struct Edge {
        int head;
        double cap;
    };

    bool build_levels();
    double push(int node, double limit);

    int source_, sink_;
    std::vector<Edge> edges_;                 // paired: edge i ^ 1 is the residual twin
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> level_;
    std::vector<std::size_t> next_arc_;
};

}  // namespace repshift
