#include "repshift/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace repshift {

MaxFlowGraph::MaxFlowGraph(int node_count) {
    if (node_count < 0) throw std::invalid_argument("negative node count");
    adjacency_.resize(node_count + 2);
    source_ = node_count;
    sink_ = node_count + 1;
}

void MaxFlowGraph::add_edge(int u, int v, double cap_uv, double cap_vu) {
    if (cap_uv < 0.0 || cap_vu < 0.0) throw std::invalid_argument("negative edge capacity");
    adjacency_[u].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({v, cap_uv});
    adjacency_[v].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({u, cap_vu});
}

void MaxFlowGraph::add_terminal_weights(int node, double from_source, double to_sink) {
    if (from_source > 0.0) add_edge(source_, node, from_source, 0.0);
    if (to_sink > 0.0) add_edge(node, sink_, to_sink, 0.0);
}

bool MaxFlowGraph::build_levels() {
    level_.assign(adjacency_.size(), -1);
    std::deque<int> queue{source_};
    level_[source_] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int e : adjacency_[u]) {
            if (edges_[e].cap <= 0.0) continue;
            const int v = edges_[e].head;
            if (level_[v] >= 0) continue;
            level_[v] = level_[u] + 1;
            queue.push_back(v);
        }
    }
    return level_[sink_] >= 0;
}

double MaxFlowGraph::push(int node, double limit) {
    if (node == sink_ || limit <= 0.0) return limit;
    double sent = 0.0;
    for (std::size_t& it = next_arc_[node]; it < adjacency_[node].size(); ++it) {
        const int e = adjacency_[node][it];
        const int v = edges_[e].head;
        if (edges_[e].cap <= 0.0 || level_[v] != level_[node] + 1) continue;
        const double pushed = push(v, std::min(limit - sent, edges_[e].cap));
        if (pushed <= 0.0) continue;
        edges_[e].cap -= pushed;
        edges_[e ^ 1].cap += pushed;
        sent += pushed;
        if (sent >= limit) break;
    }
    return sent;
}

double MaxFlowGraph::max_flow() {
    double total = 0.0;
    while (build_levels()) {
        next_arc_.assign(adjacency_.size(), 0);
        const double sent = push(source_, std::numeric_limits<double>::infinity());
        if (sent <= 0.0) break;
        total += sent;
    }
    // final residual reachability defines the cut
    build_levels();
    return total;
}

bool MaxFlowGraph::in_source_side(int node) const { return level_[node] >= 0; }

}  // namespace repshift
