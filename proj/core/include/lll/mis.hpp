#pragma once

#include <cstdint>
#include <vector>

namespace lll {

/// Undirected graph on vertices 0..n-1, adjacency-list backed.
class UndirectedGraph {
public:
    explicit UndirectedGraph(int vertex_count);

    int vertex_count() const { return static_cast<int>(adj_.size()); }
    int edge_count() const { return edge_count_; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }

    /// Ignores duplicates and self loops.
    void add_edge(int u, int v);

private:
    std::vector<std::vector<int>> adj_;
    int edge_count_ = 0;
};

struct MisResult {
    std::vector<int> selected;  // ascending vertex ids, maximal independent
    int rounds = 0;             // synchronous rounds executed
};

/// Random-priority parallel MIS: every round each live vertex draws the
/// priority prf3(seed, round, vertex); vertices beating all live neighbors
/// (ties to the lower id) join the set and leave the graph together with
/// their neighbors. Deterministic in (graph, seed).
MisResult luby_mis(const UndirectedGraph& graph, std::uint64_t seed);

}  // namespace lll
