#include <lll/mis.hpp>

#include <lll/errors.hpp>
#include <lll/prf.hpp>

#include <algorithm>

namespace lll {

UndirectedGraph::UndirectedGraph(int vertex_count) {
    if (vertex_count < 0) throw InvalidModel("negative vertex count");
    adj_.resize(static_cast<std::size_t>(vertex_count));
}

void UndirectedGraph::add_edge(int u, int v) {
    if (u < 0 || u >= vertex_count() || v < 0 || v >= vertex_count()) {
        throw InvalidModel("edge endpoint out of range");
    }
    if (u == v) return;
    auto& nu = adj_[static_cast<std::size_t>(u)];
    if (std::find(nu.begin(), nu.end(), v) != nu.end()) return;
    nu.push_back(v);
    adj_[static_cast<std::size_t>(v)].push_back(u);
    ++edge_count_;
}

MisResult luby_mis(const UndirectedGraph& graph, std::uint64_t seed) {
    int n = graph.vertex_count();
    std::vector<char> live(static_cast<std::size_t>(n), 1);
    std::vector<char> chosen(static_cast<std::size_t>(n), 0);
    std::vector<std::uint64_t> prio(static_cast<std::size_t>(n), 0);
    int remaining = n;
    MisResult out;
    while (remaining > 0) {
        std::uint64_t round_tag = static_cast<std::uint64_t>(out.rounds);
        ++out.rounds;
        for (int v = 0; v < n; ++v) {
            if (live[static_cast<std::size_t>(v)]) {
                prio[static_cast<std::size_t>(v)] =
                    prf3(seed, round_tag, static_cast<std::uint64_t>(v));
            }
        }
        std::vector<int> winners;
        for (int v = 0; v < n; ++v) {
            if (!live[static_cast<std::size_t>(v)]) continue;
            bool is_min = true;
            for (int u : graph.neighbors(v)) {
                if (!live[static_cast<std::size_t>(u)]) continue;
                if (prio[static_cast<std::size_t>(u)] < prio[static_cast<std::size_t>(v)] ||
                    (prio[static_cast<std::size_t>(u)] == prio[static_cast<std::size_t>(v)] && u < v)) {
                    is_min = false;
                    break;
                }
            }
            if (is_min) winners.push_back(v);
        }
        // The live vertex with the globally smallest priority always wins,
        // so each round removes at least one vertex.
        for (int v : winners) {
            chosen[static_cast<std::size_t>(v)] = 1;
            if (live[static_cast<std::size_t>(v)]) {
                live[static_cast<std::size_t>(v)] = 0;
                --remaining;
            }
            for (int u : graph.neighbors(v)) {
                if (live[static_cast<std::size_t>(u)]) {
                    live[static_cast<std::size_t>(u)] = 0;
                    --remaining;
                }
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (chosen[static_cast<std::size_t>(v)]) out.selected.push_back(v);
    }
    return out;
}

}  // namespace lll
