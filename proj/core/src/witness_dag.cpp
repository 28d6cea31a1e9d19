#include <lll/witness_dag.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <climits>
#include <map>
#include <set>

namespace lll {

namespace {

int words_for(int n) { return (n + 63) / 64; }

void set_bit(std::vector<std::uint64_t>& adj, int words, int u, int v) {
    adj[static_cast<std::size_t>(u) * static_cast<std::size_t>(words) +
        static_cast<std::size_t>(v >> 6)] |= std::uint64_t(1) << (v & 63);
}

const std::vector<int>& empty_path() {
    static const std::vector<int> none;
    return none;
}

}  // namespace

WitnessDag WitnessDag::assemble(const EventSystem& sys, std::vector<Node> sorted_nodes,
                                std::vector<std::uint64_t> adj) {
    WitnessDag g;
    g.nodes_ = std::move(sorted_nodes);
    g.words_ = words_for(g.size());
    g.adj_ = std::move(adj);

    std::map<int, std::vector<int>> groups;
    for (int v = 0; v < g.size(); ++v) {
        for (int var : sys.event(g.nodes_[static_cast<std::size_t>(v)].event).scope) {
            groups[var].push_back(v);
        }
    }
    for (auto& [var, group] : groups) {
        // Nodes sharing a variable are pairwise adjacent, so in-group
        // in-degree is the position along the path.
        std::vector<std::pair<int, int>> ranked;
        ranked.reserve(group.size());
        for (int u : group) {
            int rank = 0;
            for (int w : group) {
                if (w != u && g.edge(w, u)) ++rank;
            }
            ranked.emplace_back(rank, u);
        }
        std::sort(ranked.begin(), ranked.end());
        std::vector<int> ordered;
        ordered.reserve(ranked.size());
        for (const auto& [rank, u] : ranked) ordered.push_back(u);
        g.path_var_.push_back(var);
        g.path_nodes_.push_back(std::move(ordered));
    }
    return g;
}

WitnessDag WitnessDag::from_label_sequence(const EventSystem& sys, const std::vector<int>& events) {
    int t = static_cast<int>(events.size());
    std::vector<Node> seq_nodes(static_cast<std::size_t>(t));
    std::map<int, int> seen;
    for (int i = 0; i < t; ++i) {
        int ev = events[static_cast<std::size_t>(i)];
        if (ev < 0 || ev >= sys.event_count()) throw InvalidModel("event id out of range in sequence");
        seq_nodes[static_cast<std::size_t>(i)] = Node{ev, ++seen[ev]};
    }
    std::vector<int> order(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return seq_nodes[static_cast<std::size_t>(a)] < seq_nodes[static_cast<std::size_t>(b)];
    });
    std::vector<int> pos(static_cast<std::size_t>(t));
    std::vector<Node> sorted_nodes(static_cast<std::size_t>(t));
    for (int p = 0; p < t; ++p) {
        pos[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = p;
        sorted_nodes[static_cast<std::size_t>(p)] = seq_nodes[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
    }
    int words = words_for(t);
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(t) * static_cast<std::size_t>(words), 0);
    for (int i = 0; i < t; ++i) {
        for (int j = i + 1; j < t; ++j) {
            if (sys.dependent(events[static_cast<std::size_t>(i)], events[static_cast<std::size_t>(j)])) {
                set_bit(adj, words, pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)]);
            }
        }
    }
    return assemble(sys, std::move(sorted_nodes), std::move(adj));
}

std::optional<std::string> validate_parts(const EventSystem& sys,
                                          const std::vector<WitnessDag::Node>& nodes,
                                          const std::vector<std::pair<int, int>>& edges) {
    int v_count = static_cast<int>(nodes.size());
    for (const auto& node : nodes) {
        if (node.event < 0 || node.event >= sys.event_count()) {
            return "node labeled with unknown event " + std::to_string(node.event);
        }
    }
    std::set<std::pair<int, int>> edge_set;
    std::vector<int> indeg(static_cast<std::size_t>(v_count), 0);
    for (const auto& [u, v] : edges) {
        if (u < 0 || u >= v_count || v < 0 || v >= v_count) return "edge endpoint out of range";
        if (u == v) return "self loop on node " + std::to_string(u);
        if (!edge_set.insert({u, v}).second) return "duplicate edge";
    }
    for (const auto& [u, v] : edge_set) ++indeg[static_cast<std::size_t>(v)];

    // Kahn's algorithm for acyclicity.
    std::vector<int> ready;
    for (int v = 0; v < v_count; ++v) {
        if (indeg[static_cast<std::size_t>(v)] == 0) ready.push_back(v);
    }
    int removed = 0;
    while (!ready.empty()) {
        int u = ready.back();
        ready.pop_back();
        ++removed;
        for (const auto& [a, b] : edge_set) {
            if (a == u && --indeg[static_cast<std::size_t>(b)] == 0) ready.push_back(b);
        }
    }
    if (removed != v_count) return "cycle detected";

    for (int u = 0; u < v_count; ++u) {
        for (int v = u + 1; v < v_count; ++v) {
            bool dep = sys.dependent(nodes[static_cast<std::size_t>(u)].event,
                                     nodes[static_cast<std::size_t>(v)].event);
            int count = static_cast<int>(edge_set.count({u, v})) + static_cast<int>(edge_set.count({v, u}));
            if (dep && count != 1) {
                return "dependent labels on nodes " + std::to_string(u) + "," + std::to_string(v) +
                       " need exactly one edge, found " + std::to_string(count);
            }
            if (!dep && count != 0) {
                return "edge between independent labels on nodes " + std::to_string(u) + "," +
                       std::to_string(v);
            }
        }
    }

    // Declared occurrence indices must match in-group precedence order.
    for (int u = 0; u < v_count; ++u) {
        if (nodes[static_cast<std::size_t>(u)].occ <= 0) continue;  // to be derived
        int rank = 0;
        for (int w = 0; w < v_count; ++w) {
            if (w != u &&
                nodes[static_cast<std::size_t>(w)].event == nodes[static_cast<std::size_t>(u)].event &&
                edge_set.count({w, u})) {
                ++rank;
            }
        }
        if (nodes[static_cast<std::size_t>(u)].occ != rank + 1) {
            return "node " + std::to_string(u) + " declares occurrence " +
                   std::to_string(nodes[static_cast<std::size_t>(u)].occ) + " but sits at position " +
                   std::to_string(rank + 1);
        }
    }
    return std::nullopt;
}

WitnessDag WitnessDag::from_parts(const EventSystem& sys, const std::vector<Node>& nodes,
                                  const std::vector<std::pair<int, int>>& edges) {
    if (auto violation = validate_parts(sys, nodes, edges)) throw InvalidModel(*violation);
    int v_count = static_cast<int>(nodes.size());
    std::vector<Node> derived = nodes;
    for (int u = 0; u < v_count; ++u) {
        int rank = 0;
        for (const auto& [a, b] : edges) {
            if (b == u && nodes[static_cast<std::size_t>(a)].event == nodes[static_cast<std::size_t>(u)].event) {
                ++rank;
            }
        }
        derived[static_cast<std::size_t>(u)].occ = rank + 1;
    }
    std::vector<int> order(static_cast<std::size_t>(v_count));
    for (int i = 0; i < v_count; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return derived[static_cast<std::size_t>(a)] < derived[static_cast<std::size_t>(b)];
    });
    std::vector<int> pos(static_cast<std::size_t>(v_count));
    std::vector<Node> sorted_nodes(static_cast<std::size_t>(v_count));
    for (int p = 0; p < v_count; ++p) {
        pos[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])] = p;
        sorted_nodes[static_cast<std::size_t>(p)] = derived[static_cast<std::size_t>(order[static_cast<std::size_t>(p)])];
    }
    int words = words_for(v_count);
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(v_count) * static_cast<std::size_t>(words), 0);
    for (const auto& [u, v] : edges) {
        set_bit(adj, words, pos[static_cast<std::size_t>(u)], pos[static_cast<std::size_t>(v)]);
    }
    return assemble(sys, std::move(sorted_nodes), std::move(adj));
}

std::optional<std::string> validate(const EventSystem& sys, const WitnessDag& dag) {
    std::vector<WitnessDag::Node> nodes;
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v < dag.size(); ++v) nodes.push_back(dag.node(v));
    for (int u = 0; u < dag.size(); ++u) {
        for (int v = 0; v < dag.size(); ++v) {
            if (u != v && dag.edge(u, v)) edges.emplace_back(u, v);
        }
    }
    return validate_parts(sys, nodes, edges);
}

std::vector<int> WitnessDag::sinks() const {
    std::vector<int> out;
    for (int v = 0; v < size(); ++v) {
        bool has_out = false;
        for (int w = 0; w < words_ && !has_out; ++w) {
            has_out = adj_[static_cast<std::size_t>(v) * static_cast<std::size_t>(words_) +
                           static_cast<std::size_t>(w)] != 0;
        }
        if (!has_out) out.push_back(v);
    }
    return out;
}

const std::vector<int>& WitnessDag::variable_path(int var) const {
    auto it = std::lower_bound(path_var_.begin(), path_var_.end(), var);
    if (it == path_var_.end() || *it != var) return empty_path();
    return path_nodes_[static_cast<std::size_t>(it - path_var_.begin())];
}

int WitnessDag::path_length(int var) const {
    return static_cast<int>(variable_path(var).size());
}

std::vector<int> WitnessDag::path_events(int var) const {
    std::vector<int> out;
    for (int v : variable_path(var)) out.push_back(nodes_[static_cast<std::size_t>(v)].event);
    return out;
}

WitnessDag WitnessDag::prefix(const EventSystem& sys, const std::vector<int>& targets) const {
    std::vector<char> keep(static_cast<std::size_t>(size()), 0);
    std::vector<int> frontier;
    for (int v : targets) {
        if (v < 0 || v >= size()) throw InvalidModel("prefix target out of range");
        if (!keep[static_cast<std::size_t>(v)]) {
            keep[static_cast<std::size_t>(v)] = 1;
            frontier.push_back(v);
        }
    }
    while (!frontier.empty()) {
        int v = frontier.back();
        frontier.pop_back();
        for (int u = 0; u < size(); ++u) {
            if (!keep[static_cast<std::size_t>(u)] && edge(u, v)) {
                keep[static_cast<std::size_t>(u)] = 1;
                frontier.push_back(u);
            }
        }
    }
    std::vector<int> selected;
    for (int v = 0; v < size(); ++v) {
        if (keep[static_cast<std::size_t>(v)]) selected.push_back(v);
    }
    int k = static_cast<int>(selected.size());
    std::vector<Node> sub_nodes;
    sub_nodes.reserve(static_cast<std::size_t>(k));
    for (int v : selected) sub_nodes.push_back(nodes_[static_cast<std::size_t>(v)]);
    int words = words_for(k);
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(k) * static_cast<std::size_t>(words), 0);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (i != j && edge(selected[static_cast<std::size_t>(i)], selected[static_cast<std::size_t>(j)])) {
                set_bit(adj, words, i, j);
            }
        }
    }
    return assemble(sys, std::move(sub_nodes), std::move(adj));
}

std::vector<std::pair<int, int>> WitnessDag::node_configuration(const EventSystem& sys, int v,
                                                                const ResamplingTable& table) const {
    if (v < 0 || v >= size()) throw InvalidModel("node index out of range");
    std::vector<std::pair<int, int>> config;
    for (int var : sys.event(nodes_[static_cast<std::size_t>(v)].event).scope) {
        int y = 0;
        for (int w : variable_path(var)) {
            if (w != v && edge(w, v)) ++y;
        }
        config.emplace_back(var, table.cell(var, y + 1));
    }
    return config;
}

bool WitnessDag::compatible(const EventSystem& sys, const ResamplingTable& table) const {
    for (int v = 0; v < size(); ++v) {
        auto config = node_configuration(sys, v, table);
        bool holds = sys.evaluate_with(nodes_[static_cast<std::size_t>(v)].event, [&](int var) {
            auto it = std::lower_bound(config.begin(), config.end(), std::pair<int, int>{var, INT_MIN});
            return it->second;
        });
        if (!holds) return false;
    }
    return true;
}

Rational WitnessDag::weight(const EventSystem& sys, const Rational& rho) const {
    Rational w = 1;
    for (const Node& node : nodes_) w *= sys.event_prob(node.event);
    if (rho != 0) w *= rational_pow(1 + rho, static_cast<unsigned long>(size()));
    return w;
}

std::vector<int> WitnessDag::collectible_targets(const EventSystem& sys) const {
    std::vector<int> targets;
    if (size() == 0) {
        for (int b = 0; b < sys.event_count(); ++b) targets.push_back(b);
        return targets;
    }
    bool first = true;
    for (int s : sinks()) {
        const std::vector<int>& nb = sys.neighbors(nodes_[static_cast<std::size_t>(s)].event);
        if (first) {
            targets = nb;
            first = false;
        } else {
            std::vector<int> next;
            std::set_intersection(targets.begin(), targets.end(), nb.begin(), nb.end(),
                                  std::back_inserter(next));
            targets = std::move(next);
        }
        if (targets.empty()) break;
    }
    return targets;
}

std::vector<std::int32_t> WitnessDag::canonical_key() const {
    std::vector<std::int32_t> key;
    key.push_back(size());
    for (const Node& node : nodes_) {
        key.push_back(node.event);
        key.push_back(node.occ);
    }
    std::vector<std::int32_t> edge_blob;
    for (int u = 0; u < size(); ++u) {
        for (int v = 0; v < size(); ++v) {
            if (u != v && edge(u, v)) {
                edge_blob.push_back(u);
                edge_blob.push_back(v);
            }
        }
    }
    key.push_back(static_cast<std::int32_t>(edge_blob.size() / 2));
    key.insert(key.end(), edge_blob.begin(), edge_blob.end());
    return key;
}

std::size_t CanonicalKeyHash::operator()(const std::vector<std::int32_t>& key) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int32_t v : key) {
        h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
        h *= 1099511628211ull;
    }
    return h;
}

bool consistent(const WitnessDag& a, const WitnessDag& b) {
    for (int var : a.touched_variables()) {
        std::vector<int> pa = a.path_events(var);
        std::vector<int> pb = b.path_events(var);
        const std::vector<int>& shorter = pa.size() <= pb.size() ? pa : pb;
        const std::vector<int>& longer = pa.size() <= pb.size() ? pb : pa;
        if (!std::equal(shorter.begin(), shorter.end(), longer.begin())) return false;
    }
    return true;
}

WitnessDag merge(const EventSystem& sys, const WitnessDag& a, const WitnessDag& b) {
    if (!consistent(a, b)) throw InconsistentMerge("witness DAGs are not consistent");
    std::vector<WitnessDag::Node> nodes;
    for (int v = 0; v < a.size(); ++v) nodes.push_back(a.node(v));
    for (int v = 0; v < b.size(); ++v) nodes.push_back(b.node(v));
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    int k = static_cast<int>(nodes.size());
    int words = words_for(k);
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(k) * static_cast<std::size_t>(words), 0);
    auto index_of = [&](const WitnessDag::Node& node) {
        return static_cast<int>(std::lower_bound(nodes.begin(), nodes.end(), node) - nodes.begin());
    };
    for (const WitnessDag* g : {&a, &b}) {
        std::vector<int> map(static_cast<std::size_t>(g->size()));
        for (int v = 0; v < g->size(); ++v) map[static_cast<std::size_t>(v)] = index_of(g->node(v));
        for (int u = 0; u < g->size(); ++u) {
            for (int v = 0; v < g->size(); ++v) {
                if (u != v && g->edge(u, v)) {
                    set_bit(adj, words, map[static_cast<std::size_t>(u)], map[static_cast<std::size_t>(v)]);
                }
            }
        }
    }
    return WitnessDag::assemble(sys, std::move(nodes), std::move(adj));
}

WitnessDag extend_with_sink(const EventSystem& sys, const WitnessDag& dag, int event) {
    if (event < 0 || event >= sys.event_count()) throw InvalidModel("event id out of range");
    int occ = 1;
    for (int v = 0; v < dag.size(); ++v) {
        if (dag.node(v).event == event) ++occ;
    }
    WitnessDag::Node fresh{event, occ};
    std::vector<WitnessDag::Node> nodes;
    nodes.reserve(static_cast<std::size_t>(dag.size()) + 1);
    for (int v = 0; v < dag.size(); ++v) nodes.push_back(dag.node(v));
    auto ins = std::lower_bound(nodes.begin(), nodes.end(), fresh);
    int pos = static_cast<int>(ins - nodes.begin());
    nodes.insert(ins, fresh);

    int k = static_cast<int>(nodes.size());
    int words = words_for(k);
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(k) * static_cast<std::size_t>(words), 0);
    auto remap = [&](int v) { return v < pos ? v : v + 1; };
    for (int u = 0; u < dag.size(); ++u) {
        for (int v = 0; v < dag.size(); ++v) {
            if (u != v && dag.edge(u, v)) set_bit(adj, words, remap(u), remap(v));
        }
        if (sys.dependent(dag.node(u).event, event)) set_bit(adj, words, remap(u), pos);
    }
    return WitnessDag::assemble(sys, std::move(nodes), std::move(adj));
}

WitnessDag full_witness_dag(const EventSystem& sys, const std::vector<int>& log) {
    return WitnessDag::from_label_sequence(sys, log);
}

WitnessTree witness_tree(const EventSystem& sys, const std::vector<int>& log, int t) {
    if (t < 1 || t > static_cast<int>(log.size())) throw InvalidModel("witness tree index out of range");
    struct TreeNode {
        int log_index;
        int depth;
        int parent;  // tree node id, -1 at root
    };
    std::vector<TreeNode> tree{{t - 1, 0, -1}};
    for (int j = t - 2; j >= 0; --j) {
        int best = -1;
        for (int i = 0; i < static_cast<int>(tree.size()); ++i) {
            if (!sys.dependent(log[static_cast<std::size_t>(tree[static_cast<std::size_t>(i)].log_index)],
                               log[static_cast<std::size_t>(j)])) {
                continue;
            }
            if (best < 0 || tree[static_cast<std::size_t>(i)].depth >
                                tree[static_cast<std::size_t>(best)].depth) {
                best = i;  // ascending scan keeps the smallest node id on depth ties
            }
        }
        if (best >= 0) {
            tree.push_back({j, tree[static_cast<std::size_t>(best)].depth + 1, best});
        }
    }
    WitnessTree out;
    std::vector<int> order(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        return tree[static_cast<std::size_t>(x)].log_index < tree[static_cast<std::size_t>(y)].log_index;
    });
    std::vector<int> pos_of_tree(tree.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
        pos_of_tree[static_cast<std::size_t>(order[p])] = static_cast<int>(p);
    }
    std::vector<int> labels;
    for (int id : order) {
        out.log_indices.push_back(tree[static_cast<std::size_t>(id)].log_index);
        labels.push_back(log[static_cast<std::size_t>(tree[static_cast<std::size_t>(id)].log_index)]);
        int par = tree[static_cast<std::size_t>(id)].parent;
        out.parent.push_back(par < 0 ? -1 : pos_of_tree[static_cast<std::size_t>(par)]);
    }
    out.dag = WitnessDag::from_label_sequence(sys, labels);
    return out;
}

std::string dag_json(const WitnessDag& dag) {
    using nlohmann::json;
    json nodes = json::array();
    for (int v = 0; v < dag.size(); ++v) {
        nodes.push_back({{"id", v}, {"event", dag.node(v).event + 1}, {"k", dag.node(v).occ}});
    }
    json edges = json::array();
    for (int u = 0; u < dag.size(); ++u) {
        for (int v = 0; v < dag.size(); ++v) {
            if (u != v && dag.edge(u, v)) edges.push_back({u, v});
        }
    }
    return json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}}.dump();
}

WitnessDag dag_from_json(const EventSystem& sys, std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad witness-DAG JSON: ") + e.what());
    }
    try {
        const json& jnodes = doc.at("nodes");
        int v_count = static_cast<int>(jnodes.size());
        std::vector<WitnessDag::Node> nodes(static_cast<std::size_t>(v_count));
        std::vector<char> seen(static_cast<std::size_t>(v_count), 0);
        for (const json& jn : jnodes) {
            int id = jn.at("id").get<int>();
            if (id < 0 || id >= v_count || seen[static_cast<std::size_t>(id)]) {
                throw InvalidModel("witness-DAG node ids must be distinct 0..V-1");
            }
            seen[static_cast<std::size_t>(id)] = 1;
            nodes[static_cast<std::size_t>(id)] =
                WitnessDag::Node{jn.at("event").get<int>() - 1,
                                 jn.contains("k") ? jn.at("k").get<int>() : 0};
        }
        std::vector<std::pair<int, int>> edges;
        for (const json& je : doc.at("edges")) {
            if (!je.is_array() || je.size() != 2) throw InvalidModel("edges are [u,v] pairs");
            edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
        }
        return WitnessDag::from_parts(sys, nodes, edges);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad witness-DAG JSON: ") + e.what());
    }
}

}  // namespace lll
