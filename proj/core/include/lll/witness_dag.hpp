#pragma once

#include <lll/event_model.hpp>
#include <lll/rational.hpp>
#include <lll/resampling_table.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lll {

/// Event-labeled DAG with the comparability property: two nodes carry an edge
/// (in exactly one direction) precisely when their labels share a variable.
/// Nodes are stored sorted by extended label (event, occurrence), which makes
/// structural equality plain member equality.
class WitnessDag {
public:
    struct Node {
        int event = 0;  // 0-based event id
        int occ = 1;    // occurrence index among equal-labeled nodes, 1-based
        friend auto operator<=>(const Node&, const Node&) = default;
    };

    WitnessDag() = default;

    int size() const { return static_cast<int>(nodes_.size()); }
    const Node& node(int v) const { return nodes_[static_cast<std::size_t>(v)]; }
    bool edge(int u, int v) const {
        return adj_[static_cast<std::size_t>(u) * static_cast<std::size_t>(words_) +
                    static_cast<std::size_t>(v >> 6)] >>
                   (v & 63) &
               1;
    }

    /// Builds the DAG whose nodes are the sequence entries and whose edges
    /// run from earlier to later entries with dependent labels. Any valid
    /// witness DAG arises this way from its topological label order; a log
    /// yields its full witness DAG.
    static WitnessDag from_label_sequence(const EventSystem& sys, const std::vector<int>& events);

    /// Builds from explicit (event, k) nodes and edges over node positions,
    /// throwing InvalidModel with a description when the witness-DAG
    /// conditions fail. `k` values, if nonzero, are checked against the
    /// derived occurrence indices.
    static WitnessDag from_parts(const EventSystem& sys, const std::vector<Node>& nodes,
                                 const std::vector<std::pair<int, int>>& edges);

    /// Node indices with no outgoing edge.
    std::vector<int> sinks() const;

    /// Nodes whose label scope contains var, in precedence order (the
    /// variable path G[i]); empty when the variable is untouched.
    const std::vector<int>& variable_path(int var) const;
    int path_length(int var) const;
    /// Event labels along G[i] in order.
    std::vector<int> path_events(int var) const;
    /// Sorted variables with non-empty paths.
    const std::vector<int>& touched_variables() const { return path_var_; }

    /// Prefix closure: the sub-DAG induced by every node that reaches one of
    /// the given nodes. Extended labels are preserved.
    WitnessDag prefix(const EventSystem& sys, const std::vector<int>& targets) const;

    /// The values node v's label is evaluated against: for each scope
    /// variable i, R(i, y+1) where y counts var-i nodes preceding v.
    std::vector<std::pair<int, int>> node_configuration(const EventSystem& sys, int v,
                                                        const ResamplingTable& table) const;

    /// True when every node's label holds on its node configuration.
    bool compatible(const EventSystem& sys, const ResamplingTable& table) const;

    /// prod P(label) * (1+rho)^size (the rho=0 case is the plain weight).
    Rational weight(const EventSystem& sys, const Rational& rho = Rational(0)) const;

    /// Events B such that every sink label depends on B; non-empty means the
    /// DAG is collectible.
    std::vector<int> collectible_targets(const EventSystem& sys) const;

    /// Flat [V, e_1, k_1, ..., E, u_1, v_1, ...] encoding; equal keys iff the
    /// DAGs are isomorphic as extended-label DAGs.
    std::vector<std::int32_t> canonical_key() const;

    bool operator==(const WitnessDag&) const = default;

private:
    static WitnessDag assemble(const EventSystem& sys, std::vector<Node> sorted_nodes,
                               std::vector<std::uint64_t> adj);
    friend WitnessDag merge(const EventSystem& sys, const WitnessDag& a, const WitnessDag& b);
    friend WitnessDag extend_with_sink(const EventSystem& sys, const WitnessDag& dag, int event);

    std::vector<Node> nodes_;  // sorted by (event, occ)
    int words_ = 0;
    std::vector<std::uint64_t> adj_;  // row bitmask matrix, node u row at [u*words_ ..]
    std::vector<int> path_var_;
    std::vector<std::vector<int>> path_nodes_;
};

struct CanonicalKeyHash {
    std::size_t operator()(const std::vector<std::int32_t>& key) const;
};

/// Checks the witness-DAG conditions on raw parts; nullopt means valid.
std::optional<std::string> validate_parts(const EventSystem& sys,
                                          const std::vector<WitnessDag::Node>& nodes,
                                          const std::vector<std::pair<int, int>>& edges);

/// Re-checks a built DAG (acyclicity, comparability, occurrence indices).
std::optional<std::string> validate(const EventSystem& sys, const WitnessDag& dag);

/// Per-variable prefix relation on label sequences: true when for every
/// variable one DAG's path is an initial segment of the other's.
bool consistent(const WitnessDag& a, const WitnessDag& b);

/// Union on extended labels with edges inherited from either side. Throws
/// InconsistentMerge when the inputs are not consistent. Both inputs are
/// prefixes of the result.
WitnessDag merge(const EventSystem& sys, const WitnessDag& a, const WitnessDag& b);

/// Adds one sink labeled `event`; edges arrive from every node whose label
/// depends on it (that is all of them when the input is collectible to it).
WitnessDag extend_with_sink(const EventSystem& sys, const WitnessDag& dag, int event);

/// Full witness DAG of an execution log.
WitnessDag full_witness_dag(const EventSystem& sys, const std::vector<int>& log);

struct WitnessTree {
    WitnessDag dag;                 // induced witness-DAG closure of the tree
    std::vector<int> log_indices;   // included 0-based log positions, ascending
    std::vector<int> parent;        // parallel to log_indices; index into log_indices, -1 at root
};

/// Moser-Tardos style witness tree for log position t (1-based): scanning
/// backwards, each event attaches under the deepest node with a dependent
/// label (ties to the smallest node id).
WitnessTree witness_tree(const EventSystem& sys, const std::vector<int>& log, int t);

/// { "nodes": [{"id", "event", "k"}], "edges": [[u,v]] }, 1-based event ids.
std::string dag_json(const WitnessDag& dag);
WitnessDag dag_from_json(const EventSystem& sys, std::string_view text);

}  // namespace lll
