#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfheal/graph.hpp"

namespace selfheal {

/// Rooted decomposition of the healing edges E' into trees, with subtree
/// weight sums so that W(T(u,v)) is O(1) for any E'-edge (u,v).
class ForestView {
public:
    explicit ForestView(const Graph& g);

    /// False when E' contains a cycle; branch weights are then meaningless.
    bool is_forest() const { return !cycle_edge_; }
    const std::optional<Edge>& cycle_edge() const { return cycle_edge_; }

    NodeId root_of(NodeId v) const { return NodeId{root_[v.index]}; }
    std::optional<NodeId> parent_of(NodeId v) const;
    /// W(T_v): total weight of v's tree.
    std::int64_t tree_weight(NodeId v) const { return tree_weight_[root_[v.index]]; }
    /// W(T(u,v)): weight of the tree containing u once v is removed. u must be an E'-neighbor of v.
    std::int64_t branch_weight(NodeId v, NodeId u) const;
    /// Live nodes grouped by tree, keyed by tree root.
    std::map<NodeId, std::vector<NodeId>> trees() const;

private:
    static constexpr std::uint32_t no_parent = UINT32_MAX;

    std::vector<NodeId> live_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> root_;
    std::vector<std::int64_t> subtree_weight_;
    std::vector<std::int64_t> tree_weight_; ///< indexed by root
    std::optional<Edge> cycle_edge_;
};

/// rem(v) = sum of W(T(u,v)) over E'-neighbors u, minus the largest, plus w(v).
std::int64_t rem(NodeId v, const ForestView& fv, const Graph& g);

struct LemmaResult {
    bool evaluated = false;
    bool ok = true;
    std::optional<NodeId> witness;
    std::string detail;

    void fail(std::optional<NodeId> node, std::string why);
};

/// One entry per runtime-checked claim. A failed entry carries a witness.
struct LemmaReport {
    LemmaResult forest;              ///< E' acyclic
    LemmaResult component_ids;       ///< one label per E' tree, distinct across trees, <= every member's original ID
    LemmaResult rem_monotone;        ///< rem_t(v) >= rem_{t-1}(v)
    LemmaResult rem_lower;           ///< rem(v) >= 2^(max(delta,0)/2)
    LemmaResult rem_upper;           ///< rem(v) <= total live weight
    LemmaResult subtree_weight;      ///< W(T(v,q)) >= rem(v) for every E'-edge (v,q)
    LemmaResult degree_bound;        ///< delta(v) <= 2 log2 n
    LemmaResult weight_conservation; ///< live weight == n - dropped weight

    std::vector<std::pair<std::string, const LemmaResult*>> entries() const;
    bool all_ok() const;
};

/// rem values of the previous round, for the monotonicity check.
struct RemHistory {
    std::vector<std::optional<std::int64_t>> previous;
};

/// Evaluates every entry of LemmaReport against the current state and
/// updates `history`. Rem-based entries are skipped if E' is not a forest.
LemmaReport check_round(const Graph& g, const ForestView& fv, RemHistory& history);

/// Thrown when a distance query finds the live graph split.
class DisconnectedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All-pairs distances on the t=0 graph, computed once per run.
class StretchOracle {
public:
    static constexpr std::uint16_t unreachable = UINT16_MAX;

    explicit StretchOracle(const Graph& g);

    std::uint16_t initial_distance(NodeId a, NodeId b) const { return dist_[a.index * n_ + b.index]; }

    /// Max over live ordered pairs of current distance / initial distance.
    /// Needs at least two live nodes; throws DisconnectedError if the live graph is split.
    double stretch(const Graph& current) const;

private:
    std::size_t n_;
    std::vector<std::uint16_t> dist_;
};

/// One-shot helper building a StretchOracle from g's initial snapshot.
double stretch(const Graph& g);

struct NodeMessageStats {
    NodeId node;
    std::int64_t traffic = 0; ///< messages sent + received
    double traffic_bound = 0; ///< 2 (d + 2 log2 n) ln n
    int id_changes = 0;
    double id_change_bound = 0; ///< 2 ln n
    bool violates() const { return traffic > traffic_bound || id_changes > id_change_bound; }
};

struct MessageStats {
    std::vector<NodeMessageStats> nodes; ///< every node ever present, live or deleted
    std::int64_t max_traffic = 0;
    int max_id_changes = 0;
    std::size_t violations = 0;
};

MessageStats message_stats(const Graph& g);

struct DegreeStats {
    int max_delta = 0;
    double mean_delta = 0.0;
    std::map<int, int> histogram; ///< delta -> live node count
};

DegreeStats degree_stats(const Graph& g);

/// Measurements taken after one round.
struct MetricsRecord {
    int round = 0;
    int n_alive = 0;
    int max_delta = 0;
    double mean_delta = 0.0;
    std::optional<double> stretch;
    std::int64_t total_messages = 0;
    int max_id_changes = 0;
    std::int64_t weight_total = 0;
    std::optional<LemmaReport> lemmas;
};

} // namespace selfheal
