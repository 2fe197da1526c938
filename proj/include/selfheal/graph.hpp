#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfheal/rng.hpp"

namespace selfheal {

/// Stable node handle. Indices are assigned at construction and never reused.
struct NodeId {
    std::uint32_t index = 0;

    friend constexpr auto operator<=>(const NodeId&, const NodeId&) = default;
};

/// Unordered node pair, stored with a < b.
struct Edge {
    NodeId a;
    NodeId b;

    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

/// Normalizes the pair; self-pairs are rejected.
Edge make_edge(NodeId x, NodeId y);

struct NodeState {
    double original_id = 0.0;  ///< fixed random ID in [0,1)
    double component_id = 0.0; ///< propagated minimum ID of the node's healing tree
    std::int64_t weight = 1;
    int initial_degree = 0;
    int id_change_count = 0;
    std::int64_t messages_sent = 0;
    std::int64_t messages_received = 0;
};

/// Thrown when an operation names a node that does not exist or is already deleted.
class DeadNodeError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Undirected network with two edge sets: the real edges E and the subset E'
/// of edges added (or flagged) by healing. Deleted nodes keep their NodeState
/// so cumulative counters survive, but lose all edges.
class Graph {
public:
    Graph() = default;

    /// Builds the t=0 network. Node i receives original_ids[i] as both its
    /// original and component ID; the edge list becomes the initial snapshot.
    Graph(std::vector<double> original_ids, std::span<const Edge> edges);

    std::size_t node_count() const { return states_.size(); }
    std::size_t alive_count() const { return alive_count_; }
    bool is_alive(NodeId v) const { return v.index < alive_.size() && alive_[v.index]; }
    std::vector<NodeId> live_nodes() const;

    const NodeState& state(NodeId v) const;
    NodeState& state(NodeId v);

    const std::set<NodeId>& neighbors(NodeId v) const;
    const std::set<NodeId>& healing_neighbors(NodeId v) const;
    const std::vector<NodeId>& initial_neighbors(NodeId v) const;
    int degree(NodeId v) const { return static_cast<int>(neighbors(v).size()); }

    bool has_edge(NodeId a, NodeId b) const;
    bool has_healing_edge(NodeId a, NodeId b) const;
    std::size_t edge_count() const { return edge_count_; }
    std::size_t healing_edge_count() const { return healing_edge_count_; }
    std::vector<Edge> edges() const;
    std::vector<Edge> healing_edges() const;

    /// Adds (a,b) to E if absent; if `healing`, also flags it as a member of E'.
    /// Returns true when E or E' changed.
    bool add_edge(NodeId a, NodeId b, bool healing);

    /// Removes v and every incident edge from E and E'.
    void remove_node(NodeId v);

    std::int64_t total_live_weight() const;
    std::int64_t dropped_weight() const { return dropped_weight_; }
    void drop_weight(std::int64_t w) { dropped_weight_ += w; }

private:
    void require_alive(NodeId v, const char* what) const;

    std::vector<NodeState> states_;
    std::vector<char> alive_;
    std::vector<std::set<NodeId>> adjacency_;
    std::vector<std::set<NodeId>> healing_adjacency_;
    std::vector<std::vector<NodeId>> initial_adjacency_;
    std::size_t alive_count_ = 0;
    std::size_t edge_count_ = 0;
    std::size_t healing_edge_count_ = 0;
    std::int64_t dropped_weight_ = 0;
};

/// Draws n distinct IDs uniformly from [0,1); a repeated draw is redrawn.
std::vector<double> draw_node_ids(std::size_t n, Rng& rng);

/// True when the live nodes form a single connected component in E
/// (vacuously true for zero or one live node).
bool is_connected(const Graph& g);

struct NeighborSnapshot {
    double original_id = 0.0;
    double component_id = 0.0;
    int delta = 0; ///< degree increase before the deletion
};

/// What the neighbors of a deleted node know at the moment of deletion.
struct DeletionContext {
    NodeId victim;
    std::int64_t victim_weight = 0;
    double victim_component_id = 0.0;
    std::set<NodeId> g_neighbors;
    std::set<NodeId> gprime_neighbors;
    std::map<NodeId, NeighborSnapshot> neighbors;
};

/// One healing edge proposal. Unmarked edges never enter E'.
struct PlanEdge {
    Edge edge;
    bool healing_marked = true;
};

struct ReconnectionPlan {
    std::vector<PlanEdge> edges;
    std::vector<NodeId> participants;
    bool surrogate = false; ///< star through one participant (SDASH) instead of a binary tree
};

struct PropagationResult {
    double min_id = 0.0;
    std::vector<NodeId> changed;
    std::int64_t messages = 0;
};

/// Snapshots v's neighborhood, then deletes v. Weight transfer is separate.
DeletionContext capture_and_delete(Graph& g, NodeId v);

/// One representative (minimum original ID) per component-ID class of the
/// victim's neighbors, excluding the victim's own class.
std::set<NodeId> unique_neighbors(const DeletionContext& ctx);

/// Adds every plan edge to E; healing-marked edges also join E'. An edge
/// already in E is not duplicated (it is only flagged into E' when marked).
void apply_plan(Graph& g, const ReconnectionPlan& plan);

/// Floods the minimum component ID through the E' tree containing `seeds`.
/// Each node whose ID drops sends one message per current E-neighbor.
PropagationResult propagate_component_id(Graph& g, std::span<const NodeId> seeds);

/// Moves the victim's weight to its minimum-ID E'-neighbor, falling back to
/// its minimum-ID E-neighbor. With no neighbors the weight is dropped.
std::optional<NodeId> transfer_weight(Graph& g, const DeletionContext& ctx);

/// Current degree minus degree at t=0.
int degree_delta(const Graph& g, NodeId v);

std::string to_string(NodeId v);

} // namespace selfheal
