#include "selfheal/graph.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <unordered_set>

#include <fmt/format.h>

namespace selfheal {

Edge make_edge(NodeId x, NodeId y)
{
    if (x == y) {
        throw std::invalid_argument("self-loop " + to_string(x));
    }
    return x < y ? Edge{x, y} : Edge{y, x};
}

std::string to_string(NodeId v) { return fmt::format("n{}", v.index); }

Graph::Graph(std::vector<double> original_ids, std::span<const Edge> edges)
{
    const std::size_t n = original_ids.size();
    if (n > std::numeric_limits<std::uint32_t>::max()) {
        throw std::length_error("too many nodes");
    }
    states_.resize(n);
    alive_.assign(n, 1);
    adjacency_.resize(n);
    healing_adjacency_.resize(n);
    initial_adjacency_.resize(n);
    alive_count_ = n;

    for (std::size_t i = 0; i < n; ++i) {
        states_[i].original_id = original_ids[i];
        states_[i].component_id = original_ids[i];
    }
    for (const Edge& e : edges) {
        if (e.a.index >= n || e.b.index >= n) {
            throw std::out_of_range(fmt::format("edge ({}, {}) outside a {}-node graph", e.a.index, e.b.index, n));
        }
        const Edge norm = make_edge(e.a, e.b);
        if (!adjacency_[norm.a.index].insert(norm.b).second) {
            throw std::invalid_argument(fmt::format("parallel edge ({}, {})", norm.a.index, norm.b.index));
        }
        adjacency_[norm.b.index].insert(norm.a);
        ++edge_count_;
    }
    for (std::size_t i = 0; i < n; ++i) {
        initial_adjacency_[i].assign(adjacency_[i].begin(), adjacency_[i].end());
        states_[i].initial_degree = static_cast<int>(adjacency_[i].size());
    }
}

std::vector<NodeId> Graph::live_nodes() const
{
    std::vector<NodeId> out;
    out.reserve(alive_count_);
    for (std::uint32_t i = 0; i < alive_.size(); ++i) {
        if (alive_[i]) {
            out.push_back(NodeId{i});
        }
    }
    return out;
}

void Graph::require_alive(NodeId v, const char* what) const
{
    if (!is_alive(v)) {
        throw DeadNodeError(fmt::format("{}: node {} is not live", what, v.index));
    }
}

const NodeState& Graph::state(NodeId v) const
{
    if (v.index >= states_.size()) {
        throw DeadNodeError(fmt::format("state: unknown node {}", v.index));
    }
    return states_[v.index];
}

NodeState& Graph::state(NodeId v)
{
    if (v.index >= states_.size()) {
        throw DeadNodeError(fmt::format("state: unknown node {}", v.index));
    }
    return states_[v.index];
}

const std::set<NodeId>& Graph::neighbors(NodeId v) const
{
    if (v.index >= adjacency_.size()) {
        throw DeadNodeError(fmt::format("neighbors: unknown node {}", v.index));
    }
    return adjacency_[v.index];
}

const std::set<NodeId>& Graph::healing_neighbors(NodeId v) const
{
    if (v.index >= healing_adjacency_.size()) {
        throw DeadNodeError(fmt::format("healing_neighbors: unknown node {}", v.index));
    }
    return healing_adjacency_[v.index];
}

const std::vector<NodeId>& Graph::initial_neighbors(NodeId v) const
{
    if (v.index >= initial_adjacency_.size()) {
        throw DeadNodeError(fmt::format("initial_neighbors: unknown node {}", v.index));
    }
    return initial_adjacency_[v.index];
}

bool Graph::has_edge(NodeId a, NodeId b) const
{
    return a.index < adjacency_.size() && adjacency_[a.index].contains(b);
}

bool Graph::has_healing_edge(NodeId a, NodeId b) const
{
    return a.index < healing_adjacency_.size() && healing_adjacency_[a.index].contains(b);
}

namespace {

std::vector<Edge> collect_edges(const std::vector<std::set<NodeId>>& adj)
{
    std::vector<Edge> out;
    for (std::uint32_t i = 0; i < adj.size(); ++i) {
        for (NodeId u : adj[i]) {
            if (i < u.index) {
                out.push_back(Edge{NodeId{i}, u});
            }
        }
    }
    return out;
}

} // namespace

std::vector<Edge> Graph::edges() const { return collect_edges(adjacency_); }

std::vector<Edge> Graph::healing_edges() const { return collect_edges(healing_adjacency_); }

bool Graph::add_edge(NodeId a, NodeId b, bool healing)
{
    require_alive(a, "add_edge");
    require_alive(b, "add_edge");
    const Edge e = make_edge(a, b);
    bool changed = false;
    if (adjacency_[e.a.index].insert(e.b).second) {
        adjacency_[e.b.index].insert(e.a);
        ++edge_count_;
        changed = true;
    }
    if (healing && healing_adjacency_[e.a.index].insert(e.b).second) {
        healing_adjacency_[e.b.index].insert(e.a);
        ++healing_edge_count_;
        changed = true;
    }
    return changed;
}

void Graph::remove_node(NodeId v)
{
    require_alive(v, "remove_node");
    for (NodeId u : adjacency_[v.index]) {
        adjacency_[u.index].erase(v);
    }
    for (NodeId u : healing_adjacency_[v.index]) {
        healing_adjacency_[u.index].erase(v);
    }
    edge_count_ -= adjacency_[v.index].size();
    healing_edge_count_ -= healing_adjacency_[v.index].size();
    adjacency_[v.index].clear();
    healing_adjacency_[v.index].clear();
    alive_[v.index] = 0;
    --alive_count_;
}

std::int64_t Graph::total_live_weight() const
{
    std::int64_t total = 0;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (alive_[i]) {
            total += states_[i].weight;
        }
    }
    return total;
}

std::vector<double> draw_node_ids(std::size_t n, Rng& rng)
{
    std::vector<double> ids;
    ids.reserve(n);
    std::unordered_set<double> seen;
    while (ids.size() < n) {
        const double x = rng.uniform01();
        if (seen.insert(x).second) {
            ids.push_back(x);
        }
    }
    return ids;
}

bool is_connected(const Graph& g)
{
    const auto live = g.live_nodes();
    if (live.size() <= 1) {
        return true;
    }
    std::vector<char> seen(g.node_count(), 0);
    std::vector<NodeId> stack{live.front()};
    seen[live.front().index] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId u : g.neighbors(v)) {
            if (!seen[u.index]) {
                seen[u.index] = 1;
                ++reached;
                stack.push_back(u);
            }
        }
    }
    return reached == live.size();
}

DeletionContext capture_and_delete(Graph& g, NodeId v)
{
    if (!g.is_alive(v)) {
        throw DeadNodeError(fmt::format("capture_and_delete: node {} is not live (harness bug)", v.index));
    }
    DeletionContext ctx;
    ctx.victim = v;
    ctx.victim_weight = g.state(v).weight;
    ctx.victim_component_id = g.state(v).component_id;
    ctx.g_neighbors = g.neighbors(v);
    ctx.gprime_neighbors = g.healing_neighbors(v);
    for (NodeId u : ctx.g_neighbors) {
        const NodeState& s = g.state(u);
        ctx.neighbors.emplace(u, NeighborSnapshot{s.original_id, s.component_id, degree_delta(g, u)});
    }
    g.remove_node(v);
    return ctx;
}

std::set<NodeId> unique_neighbors(const DeletionContext& ctx)
{
    // component_id -> representative with the smallest original ID
    std::map<double, NodeId> representative;
    for (NodeId u : ctx.g_neighbors) {
        const NeighborSnapshot& s = ctx.neighbors.at(u);
        if (s.component_id == ctx.victim_component_id) {
            continue;
        }
        auto [it, inserted] = representative.emplace(s.component_id, u);
        if (!inserted && s.original_id < ctx.neighbors.at(it->second).original_id) {
            it->second = u;
        }
    }
    std::set<NodeId> out;
    for (const auto& [cid, u] : representative) {
        out.insert(u);
    }
    return out;
}

void apply_plan(Graph& g, const ReconnectionPlan& plan)
{
    for (const PlanEdge& pe : plan.edges) {
        if (!g.is_alive(pe.edge.a) || !g.is_alive(pe.edge.b)) {
            throw DeadNodeError(fmt::format("apply_plan: edge ({}, {}) has a dead endpoint", pe.edge.a.index, pe.edge.b.index));
        }
    }
    for (const PlanEdge& pe : plan.edges) {
        g.add_edge(pe.edge.a, pe.edge.b, pe.healing_marked);
    }
}

PropagationResult propagate_component_id(Graph& g, std::span<const NodeId> seeds)
{
    if (seeds.empty()) {
        throw std::invalid_argument("propagate_component_id: no seeds");
    }
    for (NodeId s : seeds) {
        if (!g.is_alive(s)) {
            throw DeadNodeError(fmt::format("propagate_component_id: seed {} is not live", s.index));
        }
    }

    std::vector<NodeId> component;
    std::unordered_set<std::uint32_t> seen;
    std::queue<NodeId> frontier;
    frontier.push(seeds.front());
    seen.insert(seeds.front().index);
    while (!frontier.empty()) {
        const NodeId v = frontier.front();
        frontier.pop();
        component.push_back(v);
        for (NodeId u : g.healing_neighbors(v)) {
            if (seen.insert(u.index).second) {
                frontier.push(u);
            }
        }
    }
    for (NodeId s : seeds) {
        if (!seen.contains(s.index)) {
            throw std::logic_error(fmt::format(
                "propagate_component_id: seeds {} and {} are in different healing trees (forest merge failed)",
                seeds.front().index, s.index));
        }
    }

    PropagationResult result;
    result.min_id = g.state(component.front()).component_id;
    for (NodeId v : component) {
        result.min_id = std::min(result.min_id, g.state(v).component_id);
    }
    std::sort(component.begin(), component.end());
    for (NodeId v : component) {
        NodeState& s = g.state(v);
        if (s.component_id <= result.min_id) {
            continue;
        }
        s.component_id = result.min_id;
        ++s.id_change_count;
        const auto& nbrs = g.neighbors(v);
        s.messages_sent += static_cast<std::int64_t>(nbrs.size());
        result.messages += static_cast<std::int64_t>(nbrs.size());
        for (NodeId u : nbrs) {
            ++g.state(u).messages_received;
        }
        result.changed.push_back(v);
    }
    return result;
}

std::optional<NodeId> transfer_weight(Graph& g, const DeletionContext& ctx)
{
    const auto pick_min_id = [&](const std::set<NodeId>& pool) -> std::optional<NodeId> {
        std::optional<NodeId> best;
        for (NodeId u : pool) {
            if (!best || g.state(u).original_id < g.state(*best).original_id) {
                best = u;
            }
        }
        return best;
    };

    std::optional<NodeId> recipient = pick_min_id(ctx.gprime_neighbors);
    if (!recipient) {
        recipient = pick_min_id(ctx.g_neighbors);
    }
    if (recipient) {
        g.state(*recipient).weight += ctx.victim_weight;
    } else {
        g.drop_weight(ctx.victim_weight);
    }
    return recipient;
}

int degree_delta(const Graph& g, NodeId v) { return g.degree(v) - g.state(v).initial_degree; }

} // namespace selfheal
