#include "selfheal/healing.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace selfheal {

HealerKind parse_healer(std::string_view name)
{
    if (name == "graph") {
        return HealerKind::graph_heal;
    }
    if (name == "btree") {
        return HealerKind::binary_tree_heal;
    }
    if (name == "dash") {
        return HealerKind::dash;
    }
    if (name == "sdash") {
        return HealerKind::sdash;
    }
    throw std::invalid_argument(fmt::format("unknown healer '{}' (expected graph|btree|dash|sdash)", name));
}

std::string to_string(HealerKind kind)
{
    switch (kind) {
    case HealerKind::graph_heal:
        return "graph";
    case HealerKind::binary_tree_heal:
        return "btree";
    case HealerKind::dash:
        return "dash";
    case HealerKind::sdash:
        return "sdash";
    }
    return "?";
}

bool is_id_tracking(HealerKind kind) { return kind != HealerKind::graph_heal; }

std::vector<Edge> complete_binary_tree_edges(std::span<const NodeId> ordered)
{
    std::vector<NodeId> sorted(ordered.begin(), ordered.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("complete_binary_tree_edges: duplicate node in ordering");
    }

    std::vector<Edge> edges;
    const std::size_t n = ordered.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t child = 2 * i + 1; child <= 2 * i + 2 && child < n; ++child) {
            edges.push_back(make_edge(ordered[i], ordered[child]));
        }
    }
    return edges;
}

std::vector<NodeId> reconnection_set(const DeletionContext& ctx)
{
    std::set<NodeId> s = unique_neighbors(ctx);
    s.insert(ctx.gprime_neighbors.begin(), ctx.gprime_neighbors.end());
    return {s.begin(), s.end()};
}

namespace {

ReconnectionPlan tree_plan(std::vector<NodeId> ordered)
{
    ReconnectionPlan plan;
    for (const Edge& e : complete_binary_tree_edges(ordered)) {
        plan.edges.push_back(PlanEdge{e, true});
    }
    plan.participants = std::move(ordered);
    return plan;
}

void sort_by_original_id(std::vector<NodeId>& nodes, const DeletionContext& ctx)
{
    std::sort(nodes.begin(), nodes.end(), [&](NodeId x, NodeId y) {
        return ctx.neighbors.at(x).original_id < ctx.neighbors.at(y).original_id;
    });
}

// (delta ascending, original_id ascending)
bool delta_order(const DeletionContext& ctx, NodeId x, NodeId y)
{
    const NeighborSnapshot& sx = ctx.neighbors.at(x);
    const NeighborSnapshot& sy = ctx.neighbors.at(y);
    if (sx.delta != sy.delta) {
        return sx.delta < sy.delta;
    }
    return sx.original_id < sy.original_id;
}

} // namespace

ReconnectionPlan heal_dash(const DeletionContext& ctx, const Graph&)
{
    std::vector<NodeId> participants = reconnection_set(ctx);
    std::sort(participants.begin(), participants.end(),
              [&](NodeId x, NodeId y) { return delta_order(ctx, x, y); });
    return tree_plan(std::move(participants));
}

ReconnectionPlan heal_sdash(const DeletionContext& ctx, const Graph& g)
{
    const std::vector<NodeId> s = reconnection_set(ctx);
    if (s.empty()) {
        return {};
    }
    const auto delta = [&](NodeId u) { return ctx.neighbors.at(u).delta; };

    // m: maximum delta, ties to the smaller original ID
    NodeId m = s.front();
    for (NodeId u : s) {
        if (delta(u) > delta(m) || (delta(u) == delta(m) && ctx.neighbors.at(u).original_id < ctx.neighbors.at(m).original_id)) {
            m = u;
        }
    }

    const int set_size = static_cast<int>(s.size());
    std::optional<NodeId> center;
    for (NodeId w : s) {
        if (delta(w) + set_size - 1 > delta(m)) {
            continue;
        }
        if (!center || delta_order(ctx, w, *center)) {
            center = w;
        }
    }
    if (!center) {
        return heal_dash(ctx, g);
    }

    ReconnectionPlan plan;
    plan.surrogate = true;
    plan.participants.push_back(*center);
    std::vector<NodeId> rest;
    for (NodeId u : s) {
        if (u != *center) {
            rest.push_back(u);
        }
    }
    sort_by_original_id(rest, ctx);
    for (NodeId u : rest) {
        plan.edges.push_back(PlanEdge{make_edge(*center, u), true});
        plan.participants.push_back(u);
    }
    return plan;
}

ReconnectionPlan heal_binary_tree(const DeletionContext& ctx, const Graph&)
{
    std::vector<NodeId> participants = reconnection_set(ctx);
    sort_by_original_id(participants, ctx);
    return tree_plan(std::move(participants));
}

ReconnectionPlan heal_graph(const DeletionContext& ctx, const Graph& g)
{
    std::vector<NodeId> participants(ctx.g_neighbors.begin(), ctx.g_neighbors.end());
    sort_by_original_id(participants, ctx);
    ReconnectionPlan plan = tree_plan(std::move(participants));
    for (PlanEdge& pe : plan.edges) {
        pe.healing_marked = !g.has_edge(pe.edge.a, pe.edge.b);
    }
    return plan;
}

ReconnectionPlan plan_healing(HealerKind kind, const DeletionContext& ctx, const Graph& g)
{
    switch (kind) {
    case HealerKind::graph_heal:
        return heal_graph(ctx, g);
    case HealerKind::binary_tree_heal:
        return heal_binary_tree(ctx, g);
    case HealerKind::dash:
        return heal_dash(ctx, g);
    case HealerKind::sdash:
        return heal_sdash(ctx, g);
    }
    throw std::logic_error("plan_healing: unhandled healer");
}

} // namespace selfheal
