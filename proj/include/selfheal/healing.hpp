#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "selfheal/graph.hpp"

namespace selfheal {

enum class HealerKind { graph_heal, binary_tree_heal, dash, sdash };

/// Accepts the config strings "graph", "btree", "dash", "sdash".
HealerKind parse_healer(std::string_view name);
std::string to_string(HealerKind kind);

/// Healers that track healing-tree IDs and keep E' a forest.
bool is_id_tracking(HealerKind kind);

/// Edges of the complete binary tree laid out left to right, top down:
/// position i links to 2i+1 and 2i+2.
std::vector<Edge> complete_binary_tree_edges(std::span<const NodeId> ordered);

/// UN(v,G) together with N(v,G').
std::vector<NodeId> reconnection_set(const DeletionContext& ctx);

ReconnectionPlan heal_dash(const DeletionContext& ctx, const Graph& g);
ReconnectionPlan heal_sdash(const DeletionContext& ctx, const Graph& g);
ReconnectionPlan heal_binary_tree(const DeletionContext& ctx, const Graph& g);
ReconnectionPlan heal_graph(const DeletionContext& ctx, const Graph& g);

ReconnectionPlan plan_healing(HealerKind kind, const DeletionContext& ctx, const Graph& g);

} // namespace selfheal
