#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "selfheal/graph.hpp"
#include "selfheal/rng.hpp"

namespace selfheal {

/// Level structure of a complete k-ary tree, numbered breadth-first from the
/// root (node 0). Kept by the LevelAttack driver after the graph is rewired.
struct TreeShape {
    int arity = 0;
    int depth = 0;
    std::vector<int> level_of;                    ///< indexed by NodeId::index
    std::vector<std::vector<NodeId>> children_of; ///< indexed by NodeId::index

    std::size_t node_count() const { return level_of.size(); }
    std::vector<NodeId> nodes_at_level(int level) const;
    std::optional<NodeId> parent_of(NodeId v) const;
    /// True when `x` lies in the original subtree rooted at `ancestor` (x != ancestor).
    bool is_descendant(NodeId ancestor, NodeId x) const;
};

/// Barabasi-Albert growth from an (m+1)-clique: each new node attaches m
/// edges to distinct existing nodes picked proportionally to degree.
Graph preferential_attachment(int n, int m, Rng& rng);

std::pair<Graph, TreeShape> complete_kary_tree(int arity, int depth, Rng& rng);

enum class FixtureKind { line, star, cycle };

FixtureKind parse_fixture_kind(std::string_view name);

/// line: 0-1-...-(n-1); star: hub 0 with leaves 1..n-1; cycle: line plus (n-1, 0).
Graph fixture(FixtureKind kind, int n, Rng& rng);

} // namespace selfheal
