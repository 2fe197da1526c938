#include "selfheal/generators.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace selfheal {

std::vector<NodeId> TreeShape::nodes_at_level(int level) const
{
    std::vector<NodeId> out;
    for (std::uint32_t i = 0; i < level_of.size(); ++i) {
        if (level_of[i] == level) {
            out.push_back(NodeId{i});
        }
    }
    return out;
}

std::optional<NodeId> TreeShape::parent_of(NodeId v) const
{
    if (v.index == 0 || v.index >= level_of.size()) {
        return std::nullopt;
    }
    return NodeId{static_cast<std::uint32_t>((v.index - 1) / static_cast<std::uint32_t>(arity))};
}

bool TreeShape::is_descendant(NodeId ancestor, NodeId x) const
{
    if (x.index >= level_of.size() || ancestor.index >= level_of.size()) {
        return false;
    }
    for (auto p = parent_of(x); p; p = parent_of(*p)) {
        if (*p == ancestor) {
            return true;
        }
    }
    return false;
}

Graph preferential_attachment(int n, int m, Rng& rng)
{
    if (m < 1) {
        throw std::invalid_argument(fmt::format("preferential_attachment: m must be >= 1 (got {})", m));
    }
    if (n < m + 1) {
        throw std::invalid_argument(fmt::format("preferential_attachment: n must be >= m+1 (got n={}, m={})", n, m));
    }

    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(m) * (m + 1) / 2 + static_cast<std::size_t>(n - m - 1) * m);
    // Every edge contributes both endpoints, so a uniform draw from the urn is
    // a degree-proportional draw over nodes.
    std::vector<NodeId> urn;
    urn.reserve(2 * edges.capacity());

    for (std::uint32_t i = 0; i <= static_cast<std::uint32_t>(m); ++i) {
        for (std::uint32_t j = i + 1; j <= static_cast<std::uint32_t>(m); ++j) {
            edges.push_back(Edge{NodeId{i}, NodeId{j}});
            urn.push_back(NodeId{i});
            urn.push_back(NodeId{j});
        }
    }

    std::vector<NodeId> targets;
    for (std::uint32_t k = static_cast<std::uint32_t>(m) + 1; k < static_cast<std::uint32_t>(n); ++k) {
        targets.clear();
        while (targets.size() < static_cast<std::size_t>(m)) {
            const NodeId t = urn[rng.uniform_below(urn.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
                targets.push_back(t);
            }
        }
        for (NodeId t : targets) {
            edges.push_back(Edge{t, NodeId{k}});
            urn.push_back(t);
            urn.push_back(NodeId{k});
        }
    }

    return Graph(draw_node_ids(static_cast<std::size_t>(n), rng), edges);
}

std::pair<Graph, TreeShape> complete_kary_tree(int arity, int depth, Rng& rng)
{
    if (arity < 2 || depth < 1) {
        throw std::invalid_argument(fmt::format("complete_kary_tree: need arity >= 2 and depth >= 1 (got {}, {})", arity, depth));
    }
    std::size_t total = 0;
    std::size_t level_size = 1;
    for (int d = 0; d <= depth; ++d) {
        total += level_size;
        level_size *= static_cast<std::size_t>(arity);
        if (total > (1U << 24)) {
            throw std::invalid_argument("complete_kary_tree: tree too large");
        }
    }

    TreeShape shape;
    shape.arity = arity;
    shape.depth = depth;
    shape.level_of.resize(total);
    shape.children_of.resize(total);
    std::vector<Edge> edges;
    edges.reserve(total - 1);

    shape.level_of[0] = 0;
    for (std::uint32_t i = 1; i < total; ++i) {
        const std::uint32_t parent = (i - 1) / static_cast<std::uint32_t>(arity);
        shape.level_of[i] = shape.level_of[parent] + 1;
        shape.children_of[parent].push_back(NodeId{i});
        edges.push_back(Edge{NodeId{parent}, NodeId{i}});
    }

    Graph g(draw_node_ids(total, rng), edges);
    return {std::move(g), std::move(shape)};
}

FixtureKind parse_fixture_kind(std::string_view name)
{
    if (name == "line") {
        return FixtureKind::line;
    }
    if (name == "star") {
        return FixtureKind::star;
    }
    if (name == "cycle") {
        return FixtureKind::cycle;
    }
    throw std::invalid_argument(fmt::format("unknown fixture kind '{}'", name));
}

Graph fixture(FixtureKind kind, int n, Rng& rng)
{
    const int min_n = kind == FixtureKind::cycle ? 3 : 1;
    if (n < min_n) {
        throw std::invalid_argument(fmt::format("fixture: n must be >= {} (got {})", min_n, n));
    }
    std::vector<Edge> edges;
    const auto un = static_cast<std::uint32_t>(n);
    switch (kind) {
    case FixtureKind::line:
    case FixtureKind::cycle:
        for (std::uint32_t i = 0; i + 1 < un; ++i) {
            edges.push_back(Edge{NodeId{i}, NodeId{i + 1}});
        }
        if (kind == FixtureKind::cycle) {
            edges.push_back(Edge{NodeId{0}, NodeId{un - 1}});
        }
        break;
    case FixtureKind::star:
        for (std::uint32_t i = 1; i < un; ++i) {
            edges.push_back(Edge{NodeId{0}, NodeId{i}});
        }
        break;
    }
    return Graph(draw_node_ids(static_cast<std::size_t>(n), rng), edges);
}

} // namespace selfheal
