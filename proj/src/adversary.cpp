#include "selfheal/adversary.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

namespace selfheal {

AttackKind parse_attack(std::string_view name)
{
    if (name == "max") {
        return {AttackKind::Tag::max_node, 0};
    }
    if (name == "nms") {
        return {AttackKind::Tag::neighbor_of_max, 0};
    }
    if (name == "random") {
        return {AttackKind::Tag::random, 0};
    }
    constexpr std::string_view prefix = "level:";
    if (name.starts_with(prefix)) {
        const std::string_view digits = name.substr(prefix.size());
        int bound = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), bound);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && bound >= 1) {
            return {AttackKind::Tag::level_attack, bound};
        }
    }
    throw std::invalid_argument(fmt::format("unknown attack '{}' (expected max|nms|random|level:M with M >= 1)", name));
}

std::string to_string(const AttackKind& kind)
{
    switch (kind.tag) {
    case AttackKind::Tag::max_node:
        return "max";
    case AttackKind::Tag::neighbor_of_max:
        return "nms";
    case AttackKind::Tag::random:
        return "random";
    case AttackKind::Tag::level_attack:
        return fmt::format("level:{}", kind.level_bound);
    }
    return "?";
}

NodeId pick_max_node(const Graph& g, Rng&)
{
    std::optional<NodeId> best;
    for (NodeId v : g.live_nodes()) {
        if (!best) {
            best = v;
            continue;
        }
        const int dv = g.degree(v);
        const int db = g.degree(*best);
        if (dv > db || (dv == db && g.state(v).original_id < g.state(*best).original_id)) {
            best = v;
        }
    }
    if (!best) {
        throw NoTargetError("pick_max_node: graph is empty");
    }
    return *best;
}

NodeId pick_neighbor_of_max(const Graph& g, Rng& rng)
{
    const NodeId hub = pick_max_node(g, rng);
    const auto& nbrs = g.neighbors(hub);
    if (nbrs.empty()) {
        throw NoTargetError("pick_neighbor_of_max: every live node is isolated");
    }
    auto it = nbrs.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(rng.uniform_below(nbrs.size())));
    return *it;
}

NodeId pick_random(const Graph& g, Rng& rng)
{
    const auto live = g.live_nodes();
    if (live.empty()) {
        throw NoTargetError("pick_random: graph is empty");
    }
    return live[rng.uniform_below(live.size())];
}

LevelAttack::LevelAttack(TreeShape shape, int bound)
    : shape_(std::move(shape))
    , bound_(bound)
    , level_(shape_.depth - 1)
{
    if (bound_ < 1) {
        throw std::invalid_argument("LevelAttack: M must be >= 1");
    }
    if (shape_.arity != bound_ + 2) {
        throw std::invalid_argument(
            fmt::format("LevelAttack: tree arity {} does not match M+2 = {}", shape_.arity, bound_ + 2));
    }
    levels_.resize(static_cast<std::size_t>(shape_.depth) + 1);
    for (std::uint32_t i = 0; i < shape_.level_of.size(); ++i) {
        levels_[static_cast<std::size_t>(shape_.level_of[i])].push_back(NodeId{i});
    }
}

std::vector<NodeId> LevelAttack::current_children(const Graph& g, NodeId v) const
{
    std::vector<NodeId> out;
    for (NodeId u : g.neighbors(v)) {
        if (shape_.is_descendant(v, u)) {
            out.push_back(u);
        }
    }
    return out;
}

std::vector<NodeId> LevelAttack::prune(const Graph& g, NodeId r, NodeId s) const
{
    if (!shape_.is_descendant(r, s)) {
        throw std::invalid_argument(fmt::format("prune: {} is not below {} in the original tree", s.index, r.index));
    }
    std::vector<NodeId> subtree{s};
    for (std::size_t i = 0; i < subtree.size(); ++i) {
        for (NodeId c : shape_.children_of[subtree[i].index]) {
            subtree.push_back(c);
        }
    }
    std::vector<NodeId> out;
    for (NodeId u : subtree) {
        if (g.is_alive(u)) {
            out.push_back(u);
        }
    }
    std::sort(out.begin(), out.end(), [&](NodeId x, NodeId y) {
        const int lx = shape_.level_of[x.index];
        const int ly = shape_.level_of[y.index];
        if (lx != ly) {
            return lx > ly;
        }
        return g.state(x).original_id < g.state(y).original_id;
    });
    return out;
}

std::optional<NodeId> LevelAttack::next(const Graph& g)
{
    if (g.node_count() != shape_.node_count()) {
        throw std::invalid_argument(fmt::format("LevelAttack: graph has {} nodes but the tree shape has {}",
                                                g.node_count(), shape_.node_count()));
    }
    for (;;) {
        while (!pending_.empty()) {
            const NodeId v = pending_.front();
            pending_.pop_front();
            if (g.is_alive(v)) {
                return v;
            }
        }
        if (level_ < 0) {
            return std::nullopt;
        }
        const auto& level_nodes = levels_[static_cast<std::size_t>(level_)];
        if (position_ >= level_nodes.size()) {
            --level_;
            position_ = 0;
            continue;
        }
        const NodeId v = level_nodes[position_++];
        if (!g.is_alive(v)) {
            continue;
        }

        std::vector<NodeId> children = current_children(g, v);
        const auto keep = static_cast<std::size_t>(bound_ + 2);
        if (children.size() > keep) {
            std::sort(children.begin(), children.end(), [&](NodeId x, NodeId y) {
                const int dx = degree_delta(g, x);
                const int dy = degree_delta(g, y);
                if (dx != dy) {
                    return dx < dy;
                }
                return g.state(x).original_id < g.state(y).original_id;
            });
            for (std::size_t i = 0; i < children.size() - keep; ++i) {
                for (NodeId u : prune(g, v, children[i])) {
                    pending_.push_back(u);
                }
            }
        }
        pending_.push_back(v);
    }
}

Adversary::Adversary(AttackKind kind, const TreeShape* shape)
    : kind_(kind)
{
    if (kind_.tag == AttackKind::Tag::level_attack) {
        if (shape == nullptr) {
            throw std::invalid_argument("LevelAttack requires a k-ary tree graph");
        }
        level_.emplace(*shape, kind_.level_bound);
    }
}

std::optional<NodeId> Adversary::next(const Graph& g, Rng& rng)
{
    if (g.alive_count() == 0) {
        return std::nullopt;
    }
    try {
        switch (kind_.tag) {
        case AttackKind::Tag::max_node:
            return pick_max_node(g, rng);
        case AttackKind::Tag::neighbor_of_max:
            return pick_neighbor_of_max(g, rng);
        case AttackKind::Tag::random:
            return pick_random(g, rng);
        case AttackKind::Tag::level_attack:
            return level_->next(g);
        }
    } catch (const NoTargetError&) {
        return std::nullopt;
    }
    return std::nullopt;
}

} // namespace selfheal
