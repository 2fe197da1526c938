#pragma once

#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "selfheal/generators.hpp"
#include "selfheal/graph.hpp"
#include "selfheal/rng.hpp"

namespace selfheal {

struct AttackKind {
    enum class Tag { max_node, neighbor_of_max, random, level_attack };

    Tag tag = Tag::max_node;
    int level_bound = 0; ///< M for LevelAttack; the tree must be (M+2)-ary

    friend bool operator==(const AttackKind&, const AttackKind&) = default;
};

/// Accepts "max", "nms", "random", "level:M".
AttackKind parse_attack(std::string_view name);
std::string to_string(const AttackKind& kind);

/// Thrown when an attack has no valid target (empty graph, or no edges for NMS).
class NoTargetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maximum-degree live node; ties go to the smaller original ID.
NodeId pick_max_node(const Graph& g, Rng& rng);

/// Uniform live neighbor of pick_max_node(g).
NodeId pick_neighbor_of_max(const Graph& g, Rng& rng);

NodeId pick_random(const Graph& g, Rng& rng);

/// Level-by-level attack on a complete (M+2)-ary tree.
///
/// Levels are processed from depth-1 up to the root. For each live node v the
/// driver counts v's current children: live E-neighbors that were original
/// descendants of v. If there are more than M+2 of them, the excess ones with
/// the least degree increase are pruned (their original subtrees deleted leaf
/// first), then v itself is deleted. The sequence ends after the root.
class LevelAttack {
public:
    LevelAttack(TreeShape shape, int bound);

    /// Live nodes of the original subtree under `s` in deletion order: deepest
    /// level first, smaller original ID first within a level, `s` last.
    /// `s` must be an original-tree descendant of `r`.
    std::vector<NodeId> prune(const Graph& g, NodeId r, NodeId s) const;

    /// Next victim, or nullopt once the root has been emitted.
    std::optional<NodeId> next(const Graph& g);

    /// Current children of v as defined above, in NodeId order.
    std::vector<NodeId> current_children(const Graph& g, NodeId v) const;

    const TreeShape& shape() const { return shape_; }
    int bound() const { return bound_; }

private:
    TreeShape shape_;
    int bound_;
    std::vector<std::vector<NodeId>> levels_;
    int level_;
    std::size_t position_ = 0;
    std::deque<NodeId> pending_;
};

/// Per-run victim selector dispatching on AttackKind.
class Adversary {
public:
    /// `shape` is required (and copied) for LevelAttack, ignored otherwise.
    Adversary(AttackKind kind, const TreeShape* shape);

    /// Next victim, or nullopt when the attack has no further target.
    std::optional<NodeId> next(const Graph& g, Rng& rng);

    const AttackKind& kind() const { return kind_; }

private:
    AttackKind kind_;
    std::optional<LevelAttack> level_;
};

} // namespace selfheal
