#include "selfheal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include <fmt/format.h>

namespace selfheal {

ForestView::ForestView(const Graph& g)
    : live_(g.live_nodes())
    , parent_(g.node_count(), no_parent)
    , root_(g.node_count(), no_parent)
    , subtree_weight_(g.node_count(), 0)
    , tree_weight_(g.node_count(), 0)
{
    std::vector<NodeId> order;
    order.reserve(live_.size());
    for (NodeId start : live_) {
        if (root_[start.index] != no_parent) {
            continue;
        }
        root_[start.index] = start.index;
        std::size_t head = order.size();
        order.push_back(start);
        while (head < order.size()) {
            const NodeId v = order[head++];
            for (NodeId u : g.healing_neighbors(v)) {
                if (u.index == parent_[v.index]) {
                    continue;
                }
                if (root_[u.index] != no_parent) {
                    if (!cycle_edge_) {
                        cycle_edge_ = make_edge(u, v);
                    }
                    continue;
                }
                parent_[u.index] = v.index;
                root_[u.index] = start.index;
                order.push_back(u);
            }
        }
    }

    for (NodeId v : live_) {
        subtree_weight_[v.index] = g.state(v).weight;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::uint32_t p = parent_[it->index];
        if (p != no_parent) {
            subtree_weight_[p] += subtree_weight_[it->index];
        } else {
            tree_weight_[it->index] = subtree_weight_[it->index];
        }
    }
}

std::optional<NodeId> ForestView::parent_of(NodeId v) const
{
    if (parent_[v.index] == no_parent) {
        return std::nullopt;
    }
    return NodeId{parent_[v.index]};
}

std::int64_t ForestView::branch_weight(NodeId v, NodeId u) const
{
    if (parent_[u.index] == v.index) {
        return subtree_weight_[u.index];
    }
    if (parent_[v.index] == u.index) {
        return tree_weight(v) - subtree_weight_[v.index];
    }
    throw std::invalid_argument(fmt::format("branch_weight: {} and {} are not joined by a healing edge", v.index, u.index));
}

std::map<NodeId, std::vector<NodeId>> ForestView::trees() const
{
    std::map<NodeId, std::vector<NodeId>> out;
    for (NodeId v : live_) {
        out[root_of(v)].push_back(v);
    }
    return out;
}

std::int64_t rem(NodeId v, const ForestView& fv, const Graph& g)
{
    std::int64_t sum = 0;
    std::int64_t largest = 0;
    for (NodeId u : g.healing_neighbors(v)) {
        const std::int64_t w = fv.branch_weight(v, u);
        sum += w;
        largest = std::max(largest, w);
    }
    return sum - largest + g.state(v).weight;
}

void LemmaResult::fail(std::optional<NodeId> node, std::string why)
{
    if (!ok) {
        return; // keep the first witness
    }
    ok = false;
    witness = node;
    detail = std::move(why);
}

std::vector<std::pair<std::string, const LemmaResult*>> LemmaReport::entries() const
{
    return {
        {"forest", &forest},
        {"component_ids", &component_ids},
        {"rem_monotone", &rem_monotone},
        {"rem_lower", &rem_lower},
        {"rem_upper", &rem_upper},
        {"subtree_weight", &subtree_weight},
        {"degree_bound", &degree_bound},
        {"weight_conservation", &weight_conservation},
    };
}

bool LemmaReport::all_ok() const
{
    const auto all = entries();
    return std::all_of(all.begin(), all.end(), [](const auto& e) { return e.second->ok; });
}

namespace {

// rem >= 2^(delta/2)  <=>  rem^2 >= 2^delta, evaluated exactly.
bool rem_covers_delta(std::int64_t r, int delta)
{
    if (delta <= 0) {
        return r >= 1;
    }
    if (delta > 62 || r > (std::int64_t{1} << 31)) {
        return delta <= 62;
    }
    return r * r >= (std::int64_t{1} << delta);
}

} // namespace

LemmaReport check_round(const Graph& g, const ForestView& fv, RemHistory& history)
{
    LemmaReport report;
    const auto live = g.live_nodes();
    const std::int64_t live_weight = g.total_live_weight();
    const auto n = static_cast<double>(g.node_count());
    history.previous.resize(g.node_count());

    report.forest.evaluated = true;
    if (const auto& e = fv.cycle_edge()) {
        report.forest.fail(e->a, fmt::format("healing edges contain a cycle through ({}, {})", e->a.index, e->b.index));
    }

    // A tree keeps the ID of its minimum member even after that member is
    // deleted, so the label is checked for agreement, uniqueness and <= every
    // live member's original ID.
    report.component_ids.evaluated = true;
    std::map<double, NodeId> owner; // component_id -> tree root
    for (const auto& [root, members] : fv.trees()) {
        const double label = g.state(root).component_id;
        for (NodeId v : members) {
            const NodeState& s = g.state(v);
            if (s.component_id != label) {
                report.component_ids.fail(v, fmt::format("component_id {} differs from tree label {}", s.component_id, label));
            }
            if (s.component_id > s.original_id) {
                report.component_ids.fail(v, fmt::format("component_id {} above original ID {}", s.component_id, s.original_id));
            }
        }
        if (auto [it, fresh] = owner.emplace(label, root); !fresh) {
            report.component_ids.fail(root, fmt::format("trees rooted at {} and {} share component_id {}",
                                                        it->second.index, root.index, label));
        }
    }

    if (report.forest.ok) {
        report.rem_monotone.evaluated = true;
        report.rem_lower.evaluated = true;
        report.rem_upper.evaluated = true;
        report.subtree_weight.evaluated = true;
        std::vector<std::optional<std::int64_t>> current(g.node_count());
        for (NodeId v : live) {
            const std::int64_t r = rem(v, fv, g);
            current[v.index] = r;
            const int delta = degree_delta(g, v);
            if (const auto& prev = history.previous[v.index]; prev && r < *prev) {
                report.rem_monotone.fail(v, fmt::format("rem fell from {} to {}", *prev, r));
            }
            if (!rem_covers_delta(r, std::max(delta, 0))) {
                report.rem_lower.fail(v, fmt::format("rem {} < 2^({}/2)", r, delta));
            }
            if (r > live_weight) {
                report.rem_upper.fail(v, fmt::format("rem {} exceeds live weight {}", r, live_weight));
            }
            for (NodeId q : g.healing_neighbors(v)) {
                const std::int64_t w = fv.branch_weight(q, v);
                if (w < r) {
                    report.subtree_weight.fail(v, fmt::format("W(T({},{})) = {} < rem {}", v.index, q.index, w, r));
                }
            }
        }
        history.previous = std::move(current);
    } else {
        history.previous.assign(g.node_count(), std::nullopt);
    }

    report.degree_bound.evaluated = true;
    const double degree_limit = n > 1 ? 2.0 * std::log2(n) : 0.0;
    for (NodeId v : live) {
        const int delta = degree_delta(g, v);
        if (delta > degree_limit) {
            report.degree_bound.fail(v, fmt::format("delta {} exceeds 2 log2 n = {:.3f}", delta, degree_limit));
        }
    }

    report.weight_conservation.evaluated = true;
    const auto expected = static_cast<std::int64_t>(g.node_count()) - g.dropped_weight();
    if (live_weight != expected) {
        report.weight_conservation.fail(std::nullopt, fmt::format("live weight {} != n - dropped = {}", live_weight, expected));
    }
    return report;
}

StretchOracle::StretchOracle(const Graph& g)
    : n_(g.node_count())
    , dist_(n_ * n_, unreachable)
{
    std::vector<std::uint32_t> queue(n_);
    for (std::uint32_t s = 0; s < n_; ++s) {
        std::uint16_t* row = dist_.data() + s * n_;
        row[s] = 0;
        std::size_t head = 0;
        std::size_t tail = 0;
        queue[tail++] = s;
        while (head < tail) {
            const std::uint32_t v = queue[head++];
            for (NodeId u : g.initial_neighbors(NodeId{v})) {
                if (row[u.index] == unreachable) {
                    row[u.index] = static_cast<std::uint16_t>(row[v] + 1);
                    queue[tail++] = u.index;
                }
            }
        }
    }
}

double StretchOracle::stretch(const Graph& current) const
{
    const auto live = current.live_nodes();
    if (live.size() < 2) {
        throw std::invalid_argument("stretch: needs at least two live nodes");
    }
    if (current.node_count() != n_) {
        throw std::invalid_argument("stretch: graph does not match the oracle's initial snapshot");
    }
    double worst = 0.0;
    std::vector<int> dist(n_, -1);
    std::vector<std::uint32_t> queue(n_);
    for (NodeId s : live) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s.index] = 0;
        std::size_t head = 0;
        std::size_t tail = 0;
        queue[tail++] = s.index;
        while (head < tail) {
            const std::uint32_t v = queue[head++];
            for (NodeId u : current.neighbors(NodeId{v})) {
                if (dist[u.index] < 0) {
                    dist[u.index] = dist[v] + 1;
                    queue[tail++] = u.index;
                }
            }
        }
        if (tail != live.size()) {
            throw DisconnectedError(fmt::format("stretch: node {} reaches only {} of {} live nodes", s.index, tail, live.size()));
        }
        for (NodeId t : live) {
            const std::uint16_t base = initial_distance(s, t);
            if (t == s || base == unreachable) {
                continue;
            }
            worst = std::max(worst, static_cast<double>(dist[t.index]) / base);
        }
    }
    return worst;
}

double stretch(const Graph& g) { return StretchOracle(g).stretch(g); }

MessageStats message_stats(const Graph& g)
{
    MessageStats out;
    const auto n = static_cast<double>(g.node_count());
    const double ln_n = n > 1 ? std::log(n) : 0.0;
    const double log2_n = n > 1 ? std::log2(n) : 0.0;
    for (std::uint32_t i = 0; i < g.node_count(); ++i) {
        const NodeState& s = g.state(NodeId{i});
        NodeMessageStats m;
        m.node = NodeId{i};
        m.traffic = s.messages_sent + s.messages_received;
        m.traffic_bound = 2.0 * (s.initial_degree + 2.0 * log2_n) * ln_n;
        m.id_changes = s.id_change_count;
        m.id_change_bound = 2.0 * ln_n;
        out.max_traffic = std::max(out.max_traffic, m.traffic);
        out.max_id_changes = std::max(out.max_id_changes, m.id_changes);
        if (m.violates()) {
            ++out.violations;
        }
        out.nodes.push_back(m);
    }
    return out;
}

DegreeStats degree_stats(const Graph& g)
{
    DegreeStats out;
    const auto live = g.live_nodes();
    if (live.empty()) {
        return out;
    }
    bool first = true;
    std::int64_t sum = 0;
    for (NodeId v : live) {
        const int d = degree_delta(g, v);
        out.max_delta = first ? d : std::max(out.max_delta, d);
        first = false;
        sum += d;
        ++out.histogram[d];
    }
    out.mean_delta = static_cast<double>(sum) / static_cast<double>(live.size());
    return out;
}

} // namespace selfheal
