#include "selfheal/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>

#include <fmt/format.h>

namespace selfheal {

GraphKind parse_graph_kind(std::string_view name)
{
    if (name == "barabasi" || name == "ba") {
        return GraphKind::barabasi;
    }
    if (name == "kary") {
        return GraphKind::kary;
    }
    if (name == "line") {
        return GraphKind::line;
    }
    if (name == "star") {
        return GraphKind::star;
    }
    if (name == "cycle") {
        return GraphKind::cycle;
    }
    throw ConfigError(fmt::format("unknown graph.kind '{}' (expected barabasi|kary|line|star|cycle)", name));
}

std::string to_string(GraphKind kind)
{
    switch (kind) {
    case GraphKind::barabasi:
        return "barabasi";
    case GraphKind::kary:
        return "kary";
    case GraphKind::line:
        return "line";
    case GraphKind::star:
        return "star";
    case GraphKind::cycle:
        return "cycle";
    }
    return "?";
}

int GraphSpec::node_count() const
{
    if (kind != GraphKind::kary) {
        return n;
    }
    long long total = 0;
    long long level = 1;
    for (int d = 0; d <= depth; ++d) {
        total += level;
        level *= arity;
    }
    return static_cast<int>(total);
}

StopRule StopRule::parse(std::string_view text)
{
    if (text == "until_empty") {
        return {};
    }
    constexpr std::string_view prefix = "rounds:";
    if (text.starts_with(prefix)) {
        const std::string_view digits = text.substr(prefix.size());
        int k = -1;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && k >= 0) {
            return {false, k};
        }
    }
    throw ConfigError(fmt::format("invalid stop rule '{}' (expected until_empty or rounds:K)", text));
}

std::string StopRule::to_string() const { return until_empty ? "until_empty" : fmt::format("rounds:{}", rounds); }

int ExperimentConfig::effective_stretch_every() const
{
    if (stretch_every) {
        return *stretch_every;
    }
    const int n = graph.node_count();
    return std::max(1, (n + 19) / 20);
}

std::string ExperimentConfig::result_stem() const
{
    std::string attack_name = to_string(attack);
    attack_name.erase(std::remove(attack_name.begin(), attack_name.end(), ':'), attack_name.end());
    return fmt::format("{}_{}_n{}", to_string(healer), attack_name, graph.node_count());
}

void validate(const ExperimentConfig& cfg)
{
    if (cfg.replicates < 1) {
        throw ConfigError(fmt::format("replicates must be >= 1 (got {})", cfg.replicates));
    }
    if (cfg.stretch_every && *cfg.stretch_every < 0) {
        throw ConfigError("stretch_every must be >= 0");
    }
    const GraphSpec& g = cfg.graph;
    switch (g.kind) {
    case GraphKind::barabasi:
        if (g.m < 1 || g.n < g.m + 1) {
            throw ConfigError(fmt::format("barabasi graph needs m >= 1 and n >= m+1 (got n={}, m={})", g.n, g.m));
        }
        break;
    case GraphKind::kary:
        if (g.arity < 2 || g.depth < 1) {
            throw ConfigError(fmt::format("kary graph needs arity >= 2 and depth >= 1 (got {}, {})", g.arity, g.depth));
        }
        if (g.node_count() > 200000) {
            throw ConfigError("kary graph too large");
        }
        break;
    case GraphKind::line:
    case GraphKind::star:
        if (g.n < 1) {
            throw ConfigError("fixture graph needs n >= 1");
        }
        break;
    case GraphKind::cycle:
        if (g.n < 3) {
            throw ConfigError("cycle needs n >= 3");
        }
        break;
    }
    if (cfg.attack.tag == AttackKind::Tag::level_attack) {
        if (g.kind != GraphKind::kary) {
            throw ConfigError("level attack requires graph.kind = kary");
        }
        if (g.arity != cfg.attack.level_bound + 2) {
            throw ConfigError(fmt::format("level:{} requires arity {} (got {})", cfg.attack.level_bound,
                                          cfg.attack.level_bound + 2, g.arity));
        }
    }
}

std::pair<Graph, std::optional<TreeShape>> generate_graph(const GraphSpec& spec, Rng& rng)
{
    switch (spec.kind) {
    case GraphKind::barabasi:
        return {preferential_attachment(spec.n, spec.m, rng), std::nullopt};
    case GraphKind::kary: {
        auto [g, shape] = complete_kary_tree(spec.arity, spec.depth, rng);
        return {std::move(g), std::move(shape)};
    }
    case GraphKind::line:
        return {fixture(FixtureKind::line, spec.n, rng), std::nullopt};
    case GraphKind::star:
        return {fixture(FixtureKind::star, spec.n, rng), std::nullopt};
    case GraphKind::cycle:
        return {fixture(FixtureKind::cycle, spec.n, rng), std::nullopt};
    }
    throw std::logic_error("generate_graph: unhandled kind");
}

std::string RoundTrace::describe() const
{
    std::string out = fmt::format("victim={}", victim.index);
    out += fmt::format(" recipient={}", recipient ? std::to_string(recipient->index) : std::string("none"));
    out += " participants=[";
    for (std::size_t i = 0; i < plan.participants.size(); ++i) {
        out += fmt::format("{}{}", i ? "," : "", plan.participants[i].index);
    }
    out += "] edges=[";
    for (std::size_t i = 0; i < plan.edges.size(); ++i) {
        const PlanEdge& e = plan.edges[i];
        out += fmt::format("{}({},{}){}", i ? "," : "", e.edge.a.index, e.edge.b.index, e.healing_marked ? "" : "*");
    }
    out += "]";
    if (propagation) {
        out += fmt::format(" min_id={} changed={}", propagation->min_id, propagation->changed.size());
    }
    out += " stages=";
    for (std::size_t i = 0; i < stages.size(); ++i) {
        out += (i ? ">" : "") + stages[i];
    }
    return out;
}

HealingFailure::HealingFailure(int round, const std::string& trace)
    : std::runtime_error(fmt::format("survivor graph disconnected after round {}: {}", round, trace))
    , round_(round)
{
}

Simulation::Simulation(Graph g, HealerKind healer, AttackKind attack, Rng rng, const TreeShape* shape, int stretch_every)
    : graph_(std::move(g))
    , healer_(healer)
    , adversary_(attack, shape)
    , rng_(rng)
    , stretch_every_(stretch_every)
{
    if (stretch_every_ > 0) {
        stretch_oracle_.emplace(graph_);
    }
}

LemmaReport Simulation::check_now()
{
    const ForestView fv(graph_);
    return check_round(graph_, fv, history_);
}

std::optional<MetricsRecord> Simulation::run_round(RoundTrace* trace)
{
    const std::optional<NodeId> victim = adversary_.next(graph_, rng_);
    if (!victim) {
        return std::nullopt;
    }
    ++round_;
    RoundTrace local;
    RoundTrace& t = trace ? *trace : local;
    t = RoundTrace{};
    t.victim = *victim;

    const DeletionContext ctx = capture_and_delete(graph_, *victim);
    t.stages.emplace_back("capture");
    t.recipient = transfer_weight(graph_, ctx);
    t.stages.emplace_back("weight");
    t.plan = plan_healing(healer_, ctx, graph_);
    t.stages.emplace_back("heal");
    apply_plan(graph_, t.plan);
    t.stages.emplace_back("apply");
    if (is_id_tracking(healer_) && !t.plan.participants.empty()) {
        t.propagation = propagate_component_id(graph_, t.plan.participants);
        total_messages_ += t.propagation->messages;
        for (NodeId v : t.propagation->changed) {
            max_id_changes_ = std::max(max_id_changes_, graph_.state(v).id_change_count);
        }
        t.stages.emplace_back("propagate");
    }
    if (!is_connected(graph_)) {
        throw HealingFailure(round_, t.describe());
    }
    MetricsRecord record = measure();
    t.stages.emplace_back("measure");
    return record;
}

MetricsRecord Simulation::measure()
{
    MetricsRecord r;
    r.round = round_;
    r.n_alive = static_cast<int>(graph_.alive_count());
    const DegreeStats ds = degree_stats(graph_);
    r.max_delta = ds.max_delta;
    r.mean_delta = ds.mean_delta;
    r.total_messages = total_messages_;
    r.max_id_changes = max_id_changes_;
    r.weight_total = graph_.total_live_weight();
    if (stretch_oracle_ && r.n_alive >= 2 && round_ % stretch_every_ == 0) {
        r.stretch = stretch_oracle_->stretch(graph_);
    }
    if (is_id_tracking(healer_)) {
        r.lemmas = check_now();
    }
    return r;
}

void LemmaTally::add(int round, const LemmaReport& report)
{
    ++rounds_checked;
    for (const auto& [name, result] : report.entries()) {
        if (result->ok) {
            continue;
        }
        if (++failures[name] == 1) {
            first_failure[name] = fmt::format("round {} node {}: {}", round,
                                              result->witness ? std::to_string(result->witness->index) : "-", result->detail);
        }
    }
}

RunResult run_replicate(const ExperimentConfig& cfg, int replicate)
{
    const auto start = std::chrono::steady_clock::now();
    RunResult result;
    result.replicate = replicate;
    result.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(replicate));

    Rng rng(result.seed);
    auto [graph, shape] = generate_graph(cfg.graph, rng);
    result.initial_nodes = static_cast<int>(graph.node_count());
    Simulation sim(std::move(graph), cfg.healer, cfg.attack, rng, shape ? &*shape : nullptr,
                   cfg.effective_stretch_every());
    result.initial_report = sim.check_now();

    while (cfg.stop.until_empty || sim.round() < cfg.stop.rounds) {
        std::optional<MetricsRecord> record = sim.run_round();
        if (!record) {
            break;
        }
        if (record->lemmas) {
            result.lemmas.add(record->round, *record->lemmas);
        }
        result.rounds.push_back(std::move(*record));
    }
    result.messages = message_stats(sim.graph());
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

std::vector<MeanRecord> cross_replicate_means(const std::vector<RunResult>& runs)
{
    std::size_t longest = 0;
    for (const RunResult& r : runs) {
        longest = std::max(longest, r.rounds.size());
    }
    std::vector<MeanRecord> means;
    for (std::size_t i = 0; i < longest; ++i) {
        MeanRecord m;
        m.round = static_cast<int>(i) + 1;
        double stretch_sum = 0;
        int stretch_count = 0;
        for (const RunResult& r : runs) {
            if (i >= r.rounds.size()) {
                continue;
            }
            const MetricsRecord& rec = r.rounds[i];
            ++m.replicates;
            m.n_alive += rec.n_alive;
            m.max_delta += rec.max_delta;
            m.mean_delta += rec.mean_delta;
            m.total_messages += static_cast<double>(rec.total_messages);
            m.max_id_changes += rec.max_id_changes;
            if (rec.stretch) {
                stretch_sum += *rec.stretch;
                ++stretch_count;
            }
        }
        const double k = m.replicates;
        m.n_alive /= k;
        m.max_delta /= k;
        m.mean_delta /= k;
        m.total_messages /= k;
        m.max_id_changes /= k;
        if (stretch_count > 0) {
            m.stretch = stretch_sum / stretch_count;
        }
        means.push_back(m);
    }
    return means;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    validate(cfg);
    ExperimentResult out;
    out.config = cfg;
    for (int r = 0; r < cfg.replicates; ++r) {
        out.runs.push_back(run_replicate(cfg, r));
    }
    out.means = cross_replicate_means(out.runs);
    return out;
}

std::vector<std::string> applicable_lemmas(HealerKind healer)
{
    switch (healer) {
    case HealerKind::dash:
        return {"forest", "component_ids", "rem_monotone", "rem_lower", "rem_upper",
                "subtree_weight", "degree_bound", "weight_conservation"};
    case HealerKind::sdash:
    case HealerKind::binary_tree_heal:
        return {"forest", "component_ids", "rem_monotone", "rem_upper", "subtree_weight", "weight_conservation"};
    case HealerKind::graph_heal:
        return {};
    }
    return {};
}

int peak_max_delta(const RunResult& run)
{
    int peak = 0;
    for (const MetricsRecord& r : run.rounds) {
        peak = std::max(peak, r.max_delta);
    }
    return peak;
}

std::optional<double> peak_stretch(const RunResult& run)
{
    std::optional<double> peak;
    for (const MetricsRecord& r : run.rounds) {
        if (r.stretch && (!peak || *r.stretch > *peak)) {
            peak = r.stretch;
        }
    }
    return peak;
}

} // namespace selfheal
