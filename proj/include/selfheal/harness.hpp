#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "selfheal/adversary.hpp"
#include "selfheal/generators.hpp"
#include "selfheal/graph.hpp"
#include "selfheal/healing.hpp"
#include "selfheal/metrics.hpp"
#include "selfheal/rng.hpp"

namespace selfheal {

enum class GraphKind { barabasi, kary, line, star, cycle };

GraphKind parse_graph_kind(std::string_view name);
std::string to_string(GraphKind kind);

struct GraphSpec {
    GraphKind kind = GraphKind::barabasi;
    int n = 100;   ///< barabasi and fixtures
    int m = 2;     ///< barabasi
    int arity = 4; ///< kary
    int depth = 3; ///< kary

    /// Number of nodes the generator will produce.
    int node_count() const;
};

struct StopRule {
    bool until_empty = true;
    int rounds = 0; ///< used when !until_empty

    static StopRule parse(std::string_view text);
    std::string to_string() const;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    GraphSpec graph;
    HealerKind healer = HealerKind::dash;
    AttackKind attack = {AttackKind::Tag::neighbor_of_max, 0};
    int replicates = 30;
    std::uint64_t seed = 1;
    std::optional<int> stretch_every; ///< unset: every ceil(n/20) rounds; 0: never
    StopRule stop;
    std::string out_dir = "out";

    int effective_stretch_every() const;
    /// File stem for this configuration's results: "<healer>_<attack>_n<N>".
    std::string result_stem() const;
};

/// Throws ConfigError on inconsistent settings.
void validate(const ExperimentConfig& cfg);

/// Generates the configured graph (and tree shape for kary graphs) from `rng`.
std::pair<Graph, std::optional<TreeShape>> generate_graph(const GraphSpec& spec, Rng& rng);

/// Observable record of one round, in pipeline order.
struct RoundTrace {
    std::vector<std::string> stages;
    NodeId victim;
    std::optional<NodeId> recipient;
    ReconnectionPlan plan;
    std::optional<PropagationResult> propagation;

    std::string describe() const;
};

/// Raised when the survivor graph is split after healing.
class HealingFailure : public std::runtime_error {
public:
    HealingFailure(int round, const std::string& trace);
    int round() const { return round_; }

private:
    int round_;
};

/// One replicate's evolving state: graph, attacker, RNG stream and the
/// verifier history. Rounds run strictly in sequence.
class Simulation {
public:
    Simulation(Graph g, HealerKind healer, AttackKind attack, Rng rng,
               const TreeShape* shape = nullptr, int stretch_every = 0);

    /// One round: pick victim, capture and delete, transfer weight, plan,
    /// apply, propagate IDs (ID-tracking healers), then measure. Returns
    /// nullopt when the attacker has no target left.
    std::optional<MetricsRecord> run_round(RoundTrace* trace = nullptr);

    /// Lemma report for the current state without advancing.
    LemmaReport check_now();

    const Graph& graph() const { return graph_; }
    int round() const { return round_; }
    HealerKind healer() const { return healer_; }

private:
    MetricsRecord measure();

    Graph graph_;
    HealerKind healer_;
    Adversary adversary_;
    Rng rng_;
    RemHistory history_;
    std::optional<StretchOracle> stretch_oracle_;
    int stretch_every_;
    int round_ = 0;
    std::int64_t total_messages_ = 0;
    int max_id_changes_ = 0;
};

/// Per-lemma failure counts over a run, with the first witness of each.
struct LemmaTally {
    int rounds_checked = 0;
    std::map<std::string, int> failures;
    std::map<std::string, std::string> first_failure;

    void add(int round, const LemmaReport& report);
    bool clean() const { return failures.empty(); }
};

struct RunResult {
    int replicate = 0;
    std::uint64_t seed = 0;
    int initial_nodes = 0;
    LemmaReport initial_report;
    std::vector<MetricsRecord> rounds;
    LemmaTally lemmas;
    MessageStats messages;  ///< at the end of the run
    double wall_seconds = 0.0;
};

/// Cross-replicate means for one round index.
struct MeanRecord {
    int round = 0;
    int replicates = 0;
    double n_alive = 0;
    double max_delta = 0;
    double mean_delta = 0;
    std::optional<double> stretch;
    double total_messages = 0;
    double max_id_changes = 0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RunResult> runs; ///< sorted by replicate
    std::vector<MeanRecord> means;
};

RunResult run_replicate(const ExperimentConfig& cfg, int replicate);
ExperimentResult run_experiment(const ExperimentConfig& cfg);
std::vector<MeanRecord> cross_replicate_means(const std::vector<RunResult>& runs);

/// Lemma entries that must hold for a healer: all of them for DASH; for
/// SDASH and BinaryTreeHeal everything except the DASH-specific
/// rem_lower and degree_bound; nothing for GraphHeal.
std::vector<std::string> applicable_lemmas(HealerKind healer);

/// Largest max_delta over a run's rounds (0 for an empty run).
int peak_max_delta(const RunResult& run);
/// Largest measured stretch over a run's rounds.
std::optional<double> peak_stretch(const RunResult& run);

} // namespace selfheal
