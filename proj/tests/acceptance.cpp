// Acceptance suite: one PASS/FAIL line per criterion, plus INFO lines with
// the measured values. Exits non-zero if any criterion fails.
//
// usage: acceptance <path-to-selfheal>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "selfheal/generators.hpp"
#include "selfheal/harness.hpp"
#include "selfheal/io.hpp"

using namespace selfheal;
namespace fs = std::filesystem;

namespace {

// Tolerances. Everything not listed here is zero tolerance.
constexpr int replicates = 30;
constexpr double max_bound_violation_fraction = 0.01; // message / ID-change bounds
constexpr double dash_sdash_delta_gap = 1.0;           // "DASH ~ SDASH" on mean peak max_delta
constexpr int oracle_instances = 200;
constexpr int level_attack_seeds = 5;

const AttackKind max_node{AttackKind::Tag::max_node, 0};
const AttackKind nms{AttackKind::Tag::neighbor_of_max, 0};
const AttackKind random_attack{AttackKind::Tag::random, 0};

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail, double seconds)
{
    failures += ok ? 0 : 1;
    std::cout << fmt::format("{} [{}] {}: {} ({:.1f}s)\n", ok ? "PASS" : "FAIL", id, name, detail, seconds) << std::flush;
}

void info(const std::string& text) { std::cout << "INFO     " << text << '\n' << std::flush; }

double since(std::chrono::steady_clock::time_point t)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

ExperimentConfig make_config(HealerKind healer, AttackKind attack, int n, std::optional<int> stretch_every)
{
    ExperimentConfig cfg;
    cfg.graph.kind = GraphKind::barabasi;
    cfg.graph.n = n;
    cfg.graph.m = 2;
    cfg.healer = healer;
    cfg.attack = attack;
    cfg.replicates = replicates;
    cfg.seed = 20240601;
    cfg.stretch_every = stretch_every;
    return cfg;
}

struct ConfigOutcome {
    ExperimentConfig cfg;
    std::vector<RunResult> runs;
    int disconnected = 0;
    std::string first_disconnect;
};

ConfigOutcome run_config(const ExperimentConfig& cfg)
{
    ConfigOutcome out{cfg, {}, 0, {}};
    for (int r = 0; r < cfg.replicates; ++r) {
        try {
            out.runs.push_back(run_replicate(cfg, r));
        } catch (const HealingFailure& e) {
            if (out.disconnected++ == 0) {
                out.first_disconnect = e.what();
            }
        }
    }
    return out;
}

// Criteria 1, 2, 3 and 6 share the same sweep.
void connectivity_degree_lemmas_messages()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<ConfigOutcome> outcomes;
    for (int n : {100, 1000}) {
        for (HealerKind h : {HealerKind::dash, HealerKind::sdash, HealerKind::binary_tree_heal}) {
            for (const AttackKind& a : {max_node, nms, random_attack}) {
                outcomes.push_back(run_config(make_config(h, a, n, 0)));
            }
        }
    }
    const double elapsed = since(t0);

    int runs = 0;
    int rounds = 0;
    int disconnected = 0;
    std::string first;
    for (const ConfigOutcome& o : outcomes) {
        runs += o.cfg.replicates;
        disconnected += o.disconnected;
        if (first.empty() && o.disconnected) {
            first = o.cfg.result_stem() + ": " + o.first_disconnect;
        }
        for (const RunResult& r : o.runs) {
            rounds += static_cast<int>(r.rounds.size());
        }
    }
    report(1, "connectivity", disconnected == 0,
           disconnected == 0 ? fmt::format("{} runs, {} rounds, survivor graph connected after every round", runs, rounds)
                             : fmt::format("{} of {} runs disconnected; first: {}", disconnected, runs, first),
           elapsed);

    int over_bound = 0;
    int dash_runs = 0;
    int within_log = 0;
    std::string worst;
    for (const ConfigOutcome& o : outcomes) {
        if (o.cfg.healer != HealerKind::dash) {
            continue;
        }
        const double n = o.cfg.graph.n;
        for (const RunResult& r : o.runs) {
            ++dash_runs;
            const int peak = peak_max_delta(r);
            within_log += peak <= std::log2(n) ? 1 : 0;
            for (const MetricsRecord& m : r.rounds) {
                if (m.max_delta > 2 * std::log2(n)) {
                    if (over_bound++ == 0) {
                        worst = fmt::format("{} replicate {} round {}: max_delta {}", o.cfg.result_stem(), r.replicate,
                                            m.round, m.max_delta);
                    }
                }
            }
        }
    }
    report(2, "DASH degree bound 2 log2 n", over_bound == 0 && dash_runs > 0,
           over_bound == 0 ? fmt::format("{} DASH runs, no round above 2 log2 n", dash_runs)
                           : fmt::format("{} rounds above the bound; first {}", over_bound, worst),
           0.0);
    info(fmt::format("DASH runs with peak max_delta <= log2 n: {}/{}", within_log, dash_runs));
    for (const ConfigOutcome& o : outcomes) {
        double mean = 0;
        for (const RunResult& r : o.runs) {
            mean += peak_max_delta(r);
        }
        info(fmt::format("{:<22} mean peak max_delta {:.2f} (log2 n = {:.2f})", o.cfg.result_stem(),
                         mean / static_cast<double>(o.runs.size()), std::log2(o.cfg.graph.n)));
    }

    const std::vector<std::string> lemmas = {"forest", "component_ids", "rem_monotone", "rem_lower",
                                             "rem_upper", "subtree_weight", "degree_bound", "weight_conservation"};
    int checked = 0;
    int lemma_failures = 0;
    std::string first_lemma;
    for (const ConfigOutcome& o : outcomes) {
        if (o.cfg.healer != HealerKind::dash || o.cfg.graph.n > 200) {
            continue;
        }
        for (const RunResult& r : o.runs) {
            LemmaTally tally = r.lemmas;
            tally.add(0, r.initial_report);
            checked += tally.rounds_checked;
            for (const std::string& name : lemmas) {
                if (auto it = tally.failures.find(name); it != tally.failures.end()) {
                    lemma_failures += it->second;
                    if (first_lemma.empty()) {
                        first_lemma = fmt::format("{} replicate {} {}: {}", o.cfg.result_stem(), r.replicate, name,
                                                  tally.first_failure.at(name));
                    }
                }
            }
        }
    }
    report(3, "lemma oracles on DASH n<=200", lemma_failures == 0 && checked > 0,
           lemma_failures == 0 ? fmt::format("{} round checks x {} lemmas, all passed", checked, lemmas.size())
                               : fmt::format("{} failures; first {}", lemma_failures, first_lemma),
           0.0);

    std::size_t nodes = 0;
    std::size_t violations = 0;
    std::int64_t max_traffic = 0;
    int max_changes = 0;
    for (const ConfigOutcome& o : outcomes) {
        if (o.cfg.healer != HealerKind::dash || o.cfg.attack.tag != AttackKind::Tag::neighbor_of_max ||
            o.cfg.graph.n != 1000) {
            continue;
        }
        for (const RunResult& r : o.runs) {
            nodes += r.messages.nodes.size();
            violations += r.messages.violations;
            max_traffic = std::max(max_traffic, r.messages.max_traffic);
            max_changes = std::max(max_changes, r.messages.max_id_changes);
        }
    }
    const double fraction = nodes ? static_cast<double>(violations) / static_cast<double>(nodes) : 1.0;
    report(6, "message and ID-change bounds", nodes > 0 && fraction <= max_bound_violation_fraction,
           fmt::format("{} of {} nodes violate ({:.4f}%, limit {:.1f}%); max traffic {}, max ID changes {} (2 ln n = {:.2f})",
                       violations, nodes, 100 * fraction, 100 * max_bound_violation_fraction, max_traffic, max_changes,
                       2 * std::log(1000.0)),
           0.0);
}

void level_attack_lower_bound()
{
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (int depth : {2, 3, 4}) {
        int weakest = INT32_MAX;
        for (int s = 0; s < level_attack_seeds; ++s) {
            Rng rng(derive_seed(77, static_cast<std::uint64_t>(s)));
            auto [g, shape] = complete_kary_tree(4, depth, rng);
            Simulation sim(std::move(g), HealerKind::dash, {AttackKind::Tag::level_attack, 2}, rng, &shape, 0);
            RoundTrace trace;
            NodeId last{};
            while (sim.run_round(&trace)) {
                last = trace.victim;
            }
            const bool root_last = last == NodeId{0};
            const int reached = degree_stats(sim.graph()).max_delta;
            weakest = std::min(weakest, reached);
            if (!root_last || reached < depth) {
                ok = false;
            }
        }
        detail += fmt::format("{}D={}: min over seeds of final max delta = {}", detail.empty() ? "" : "; ", depth, weakest);
    }
    report(4, "LevelAttack lower bound (M=2, 4-ary)", ok, detail, since(t0));
}

// Random tree on n nodes where node 0 has exactly d neighbors.
Graph tree_with_hub(int n, int d, Rng& rng)
{
    std::vector<Edge> edges;
    for (int i = 1; i <= d; ++i) {
        edges.push_back(make_edge(NodeId{0}, NodeId{static_cast<std::uint32_t>(i)}));
    }
    for (int i = d + 1; i < n; ++i) {
        const auto parent = static_cast<std::uint32_t>(1 + rng.uniform_below(static_cast<std::uint64_t>(i - 1)));
        edges.push_back(make_edge(NodeId{parent}, NodeId{static_cast<std::uint32_t>(i)}));
    }
    return Graph(draw_node_ids(static_cast<std::size_t>(n), rng), edges);
}

void degree_accounting()
{
    const auto t0 = std::chrono::steady_clock::now();
    int cases = 0;
    int wrong = 0;
    std::string first;
    for (int d = 3; d <= 8; ++d) {
        for (HealerKind h : {HealerKind::dash, HealerKind::sdash, HealerKind::binary_tree_heal}) {
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                Rng rng(derive_seed(500 + d, seed));
                Graph g = tree_with_hub(40, d, rng);
                // age the tree with a few healed deletions first, away from the hub
                Adversary warmup(random_attack, nullptr);
                for (int k = 0; k < static_cast<int>(seed % 5); ++k) {
                    const NodeId v = *warmup.next(g, rng);
                    if (v == NodeId{0} || g.degree(NodeId{0}) != d) {
                        break;
                    }
                    const DeletionContext ctx = capture_and_delete(g, v);
                    transfer_weight(g, ctx);
                    const ReconnectionPlan plan = plan_healing(h, ctx, g);
                    apply_plan(g, plan);
                    if (!plan.participants.empty()) {
                        propagate_component_id(g, plan.participants);
                    }
                }
                const NodeId victim{0};
                if (g.degree(victim) != d) {
                    continue;
                }
                const std::set<NodeId> nbrs = g.neighbors(victim);
                bool independent = true;
                for (NodeId a : nbrs) {
                    for (NodeId b : nbrs) {
                        independent = independent && !(a < b && g.has_edge(a, b));
                    }
                }
                if (!independent) {
                    continue;
                }
                std::map<NodeId, int> before;
                for (NodeId u : nbrs) {
                    before[u] = g.degree(u);
                }
                const DeletionContext ctx = capture_and_delete(g, victim);
                transfer_weight(g, ctx);
                const ReconnectionPlan plan = plan_healing(h, ctx, g);
                apply_plan(g, plan);
                int gain = 0;
                for (const auto& [u, deg] : before) {
                    gain += g.degree(u) - deg;
                }
                ++cases;
                if (gain != d - 2 || !oracle::healing_edges_acyclic(g)) {
                    if (wrong++ == 0) {
                        first = fmt::format("{} d={} seed {}: gain {}", to_string(h), d, seed, gain);
                    }
                }
            }
        }
    }
    report(5, "d-2 degree accounting on trees", wrong == 0 && cases > 0,
           wrong == 0 ? fmt::format("{} deletions with d in 3..8 across DASH/SDASH/BinaryTreeHeal, gain always d-2", cases)
                      : fmt::format("{} of {} wrong; first {}", wrong, cases, first),
           since(t0));
}

double mean_peak_delta(const std::vector<RunResult>& runs)
{
    double s = 0;
    for (const RunResult& r : runs) {
        s += peak_max_delta(r);
    }
    return s / static_cast<double>(runs.size());
}

// paired by replicate seed: mean of DASH minus SDASH peak stretch, and its standard error
std::pair<double, double> paired_stretch_gap(const std::vector<RunResult>& dash, const std::vector<RunResult>& sdash)
{
    std::vector<double> d;
    for (std::size_t i = 0; i < dash.size() && i < sdash.size(); ++i) {
        const auto a = peak_stretch(dash[i]);
        const auto b = peak_stretch(sdash[i]);
        if (a && b) {
            d.push_back(*a - *b);
        }
    }
    if (d.size() < 2) {
        return {0.0, 0.0};
    }
    double mean = 0;
    for (double x : d) {
        mean += x / d.size();
    }
    double var = 0;
    for (double x : d) {
        var += (x - mean) * (x - mean) / (d.size() - 1);
    }
    return {mean, std::sqrt(var / d.size())};
}

double mean_peak_stretch(const std::vector<RunResult>& runs)
{
    double s = 0;
    int k = 0;
    for (const RunResult& r : runs) {
        if (const auto p = peak_stretch(r)) {
            s += *p;
            ++k;
        }
    }
    return k ? s / k : 0.0;
}

void figure_orderings()
{
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (int n : {200, 400}) {
        std::map<HealerKind, double> delta;
        for (HealerKind h : {HealerKind::dash, HealerKind::sdash, HealerKind::binary_tree_heal, HealerKind::graph_heal}) {
            delta[h] = mean_peak_delta(run_experiment(make_config(h, nms, n, 0)).runs);
        }
        const auto dash_runs = run_experiment(make_config(HealerKind::dash, max_node, n, std::nullopt)).runs;
        const auto sdash_runs = run_experiment(make_config(HealerKind::sdash, max_node, n, std::nullopt)).runs;
        const double dash_s = mean_peak_stretch(dash_runs);
        const double sdash_s = mean_peak_stretch(sdash_runs);
        const auto [gap, se] = paired_stretch_gap(dash_runs, sdash_runs);
        info(fmt::format("n={} MaxNode peak stretch, DASH minus SDASH per paired replicate: {:+.3f} (standard error {:.3f})",
                         n, gap, se));
        const double d = delta[HealerKind::dash];
        const double sd = delta[HealerKind::sdash];
        const double bt = delta[HealerKind::binary_tree_heal];
        const double gh = delta[HealerKind::graph_heal];
        const bool order = std::abs(d - sd) <= dash_sdash_delta_gap && std::max(d, sd) < bt && bt < gh;
        const bool str = sdash_s <= dash_s;
        ok = ok && order && str;
        detail += fmt::format("{}n={}: max_delta DASH {:.2f} SDASH {:.2f} BTree {:.2f} Graph {:.2f}{}; stretch SDASH {:.3f} "
                              "vs DASH {:.3f}{}",
                              detail.empty() ? "" : "; ", n, d, sd, bt, gh, order ? "" : " [order broken]", sdash_s, dash_s,
                              str ? "" : " [stretch order broken]");
    }
    report(7, "qualitative figure orderings", ok, detail, since(t0));
}

void oracle_equivalence()
{
    const auto t0 = std::chrono::steady_clock::now();
    const HealerKind healers[] = {HealerKind::dash, HealerKind::sdash, HealerKind::binary_tree_heal};
    const AttackKind attacks[] = {max_node, nms, random_attack};
    long long rem_checks = 0;
    long long rem_mismatch = 0;
    long long id_checks = 0;
    long long id_mismatch = 0;
    long long literal_mismatch = 0;
    long long forest_mismatch = 0;
    std::string first;
    for (int inst = 0; inst < oracle_instances; ++inst) {
        Rng rng(derive_seed(9001, static_cast<std::uint64_t>(inst)));
        const int m = 1 + inst % 3;
        const int n = std::max(m + 2, 8 + static_cast<int>(rng.uniform_below(57)));
        const HealerKind h = healers[inst % 3];
        const AttackKind a = attacks[(inst / 3) % 3];
        Graph g = preferential_attachment(n, m, rng);
        oracle::MergeHistory history(g);
        Simulation sim(std::move(g), h, a, rng, nullptr, 0);
        const auto check = [&](int round) {
            const Graph& cur = sim.graph();
            const ForestView fv(cur);
            if (fv.is_forest() != oracle::healing_edges_acyclic(cur)) {
                ++forest_mismatch;
            }
            history.record(cur);
            for (NodeId v : cur.live_nodes()) {
                ++rem_checks;
                const std::int64_t fast = rem(v, fv, cur);
                const std::int64_t slow = oracle::rem(cur, v);
                if (fast != slow) {
                    if (rem_mismatch++ == 0 && first.empty()) {
                        first = fmt::format("instance {} round {} node {}: rem {} vs oracle {}", inst, round, v.index, fast, slow);
                    }
                }
                ++id_checks;
                const double cid = cur.state(v).component_id;
                if (cid != history.lineage_minimum(v)) {
                    if (id_mismatch++ == 0 && first.empty()) {
                        first = fmt::format("instance {} round {} node {}: component_id {} vs merge-history minimum {}", inst,
                                            round, v.index, cid, history.lineage_minimum(v));
                    }
                }
                literal_mismatch += cid != oracle::current_component_minimum(cur, v) ? 1 : 0;
            }
        };
        check(0);
        while (sim.run_round()) {
            check(sim.round());
        }
    }
    const bool ok = rem_mismatch == 0 && id_mismatch == 0 && forest_mismatch == 0 && rem_checks > 0;
    report(8, "oracle equivalence", ok,
           ok ? fmt::format("{} instances: {} rem checks and {} component_id checks agree with brute force",
                            oracle_instances, rem_checks, id_checks)
              : fmt::format("rem mismatches {}, component_id mismatches {}, forest mismatches {}; first {}", rem_mismatch,
                            id_mismatch, forest_mismatch, first),
           since(t0));
    info(fmt::format("component_id vs minimum original_id of the live tree only: {} of {} differ "
                     "(tree keeps the ID of a deleted minimum member)",
                     literal_mismatch, id_checks));
}

std::map<std::string, std::string> read_dir(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        out[entry.path().filename().string()] = {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }
    return out;
}

void sweep_determinism(const std::string& binary)
{
    const auto t0 = std::chrono::steady_clock::now();
    const fs::path dir = fs::temp_directory_path() / "selfheal_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path out = dir / "out";
    {
        std::ofstream cfg(dir / "sweep.json");
        cfg << R"({"graph": {"kind": "barabasi", "n": [50, 100], "m": 2},
                   "healer": ["dash", "sdash", "btree", "graph"], "attack": ["max", "nms", "random"],
                   "replicates": 5, "seed": 4242, "out_dir": ")"
            << out.string() << "\"}\n";
    }
    const std::string cmd = binary + " sweep --config " + (dir / "sweep.json").string() + " > /dev/null";
    const int first_status = std::system(cmd.c_str());
    const auto first = fs::exists(out) ? read_dir(out) : std::map<std::string, std::string>{};
    fs::remove_all(out);
    const int second_status = std::system(cmd.c_str());
    const auto second = fs::exists(out) ? read_dir(out) : std::map<std::string, std::string>{};
    fs::remove_all(dir);

    std::size_t bytes = 0;
    for (const auto& [name, text] : first) {
        bytes += text.size();
    }
    const bool ok = first_status == 0 && second_status == 0 && first.size() == 24 && first == second;
    report(9, "sweep determinism", ok,
           ok ? fmt::format("two sweeps wrote {} identical CSV files ({} bytes)", first.size(), bytes)
              : fmt::format("exit {} / {}, {} vs {} files, contents {}", first_status, second_status, first.size(),
                            second.size(), first == second ? "equal" : "differ"),
           since(t0));
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-selfheal>\n";
        return 2;
    }
    const std::vector<std::function<void()>> steps = {
        connectivity_degree_lemmas_messages,
        level_attack_lower_bound,
        degree_accounting,
        figure_orderings,
        oracle_equivalence,
        [&] { sweep_determinism(argv[1]); },
    };
    for (const auto& step : steps) {
        step();
    }
    std::cout << (failures == 0 ? "all acceptance criteria passed\n" : fmt::format("{} criteria failed\n", failures));
    return failures == 0 ? 0 : 1;
}
