#include "selfheal/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace selfheal {

namespace {

using nlohmann::json;

template <typename T>
std::vector<T> scalar_or_list(const json& node, const char* key, T fallback)
{
    if (!node.contains(key)) {
        return {fallback};
    }
    const json& v = node.at(key);
    try {
        if (v.is_array()) {
            if (v.empty()) {
                throw ConfigError(fmt::format("'{}' must not be an empty list", key));
            }
            return v.get<std::vector<T>>();
        }
        return {v.get<T>()};
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("bad value for '{}': {}", key, e.what()));
    }
}

template <typename T>
T scalar(const json& node, const char* key, T fallback)
{
    if (!node.contains(key)) {
        return fallback;
    }
    try {
        return node.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("bad value for '{}': {}", key, e.what()));
    }
}

void reject_unknown(const json& node, const std::set<std::string>& known, const char* where)
{
    for (const auto& [key, value] : node.items()) {
        if (!known.contains(key)) {
            throw ConfigError(fmt::format("unknown key '{}{}'", where, key));
        }
    }
}

} // namespace

std::vector<ExperimentConfig> parse_config_text(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    reject_unknown(doc, {"graph", "healer", "attack", "replicates", "seed", "stretch_every", "stop", "out_dir"}, "");

    ExperimentConfig base;
    const json graph = doc.value("graph", json::object());
    if (!graph.is_object()) {
        throw ConfigError("'graph' must be an object");
    }
    reject_unknown(graph, {"kind", "n", "m", "arity", "depth"}, "graph.");
    base.graph.kind = parse_graph_kind(scalar<std::string>(graph, "kind", "barabasi"));
    base.graph.m = scalar<int>(graph, "m", base.graph.m);
    base.graph.arity = scalar<int>(graph, "arity", base.graph.arity);
    base.replicates = scalar<int>(doc, "replicates", base.replicates);
    base.seed = scalar<std::uint64_t>(doc, "seed", base.seed);
    if (doc.contains("stretch_every")) {
        base.stretch_every = scalar<int>(doc, "stretch_every", 0);
    }
    base.stop = StopRule::parse(scalar<std::string>(doc, "stop", "until_empty"));
    base.out_dir = scalar<std::string>(doc, "out_dir", base.out_dir);

    const auto sizes = scalar_or_list<int>(graph, "n", base.graph.n);
    const auto depths = scalar_or_list<int>(graph, "depth", base.graph.depth);
    const auto healers = scalar_or_list<std::string>(doc, "healer", "dash");
    const auto attacks = scalar_or_list<std::string>(doc, "attack", "nms");

    std::vector<ExperimentConfig> out;
    for (const std::string& h : healers) {
        for (const std::string& a : attacks) {
            for (int n : sizes) {
                for (int depth : depths) {
                    ExperimentConfig cfg = base;
                    try {
                        cfg.healer = parse_healer(h);
                        cfg.attack = parse_attack(a);
                    } catch (const std::invalid_argument& e) {
                        throw ConfigError(e.what());
                    }
                    cfg.graph.n = n;
                    cfg.graph.depth = depth;
                    validate(cfg);
                    out.push_back(cfg);
                }
            }
        }
    }
    return out;
}

std::vector<ExperimentConfig> load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(fmt::format("cannot read config '{}'", path));
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

} // namespace selfheal
