#pragma once

#include <string>
#include <vector>

#include "selfheal/harness.hpp"

namespace selfheal {

/// Parses a JSON experiment document:
///
///   { "graph": {"kind": "barabasi", "n": 100, "m": 2, "arity": 4, "depth": 3},
///     "healer": "dash", "attack": "nms", "replicates": 30, "seed": 1,
///     "stretch_every": 5, "stop": "until_empty", "out_dir": "out" }
///
/// graph.n, graph.depth, healer and attack may also be arrays; the result is
/// their cartesian product in (healer, attack, size) order. Every entry is
/// validated. Throws ConfigError.
std::vector<ExperimentConfig> parse_config_text(const std::string& text);

/// Reads and parses a config file; a missing file is a ConfigError too.
std::vector<ExperimentConfig> load_config(const std::string& path);

} // namespace selfheal
