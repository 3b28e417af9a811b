#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfeedback/errors.hpp"
#include "qfeedback/loop.hpp"

namespace qfeedback {

/// Parses a scenario file. Field names follow LoopConfig:
///
///   {
///     "scenario": "clone",                  // or "teleport"
///     "initial_alpha": [0.6, 0.0],          // complex: [re, im] or a real
///     "initial_beta": 0.8,
///     "target": [[1, 0], [0, 0]],           // optional, default |↑⟩
///     "cycles": 10,
///     "seed": 42,                           // optional
///     "noise": {"type": "depolarizing", "p": 0.1},
///     "channel": {"delay": 0, "drop_probability": 0.0},
///     "cloner": {"N": 2, "M": 1},
///     "recognizer": {"d0": 0.1, "mode": "oracle",
///                    "merge_tolerance": 1e-6, "bases": [...]}
///   }
///
/// Unknown keys are rejected at every level. When "seed" is absent,
/// fallback_seed is used. Throws ConfigError on any problem.
LoopConfig parse_loop_config(std::string_view json_text, std::uint64_t fallback_seed = 0);
LoopConfig load_loop_config(const std::filesystem::path& path, std::uint64_t fallback_seed = 0);

/// Serialises a config back into the schema above.
std::string loop_config_to_json(const LoopConfig& config);

/// Input of the `recognize` command: either a bare JSON array of states or
/// {"states": [...], "bases": [[state, ...], ...]}.
struct StateList {
    std::vector<PureState> states;
    std::vector<std::vector<PureState>> bases;
};

StateList parse_state_list(std::string_view json_text);
StateList load_state_list(const std::filesystem::path& path);

/// Reads QFEEDBACK_SEED; nullopt when unset. Throws ConfigError when set
/// to something that is not an unsigned 64-bit integer.
std::optional<std::uint64_t> seed_from_environment();

}  // namespace qfeedback
