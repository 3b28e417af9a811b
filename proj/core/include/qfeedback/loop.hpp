#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "qfeedback/errors.hpp"
#include "qfeedback/recognizer.hpp"
#include "qfeedback/rng.hpp"
#include "qfeedback/state.hpp"
#include "qfeedback/teleport.hpp"

namespace qfeedback {

enum class Scenario : std::uint8_t { Teleport, Clone };

std::string_view to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);

struct NoiseModel {
    enum class Kind : std::uint8_t { None, Depolarizing };
    Kind kind = Kind::None;
    /// Replacement probability per cycle, in [0, 1).
    double p = 0.0;
};

struct ChannelConfig {
    std::uint64_t delay = 0;
    double drop_probability = 0.0;
};

struct ClonerConfig {
    std::size_t n_recognizer = 2;
    std::size_t m_feedback = 1;
};

struct LoopConfig {
    Scenario scenario = Scenario::Clone;
    Complex initial_alpha = 1.0;
    Complex initial_beta = 0.0;
    PureState target = PureState::up();
    std::uint64_t cycles = 10;
    std::uint64_t seed = 0;
    NoiseModel noise;
    ChannelConfig channel;
    ClonerConfig cloner;
    RecognizerOptions recognizer;

    PureState initial_state() const;
};

/// Throws ConfigError when a field is out of range.
void validate(const LoopConfig& config);

/// One row of a feedback run.
struct TrajectoryRecord {
    std::uint64_t cycle = 0;
    double fidelity_to_target = 0.0;
    std::optional<BellOutcome> bell_outcome;
    std::optional<double> recognizer_max_distance;
    std::optional<GateSignal> gate_signal;
    bool actuator_applied = false;
    /// Clone loop only: fidelity of the cloner's "system output" copy to the
    /// target. Kept in memory; not part of the exported columns.
    std::optional<double> output_copy_fidelity;
};

struct ActuatorCommand {
    Unitary rotation;
    /// Set when the feedback copy carried no direction (Bloch norm <= 1e-9);
    /// rotation is then the identity.
    bool degenerate = false;
};

/// Rotation taking the feedback copy's Bloch direction onto the target's.
///
/// Aligned directions give the identity; anti-aligned ones a π rotation about
/// the first of x̂, ŷ not parallel to the target direction.
ActuatorCommand actuator_update(const DensityOperator& feedback_copy, const PureState& target);

/// Depolarizing noise as a pure-state unravelling: with probability p the
/// state is replaced by a Haar-random one. Always consumes the same number
/// of draws so noise realisations line up across runs sharing a stream.
PureState apply_noise(const PureState& state, const NoiseModel& noise, RngStream& rng);

/// Teleportation-based distant feedback loop.
std::vector<TrajectoryRecord> run_teleport_loop(const LoopConfig& config);

/// Cloning-based, recognition-gated feedback loop.
std::vector<TrajectoryRecord> run_clone_loop(const LoopConfig& config);

/// Dispatches on config.scenario.
std::vector<TrajectoryRecord> run_scenario(const LoopConfig& config);

/// Same noise realisation as the closed loops, with no feedback at all.
std::vector<TrajectoryRecord> run_open_loop(const LoopConfig& config);

}  // namespace qfeedback
