#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>

#include "qfeedback/rng.hpp"
#include "qfeedback/state.hpp"

namespace qfeedback {

/// Result of Alice's Bell-basis measurement on (S, A).
enum class BellOutcome : std::uint8_t { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

inline constexpr std::array<BellOutcome, 4> kBellOutcomes = {
    BellOutcome::PsiMinus, BellOutcome::PsiPlus, BellOutcome::PhiMinus, BellOutcome::PhiPlus};

std::string_view to_string(BellOutcome outcome);
/// Accepts the names produced by to_string; nullopt otherwise.
std::optional<BellOutcome> parse_bell_outcome(std::string_view name);

/// Two-qubit Bell state on (S, A):
/// Ψ± = (|↑↓⟩ ± |↓↑⟩)/√2, Φ± = (|↑↑⟩ ± |↓↓⟩)/√2.
PureState bell_state(BellOutcome outcome);

/// The shared singlet (|↑↓⟩ - |↓↑⟩)/√2 on (A, B).
PureState make_epr();

/// ψ_S ⊗ singlet_AB, qubit order S, A, B.
PureState compose_sab(const PureState& psi_s);

struct BellMeasurement {
    BellOutcome outcome;
    PureState bob_state;
    double probability;
};

/// Bell measurement on qubits S (0) and A (1) of a three-qubit S,A,B register.
/// With `forced` set the named branch is projected deterministically instead
/// of sampled; rng is not consumed in that case.
BellMeasurement bell_measure(const PureState& sab, RngStream& rng,
                             std::optional<BellOutcome> forced = std::nullopt);

/// Bob's correction: Ψ- → I, Ψ+ → σz, Φ- → σx, Φ+ → σy.
Unitary correction_for(BellOutcome outcome);

/// In-process classical link carrying Bell outcomes, measured in whole cycles.
///
/// A message sent at cycle t becomes available at t + delay; delivery is FIFO.
class ClassicalChannel {
public:
    struct Message {
        std::uint64_t send_cycle;
        BellOutcome outcome;
    };

    explicit ClassicalChannel(std::uint64_t delay = 0, double drop_probability = 0.0);

    std::uint64_t delay() const { return delay_; }
    double drop_probability() const { return drop_probability_; }
    std::uint64_t now() const { return now_; }
    std::size_t in_flight() const { return queue_.size(); }

    /// Queues the outcome at the current cycle. Returns false when the
    /// message was dropped. Draws from rng only when drop_probability > 0.
    bool send(BellOutcome outcome, RngStream& rng);
    /// Next message due at or before now(), if any.
    std::optional<Message> poll();
    void tick() { ++now_; }

private:
    std::uint64_t delay_;
    double drop_probability_;
    std::uint64_t now_ = 0;
    std::deque<Message> queue_;
};

struct TeleportReport {
    BellOutcome outcome;
    double outcome_probability;
    /// Bob's qubit after the correction (or uncorrected when not delivered),
    /// with the global phase removed.
    PureState bob_state;
    double fidelity_to_input;
    bool delivered;
    std::uint64_t measured_cycle;
    std::uint64_t report_cycle;
};

/// Full protocol: compose, Bell-measure, send the outcome, wait for delivery
/// by ticking the channel, and apply Bob's correction.
TeleportReport teleport(const PureState& psi_s, ClassicalChannel& channel, RngStream& rng,
                        std::optional<BellOutcome> forced = std::nullopt);

/// States of the (B, C) register during the feedback processor.
struct FeedbackTrace {
    /// After the CNOT: α|↑↑⟩ + β|↓↓⟩.
    PureState entangled;
    /// After flipping B iff C is ↑: |↓⟩_B ⊗ (α|↑⟩ + β|↓⟩)_C.
    PureState transferred;
};

/// Adjoins control spin C in |↓⟩, applies the CNOT (control B) and then the
/// conditional flip of B on C = ↑.
FeedbackTrace feedback_process(const PureState& psi_b);

/// Single-qubit state of the control spin after feedback_process. The
/// transferred register is a product |↓⟩_B ⊗ ψ_C, so this is exact.
PureState control_spin_state(const FeedbackTrace& trace);

}  // namespace qfeedback
