#include "qfeedback/teleport.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qfeedback {

namespace {

constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

std::vector<PureState> bell_basis() {
    std::vector<PureState> basis;
    for (auto o : kBellOutcomes) basis.push_back(bell_state(o));
    return basis;
}

std::size_t index_of(BellOutcome o) { return static_cast<std::size_t>(o); }

}  // namespace

std::string_view to_string(BellOutcome outcome) {
    switch (outcome) {
        case BellOutcome::PsiMinus: return "PsiMinus";
        case BellOutcome::PsiPlus: return "PsiPlus";
        case BellOutcome::PhiMinus: return "PhiMinus";
        case BellOutcome::PhiPlus: return "PhiPlus";
    }
    return "?";
}

std::optional<BellOutcome> parse_bell_outcome(std::string_view name) {
    for (auto o : kBellOutcomes) {
        if (to_string(o) == name) return o;
    }
    return std::nullopt;
}

PureState bell_state(BellOutcome outcome) {
    const double h = kInvSqrt2;
    switch (outcome) {
        case BellOutcome::PsiMinus: return PureState({0.0, h, -h, 0.0});
        case BellOutcome::PsiPlus: return PureState({0.0, h, h, 0.0});
        case BellOutcome::PhiMinus: return PureState({h, 0.0, 0.0, -h});
        case BellOutcome::PhiPlus: return PureState({h, 0.0, 0.0, h});
    }
    throw std::invalid_argument("bell_state: unknown outcome");
}

PureState make_epr() { return bell_state(BellOutcome::PsiMinus); }

PureState compose_sab(const PureState& psi_s) {
    if (psi_s.num_qubits() != 1) throw std::invalid_argument("compose_sab: input must be one qubit");
    return tensor(psi_s, make_epr());
}

BellMeasurement bell_measure(const PureState& sab, RngStream& rng,
                             std::optional<BellOutcome> forced) {
    if (sab.num_qubits() != 3) {
        throw std::invalid_argument("bell_measure: expects an S,A,B register of 3 qubits");
    }
    static const std::vector<PureState> basis = bell_basis();
    static constexpr std::size_t kSA[] = {0, 1};
    const MeasurementResult m = forced ? project_onto(sab, basis, kSA, index_of(*forced))
                                       : measure_projective(sab, basis, kSA, rng);
    // Collapsed register is bell(S,A) ⊗ φ_B; read φ_B off by contracting S,A.
    const PureState& bell = basis[m.outcome];
    std::vector<Complex> bob(2);
    for (std::size_t sa = 0; sa < 4; ++sa) {
        const Complex w = std::conj(bell.amplitude(sa));
        bob[0] += w * m.collapsed.amplitude(sa * 2);
        bob[1] += w * m.collapsed.amplitude(sa * 2 + 1);
    }
    return {kBellOutcomes[m.outcome], PureState::normalized(std::move(bob)), m.probability};
}

Unitary correction_for(BellOutcome outcome) {
    switch (outcome) {
        case BellOutcome::PsiMinus: return gates::identity();
        case BellOutcome::PsiPlus: return gates::pauli_z();
        case BellOutcome::PhiMinus: return gates::pauli_x();
        case BellOutcome::PhiPlus: return gates::pauli_y();
    }
    throw std::invalid_argument("correction_for: unknown outcome");
}

ClassicalChannel::ClassicalChannel(std::uint64_t delay, double drop_probability)
    : delay_(delay), drop_probability_(drop_probability) {
    if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) {
        throw std::invalid_argument("ClassicalChannel: drop_probability must lie in [0, 1]");
    }
}

bool ClassicalChannel::send(BellOutcome outcome, RngStream& rng) {
    if (drop_probability_ > 0.0 && rng.uniform() < drop_probability_) return false;
    queue_.push_back({now_, outcome});
    return true;
}

std::optional<ClassicalChannel::Message> ClassicalChannel::poll() {
    if (queue_.empty() || queue_.front().send_cycle + delay_ > now_) return std::nullopt;
    Message m = queue_.front();
    queue_.pop_front();
    return m;
}

TeleportReport teleport(const PureState& psi_s, ClassicalChannel& channel, RngStream& rng,
                        std::optional<BellOutcome> forced) {
    if (psi_s.num_qubits() != 1) throw std::invalid_argument("teleport: input must be one qubit");
    if (channel.in_flight() != 0) throw std::logic_error("teleport: channel has undelivered messages");
    const auto measured = bell_measure(compose_sab(psi_s), rng, forced);
    const std::uint64_t measured_cycle = channel.now();

    if (!channel.send(measured.outcome, rng)) {
        const auto bob = canonical_phase(measured.bob_state);
        return {measured.outcome, measured.probability, bob, fidelity(bob, psi_s),
                false,            measured_cycle,       measured_cycle};
    }
    std::optional<ClassicalChannel::Message> msg;
    while (!(msg = channel.poll())) channel.tick();

    const auto bob = canonical_phase(
        apply_unitary(measured.bob_state, correction_for(msg->outcome), {0}));
    return {measured.outcome, measured.probability, bob, fidelity(bob, psi_s),
            true,             measured_cycle,       channel.now()};
}

FeedbackTrace feedback_process(const PureState& psi_b) {
    if (psi_b.num_qubits() != 1) {
        throw std::invalid_argument("feedback_process: input must be one qubit");
    }
    const PureState bc = tensor(psi_b, PureState::down());
    PureState entangled = apply_unitary(bc, gates::cnot_on_up(), {0, 1});
    // Flip B iff C is ↑: the same gate with C as control.
    PureState transferred = apply_unitary(entangled, gates::cnot_on_up(), {1, 0});
    return {std::move(entangled), std::move(transferred)};
}

PureState control_spin_state(const FeedbackTrace& trace) {
    // B is |↓⟩ (index bit 1), so C's amplitudes sit at |↓↑⟩ and |↓↓⟩.
    return PureState::normalized(
        {trace.transferred.amplitude(2), trace.transferred.amplitude(3)});
}

}  // namespace qfeedback
