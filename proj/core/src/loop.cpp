#include "qfeedback/loop.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qfeedback/cloner.hpp"

namespace qfeedback {

namespace {

// Sub-stream keys; fixed so trajectories stay reproducible across versions.
constexpr std::uint64_t kNoiseStream = 1;
constexpr std::uint64_t kMeasureStream = 2;
constexpr std::uint64_t kChannelStream = 3;

BlochVector unit(const BlochVector& v) { return v.scaled(1.0 / v.norm()); }

}  // namespace

std::string_view to_string(Scenario s) { return s == Scenario::Teleport ? "teleport" : "clone"; }

std::optional<Scenario> parse_scenario(std::string_view name) {
    if (name == "teleport") return Scenario::Teleport;
    if (name == "clone") return Scenario::Clone;
    return std::nullopt;
}

PureState LoopConfig::initial_state() const {
    const double n2 = std::norm(initial_alpha) + std::norm(initial_beta);
    if (std::abs(n2 - 1.0) > kStructuralTol) {
        throw ConfigError("initial_alpha/initial_beta are not normalized (|a|^2+|b|^2 = " +
                          std::to_string(n2) + ")");
    }
    return PureState({initial_alpha, initial_beta});
}

void validate(const LoopConfig& config) {
    (void)config.initial_state();
    if (config.target.num_qubits() != 1) throw ConfigError("target must be a single-qubit state");
    if (config.cycles == 0) throw ConfigError("cycles must be positive");
    if (config.noise.kind == NoiseModel::Kind::Depolarizing &&
        !(config.noise.p >= 0.0 && config.noise.p < 1.0)) {
        throw ConfigError("depolarizing p must lie in [0, 1)");
    }
    if (!(config.channel.drop_probability >= 0.0 && config.channel.drop_probability <= 1.0)) {
        throw ConfigError("channel drop_probability must lie in [0, 1]");
    }
    if (config.cloner.n_recognizer < 1 || config.cloner.m_feedback < 1) {
        throw ConfigError("cloner N and M must both be at least 1");
    }
    if (config.cloner.n_recognizer + config.cloner.m_feedback + 1 > kMaxCopies) {
        throw ConfigError("cloner N + M + 1 must not exceed 8");
    }
    if (!(config.recognizer.d0 > 0.0) || !std::isfinite(config.recognizer.d0)) {
        throw ConfigError("recognizer d0 must be positive");
    }
    if (!(config.recognizer.merge_tolerance >= 0.0 && config.recognizer.merge_tolerance < 1.0)) {
        throw ConfigError("recognizer merge_tolerance must lie in [0, 1)");
    }
    for (const auto& basis : config.recognizer.bases) {
        if (basis.empty()) continue;
        if (basis.size() != 2 || basis.front().num_qubits() != 1 || !is_orthonormal(basis)) {
            throw ConfigError("recognizer bases must be orthonormal single-qubit pairs");
        }
    }
    if (config.recognizer.bases.size() > config.cloner.n_recognizer) {
        throw ConfigError("more recognizer bases than recognizer copies");
    }
}

ActuatorCommand actuator_update(const DensityOperator& feedback_copy, const PureState& target) {
    if (feedback_copy.num_qubits() != 1 || target.num_qubits() != 1) {
        throw std::invalid_argument("actuator_update: expects single-qubit operands");
    }
    const BlochVector fb = bloch_vector(feedback_copy);
    if (fb.norm() <= kStructuralTol) return {gates::identity(), true};

    const BlochVector from = unit(fb);
    const BlochVector to = unit(bloch_vector(target));
    const BlochVector axis = from.cross(to);
    const double sin_angle = axis.norm();
    const double cos_angle = from.dot(to);
    if (sin_angle > kStructuralTol) {
        return {gates::rotation(axis, std::atan2(sin_angle, cos_angle)), false};
    }
    if (cos_angle > 0.0) return {gates::identity(), false};

    // Anti-aligned: half turn about an axis orthogonal to the target, taken
    // from the first of x̂, ŷ that is not parallel to it.
    BlochVector seed{1.0, 0.0, 0.0};
    if (std::abs(seed.dot(to)) > 1.0 - kStructuralTol) seed = {0.0, 1.0, 0.0};
    const BlochVector ortho{seed.x - seed.dot(to) * to.x, seed.y - seed.dot(to) * to.y,
                            seed.z - seed.dot(to) * to.z};
    return {gates::rotation(ortho, std::numbers::pi), false};
}

PureState apply_noise(const PureState& state, const NoiseModel& noise, RngStream& rng) {
    if (noise.kind == NoiseModel::Kind::None) return state;
    const double u = rng.uniform();
    PureState replacement = haar_random_state(state.num_qubits(), rng);
    return u < noise.p ? replacement : state;
}

std::vector<TrajectoryRecord> run_teleport_loop(const LoopConfig& config) {
    validate(config);
    if (config.scenario != Scenario::Teleport) {
        throw ConfigError("run_teleport_loop: scenario must be teleport");
    }
    const RngStream root(config.seed);
    RngStream noise_rng = root.derive(kNoiseStream);
    RngStream measure_rng = root.derive(kMeasureStream);
    RngStream channel_rng = root.derive(kChannelStream);
    ClassicalChannel channel(config.channel.delay, config.channel.drop_probability);

    PureState object = config.initial_state();
    // Bob's uncorrected qubit while its Bell outcome is on the wire.
    std::optional<PureState> in_flight;

    std::vector<TrajectoryRecord> records;
    records.reserve(config.cycles);
    for (std::uint64_t cycle = 1; cycle <= config.cycles; ++cycle) {
        TrajectoryRecord rec;
        rec.cycle = cycle;

        PureState noisy = apply_noise(object, config.noise, noise_rng);
        if (!in_flight) {
            object = std::move(noisy);
            const auto measured = bell_measure(compose_sab(object), measure_rng);
            if (channel.send(measured.outcome, channel_rng)) in_flight = measured.bob_state;
        }
        if (in_flight) {
            if (const auto msg = channel.poll()) {
                const PureState bob = apply_unitary(*in_flight, correction_for(msg->outcome), {0});
                const PureState controlled = control_spin_state(feedback_process(bob));
                const auto cmd = actuator_update(DensityOperator::from_pure(controlled), config.target);
                object = canonical_phase(apply_unitary(controlled, cmd.rotation, {0}));
                rec.bell_outcome = msg->outcome;
                rec.actuator_applied = !cmd.degenerate;
                in_flight.reset();
            }
        }
        rec.fidelity_to_target = fidelity(config.target, object);
        records.push_back(rec);
        channel.tick();
    }
    return records;
}

std::vector<TrajectoryRecord> run_clone_loop(const LoopConfig& config) {
    validate(config);
    if (config.scenario != Scenario::Clone) {
        throw ConfigError("run_clone_loop: scenario must be clone");
    }
    const RngStream root(config.seed);
    RngStream noise_rng = root.derive(kNoiseStream);
    RngStream measure_rng = root.derive(kMeasureStream);
    const std::size_t n = config.cloner.n_recognizer;
    const UniversalCloner cloner(n + config.cloner.m_feedback + 1);

    PureState object = config.initial_state();
    std::vector<TrajectoryRecord> records;
    records.reserve(config.cycles);
    for (std::uint64_t cycle = 1; cycle <= config.cycles; ++cycle) {
        TrajectoryRecord rec;
        rec.cycle = cycle;

        object = apply_noise(object, config.noise, noise_rng);
        const CloneBatch batch = cloner.clone(object);
        const CopyRouting routing = split_copies(batch, n, config.cloner.m_feedback);

        RecognitionReport report;
        if (config.recognizer.mode == RecognitionMode::Oracle) {
            const std::vector<PureState> truth(n, object);
            report = gate_signal(truth, config.recognizer);
        } else {
            std::vector<DensityOperator> observed;
            for (auto idx : routing.recognizer) observed.push_back(batch.copies[idx]);
            report = gate_signal_measured(observed, config.recognizer, measure_rng);
        }
        rec.recognizer_max_distance = report.max_distance;
        rec.gate_signal = report.signal;
        rec.output_copy_fidelity = fidelity(config.target, batch.copies[routing.output]);

        if (report.signal == GateSignal::On) {
            // The M feedback copies are identical reduced states; one drives the actuator.
            const auto cmd = actuator_update(batch.copies[routing.feedback.front()], config.target);
            if (!cmd.degenerate) {
                object = canonical_phase(apply_unitary(object, cmd.rotation, {0}));
                rec.actuator_applied = true;
            }
        }
        rec.fidelity_to_target = fidelity(config.target, object);
        records.push_back(rec);
    }
    return records;
}

std::vector<TrajectoryRecord> run_scenario(const LoopConfig& config) {
    return config.scenario == Scenario::Teleport ? run_teleport_loop(config) : run_clone_loop(config);
}

std::vector<TrajectoryRecord> run_open_loop(const LoopConfig& config) {
    validate(config);
    RngStream noise_rng = RngStream(config.seed).derive(kNoiseStream);
    PureState object = config.initial_state();
    std::vector<TrajectoryRecord> records;
    records.reserve(config.cycles);
    for (std::uint64_t cycle = 1; cycle <= config.cycles; ++cycle) {
        object = apply_noise(object, config.noise, noise_rng);
        TrajectoryRecord rec;
        rec.cycle = cycle;
        rec.fidelity_to_target = fidelity(config.target, object);
        records.push_back(rec);
    }
    return records;
}

}  // namespace qfeedback
