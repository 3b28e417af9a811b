#include "qfeedback/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qfeedback {

namespace {

void check_threshold(double d0) {
    if (!(d0 > 0.0) || !std::isfinite(d0)) {
        throw std::invalid_argument("state-distance threshold d0 must be positive");
    }
}

const std::vector<PureState>& basis_for(const RecognizerOptions& options, std::size_t copy,
                                        std::size_t num_qubits,
                                        std::vector<PureState>& fallback) {
    if (copy < options.bases.size() && !options.bases[copy].empty()) return options.bases[copy];
    if (fallback.empty() || fallback.front().num_qubits() != num_qubits) {
        fallback = computational_basis(num_qubits);
    }
    return fallback;
}

std::size_t sample(std::span<const double> probs, RngStream& rng) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t last_possible = 0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= kExactTol) continue;
        last_possible = k;
        cumulative += probs[k];
        if (u < cumulative) return k;
    }
    return last_possible;
}

}  // namespace

std::string_view to_string(GateSignal signal) { return signal == GateSignal::On ? "On" : "Off"; }

std::string_view to_string(RecognitionMode mode) {
    return mode == RecognitionMode::Oracle ? "oracle" : "measured";
}

std::optional<GateSignal> parse_gate_signal(std::string_view name) {
    if (name == "On") return GateSignal::On;
    if (name == "Off") return GateSignal::Off;
    return std::nullopt;
}

std::optional<RecognitionMode> parse_recognition_mode(std::string_view name) {
    if (name == "oracle") return RecognitionMode::Oracle;
    if (name == "measured") return RecognitionMode::Measured;
    return std::nullopt;
}

CopyDescription describe_copy(const PureState& state, std::span<const PureState> basis) {
    if (basis.empty()) throw std::invalid_argument("describe_copy: empty basis");
    for (const auto& b : basis) {
        if (b.dimension() != state.dimension()) {
            throw std::invalid_argument("describe_copy: basis dimension does not match state");
        }
    }
    if (!is_orthonormal(basis)) throw std::invalid_argument("describe_copy: basis not orthonormal");

    const PureState canon = canonical_phase(state);
    CopyDescription d{{basis.begin(), basis.end()}, {}};
    d.coefficients.reserve(basis.size());
    double captured = 0.0;
    for (const auto& b : basis) {
        const Complex beta = inner(b.amplitudes(), canon.amplitudes());
        captured += std::norm(beta);
        d.coefficients.push_back(beta);
    }
    if (1.0 - captured > kStructuralTol) {
        throw std::invalid_argument("describe_copy: basis does not span the state");
    }
    return d;
}

ExtendedBasis extend_basis(std::span<const CopyDescription> copies, double merge_tolerance) {
    ExtendedBasis eb;
    eb.merge_tolerance = merge_tolerance;
    for (const auto& copy : copies) {
        for (const auto& v : copy.basis) {
            const bool duplicate = std::any_of(eb.vectors.begin(), eb.vectors.end(), [&](const PureState& u) {
                return u.dimension() == v.dimension() &&
                       std::abs(inner(u.amplitudes(), v.amplitudes())) > 1.0 - merge_tolerance;
            });
            if (!duplicate) eb.vectors.push_back(v);
        }
    }
    return eb;
}

ExpandedCopy expand_copy(const CopyDescription& copy, const ExtendedBasis& ebasis) {
    if (copy.basis.size() != copy.coefficients.size()) {
        throw std::invalid_argument("expand_copy: basis and coefficient counts differ");
    }
    ExpandedCopy out{std::vector<Complex>(ebasis.size())};
    for (std::size_t j = 0; j < copy.basis.size(); ++j) {
        const auto& p = copy.basis[j];
        const auto slot = std::find_if(ebasis.vectors.begin(), ebasis.vectors.end(), [&](const PureState& u) {
            return u.dimension() == p.dimension() &&
                   std::abs(inner(u.amplitudes(), p.amplitudes())) > 1.0 - ebasis.merge_tolerance;
        });
        if (slot == ebasis.vectors.end()) {
            throw std::invalid_argument("expand_copy: basis vector missing from extended basis");
        }
        out.coefficients[static_cast<std::size_t>(slot - ebasis.vectors.begin())] = copy.coefficients[j];
    }
    return out;
}

MeanState mean_state(std::span<const ExpandedCopy> expanded) {
    if (expanded.empty()) throw std::invalid_argument("mean_state: no copies");
    const std::size_t l = expanded.front().coefficients.size();
    MeanState mean{std::vector<Complex>(l)};
    for (const auto& e : expanded) {
        if (e.coefficients.size() != l) throw std::invalid_argument("mean_state: length mismatch");
        for (std::size_t k = 0; k < l; ++k) mean.coefficients[k] += e.coefficients[k];
    }
    const double inv = 1.0 / static_cast<double>(expanded.size());
    for (auto& c : mean.coefficients) c *= inv;
    return mean;
}

double state_distance(const ExpandedCopy& copy, const MeanState& mean) {
    if (copy.coefficients.size() != mean.coefficients.size()) {
        throw std::invalid_argument("state_distance: length mismatch");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < copy.coefficients.size(); ++k) {
        acc += std::norm(copy.coefficients[k] - mean.coefficients[k]);
    }
    return std::sqrt(acc);
}

RecognitionReport recognize(std::span<const CopyDescription> copies, double d0,
                            double merge_tolerance) {
    check_threshold(d0);
    if (copies.empty()) throw std::invalid_argument("recognize: no copies");
    const ExtendedBasis eb = extend_basis(copies, merge_tolerance);
    std::vector<ExpandedCopy> expanded;
    expanded.reserve(copies.size());
    for (const auto& c : copies) expanded.push_back(expand_copy(c, eb));
    const MeanState mean = mean_state(expanded);

    RecognitionReport report;
    report.threshold = d0;
    for (const auto& e : expanded) report.distances.push_back(state_distance(e, mean));
    report.max_distance = *std::max_element(report.distances.begin(), report.distances.end());
    report.signal = std::all_of(report.distances.begin(), report.distances.end(),
                                [d0](double d) { return d < d0; })
                        ? GateSignal::On
                        : GateSignal::Off;
    return report;
}

std::vector<PureState> computational_basis(std::size_t num_qubits) {
    std::vector<PureState> basis;
    for (std::size_t i = 0; i < (std::size_t{1} << num_qubits); ++i) {
        basis.push_back(PureState::basis(num_qubits, i));
    }
    return basis;
}

RecognitionReport gate_signal(std::span<const PureState> copies, const RecognizerOptions& options,
                              RngStream* rng) {
    check_threshold(options.d0);
    if (copies.empty()) throw std::invalid_argument("gate_signal: no copies");
    std::vector<CopyDescription> descriptions;
    descriptions.reserve(copies.size());
    std::vector<PureState> fallback;
    for (std::size_t s = 0; s < copies.size(); ++s) {
        const auto& basis = basis_for(options, s, copies[s].num_qubits(), fallback);
        if (options.mode == RecognitionMode::Oracle) {
            descriptions.push_back(describe_copy(copies[s], basis));
            continue;
        }
        if (rng == nullptr) throw std::invalid_argument("gate_signal: measured mode needs an rng");
        if (basis.size() != copies[s].dimension()) {
            throw std::invalid_argument("gate_signal: measured mode needs a complete basis");
        }
        std::vector<double> probs;
        probs.reserve(basis.size());
        for (const auto& b : basis) probs.push_back(std::norm(inner(b.amplitudes(), copies[s].amplitudes())));
        descriptions.push_back(describe_copy(basis[sample(probs, *rng)], basis));
    }
    return recognize(descriptions, options.d0, options.merge_tolerance);
}

RecognitionReport gate_signal_measured(std::span<const DensityOperator> copies,
                                       const RecognizerOptions& options, RngStream& rng) {
    check_threshold(options.d0);
    if (copies.empty()) throw std::invalid_argument("gate_signal_measured: no copies");
    std::vector<CopyDescription> descriptions;
    descriptions.reserve(copies.size());
    std::vector<PureState> fallback;
    for (std::size_t s = 0; s < copies.size(); ++s) {
        const auto& basis = basis_for(options, s, copies[s].num_qubits(), fallback);
        if (basis.size() != copies[s].dimension() || !is_orthonormal(basis)) {
            throw std::invalid_argument("gate_signal_measured: basis must be complete and orthonormal");
        }
        std::vector<double> probs;
        probs.reserve(basis.size());
        for (const auto& b : basis) probs.push_back(fidelity(b, copies[s]));
        descriptions.push_back(describe_copy(basis[sample(probs, rng)], basis));
    }
    return recognize(descriptions, options.d0, options.merge_tolerance);
}

}  // namespace qfeedback
