#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qfeedback/rng.hpp"
#include "qfeedback/state.hpp"

namespace qfeedback {

inline constexpr double kDefaultMergeTolerance = 1e-6;

/// One copy written in its own orthonormal basis: |P⟩ = Σ_j β_j |p_j⟩.
struct CopyDescription {
    std::vector<PureState> basis;
    std::vector<Complex> coefficients;
};

/// Union of the copies' bases with phase-equivalent duplicates merged.
/// The retained vectors need not be mutually orthogonal.
struct ExtendedBasis {
    std::vector<PureState> vectors;
    double merge_tolerance = kDefaultMergeTolerance;

    std::size_t size() const { return vectors.size(); }
};

/// A copy's coefficients over an ExtendedBasis, zero where the slot did not
/// come from the copy's own basis.
struct ExpandedCopy {
    std::vector<Complex> coefficients;
};

/// Arithmetic mean of expanded coefficients. Not renormalised.
struct MeanState {
    std::vector<Complex> coefficients;
};

enum class GateSignal : std::uint8_t { Off, On };
enum class RecognitionMode : std::uint8_t { Oracle, Measured };

std::string_view to_string(GateSignal signal);
std::string_view to_string(RecognitionMode mode);
std::optional<GateSignal> parse_gate_signal(std::string_view name);
std::optional<RecognitionMode> parse_recognition_mode(std::string_view name);

struct RecognitionReport {
    std::vector<double> distances;
    double max_distance = 0.0;
    double threshold = 0.0;
    GateSignal signal = GateSignal::Off;
};

/// β_j = ⟨p_j|ψ⟩ with ψ first put in canonical phase. Throws if the basis is
/// not orthonormal or leaves a residual norm above 1e-9.
CopyDescription describe_copy(const PureState& state, std::span<const PureState> basis);

/// Ordered union of the copies' bases. Two vectors merge when
/// |⟨u|v⟩| > 1 - merge_tolerance; the first occurrence is kept.
ExtendedBasis extend_basis(std::span<const CopyDescription> copies,
                           double merge_tolerance = kDefaultMergeTolerance);

/// Places each β_j in the slot its basis vector merged into. Throws
/// std::invalid_argument if a basis vector has no slot.
ExpandedCopy expand_copy(const CopyDescription& copy, const ExtendedBasis& ebasis);

/// Componentwise mean with divisor N. Throws on an empty list or unequal lengths.
MeanState mean_state(std::span<const ExpandedCopy> expanded);

/// (Σ_k |β̃_k - α̃_k|²)^{1/2}.
double state_distance(const ExpandedCopy& copy, const MeanState& mean);

/// describe -> extend -> expand -> mean -> distances, then gate against d0:
/// On iff every distance is strictly below d0.
RecognitionReport recognize(std::span<const CopyDescription> copies, double d0,
                            double merge_tolerance = kDefaultMergeTolerance);

struct RecognizerOptions {
    double d0 = 0.1;
    RecognitionMode mode = RecognitionMode::Oracle;
    double merge_tolerance = kDefaultMergeTolerance;
    /// Per-copy description bases; the computational basis where absent.
    /// When shorter than the copy list, the remaining copies use the
    /// computational basis.
    std::vector<std::vector<PureState>> bases;
};

/// Computational basis {|0…0⟩, …} on num_qubits qubits.
std::vector<PureState> computational_basis(std::size_t num_qubits);

/// Gate decision from N copies. In oracle mode each copy's amplitudes are
/// used as-is. In measured mode each copy is measured once in its
/// description basis and described by the resulting basis state; rng must
/// then be non-null.
RecognitionReport gate_signal(std::span<const PureState> copies, const RecognizerOptions& options,
                              RngStream* rng = nullptr);

/// Measured-mode recognition on mixed copies (e.g. cloner outputs): one
/// projective shot per copy with Born probabilities ⟨p_j|ρ|p_j⟩.
RecognitionReport gate_signal_measured(std::span<const DensityOperator> copies,
                                       const RecognizerOptions& options, RngStream& rng);

}  // namespace qfeedback
