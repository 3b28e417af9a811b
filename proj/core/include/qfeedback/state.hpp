#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qfeedback/linalg.hpp"
#include "qfeedback/rng.hpp"

namespace qfeedback {

/// Largest register the dense engine accepts.
inline constexpr std::size_t kMaxQubits = 12;

/// Normalised state vector of an n-qubit register.
///
/// Qubit 0 is the most significant bit of the basis index; spin up (↑) is
/// encoded as 0 and spin down (↓) as 1, so |↑↓⟩ is index 1.
class PureState {
public:
    /// Throws std::invalid_argument unless the length is 2^n (1 <= n <= 12)
    /// and the vector is normalised within 1e-9.
    explicit PureState(std::vector<Complex> amplitudes);
    PureState(std::initializer_list<Complex> amplitudes)
        : PureState(std::vector<Complex>(amplitudes)) {}

    /// Computational basis state |index⟩ on num_qubits qubits.
    static PureState basis(std::size_t num_qubits, std::size_t index);
    static PureState up() { return basis(1, 0); }
    static PureState down() { return basis(1, 1); }
    /// (1/√2)(|↑⟩ + sign·|↓⟩).
    static PureState plus();
    static PureState minus();
    /// Normalises v first; throws on a zero vector.
    static PureState normalized(std::vector<Complex> v);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex amplitude(std::size_t index) const { return amplitudes_.at(index); }

    friend bool operator==(const PureState&, const PureState&) = default;

private:
    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Hermitian, positive semidefinite, unit-trace operator on n qubits.
class DensityOperator {
public:
    /// Validates hermiticity, trace and eigenvalues >= -1e-9.
    explicit DensityOperator(Matrix matrix);

    static DensityOperator from_pure(const PureState& state);
    static DensityOperator maximally_mixed(std::size_t num_qubits);

    std::size_t num_qubits() const { return num_qubits_; }
    std::size_t dimension() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }
    Complex operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

private:
    std::size_t num_qubits_;
    Matrix matrix_;
};

/// Square unitary acting on 2^k-dimensional space.
class Unitary {
public:
    /// Throws unless U†U = I within 1e-9 and the dimension is a power of two.
    explicit Unitary(Matrix matrix);

    std::size_t dimension() const { return matrix_.rows(); }
    std::size_t num_qubits() const { return num_qubits_; }
    const Matrix& matrix() const { return matrix_; }
    Unitary adjoint() const { return Unitary(matrix_.adjoint()); }

    friend Unitary operator*(const Unitary& a, const Unitary& b) {
        return Unitary(a.matrix_ * b.matrix_);
    }

private:
    std::size_t num_qubits_;
    Matrix matrix_;
};

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const;
    double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
    BlochVector cross(const BlochVector& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    BlochVector scaled(double s) const { return {x * s, y * s, z * s}; }
};

namespace gates {
Unitary identity(std::size_t num_qubits = 1);
Unitary pauli_x();
Unitary pauli_y();
Unitary pauli_z();
/// Two-qubit controlled NOT (control first) that flips the target when the
/// control is ↑, the convention under which a control spin prepared in |↓⟩
/// copies the basis value of the controlling spin.
Unitary cnot_on_up();
/// exp(-i·angle·(n·σ)/2) for a unit axis n; rotates Bloch vectors by `angle`
/// about n following the right-hand rule.
Unitary rotation(const BlochVector& axis, double angle);
}  // namespace gates

/// State of a ⊗ b, with a's qubits first.
PureState tensor(const PureState& a, const PureState& b);

/// Applies u to the listed qubits (targets[0] is u's most significant qubit).
PureState apply_unitary(const PureState& state, const Unitary& u,
                        std::span<const std::size_t> targets);
PureState apply_unitary(const PureState& state, const Unitary& u,
                        std::initializer_list<std::size_t> targets);

struct MeasurementResult {
    std::size_t outcome;
    PureState collapsed;
    double probability;
};

/// Born probabilities of projecting the target qubits onto each basis vector.
/// The basis must be complete and orthonormal on |targets| qubits.
std::vector<double> outcome_probabilities(const PureState& state,
                                          std::span<const PureState> basis,
                                          std::span<const std::size_t> targets);

/// Collapses onto basis[outcome]; throws if that outcome has zero probability.
MeasurementResult project_onto(const PureState& state, std::span<const PureState> basis,
                               std::span<const std::size_t> targets, std::size_t outcome);

/// Samples an outcome by the Born rule and returns the renormalised state.
MeasurementResult measure_projective(const PureState& state, std::span<const PureState> basis,
                                     std::span<const std::size_t> targets, RngStream& rng);

/// Reduced operator on `keep`, in the listed order.
DensityOperator partial_trace(const PureState& state, std::span<const std::size_t> keep);
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep);

double fidelity(const PureState& a, const PureState& b);
double fidelity(const PureState& a, const DensityOperator& rho);

BlochVector bloch_vector(const DensityOperator& rho);
BlochVector bloch_vector(const PureState& state);

/// Removes the global phase so the first amplitude with modulus > 1e-9 is
/// real and nonnegative.
PureState canonical_phase(const PureState& state);

/// Haar-uniform random state: normalised vector of standard complex Gaussians.
PureState haar_random_state(std::size_t num_qubits, RngStream& rng);

/// Pure single-qubit state whose Bloch vector points along `direction`.
PureState state_from_bloch(const BlochVector& direction);

/// Whether the given vectors are pairwise orthonormal within tol.
bool is_orthonormal(std::span<const PureState> vectors, double tol = kStructuralTol);

}  // namespace qfeedback
