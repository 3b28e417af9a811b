#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qfeedback/rng.hpp"
#include "qfeedback/state.hpp"

namespace qfeedback {

/// Largest number of copies the cloner produces (joint space 2^8).
inline constexpr std::size_t kMaxCopies = 8;

/// Projector onto the permutation-symmetric subspace of n qubits,
/// (1/n!)·Σ_π P_π.
class SymmetricProjector {
public:
    std::size_t num_qubits() const { return n_; }
    const Matrix& matrix() const { return matrix_; }

private:
    friend const SymmetricProjector& symmetric_projector(std::size_t n);
    SymmetricProjector(std::size_t n, Matrix m) : n_(n), matrix_(std::move(m)) {}

    std::size_t n_;
    Matrix matrix_;
};

/// Built once per n (1 <= n <= 8) and cached for the life of the process.
const SymmetricProjector& symmetric_projector(std::size_t n);

/// Operator that sends qubit q to position perm[q] on an n-qubit register.
Matrix qubit_permutation(std::size_t n, std::span<const std::size_t> perm);

/// Output of a 1 -> K universal cloner.
struct CloneBatch {
    std::size_t total_copies;
    DensityOperator joint_state;
    /// Reduced single-qubit operator of each copy, in register order.
    std::vector<DensityOperator> copies;
    PureState source;
};

/// Optimal symmetric 1 -> K cloner for qubits:
/// ρ_out ∝ S_K (|ψ⟩⟨ψ| ⊗ (I/2)^{⊗(K-1)}) S_K.
class UniversalCloner {
public:
    /// Throws std::invalid_argument unless 2 <= K <= 8.
    explicit UniversalCloner(std::size_t total_copies);

    std::size_t total_copies() const { return k_; }
    CloneBatch clone(const PureState& input) const;

private:
    std::size_t k_;
    const SymmetricProjector* projector_;
};

CloneBatch clone(const PureState& input, std::size_t total_copies);

/// (2K+1)/(3K): per-copy fidelity of the optimal universal 1 -> K cloner.
double optimal_clone_fidelity(std::size_t total_copies);
/// (K+2)/(3K): factor by which each copy's Bloch vector shrinks.
double clone_shrink_factor(std::size_t total_copies);

/// Mean per-copy fidelity of clone(ψ, K) over `samples` Haar-random inputs.
///
/// Samples are drawn in fixed chunks, each from its own stream derived from
/// `seed`, and partial sums are combined in chunk order, so the result does
/// not depend on `threads`.
double monte_carlo_clone_fidelity(std::size_t total_copies, std::size_t samples,
                                  std::uint64_t seed, unsigned threads = 1);

struct CopyRouting {
    std::vector<std::size_t> recognizer;
    std::vector<std::size_t> feedback;
    std::size_t output;
};

/// First N copies to the recognizer, next M to the actuator, last one as the
/// system output. Throws unless N, M >= 1 and N + M + 1 = K.
CopyRouting split_copies(const CloneBatch& batch, std::size_t n_recognizer, std::size_t m_feedback);

/// |⟨ψ|φ⟩ - ⟨ψ|φ⟩²|. A linear map cloning both ψ and φ perfectly would need
/// this to vanish, which happens only for equal or orthogonal pairs.
double no_cloning_witness(const PureState& psi, const PureState& phi);

}  // namespace qfeedback
