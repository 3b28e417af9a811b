#include "qfeedback/state.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "test_support.hpp"

namespace qfeedback {
namespace {

using testing::kInvSqrt2;
using testing::max_diff;

const Complex I{0.0, 1.0};

TEST(PureState, RejectsBadShapes) {
    EXPECT_THROW(PureState({1.0, 0.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(PureState({0.6, 0.6}), std::invalid_argument);
    EXPECT_THROW(PureState(std::vector<Complex>(1U << 13, 0.0)), std::invalid_argument);
    EXPECT_THROW(PureState::normalized({0.0, 0.0}), std::invalid_argument);
}

TEST(DensityOperator, ValidatesInvariants) {
    EXPECT_NO_THROW(DensityOperator::maximally_mixed(2));
    EXPECT_THROW(DensityOperator(Matrix{{0.5, 0.1}, {0.2, 0.5}}), std::invalid_argument);
    EXPECT_THROW(DensityOperator(Matrix{{0.6, 0.0}, {0.0, 0.6}}), std::invalid_argument);
    // Hermitian, unit trace, but eigenvalues 1.5 and -0.5.
    EXPECT_THROW(DensityOperator(Matrix{{0.5, 1.0}, {1.0, 0.5}}), std::invalid_argument);
}

TEST(Unitary, RejectsNonUnitary) {
    EXPECT_THROW(Unitary(Matrix{{1.0, 1.0}, {0.0, 1.0}}), std::invalid_argument);
    for (const auto& u : {gates::pauli_x(), gates::pauli_y(), gates::pauli_z(), gates::cnot_on_up()}) {
        EXPECT_TRUE(is_unitary(u.matrix()));
    }
}

TEST(Tensor, Examples) {
    EXPECT_LT(max_diff(tensor(PureState::up(), PureState::up()), {1.0, 0.0, 0.0, 0.0}), kExactTol);
    EXPECT_LT(max_diff(tensor(PureState::up(), PureState::plus()), {kInvSqrt2, kInvSqrt2, 0.0, 0.0}),
              kExactTol);
    EXPECT_LT(max_diff(tensor(PureState({0.6, 0.8}), PureState({0.8, 0.6})), {0.48, 0.36, 0.64, 0.48}),
              kExactTol);
}

TEST(ApplyUnitary, PauliExamples) {
    const PureState psi({0.6, 0.8});
    EXPECT_LT(max_diff(apply_unitary(psi, gates::pauli_x(), {0}), {0.8, 0.6}), kExactTol);
    EXPECT_LT(max_diff(apply_unitary(psi, gates::pauli_z(), {0}), {0.6, -0.8}), kExactTol);
}

TEST(ApplyUnitary, CnotCopiesBasisValueIntoDownTarget) {
    const Complex a = 0.6;
    const Complex b = 0.8;
    const auto out = apply_unitary(tensor(PureState({a, b}), PureState::down()), gates::cnot_on_up(), {0, 1});
    // α|↑↑⟩ + β|↓↓⟩
    EXPECT_LT(max_diff(out, {a, 0.0, 0.0, b}), kExactTol);
}

TEST(ApplyUnitary, TargetOrderingAndEmbedding) {
    // CNOT with control on qubit 2 and target on qubit 0 of |↑↑↑⟩: control ↑ flips qubit 0.
    const auto out = apply_unitary(PureState::basis(3, 0), gates::cnot_on_up(), {2, 0});
    EXPECT_LT(max_diff(out, {0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0}), kExactTol);
}

TEST(ApplyUnitary, Errors) {
    const auto s = PureState::basis(2, 0);
    EXPECT_THROW(apply_unitary(s, gates::pauli_x(), {2}), std::out_of_range);
    EXPECT_THROW(apply_unitary(s, gates::cnot_on_up(), {0}), std::invalid_argument);
    EXPECT_THROW(apply_unitary(s, gates::cnot_on_up(), {1, 1}), std::invalid_argument);
}

TEST(ApplyUnitary, NormPreservationProperty) {
    RngStream rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 4;
        const auto psi = haar_random_state(n, rng);
        const auto axis = BlochVector{rng.normal(), rng.normal(), rng.normal()};
        const std::size_t q = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
        const auto out = apply_unitary(psi, gates::rotation(axis, 6.0 * rng.uniform()), {q});
        EXPECT_NEAR(norm(out.amplitudes()), 1.0, kStructuralTol);
        if (n >= 2) {
            const auto out2 = apply_unitary(out, gates::cnot_on_up(), {q, (q + 1) % n});
            EXPECT_NEAR(norm(out2.amplitudes()), 1.0, kStructuralTol);
        }
    }
}

TEST(MeasureProjective, Examples) {
    const auto z_basis = std::vector{PureState::up(), PureState::down()};
    const std::size_t target[] = {0};
    RngStream rng(5);

    const auto m = measure_projective(PureState::up(), z_basis, target, rng);
    EXPECT_EQ(m.outcome, 0U);
    EXPECT_NEAR(m.probability, 1.0, kExactTol);

    const auto p_plus = outcome_probabilities(PureState::plus(), z_basis, target);
    EXPECT_NEAR(p_plus[0], 0.5, kExactTol);
    EXPECT_NEAR(p_plus[1], 0.5, kExactTol);

    const auto p = outcome_probabilities(PureState({0.6, 0.8}), z_basis, target);
    EXPECT_NEAR(p[0], 0.36, kExactTol);
    EXPECT_NEAR(p[1], 0.64, kExactTol);
}

TEST(MeasureProjective, NeverSamplesZeroProbabilityOutcome) {
    const auto z_basis = std::vector{PureState::up(), PureState::down()};
    const std::size_t target[] = {0};
    RngStream rng(99);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_EQ(measure_projective(PureState::down(), z_basis, target, rng).outcome, 1U);
    }
    EXPECT_THROW(project_onto(PureState::down(), z_basis, target, 0), std::invalid_argument);
}

TEST(MeasureProjective, RejectsNonOrthonormalBasis) {
    const auto bad = std::vector{PureState::up(), PureState::plus()};
    const std::size_t target[] = {0};
    RngStream rng(1);
    EXPECT_THROW(measure_projective(PureState::up(), bad, target, rng), std::invalid_argument);
}

TEST(MeasureProjective, BornCompletenessProperty) {
    RngStream rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const auto psi = haar_random_state(3, rng);
        // Random orthonormal basis on two qubits: rotate the computational one.
        std::vector<PureState> basis;
        const auto u = gates::rotation({rng.normal(), rng.normal(), rng.normal()}, 3.0 * rng.uniform());
        for (std::size_t i = 0; i < 4; ++i) basis.push_back(apply_unitary(PureState::basis(2, i), u, {1}));
        const std::size_t targets[] = {2, 0};
        const auto probs = outcome_probabilities(psi, basis, targets);
        EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, kStructuralTol);

        const auto m = measure_projective(psi, basis, targets, rng);
        EXPECT_NEAR(norm(m.collapsed.amplitudes()), 1.0, kStructuralTol);
        EXPECT_NEAR(m.probability, probs[m.outcome], kExactTol);
    }
}

TEST(PartialTrace, Examples) {
    const PureState singlet({0.0, kInvSqrt2, -kInvSqrt2, 0.0});
    for (std::size_t q : {0U, 1U}) {
        const std::size_t keep[] = {q};
        const auto rho = partial_trace(singlet, keep);
        EXPECT_LT(max_abs_diff(rho.matrix(), Matrix{{0.5, 0.0}, {0.0, 0.5}}), kExactTol);
    }

    const PureState psi({0.6, Complex(0.0, 0.8)});
    const PureState phi({0.8, 0.6});
    const auto prod = tensor(psi, phi);
    const std::size_t first[] = {0};
    EXPECT_LT(max_abs_diff(partial_trace(prod, first).matrix(),
                           Matrix::outer(psi.amplitudes(), psi.amplitudes())),
              kExactTol);
    const std::size_t both[] = {0, 1};
    const auto full = partial_trace(prod, both);
    EXPECT_NEAR(full.matrix().trace().real(), 1.0, kExactTol);
    EXPECT_LT(max_abs_diff(full.matrix(), Matrix::outer(prod.amplitudes(), prod.amplitudes())), kExactTol);
}

TEST(PartialTrace, KeepOrderPermutesSubsystems) {
    const PureState psi({0.6, 0.8});
    const PureState phi({0.8, Complex(0.0, 0.6)});
    const std::size_t swapped[] = {1, 0};
    const auto rho = partial_trace(tensor(psi, phi), swapped);
    const auto expect = tensor(phi, psi);
    EXPECT_LT(max_abs_diff(rho.matrix(), Matrix::outer(expect.amplitudes(), expect.amplitudes())), kExactTol);
}

TEST(PartialTrace, Errors) {
    const std::size_t bad[] = {3};
    EXPECT_THROW(partial_trace(PureState::basis(2, 0), bad), std::out_of_range);
}

TEST(PartialTrace, OrderConsistencyProperty) {
    RngStream rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto psi = haar_random_state(4, rng);
        const std::size_t keep[] = {1, 3};
        const auto direct = partial_trace(psi, keep);
        // Trace out qubit 0 then 2 (now index 1), versus 2 then 0.
        const std::size_t drop0[] = {1, 2, 3};
        const std::size_t then2[] = {0, 2};
        const auto a = partial_trace(partial_trace(psi, drop0), then2);
        const std::size_t drop2[] = {0, 1, 3};
        const std::size_t then0[] = {1, 2};
        const auto b = partial_trace(partial_trace(DensityOperator::from_pure(psi), drop2), then0);
        EXPECT_LT(max_abs_diff(direct.matrix(), a.matrix()), kStructuralTol);
        EXPECT_LT(max_abs_diff(direct.matrix(), b.matrix()), kStructuralTol);
    }
}

TEST(Fidelity, Examples) {
    const PureState psi({0.6, Complex(0.0, 0.8)});
    EXPECT_NEAR(fidelity(psi, psi), 1.0, kExactTol);
    EXPECT_NEAR(fidelity(PureState::up(), PureState::down()), 0.0, kExactTol);
    EXPECT_NEAR(fidelity(PureState::up(), PureState::plus()), 0.5, kExactTol);
    EXPECT_NEAR(fidelity(PureState::up(), DensityOperator::maximally_mixed(1)), 0.5, kExactTol);
    EXPECT_THROW(fidelity(PureState::up(), PureState::basis(2, 0)), std::invalid_argument);
}

TEST(Fidelity, SymmetricAndPhaseBlind) {
    RngStream rng(8);
    for (int i = 0; i < 100; ++i) {
        const auto a = haar_random_state(2, rng);
        const auto b = haar_random_state(2, rng);
        EXPECT_NEAR(fidelity(a, b), fidelity(b, a), kExactTol);
        EXPECT_NEAR(fidelity(a, canonical_phase(a)), 1.0, kExactTol);
        EXPECT_NEAR(fidelity(a, DensityOperator::from_pure(b)), fidelity(a, b), kExactTol);
    }
}

TEST(BlochVector, Examples) {
    const auto up = bloch_vector(DensityOperator::from_pure(PureState::up()));
    EXPECT_NEAR(up.x, 0.0, kExactTol);
    EXPECT_NEAR(up.y, 0.0, kExactTol);
    EXPECT_NEAR(up.z, 1.0, kExactTol);

    const auto mixed = bloch_vector(DensityOperator::maximally_mixed(1));
    EXPECT_NEAR(mixed.norm(), 0.0, kExactTol);

    const auto plus = bloch_vector(PureState::plus());
    EXPECT_NEAR(plus.x, 1.0, kExactTol);
    EXPECT_NEAR(plus.y, 0.0, kExactTol);
    EXPECT_NEAR(plus.z, 0.0, kExactTol);

    // (|↑⟩ + i|↓⟩)/√2 sits on +y.
    const auto y = bloch_vector(PureState({kInvSqrt2, Complex(0.0, kInvSqrt2)}));
    EXPECT_NEAR(y.y, 1.0, kExactTol);
}

TEST(BlochVector, PureStatesAreUnitAndRoundTrip) {
    RngStream rng(4);
    for (int i = 0; i < 200; ++i) {
        const auto psi = haar_random_state(1, rng);
        const auto v = bloch_vector(psi);
        EXPECT_NEAR(v.norm(), 1.0, kStructuralTol);
        EXPECT_NEAR(fidelity(psi, state_from_bloch(v)), 1.0, kStructuralTol);
    }
}

TEST(Rotation, MovesBlochVectorsByRightHandRule) {
    // Quarter turn about +x takes +z to -y.
    const auto out = apply_unitary(PureState::up(), gates::rotation({1, 0, 0}, std::numbers::pi / 2), {0});
    const auto v = bloch_vector(out);
    EXPECT_NEAR(v.y, -1.0, kStructuralTol);
}

TEST(CanonicalPhase, Examples) {
    EXPECT_LT(max_diff(canonical_phase(PureState({-0.6, -0.8})), {0.6, 0.8}), kExactTol);
    EXPECT_LT(max_diff(canonical_phase(PureState({I * kInvSqrt2, I * kInvSqrt2})), {kInvSqrt2, kInvSqrt2}),
              kExactTol);
    for (double theta : {0.0, 0.3, 1.0, 2.5, -1.2}) {
        const auto c = canonical_phase(PureState({0.0, std::polar(1.0, theta)}));
        EXPECT_LT(max_diff(c, {0.0, 1.0}), kExactTol);
        EXPECT_EQ(c.amplitude(1).imag(), 0.0);
    }
}

TEST(HaarRandomState, DeterministicForEqualSeeds) {
    RngStream a(77);
    RngStream b(77);
    for (int i = 0; i < 50; ++i) {
        EXPECT_EQ(haar_random_state(3, a), haar_random_state(3, b));
    }
}

}  // namespace
}  // namespace qfeedback
