#include "qfeedback/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qfeedback {

namespace {

std::size_t qubits_for_dimension(std::size_t dim, const char* what) {
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw std::invalid_argument(std::string(what) + ": dimension must be a power of two >= 2");
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(dim));
    if (n > kMaxQubits) {
        throw std::invalid_argument(std::string(what) + ": register exceeds 12 qubits");
    }
    return n;
}

void check_targets(std::size_t num_qubits, std::span<const std::size_t> targets) {
    if (targets.empty()) throw std::invalid_argument("qubit list is empty");
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i] >= num_qubits) {
            throw std::out_of_range("qubit index " + std::to_string(targets[i]) +
                                    " out of range for " + std::to_string(num_qubits) +
                                    "-qubit register");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (targets[i] == targets[j]) throw std::invalid_argument("duplicate qubit index");
        }
    }
}

// Splits a register into the listed qubits and the remaining ones (ascending),
// and maps (local index over `sel`, local index over rest) to a full index.
class IndexSplit {
public:
    IndexSplit(std::size_t num_qubits, std::span<const std::size_t> sel)
        : n_(num_qubits), sel_(sel.begin(), sel.end()) {
        for (std::size_t q = 0; q < n_; ++q) {
            if (std::find(sel_.begin(), sel_.end(), q) == sel_.end()) rest_.push_back(q);
        }
    }

    std::size_t sel_dim() const { return std::size_t{1} << sel_.size(); }
    std::size_t rest_dim() const { return std::size_t{1} << rest_.size(); }

    std::size_t full(std::size_t a, std::size_t r) const {
        std::size_t idx = 0;
        scatter(idx, sel_, a);
        scatter(idx, rest_, r);
        return idx;
    }

private:
    void scatter(std::size_t& idx, const std::vector<std::size_t>& qubits, std::size_t local) const {
        const std::size_t k = qubits.size();
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t bit = (local >> (k - 1 - i)) & 1U;
            idx |= bit << (n_ - 1 - qubits[i]);
        }
    }

    std::size_t n_;
    std::vector<std::size_t> sel_;
    std::vector<std::size_t> rest_;
};

void check_basis(std::span<const PureState> basis, std::size_t num_targets) {
    const std::size_t dim = std::size_t{1} << num_targets;
    if (basis.size() != dim) {
        throw std::invalid_argument("measurement basis must have 2^|targets| vectors");
    }
    for (const auto& b : basis) {
        if (b.num_qubits() != num_targets) {
            throw std::invalid_argument("measurement basis vector has wrong qubit count");
        }
    }
    if (!is_orthonormal(basis)) throw std::invalid_argument("measurement basis is not orthonormal");
}

// Amplitudes c_r = Σ_a conj(b[a]) ψ[full(a, r)] left on the unmeasured qubits.
std::vector<Complex> contract(const PureState& state, const IndexSplit& split, const PureState& b) {
    std::vector<Complex> c(split.rest_dim());
    for (std::size_t r = 0; r < split.rest_dim(); ++r) {
        Complex acc = 0.0;
        for (std::size_t a = 0; a < split.sel_dim(); ++a) {
            acc += std::conj(b.amplitude(a)) * state.amplitude(split.full(a, r));
        }
        c[r] = acc;
    }
    return c;
}

}  // namespace

PureState::PureState(std::vector<Complex> amplitudes)
    : num_qubits_(qubits_for_dimension(amplitudes.size(), "PureState")),
      amplitudes_(std::move(amplitudes)) {
    const double n = norm(amplitudes_);
    if (!std::isfinite(n) || std::abs(n * n - 1.0) > kStructuralTol) {
        throw std::invalid_argument("PureState: amplitudes are not normalized");
    }
}

PureState PureState::basis(std::size_t num_qubits, std::size_t index) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("PureState::basis: qubit count out of range");
    }
    std::vector<Complex> v(std::size_t{1} << num_qubits);
    v.at(index) = 1.0;
    return PureState(std::move(v));
}

PureState PureState::plus() {
    const double h = std::numbers::sqrt2 / 2.0;
    return PureState({h, h});
}

PureState PureState::minus() {
    const double h = std::numbers::sqrt2 / 2.0;
    return PureState({h, -h});
}

PureState PureState::normalized(std::vector<Complex> v) {
    const double n = norm(v);
    if (!(n > kStructuralTol)) throw std::invalid_argument("cannot normalize a zero vector");
    for (auto& x : v) x /= n;
    return PureState(std::move(v));
}

DensityOperator::DensityOperator(Matrix matrix)
    : num_qubits_(qubits_for_dimension(matrix.rows(), "DensityOperator")),
      matrix_(std::move(matrix)) {
    if (!matrix_.is_square()) throw std::invalid_argument("DensityOperator: matrix not square");
    if (!is_hermitian(matrix_)) throw std::invalid_argument("DensityOperator: not Hermitian");
    if (std::abs(matrix_.trace() - 1.0) > kStructuralTol) {
        throw std::invalid_argument("DensityOperator: trace is not 1");
    }
    if (!is_positive_semidefinite(matrix_)) {
        throw std::invalid_argument("DensityOperator: negative eigenvalue");
    }
}

DensityOperator DensityOperator::from_pure(const PureState& state) {
    return DensityOperator(Matrix::outer(state.amplitudes(), state.amplitudes()));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t num_qubits) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    return DensityOperator(Matrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

Unitary::Unitary(Matrix matrix)
    : num_qubits_(qubits_for_dimension(matrix.rows(), "Unitary")), matrix_(std::move(matrix)) {
    if (!is_unitary(matrix_)) throw std::invalid_argument("Unitary: matrix is not unitary");
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

namespace gates {

Unitary identity(std::size_t num_qubits) {
    return Unitary(Matrix::identity(std::size_t{1} << num_qubits));
}

Unitary pauli_x() { return Unitary(Matrix{{0.0, 1.0}, {1.0, 0.0}}); }

Unitary pauli_y() {
    const Complex i{0.0, 1.0};
    return Unitary(Matrix{{0.0, -i}, {i, 0.0}});
}

Unitary pauli_z() { return Unitary(Matrix{{1.0, 0.0}, {0.0, -1.0}}); }

Unitary cnot_on_up() {
    return Unitary(Matrix{{0.0, 1.0, 0.0, 0.0},
                          {1.0, 0.0, 0.0, 0.0},
                          {0.0, 0.0, 1.0, 0.0},
                          {0.0, 0.0, 0.0, 1.0}});
}

Unitary rotation(const BlochVector& axis, double angle) {
    const double len = axis.norm();
    if (!(len > kStructuralTol)) throw std::invalid_argument("rotation: zero axis");
    const double nx = axis.x / len;
    const double ny = axis.y / len;
    const double nz = axis.z / len;
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const Complex i{0.0, 1.0};
    // cos(θ/2)·I - i·sin(θ/2)·(n·σ)
    return Unitary(Matrix{{Complex(c, -s * nz), -i * s * Complex(nx, -ny)},
                          {-i * s * Complex(nx, ny), Complex(c, s * nz)}});
}

}  // namespace gates

PureState tensor(const PureState& a, const PureState& b) {
    if (a.num_qubits() + b.num_qubits() > kMaxQubits) {
        throw std::invalid_argument("tensor: register exceeds 12 qubits");
    }
    std::vector<Complex> out;
    out.reserve(a.dimension() * b.dimension());
    for (const auto& x : a.amplitudes()) {
        for (const auto& y : b.amplitudes()) out.push_back(x * y);
    }
    return PureState(std::move(out));
}

PureState apply_unitary(const PureState& state, const Unitary& u,
                        std::span<const std::size_t> targets) {
    check_targets(state.num_qubits(), targets);
    if (u.num_qubits() != targets.size()) {
        throw std::invalid_argument("apply_unitary: unitary dimension does not match targets");
    }
    const IndexSplit split(state.num_qubits(), targets);
    std::vector<Complex> out(state.dimension());
    std::vector<Complex> local(split.sel_dim());
    std::vector<std::size_t> idx(split.sel_dim());
    for (std::size_t r = 0; r < split.rest_dim(); ++r) {
        for (std::size_t a = 0; a < split.sel_dim(); ++a) {
            idx[a] = split.full(a, r);
            local[a] = state.amplitude(idx[a]);
        }
        const auto mapped = multiply(u.matrix(), local);
        for (std::size_t a = 0; a < split.sel_dim(); ++a) out[idx[a]] = mapped[a];
    }
    return PureState(std::move(out));
}

PureState apply_unitary(const PureState& state, const Unitary& u,
                        std::initializer_list<std::size_t> targets) {
    return apply_unitary(state, u, std::span<const std::size_t>(targets.begin(), targets.size()));
}

std::vector<double> outcome_probabilities(const PureState& state,
                                          std::span<const PureState> basis,
                                          std::span<const std::size_t> targets) {
    check_targets(state.num_qubits(), targets);
    check_basis(basis, targets.size());
    const IndexSplit split(state.num_qubits(), targets);
    std::vector<double> probs;
    probs.reserve(basis.size());
    for (const auto& b : basis) {
        const auto c = contract(state, split, b);
        const double n = norm(c);
        probs.push_back(n * n);
    }
    return probs;
}

MeasurementResult project_onto(const PureState& state, std::span<const PureState> basis,
                               std::span<const std::size_t> targets, std::size_t outcome) {
    check_targets(state.num_qubits(), targets);
    check_basis(basis, targets.size());
    if (outcome >= basis.size()) throw std::out_of_range("project_onto: outcome out of range");
    const IndexSplit split(state.num_qubits(), targets);
    const PureState& b = basis[outcome];
    const auto c = contract(state, split, b);
    const double n = norm(c);
    if (!(n > kStructuralTol)) {
        throw std::invalid_argument("project_onto: outcome has zero probability");
    }
    std::vector<Complex> out(state.dimension());
    for (std::size_t r = 0; r < split.rest_dim(); ++r) {
        for (std::size_t a = 0; a < split.sel_dim(); ++a) {
            out[split.full(a, r)] = b.amplitude(a) * c[r] / n;
        }
    }
    return {outcome, PureState::normalized(std::move(out)), n * n};
}

MeasurementResult measure_projective(const PureState& state, std::span<const PureState> basis,
                                     std::span<const std::size_t> targets, RngStream& rng) {
    const auto probs = outcome_probabilities(state, basis, targets);
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t chosen = probs.size();
    std::size_t last_possible = probs.size();
    for (std::size_t k = 0; k < probs.size(); ++k) {
        if (probs[k] <= kExactTol) continue;
        last_possible = k;
        cumulative += probs[k];
        if (u < cumulative) {
            chosen = k;
            break;
        }
    }
    // Rounding can leave u just above the final cumulative sum.
    if (chosen == probs.size()) chosen = last_possible;
    return project_onto(state, basis, targets, chosen);
}

DensityOperator partial_trace(const PureState& state, std::span<const std::size_t> keep) {
    check_targets(state.num_qubits(), keep);
    const IndexSplit split(state.num_qubits(), keep);
    Matrix out(split.sel_dim(), split.sel_dim());
    for (std::size_t r = 0; r < split.rest_dim(); ++r) {
        for (std::size_t a = 0; a < split.sel_dim(); ++a) {
            const Complex va = state.amplitude(split.full(a, r));
            if (va == Complex{}) continue;
            for (std::size_t b = 0; b < split.sel_dim(); ++b) {
                out(a, b) += va * std::conj(state.amplitude(split.full(b, r)));
            }
        }
    }
    return DensityOperator(std::move(out));
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> keep) {
    check_targets(rho.num_qubits(), keep);
    const IndexSplit split(rho.num_qubits(), keep);
    Matrix out(split.sel_dim(), split.sel_dim());
    for (std::size_t a = 0; a < split.sel_dim(); ++a) {
        for (std::size_t b = 0; b < split.sel_dim(); ++b) {
            Complex acc = 0.0;
            for (std::size_t r = 0; r < split.rest_dim(); ++r) {
                acc += rho(split.full(a, r), split.full(b, r));
            }
            out(a, b) = acc;
        }
    }
    return DensityOperator(std::move(out));
}

double fidelity(const PureState& a, const PureState& b) {
    if (a.dimension() != b.dimension()) throw std::invalid_argument("fidelity: dimension mismatch");
    return std::clamp(std::norm(inner(a.amplitudes(), b.amplitudes())), 0.0, 1.0);
}

double fidelity(const PureState& a, const DensityOperator& rho) {
    if (a.dimension() != rho.dimension()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    const auto rho_a = multiply(rho.matrix(), a.amplitudes());
    return std::clamp(inner(a.amplitudes(), rho_a).real(), 0.0, 1.0);
}

BlochVector bloch_vector(const DensityOperator& rho) {
    if (rho.num_qubits() != 1) throw std::invalid_argument("bloch_vector: expects one qubit");
    const Complex off = rho(0, 1);
    // tr(ρσx) = 2 Re ρ01, tr(ρσy) = -2 Im ρ01, tr(ρσz) = ρ00 - ρ11.
    return {2.0 * off.real(), -2.0 * off.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

BlochVector bloch_vector(const PureState& state) {
    return bloch_vector(DensityOperator::from_pure(state));
}

PureState canonical_phase(const PureState& state) {
    const auto amps = state.amplitudes();
    const auto lead = std::find_if(amps.begin(), amps.end(),
                                   [](const Complex& a) { return std::abs(a) > kStructuralTol; });
    if (lead == amps.end()) throw std::invalid_argument("canonical_phase: zero vector");
    const Complex phase = std::conj(*lead) / std::abs(*lead);
    std::vector<Complex> out(amps.begin(), amps.end());
    for (auto& a : out) a *= phase;
    const auto pos = static_cast<std::size_t>(lead - amps.begin());
    out[pos] = Complex(std::abs(*lead), 0.0);
    return PureState(std::move(out));
}

PureState haar_random_state(std::size_t num_qubits, RngStream& rng) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("haar_random_state: qubit count out of range");
    }
    std::vector<Complex> v(std::size_t{1} << num_qubits);
    for (auto& a : v) {
        const double re = rng.normal();
        const double im = rng.normal();
        a = Complex(re, im);
    }
    return PureState::normalized(std::move(v));
}

PureState state_from_bloch(const BlochVector& direction) {
    const double len = direction.norm();
    if (!(len > kStructuralTol)) throw std::invalid_argument("state_from_bloch: zero vector");
    const double z = std::clamp(direction.z / len, -1.0, 1.0);
    const double theta = std::acos(z);
    const double phi = std::atan2(direction.y, direction.x);
    return PureState::normalized(
        {std::cos(theta / 2.0), std::polar(std::sin(theta / 2.0), phi)});
}

bool is_orthonormal(std::span<const PureState> vectors, double tol) {
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        for (std::size_t j = i; j < vectors.size(); ++j) {
            if (vectors[i].dimension() != vectors[j].dimension()) return false;
            const Complex ip = inner(vectors[i].amplitudes(), vectors[j].amplitudes());
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(ip - expected) > tol) return false;
        }
    }
    return true;
}

}  // namespace qfeedback
