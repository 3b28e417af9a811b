#include "qfeedback/cloner.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <numeric>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

namespace qfeedback {

namespace {

std::size_t permuted_index(std::size_t n, std::span<const std::size_t> perm, std::size_t index) {
    std::size_t out = 0;
    for (std::size_t q = 0; q < n; ++q) {
        const std::size_t bit = (index >> (n - 1 - q)) & 1U;
        out |= bit << (n - 1 - perm[q]);
    }
    return out;
}

Matrix build_symmetric_projector(std::size_t n) {
    const std::size_t dim = std::size_t{1} << n;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> acc(dim * dim, 0.0);
    std::size_t count = 0;
    do {
        for (std::size_t i = 0; i < dim; ++i) acc[permuted_index(n, perm, i) * dim + i] += 1.0;
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    Matrix m(dim, dim);
    const double inv = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < dim * dim; ++i) m.data()[i] = acc[i] * inv;
    return m;
}

}  // namespace

const SymmetricProjector& symmetric_projector(std::size_t n) {
    if (n < 1 || n > kMaxCopies) {
        throw std::invalid_argument("symmetric_projector: n must lie in [1, 8], got " +
                                    std::to_string(n));
    }
    static std::mutex mutex;
    // Entries are never replaced, so references handed out stay valid.
    static std::array<std::unique_ptr<const SymmetricProjector>, kMaxCopies + 1> cache;
    std::lock_guard lock(mutex);
    if (!cache[n]) cache[n].reset(new SymmetricProjector(n, build_symmetric_projector(n)));
    return *cache[n];
}

namespace {
const SymmetricProjector& cloner_projector(std::size_t total_copies) {
    if (total_copies < 2 || total_copies > kMaxCopies) {
        throw std::invalid_argument("clone: K must lie in [2, 8], got " +
                                    std::to_string(total_copies));
    }
    return symmetric_projector(total_copies);
}
}  // namespace

Matrix qubit_permutation(std::size_t n, std::span<const std::size_t> perm) {
    if (perm.size() != n) throw std::invalid_argument("qubit_permutation: wrong length");
    std::vector<std::size_t> sorted(perm.begin(), perm.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t q = 0; q < n; ++q) {
        if (sorted[q] != q) throw std::invalid_argument("qubit_permutation: not a permutation");
    }
    const std::size_t dim = std::size_t{1} << n;
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) m(permuted_index(n, perm, i), i) = 1.0;
    return m;
}

UniversalCloner::UniversalCloner(std::size_t total_copies)
    : k_(total_copies), projector_(&cloner_projector(total_copies)) {}

CloneBatch UniversalCloner::clone(const PureState& input) const {
    if (input.num_qubits() != 1) throw std::invalid_argument("clone: input must be one qubit");
    const Matrix& s = projector_->matrix();
    const std::size_t dim = s.rows();
    const std::size_t half = dim / 2;
    const Complex a0 = input.amplitude(0);
    const Complex a1 = input.amplitude(1);

    // ψ ⊗ (I/2)^{⊗(K-1)} = mean over j of |ψ, j⟩⟨ψ, j|, so the projected state
    // is Σ_j v_j v_j† with v_j = S|ψ, j⟩ (normalised afterwards).
    Matrix vs(dim, half);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t j = 0; j < half; ++j) vs(r, j) = a0 * s(r, j) + a1 * s(r, half + j);
    }
    Matrix rho(dim, dim);
    double total = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r; c < dim; ++c) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < half; ++j) acc += vs(r, j) * std::conj(vs(c, j));
            rho(r, c) = acc;
            rho(c, r) = std::conj(acc);
        }
        rho(r, r) = rho(r, r).real();
        total += rho(r, r).real();
    }
    rho *= Complex(1.0 / total);

    DensityOperator joint(std::move(rho));
    std::vector<DensityOperator> copies;
    copies.reserve(k_);
    for (std::size_t q = 0; q < k_; ++q) {
        const std::size_t keep[] = {q};
        copies.push_back(partial_trace(joint, keep));
    }
    return {k_, std::move(joint), std::move(copies), input};
}

CloneBatch clone(const PureState& input, std::size_t total_copies) {
    return UniversalCloner(total_copies).clone(input);
}

double optimal_clone_fidelity(std::size_t total_copies) {
    const auto k = static_cast<double>(total_copies);
    return (2.0 * k + 1.0) / (3.0 * k);
}

double clone_shrink_factor(std::size_t total_copies) {
    const auto k = static_cast<double>(total_copies);
    return (k + 2.0) / (3.0 * k);
}

double monte_carlo_clone_fidelity(std::size_t total_copies, std::size_t samples,
                                  std::uint64_t seed, unsigned threads) {
    if (samples == 0) throw std::invalid_argument("monte_carlo_clone_fidelity: samples must be positive");
    const UniversalCloner cloner(total_copies);
    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);
    const RngStream root(seed);

    auto run_chunk = [&](std::size_t c) {
        RngStream rng = root.derive(c);
        const std::size_t end = std::min(samples, (c + 1) * kChunk);
        double sum = 0.0;
        for (std::size_t i = c * kChunk; i < end; ++i) {
            const PureState psi = haar_random_state(1, rng);
            const CloneBatch batch = cloner.clone(psi);
            double per_copy = 0.0;
            for (const auto& copy : batch.copies) per_copy += fidelity(psi, copy);
            sum += per_copy / static_cast<double>(batch.copies.size());
        }
        partial[c] = sum;
    };

    const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
            });
        }
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total / static_cast<double>(samples);
}

CopyRouting split_copies(const CloneBatch& batch, std::size_t n_recognizer, std::size_t m_feedback) {
    if (n_recognizer < 1 || m_feedback < 1) {
        throw std::invalid_argument("split_copies: N and M must both be at least 1");
    }
    if (n_recognizer + m_feedback + 1 != batch.total_copies) {
        throw std::invalid_argument("split_copies: N + M + 1 = " +
                                    std::to_string(n_recognizer + m_feedback + 1) +
                                    " does not match K = " + std::to_string(batch.total_copies));
    }
    CopyRouting routing;
    routing.recognizer.resize(n_recognizer);
    std::iota(routing.recognizer.begin(), routing.recognizer.end(), 0);
    routing.feedback.resize(m_feedback);
    std::iota(routing.feedback.begin(), routing.feedback.end(), n_recognizer);
    routing.output = batch.total_copies - 1;
    return routing;
}

double no_cloning_witness(const PureState& psi, const PureState& phi) {
    if (psi.num_qubits() != 1 || phi.num_qubits() != 1) {
        throw std::invalid_argument("no_cloning_witness: expects single-qubit states");
    }
    const Complex ip = inner(psi.amplitudes(), phi.amplitudes());
    return std::abs(ip - ip * ip);
}

}  // namespace qfeedback
