#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qtk/matrix.hpp"

namespace qtk {

/// Largest register the dense simulator accepts (2^24 amplitudes, 256 MiB).
inline constexpr int kMaxQubits = 24;

/// Dense pure state over n qubits.
///
/// Ordering is big-endian: qubit 0 is the most significant bit of the basis
/// index, so for n = 2 the amplitude order is |00>, |01>, |10>, |11> with the
/// left digit belonging to qubit 0.
class StateVector {
   public:
    /// |0...0> on n_qubits. Throws CapacityError outside [1, kMaxQubits].
    explicit StateVector(int n_qubits);

    /// Adopts `amps`; its length must be 2^n for some n in [1, kMaxQubits].
    /// No normalization is enforced here; measurement checks it.
    static StateVector from_amplitudes(std::vector<Amp> amps);

    /// |index> on n_qubits.
    static StateVector basis(int n_qubits, uint64_t index);

    int n_qubits() const {
        return n_qubits_;
    }
    size_t size() const {
        return amps_.size();
    }
    const std::vector<Amp> &amplitudes() const {
        return amps_;
    }
    std::vector<Amp> &amplitudes() {
        return amps_;
    }
    const Amp &operator[](size_t index) const {
        return amps_[index];
    }
    Amp &operator[](size_t index) {
        return amps_[index];
    }

    double norm() const;

    /// Bit mask of `qubit` within a basis index.
    uint64_t mask(int qubit) const {
        return uint64_t{1} << (n_qubits_ - 1 - qubit);
    }

    /// Bitstring of a basis index, qubit 0 first.
    std::string bitstring(uint64_t index) const;

    bool operator==(const StateVector &rhs) const = default;

   private:
    StateVector() = default;

    int n_qubits_ = 0;
    std::vector<Amp> amps_;
};

/// Alias of the StateVector constructor.
StateVector new_zero_state(int n_qubits);

/// Applies `u` to the ordered `targets` in place. targets[0] is the most
/// significant bit of u's local index. Runs as a strided update over
/// 2^|targets|-amplitude groups; the embedded 2^n matrix is never formed.
/// Throws DimensionError if u.dim() != 2^|targets|, IndexError on duplicate
/// or out-of-range targets.
void apply_unitary(StateVector &state, const UnitaryMatrix &u, std::span<const int> targets);

/// Applies the 2x2 `u` to `target` on the subspace where every control qubit
/// is |1>. With no controls this is an ordinary single-qubit gate.
void apply_controlled(StateVector &state, const UnitaryMatrix &u, std::span<const int> controls, int target);

/// Swaps each amplitude pair (i, perm(i)) given by an involutive relabeling
/// function of basis indices. Used for X-type permutation gates and oracles.
template <typename Involution>
void apply_involution(StateVector &state, Involution &&perm) {
    auto &a = state.amplitudes();
    for (uint64_t i = 0; i < a.size(); ++i) {
        uint64_t j = perm(i);
        if (j > i) {
            std::swap(a[i], a[j]);
        }
    }
}

struct MeasurementRecord {
    std::string outcome;  ///< qubit 0 first
    uint64_t index = 0;   ///< outcome as a basis index
    double probability = 0;
    StateVector collapsed;
};

/// Samples all qubits from the Born distribution. Throws StateError if the
/// norm deviates from 1 by more than kPreconditionTol.
MeasurementRecord measure_all(const StateVector &state, uint64_t rng_seed);

/// Samples a basis index from |amp|^2 using one uniform draw `u` in [0, 1).
uint64_t sample_index(const StateVector &state, double u);

/// Probability that `qubit` reads 1.
double probability_one(const StateVector &state, int qubit);

struct QubitMeasurement {
    int bit = 0;
    double probability = 0;  ///< probability of the observed bit
    StateVector post;
};

/// Measures one qubit; the post-state is renormalized with the other qubits'
/// conditional amplitudes untouched. Throws IndexError for a bad qubit.
QubitMeasurement measure_qubit(const StateVector &state, int qubit, uint64_t rng_seed);

/// Number of Schmidt coefficients above `tol` across the cut
/// `left` | complement. 1 iff the state is a product across that cut.
/// Throws IndexError if `left` is empty, covers every qubit, or is invalid.
int schmidt_rank(const StateVector &state, std::span<const int> left, double tol = 1e-10);

}  // namespace qtk
