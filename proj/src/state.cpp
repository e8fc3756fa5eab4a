#include "qtk/state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qtk/errors.hpp"
#include "qtk/rng.hpp"

namespace qtk {

namespace {

void check_qubit(const StateVector &state, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw IndexError("qubit " + std::to_string(qubit) + " out of range for " + std::to_string(state.n_qubits()) +
                         "-qubit state");
    }
}

void check_distinct(const StateVector &state, std::span<const int> qubits) {
    uint64_t seen = 0;
    for (int q : qubits) {
        check_qubit(state, q);
        uint64_t m = state.mask(q);
        if (seen & m) {
            throw IndexError("qubit " + std::to_string(q) + " appears twice");
        }
        seen |= m;
    }
}

// Spreads the bits of `compact` around the zero positions in `sorted_masks`
// (ascending single-bit masks), producing an index with those bits clear.
inline uint64_t insert_zeros(uint64_t compact, std::span<const uint64_t> sorted_masks) {
    for (uint64_t m : sorted_masks) {
        uint64_t low = compact & (m - 1);
        compact = ((compact & ~(m - 1)) << 1) | low;
    }
    return compact;
}

}  // namespace

StateVector::StateVector(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("qubit count " + std::to_string(n_qubits) + " outside [1, " + std::to_string(kMaxQubits) +
                            "]");
    }
    n_qubits_ = n_qubits;
    amps_.assign(size_t{1} << n_qubits, Amp{});
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Amp> amps) {
    size_t len = amps.size();
    if (len < 2 || (len & (len - 1)) != 0) {
        throw DimensionError("amplitude count " + std::to_string(len) + " is not 2^n with n >= 1");
    }
    int n = std::countr_zero(len);
    if (n > kMaxQubits) {
        throw CapacityError("state of " + std::to_string(n) + " qubits exceeds " + std::to_string(kMaxQubits));
    }
    for (const auto &a : amps) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw StateError("non-finite amplitude");
        }
    }
    StateVector s;
    s.n_qubits_ = n;
    s.amps_ = std::move(amps);
    return s;
}

StateVector StateVector::basis(int n_qubits, uint64_t index) {
    StateVector s(n_qubits);
    if (index >= s.size()) {
        throw IndexError("basis index " + std::to_string(index) + " out of range");
    }
    s.amps_[0] = 0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm() const {
    double total = 0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return std::sqrt(total);
}

std::string StateVector::bitstring(uint64_t index) const {
    std::string out(n_qubits_, '0');
    for (int q = 0; q < n_qubits_; ++q) {
        if (index & mask(q)) {
            out[q] = '1';
        }
    }
    return out;
}

StateVector new_zero_state(int n_qubits) {
    return StateVector(n_qubits);
}

void apply_unitary(StateVector &state, const UnitaryMatrix &u, std::span<const int> targets) {
    const size_t k = targets.size();
    if (k == 0 || u.dim() != (size_t{1} << k)) {
        throw DimensionError("unitary of dimension " + std::to_string(u.dim()) + " applied to " + std::to_string(k) +
                             " targets");
    }
    check_distinct(state, targets);

    const size_t group = u.dim();
    std::vector<uint64_t> offsets(group, 0);
    for (size_t local = 0; local < group; ++local) {
        for (size_t t = 0; t < k; ++t) {
            if (local & (size_t{1} << (k - 1 - t))) {
                offsets[local] |= state.mask(targets[t]);
            }
        }
    }
    std::vector<uint64_t> sorted_masks;
    for (int q : targets) {
        sorted_masks.push_back(state.mask(q));
    }
    std::sort(sorted_masks.begin(), sorted_masks.end());

    auto &amps = state.amplitudes();
    const auto &m = u.matrix().data();
    const uint64_t n_groups = amps.size() >> k;

    if (k == 1) {
        const Amp m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
        const uint64_t hi = offsets[1];
        for (uint64_t g = 0; g < n_groups; ++g) {
            uint64_t base = insert_zeros(g, sorted_masks);
            Amp a0 = amps[base];
            Amp a1 = amps[base | hi];
            amps[base] = m00 * a0 + m01 * a1;
            amps[base | hi] = m10 * a0 + m11 * a1;
        }
        return;
    }

    // Monomial matrices (one nonzero per column: permutations, oracles,
    // modular multipliers) take an O(group) path.
    std::vector<size_t> image(group);
    std::vector<bool> row_used(group, false);
    bool monomial = true;
    for (size_t c = 0; c < group && monomial; ++c) {
        int nonzero = 0;
        for (size_t r = 0; r < group; ++r) {
            if (m[r * group + c] != Amp{}) {
                image[c] = r;
                ++nonzero;
            }
        }
        monomial = nonzero == 1 && !row_used[image[c]];
        if (monomial) {
            row_used[image[c]] = true;
        }
    }
    std::vector<Amp> in(group), out(group);
    if (monomial) {
        for (uint64_t g = 0; g < n_groups; ++g) {
            uint64_t base = insert_zeros(g, sorted_masks);
            for (size_t l = 0; l < group; ++l) {
                in[l] = amps[base | offsets[l]];
            }
            for (size_t c = 0; c < group; ++c) {
                amps[base | offsets[image[c]]] = m[image[c] * group + c] * in[c];
            }
        }
        return;
    }

    for (uint64_t g = 0; g < n_groups; ++g) {
        uint64_t base = insert_zeros(g, sorted_masks);
        for (size_t l = 0; l < group; ++l) {
            in[l] = amps[base | offsets[l]];
        }
        for (size_t r = 0; r < group; ++r) {
            Amp acc = 0;
            const Amp *row = &m[r * group];
            for (size_t c = 0; c < group; ++c) {
                acc += row[c] * in[c];
            }
            out[r] = acc;
        }
        for (size_t l = 0; l < group; ++l) {
            amps[base | offsets[l]] = out[l];
        }
    }
}

void apply_controlled(StateVector &state, const UnitaryMatrix &u, std::span<const int> controls, int target) {
    if (u.dim() != 2) {
        throw DimensionError("controlled gate core must be 2x2, got dimension " + std::to_string(u.dim()));
    }
    std::vector<int> all(controls.begin(), controls.end());
    all.push_back(target);
    check_distinct(state, all);

    uint64_t ctrl = 0;
    for (int c : controls) {
        ctrl |= state.mask(c);
    }
    const uint64_t tmask = state.mask(target);
    std::vector<uint64_t> sorted_masks;
    for (int q : all) {
        sorted_masks.push_back(state.mask(q));
    }
    std::sort(sorted_masks.begin(), sorted_masks.end());

    const auto &m = u.matrix().data();
    const Amp m00 = m[0], m01 = m[1], m10 = m[2], m11 = m[3];
    auto &amps = state.amplitudes();
    const uint64_t n_groups = amps.size() >> all.size();
    for (uint64_t g = 0; g < n_groups; ++g) {
        uint64_t i0 = insert_zeros(g, sorted_masks) | ctrl;
        uint64_t i1 = i0 | tmask;
        Amp a0 = amps[i0];
        Amp a1 = amps[i1];
        amps[i0] = m00 * a0 + m01 * a1;
        amps[i1] = m10 * a0 + m11 * a1;
    }
}

uint64_t sample_index(const StateVector &state, double u) {
    const auto &amps = state.amplitudes();
    double cumulative = 0;
    uint64_t last_nonzero = 0;
    for (uint64_t i = 0; i < amps.size(); ++i) {
        double p = std::norm(amps[i]);
        if (p > 0) {
            last_nonzero = i;
        }
        cumulative += p;
        if (u < cumulative) {
            return i;
        }
    }
    // Rounding left u above the total mass: fall back to the last supported outcome.
    return last_nonzero;
}

MeasurementRecord measure_all(const StateVector &state, uint64_t rng_seed) {
    double nrm = state.norm();
    if (std::abs(nrm - 1.0) > kPreconditionTol) {
        throw StateError("state is not normalized (norm " + std::to_string(nrm) + ")");
    }
    Rng rng(rng_seed);
    uint64_t idx = sample_index(state, rng.uniform());
    MeasurementRecord rec{state.bitstring(idx), idx, std::norm(state[idx]),
                          StateVector::basis(state.n_qubits(), idx)};
    return rec;
}

double probability_one(const StateVector &state, int qubit) {
    check_qubit(state, qubit);
    const uint64_t m = state.mask(qubit);
    double p1 = 0;
    const auto &amps = state.amplitudes();
    for (uint64_t i = 0; i < amps.size(); ++i) {
        if (i & m) {
            p1 += std::norm(amps[i]);
        }
    }
    return p1;
}

QubitMeasurement measure_qubit(const StateVector &state, int qubit, uint64_t rng_seed) {
    check_qubit(state, qubit);
    double nrm = state.norm();
    if (std::abs(nrm - 1.0) > kPreconditionTol) {
        throw StateError("state is not normalized (norm " + std::to_string(nrm) + ")");
    }
    double p1 = probability_one(state, qubit) / (nrm * nrm);
    Rng rng(rng_seed);
    int bit = rng.uniform() < p1 ? 1 : 0;
    double p = bit ? p1 : 1.0 - p1;

    const uint64_t m = state.mask(qubit);
    StateVector post = state;
    double scale = 1.0 / std::sqrt(p * nrm * nrm);
    for (uint64_t i = 0; i < post.size(); ++i) {
        bool one = (i & m) != 0;
        if (one != static_cast<bool>(bit)) {
            post[i] = 0;
        } else {
            post[i] *= scale;
        }
    }
    return {bit, p, std::move(post)};
}

int schmidt_rank(const StateVector &state, std::span<const int> left, double tol) {
    const int n = state.n_qubits();
    if (left.empty() || static_cast<int>(left.size()) >= n) {
        throw IndexError("bipartition must be non-empty and proper");
    }
    check_distinct(state, left);

    std::vector<int> lq(left.begin(), left.end());
    std::sort(lq.begin(), lq.end());
    std::vector<int> rq;
    for (int q = 0; q < n; ++q) {
        if (!std::binary_search(lq.begin(), lq.end(), q)) {
            rq.push_back(q);
        }
    }

    const Eigen::Index rows = Eigen::Index{1} << lq.size();
    const Eigen::Index cols = Eigen::Index{1} << rq.size();
    Eigen::MatrixXcd coeff(rows, cols);
    for (uint64_t i = 0; i < state.size(); ++i) {
        Eigen::Index r = 0, c = 0;
        for (int q : lq) {
            r = (r << 1) | ((i & state.mask(q)) ? 1 : 0);
        }
        for (int q : rq) {
            c = (c << 1) | ((i & state.mask(q)) ? 1 : 0);
        }
        coeff(r, c) = state[i];
    }
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(coeff);
    const auto &sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv[k] > tol) {
            ++rank;
        }
    }
    return rank;
}

}  // namespace qtk
