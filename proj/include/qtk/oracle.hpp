#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qtk/matrix.hpp"
#include "qtk/state.hpp"

namespace qtk {

/// Largest indicator function accepted (2^20-entry truth table).
inline constexpr int kMaxOracleInputs = 20;
/// Largest oracle for which oracle_gate() builds an explicit matrix (inputs + ancilla).
inline constexpr int kMaxExplicitOracleQubits = 12;

/// Boolean indicator I: {0,1}^n -> {0,1} stored as a truth table. Immutable.
///
/// Inputs are read big-endian: for x = x_0 x_1 ... x_{n-1}, table index is
/// sum_k x_k 2^(n-1-k), i.e. the first input bit is the most significant.
class Oracle {
   public:
    /// Throws OracleError unless table.size() == 2^n_inputs, bits are 0/1 and
    /// 1 <= n_inputs <= kMaxOracleInputs.
    Oracle(int n_inputs, std::vector<uint8_t> table, std::string name = "");

    /// Builds from a '0'/'1' string of length 2^n.
    static Oracle from_bits(std::string_view bits, std::string name = "");

    int n_inputs() const {
        return n_inputs_;
    }
    const std::vector<uint8_t> &table() const {
        return table_;
    }
    const std::string &name() const {
        return name_;
    }
    int operator()(uint64_t x) const {
        return table_[x];
    }
    std::string bits() const;

    bool is_constant() const;
    bool is_balanced() const;

   private:
    int n_inputs_;
    std::vector<uint8_t> table_;
    std::string name_;
};

/// Query tallies for one run. Owned by the caller and threaded through
/// simulation so that Oracle itself stays read-only.
struct QueryCounter {
    uint64_t quantum_queries = 0;
    uint64_t classical_queries = 0;
};

/// Explicit permutation matrix of |x, b> -> |x, b XOR I(x)> on n_inputs + 1
/// qubits, ancilla least significant. Throws CapacityError beyond
/// kMaxExplicitOracleQubits.
UnitaryMatrix oracle_gate(const Oracle &oracle);

/// Applies the oracle in place without materializing it: x is read from
/// `x_targets` (first target most significant) and XORed into `ancilla`.
/// Increments counter.quantum_queries once.
void apply_oracle(StateVector &state, const Oracle &oracle, std::span<const int> x_targets, int ancilla,
                  QueryCounter &counter);

/// Classical lookup of I(x) for a '0'/'1' string x of length n_inputs.
/// Throws OracleError on wrong length or non-binary characters.
int classical_query(const Oracle &oracle, std::string_view x, QueryCounter &counter);

/// Worst-case query count of the best adaptive deterministic decision tree
/// telling constant from balanced oracles, by exhaustive search. n in {1,2,3}.
int min_deterministic_queries_dj(int n_inputs);

/// Every balanced truth table on n inputs, in increasing table order.
std::vector<Oracle> all_balanced_oracles(int n_inputs);

/// Oracle file: "inputs N" then a 2^N-character bitstring. '#' comments and
/// blank lines are ignored. Throws ParseError.
Oracle parse_oracle(std::string_view text, std::string name = "");
std::string serialize_oracle(const Oracle &oracle);

}  // namespace qtk
