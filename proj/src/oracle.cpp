#include "qtk/oracle.hpp"

#include <algorithm>
#include <bit>
#include <bitset>
#include <climits>
#include <map>
#include <numeric>
#include <utility>

#include "qtk/errors.hpp"
#include "text_util.hpp"

namespace qtk {

Oracle::Oracle(int n_inputs, std::vector<uint8_t> table, std::string name)
    : n_inputs_(n_inputs), table_(std::move(table)), name_(std::move(name)) {
    if (n_inputs < 1 || n_inputs > kMaxOracleInputs) {
        throw OracleError("oracle input count " + std::to_string(n_inputs) + " outside [1, " +
                          std::to_string(kMaxOracleInputs) + "]");
    }
    if (table_.size() != (size_t{1} << n_inputs)) {
        throw OracleError("truth table has " + std::to_string(table_.size()) + " entries, expected " +
                          std::to_string(size_t{1} << n_inputs));
    }
    for (uint8_t b : table_) {
        if (b > 1) {
            throw OracleError("truth table entries must be 0 or 1");
        }
    }
}

Oracle Oracle::from_bits(std::string_view bits, std::string name) {
    if (bits.size() < 2 || (bits.size() & (bits.size() - 1)) != 0) {
        throw OracleError("truth table length " + std::to_string(bits.size()) + " is not 2^N with N >= 1");
    }
    std::vector<uint8_t> table;
    table.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw OracleError(std::string("truth table character '") + c + "' is not 0 or 1");
        }
        table.push_back(static_cast<uint8_t>(c - '0'));
    }
    return Oracle(std::countr_zero(bits.size()), std::move(table), std::move(name));
}

std::string Oracle::bits() const {
    std::string out;
    out.reserve(table_.size());
    for (uint8_t b : table_) {
        out.push_back(static_cast<char>('0' + b));
    }
    return out;
}

bool Oracle::is_constant() const {
    return std::all_of(table_.begin(), table_.end(), [&](uint8_t b) { return b == table_[0]; });
}

bool Oracle::is_balanced() const {
    return std::accumulate(table_.begin(), table_.end(), size_t{0}) * 2 == table_.size();
}

UnitaryMatrix oracle_gate(const Oracle &oracle) {
    const int qubits = oracle.n_inputs() + 1;
    if (qubits > kMaxExplicitOracleQubits) {
        throw CapacityError("explicit oracle matrix limited to " + std::to_string(kMaxExplicitOracleQubits) +
                            " qubits, oracle needs " + std::to_string(qubits));
    }
    Matrix m(size_t{1} << qubits);
    for (uint64_t x = 0; x < oracle.table().size(); ++x) {
        for (uint64_t b = 0; b < 2; ++b) {
            uint64_t in = (x << 1) | b;
            uint64_t out = (x << 1) | (b ^ static_cast<uint64_t>(oracle(x)));
            m(out, in) = 1.0;
        }
    }
    return UnitaryMatrix(std::move(m));
}

void apply_oracle(StateVector &state, const Oracle &oracle, std::span<const int> x_targets, int ancilla,
                  QueryCounter &counter) {
    if (static_cast<int>(x_targets.size()) != oracle.n_inputs()) {
        throw DimensionError("oracle '" + oracle.name() + "' takes " + std::to_string(oracle.n_inputs()) +
                             " inputs, given " + std::to_string(x_targets.size()) + " targets");
    }
    uint64_t seen = 0;
    std::vector<uint64_t> xmasks;
    for (int q : x_targets) {
        if (q < 0 || q >= state.n_qubits()) {
            throw IndexError("oracle target " + std::to_string(q) + " out of range");
        }
        xmasks.push_back(state.mask(q));
    }
    if (ancilla < 0 || ancilla >= state.n_qubits()) {
        throw IndexError("oracle ancilla " + std::to_string(ancilla) + " out of range");
    }
    for (uint64_t m : xmasks) {
        if (seen & m) {
            throw IndexError("oracle targets repeat a qubit");
        }
        seen |= m;
    }
    const uint64_t amask = state.mask(ancilla);
    if (seen & amask) {
        throw IndexError("oracle ancilla coincides with an input target");
    }

    const auto &table = oracle.table();
    apply_involution(state, [&](uint64_t i) {
        uint64_t x = 0;
        for (uint64_t m : xmasks) {
            x = (x << 1) | ((i & m) ? 1 : 0);
        }
        return table[x] ? (i ^ amask) : i;
    });
    ++counter.quantum_queries;
}

int classical_query(const Oracle &oracle, std::string_view x, QueryCounter &counter) {
    if (static_cast<int>(x.size()) != oracle.n_inputs()) {
        throw OracleError("query of length " + std::to_string(x.size()) + " to oracle with " +
                          std::to_string(oracle.n_inputs()) + " inputs");
    }
    uint64_t index = 0;
    for (char c : x) {
        if (c != '0' && c != '1') {
            throw OracleError("query bit must be 0 or 1");
        }
        index = (index << 1) | static_cast<uint64_t>(c - '0');
    }
    ++counter.classical_queries;
    return oracle(index);
}

std::vector<Oracle> all_balanced_oracles(int n_inputs) {
    const uint64_t len = uint64_t{1} << n_inputs;
    if (len > 16) {
        throw CapacityError("balanced-oracle enumeration limited to 4 inputs");
    }
    std::vector<Oracle> out;
    for (uint64_t bits = 0; bits < (uint64_t{1} << len); ++bits) {
        if (static_cast<uint64_t>(std::popcount(bits)) * 2 != len) {
            continue;
        }
        std::vector<uint8_t> table(len);
        for (uint64_t x = 0; x < len; ++x) {
            table[x] = static_cast<uint8_t>((bits >> x) & 1);
        }
        out.emplace_back(n_inputs, std::move(table));
    }
    return out;
}

namespace {

// Minimax over adaptive decision trees. A node is the set of promise oracles
// still consistent with the answers so far.
class DecisionTreeSearch {
   public:
    using Set = std::bitset<128>;

    explicit DecisionTreeSearch(int n) : len_(size_t{1} << n) {
        oracles_.push_back(std::vector<uint8_t>(len_, 0));
        oracles_.push_back(std::vector<uint8_t>(len_, 1));
        for (auto &o : all_balanced_oracles(n)) {
            oracles_.push_back(o.table());
        }
    }

    int solve() {
        Set all;
        for (size_t k = 0; k < oracles_.size(); ++k) {
            all.set(k);
        }
        return cost(all);
    }

   private:
    // Oracles 0 and 1 are the constants.
    bool decided(const Set &s) const {
        bool any_const = s[0] || s[1];
        Set balanced = s;
        balanced.reset(0);
        balanced.reset(1);
        return !(any_const && balanced.any());
    }

    int cost(const Set &s) {
        if (decided(s)) {
            return 0;
        }
        std::string key = s.to_string();
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
        int best = INT_MAX;
        for (size_t x = 0; x < len_; ++x) {
            Set zero, one;
            for (size_t k = 0; k < oracles_.size(); ++k) {
                if (s[k]) {
                    (oracles_[k][x] ? one : zero).set(k);
                }
            }
            if (zero.none() || one.none()) {
                continue;
            }
            best = std::min(best, 1 + std::max(cost(zero), cost(one)));
        }
        memo_.emplace(std::move(key), best);
        return best;
    }

    size_t len_;
    std::vector<std::vector<uint8_t>> oracles_;
    std::map<std::string, int> memo_;
};

}  // namespace

int min_deterministic_queries_dj(int n_inputs) {
    if (n_inputs < 1 || n_inputs > 3) {
        throw ParameterError("decision-tree search supports 1 to 3 inputs, got " + std::to_string(n_inputs));
    }
    return DecisionTreeSearch(n_inputs).solve();
}

Oracle parse_oracle(std::string_view text, std::string name) {
    auto lines = text::significant_lines(text);
    if (lines.empty()) {
        throw ParseError(1, "empty oracle file");
    }
    auto head = text::split_ws(lines[0].content);
    if (head.size() != 2 || head[0] != "inputs") {
        throw ParseError(lines[0].number, "expected 'inputs N'");
    }
    auto n = text::parse_int(head[1]);
    if (!n || *n < 1 || *n > kMaxOracleInputs) {
        throw ParseError(lines[0].number, "input count must be an integer in [1, " +
                                              std::to_string(kMaxOracleInputs) + "]");
    }
    if (lines.size() != 2) {
        throw ParseError(lines.size() < 2 ? lines[0].number : lines[2].number,
                         lines.size() < 2 ? "missing truth table line" : "unexpected content after truth table");
    }
    std::string_view bits = lines[1].content;
    size_t expected = size_t{1} << *n;
    if (bits.size() != expected) {
        throw ParseError(lines[1].number, "truth table has " + std::to_string(bits.size()) + " bits, expected " +
                                              std::to_string(expected));
    }
    try {
        return Oracle::from_bits(bits, std::move(name));
    } catch (const OracleError &e) {
        throw ParseError(lines[1].number, e.what());
    }
}

std::string serialize_oracle(const Oracle &oracle) {
    return "inputs " + std::to_string(oracle.n_inputs()) + "\n" + oracle.bits() + "\n";
}

}  // namespace qtk
