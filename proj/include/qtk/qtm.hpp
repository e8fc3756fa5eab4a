#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qtk/matrix.hpp"
#include "qtk/oracle.hpp"

namespace qtk {

enum class Move { left, right };

/// One branch of the transition function: write `symbol`, enter `state`,
/// move the head, with complex amplitude `amp`.
struct Branch {
    int state;
    int symbol;
    Move move;
    Amp amp;
    bool operator==(const Branch &) const = default;
};

/// Quantum Turing machine description.
///
/// States and symbols are referred to by index into `states` / `alphabet`.
/// alphabet[0] is the blank. The final state is optional; when present it has
/// no user transitions and the machine is taken in normal form: every
/// (final, symbol) steps to (initial, symbol) with the head moving right.
class QtmDef {
   public:
    QtmDef(std::vector<std::string> states, int initial, std::optional<int> final_state,
           std::vector<std::string> alphabet);

    /// Adds a branch for (state, symbol). Throws MachineError on bad indices,
    /// a non-finite amplitude, or a transition out of the final state.
    void add(int state, int symbol, Branch branch);

    const std::vector<std::string> &states() const {
        return states_;
    }
    const std::vector<std::string> &alphabet() const {
        return alphabet_;
    }
    int initial() const {
        return initial_;
    }
    std::optional<int> final_state() const {
        return final_;
    }
    /// Branches out of (state, symbol); empty when undefined.
    std::span<const Branch> branches(int state, int symbol) const;

    std::optional<int> state_index(std::string_view name) const;
    std::optional<int> symbol_index(std::string_view name) const;

    /// Copy with every amplitude multiplied by `factor`.
    QtmDef scaled(Amp factor) const;

   private:
    std::vector<std::string> states_;
    int initial_;
    std::optional<int> final_;
    std::vector<std::string> alphabet_;
    std::map<std::pair<int, int>, std::vector<Branch>> delta_;
};

/// Largest configuration space step_operator() will build.
inline constexpr size_t kMaxConfigurations = 4096;

/// Configurations (state, head, tape) of a machine on a cyclic window of
/// `tape_cells` cells, enumerated lexicographically: index =
/// (state * T + head) * |alphabet|^T + word, where the tape word is read as a
/// base-|alphabet| number with cell 0 most significant.
class ConfigSpace {
   public:
    /// Throws CapacityError when the basis exceeds kMaxConfigurations,
    /// ParameterError when tape_cells < 1.
    ConfigSpace(int n_states, int n_symbols, int tape_cells);

    struct Config {
        int state;
        int head;
        std::vector<int> tape;
        bool operator==(const Config &) const = default;
    };

    size_t size() const {
        return size_;
    }
    int tape_cells() const {
        return cells_;
    }
    int n_states() const {
        return n_states_;
    }
    int n_symbols() const {
        return n_symbols_;
    }
    size_t index(const Config &c) const;
    Config decode(size_t index) const;

    int symbol_at(size_t index, int cell) const;
    /// Index of the same configuration with `cell` rewritten to `symbol`.
    size_t with_symbol(size_t index, int cell, int symbol) const;

    bool operator==(const ConfigSpace &) const = default;

   private:
    int n_states_;
    int n_symbols_;
    int cells_;
    size_t words_;
    size_t size_;
    std::vector<size_t> place_;  // place_[cell] = |alphabet|^(T-1-cell)
};

/// One-step evolution as sparse columns: column c lists (c', amplitude).
struct StepOperator {
    ConfigSpace space;
    std::vector<std::vector<std::pair<size_t, Amp>>> columns;

    Matrix dense() const;
};

/// Builds the one-step operator on a cyclic window. Undefined (state, symbol)
/// pairs give zero columns. Unitarity is not asserted.
StepOperator step_operator(const QtmDef &qtm, int tape_cells);

struct Violation {
    size_t config_a;
    size_t config_b;
    Amp gram;  ///< (M^dagger M)[a][b]; on the diagonal this is the squared column norm
    std::string description;
};

struct WellFormedness {
    bool well_formed = false;
    double max_deviation = 0;  ///< max |(M^dagger M - I)[a][b]|
    size_t violation_count = 0;
    std::vector<Violation> violations;  ///< first kMaxReportedViolations
};

inline constexpr size_t kMaxReportedViolations = 64;

/// Well-formed iff max |M^dagger M - I| < tol for the window's step operator.
WellFormedness check_well_formed(const QtmDef &qtm, int tape_cells, double tol = kAlgebraTol);

/// Human-readable configuration such as "(q0, head 1, [0 1])".
std::string describe_config(const QtmDef &qtm, const ConfigSpace &space, size_t index);

struct QtmState {
    ConfigSpace space;
    std::vector<Amp> amps;

    double norm() const;
    /// Probability mass on configurations whose state is `state`.
    double state_mass(int state) const;
};

/// Initial configuration: initial state, head on cell 0, `input` followed by blanks.
QtmState initial_state(const QtmDef &qtm, std::span<const int> input, int tape_cells);

/// Applies `steps` steps of a prebuilt operator.
QtmState evolve(const StepOperator &op, QtmState state, int steps);

/// Runs `steps` steps from the initial configuration. Throws MachineError if
/// the machine is not well-formed on the window, ParameterError if the input
/// is longer than the window or uses unknown symbols.
QtmState run_qtm(const QtmDef &qtm, std::span<const int> input, int steps, int tape_cells);
/// Input given as one character per symbol (all symbols must be single characters).
QtmState run_qtm(const QtmDef &qtm, std::string_view input, int steps, int tape_cells);

/// Oracle call inside the machine: every configuration has its `b_cell`
/// symbol XORed with I(symbols at x_cells). Configurations carrying a
/// non-binary symbol on a queried cell are left fixed; if any of them has
/// nonzero amplitude a MachineError is raised. Requires symbols "0" and "1".
QtmState oracle_step(const QtmDef &qtm, QtmState state, const Oracle &oracle, std::span<const int> x_cells,
                     int b_cell, QueryCounter &counter);

/// QTM text format. Throws ParseError.
QtmDef parse_qtm(std::string_view text);
std::string serialize_qtm(const QtmDef &qtm);

}  // namespace qtk
