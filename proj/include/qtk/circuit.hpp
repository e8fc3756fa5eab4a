#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qtk/matrix.hpp"
#include "qtk/oracle.hpp"
#include "qtk/state.hpp"

namespace qtk {

/// The fixed named gate set. Matrices follow the big-endian convention: for
/// two-qubit gates the first target is the high bit (cx: control, target).
enum class GateName { i, x, y, z, h, s, t, phase, cphase, cx, swap, ccx, mcx };

std::string_view to_string(GateName name);
std::optional<GateName> gate_name_from_string(std::string_view text);
bool is_parametric(GateName name);
/// Fixed arity, or 0 for mcx (variable, >= 2).
int fixed_arity(GateName name);

struct NamedGate {
    GateName name;
    std::optional<double> angle;
    bool operator==(const NamedGate &) const = default;
};

/// Oracle bound by name at simulation time; targets are x_0..x_{n-1}, ancilla.
struct OracleCall {
    std::string name;
    bool operator==(const OracleCall &) const = default;
};

/// Explicit unitary on its last log2(dim) targets, conditioned on the first
/// `n_controls` targets all being |1>. With a 2x2 matrix this is the
/// multi-controlled single-qubit gate the compiler targets.
struct RawUnitary {
    UnitaryMatrix u;
    int n_controls = 0;
    bool operator==(const RawUnitary &) const = default;
};

struct GateApp {
    std::variant<NamedGate, OracleCall, RawUnitary> op;
    std::vector<int> targets;

    bool operator==(const GateApp &) const = default;

    /// Short name as used by the text format ("h", "oracle", "mcu", "unitary").
    std::string kind() const;
};

/// Ordered gate list on a fixed register. Structural equality ignores `name`.
struct Circuit {
    int n_qubits = 1;
    std::vector<GateApp> ops;
    std::string name;

    explicit Circuit(int n = 1, std::string circuit_name = "") : n_qubits(n), name(std::move(circuit_name)) {
    }

    bool operator==(const Circuit &rhs) const {
        return n_qubits == rhs.n_qubits && ops == rhs.ops;
    }

    Circuit &gate(GateName g, std::vector<int> targets, std::optional<double> angle = std::nullopt);
    Circuit &oracle(std::string oracle_name, std::vector<int> targets);
    Circuit &unitary(UnitaryMatrix u, std::vector<int> targets, int n_controls = 0);
    Circuit &append(const Circuit &other);

    Circuit &h(int q) {
        return gate(GateName::h, {q});
    }
    Circuit &x(int q) {
        return gate(GateName::x, {q});
    }
    Circuit &cx(int control, int target) {
        return gate(GateName::cx, {control, target});
    }
};

using OracleTable = std::map<std::string, Oracle, std::less<>>;

/// Matrix of a named gate (name matched case-insensitively). `arity` only
/// matters for mcx (controls + target).
/// Throws ParameterError on an unknown name or a missing/extra angle.
UnitaryMatrix standard_gate_matrix(std::string_view name, std::optional<double> param = std::nullopt,
                                   int arity = 0);
UnitaryMatrix standard_gate_matrix(GateName name, std::optional<double> param = std::nullopt, int arity = 0);

/// Checks arity, angle presence, target ranges and distinctness of every
/// gate. Oracle arities are checked against `oracles` when given. Throws
/// IndexError / ParameterError / DimensionError.
void validate(const Circuit &circuit, const OracleTable *oracles = nullptr);

/// Applies every gate of `circuit` to `initial` in order. Each oracle gate
/// increments counter.quantum_queries by one. Throws OracleError for an
/// unbound oracle name and DimensionError when register sizes disagree.
StateVector simulate(const Circuit &circuit, StateVector initial, const OracleTable &oracles,
                     QueryCounter &counter);
StateVector simulate(const Circuit &circuit, StateVector initial, const OracleTable &oracles = {});

/// Largest circuit for which circuit_unitary() builds the full matrix.
inline constexpr int kMaxUnitaryQubits = 10;

/// Full 2^n x 2^n matrix, column j = simulate(circuit, |j>).
UnitaryMatrix circuit_unitary(const Circuit &circuit, const OracleTable &oracles = {});

/// Gates reversed and each replaced by its adjoint. Oracle gates are self-inverse.
Circuit inverse(const Circuit &circuit);

/// Tally of gates by kind().
std::map<std::string, int> gate_counts(const Circuit &circuit);

/// Circuit text format. See README for the grammar. Throws ParseError with the
/// 1-based line of the offending gate.
Circuit parse_circuit(std::string_view text);

/// Canonical one-gate-per-line text. Angles and matrix entries print as the
/// shortest decimals that parse back exactly.
std::string serialize_circuit(const Circuit &circuit);

}  // namespace qtk
