#include "qtk/circuit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <bit>
#include <cmath>
#include <numbers>

#include "qtk/errors.hpp"

namespace qtk {

namespace {

constexpr std::array<std::string_view, 13> kGateNames = {"i",      "x",  "y",    "z",   "h",  "s",  "t",
                                                          "phase", "cphase", "cx", "swap", "ccx", "mcx"};

Amp expi(double theta) {
    return {std::cos(theta), std::sin(theta)};
}

UnitaryMatrix single(Amp a, Amp b, Amp c, Amp d) {
    return UnitaryMatrix(Matrix{{a, b}, {c, d}});
}

// Multi-controlled X on `arity` qubits (controls first, target last).
UnitaryMatrix mcx_matrix(int arity) {
    size_t dim = size_t{1} << arity;
    Matrix m = Matrix::identity(dim);
    m(dim - 2, dim - 2) = 0;
    m(dim - 1, dim - 1) = 0;
    m(dim - 2, dim - 1) = 1;
    m(dim - 1, dim - 2) = 1;
    return UnitaryMatrix(std::move(m));
}

const UnitaryMatrix &pauli_x() {
    static const UnitaryMatrix x = single(0, 1, 1, 0);
    return x;
}

}  // namespace

std::string_view to_string(GateName name) {
    return kGateNames[static_cast<size_t>(name)];
}

std::optional<GateName> gate_name_from_string(std::string_view text) {
    for (size_t k = 0; k < kGateNames.size(); ++k) {
        if (kGateNames[k] == text) {
            return static_cast<GateName>(k);
        }
    }
    return std::nullopt;
}

bool is_parametric(GateName name) {
    return name == GateName::phase || name == GateName::cphase;
}

int fixed_arity(GateName name) {
    switch (name) {
        case GateName::cphase:
        case GateName::cx:
        case GateName::swap:
            return 2;
        case GateName::ccx:
            return 3;
        case GateName::mcx:
            return 0;
        default:
            return 1;
    }
}

std::string GateApp::kind() const {
    if (const auto *g = std::get_if<NamedGate>(&op)) {
        return std::string(to_string(g->name));
    }
    if (std::holds_alternative<OracleCall>(op)) {
        return "oracle";
    }
    const auto &raw = std::get<RawUnitary>(op);
    return raw.n_controls > 0 || raw.u.dim() == 2 ? "mcu" : "unitary";
}

Circuit &Circuit::gate(GateName g, std::vector<int> targets, std::optional<double> angle) {
    ops.push_back({NamedGate{g, angle}, std::move(targets)});
    return *this;
}

Circuit &Circuit::oracle(std::string oracle_name, std::vector<int> targets) {
    ops.push_back({OracleCall{std::move(oracle_name)}, std::move(targets)});
    return *this;
}

Circuit &Circuit::unitary(UnitaryMatrix u, std::vector<int> targets, int n_controls) {
    ops.push_back({RawUnitary{std::move(u), n_controls}, std::move(targets)});
    return *this;
}

Circuit &Circuit::append(const Circuit &other) {
    if (other.n_qubits != n_qubits) {
        throw DimensionError("cannot append a " + std::to_string(other.n_qubits) + "-qubit circuit to a " +
                             std::to_string(n_qubits) + "-qubit circuit");
    }
    ops.insert(ops.end(), other.ops.begin(), other.ops.end());
    return *this;
}

UnitaryMatrix standard_gate_matrix(std::string_view name, std::optional<double> param, int arity) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    auto g = gate_name_from_string(lower);
    if (!g) {
        throw ParameterError("unknown gate '" + std::string(name) + "'");
    }
    return standard_gate_matrix(*g, param, arity);
}

UnitaryMatrix standard_gate_matrix(GateName name, std::optional<double> param, int arity) {
    if (is_parametric(name) != param.has_value()) {
        throw ParameterError(std::string("gate '") + std::string(to_string(name)) +
                             (param ? "' takes no angle" : "' requires an angle"));
    }
    if (param && !std::isfinite(*param)) {
        throw ParameterError("gate angle must be finite");
    }
    const double r = 1.0 / std::numbers::sqrt2;
    const Amp i{0, 1};
    switch (name) {
        case GateName::i:
            return UnitaryMatrix::identity(1);
        case GateName::x:
            return pauli_x();
        case GateName::y:
            return single(0, -i, i, 0);
        case GateName::z:
            return single(1, 0, 0, -1);
        case GateName::h:
            return single(r, r, r, -r);
        case GateName::s:
            return single(1, 0, 0, i);
        case GateName::t:
            return single(1, 0, 0, expi(std::numbers::pi / 4));
        case GateName::phase:
            return single(1, 0, 0, expi(*param));
        case GateName::cphase: {
            Matrix m = Matrix::identity(4);
            m(3, 3) = expi(*param);
            return UnitaryMatrix(std::move(m));
        }
        case GateName::cx:
            return mcx_matrix(2);
        case GateName::swap: {
            Matrix m(4);
            m(0, 0) = m(1, 2) = m(2, 1) = m(3, 3) = 1;
            return UnitaryMatrix(std::move(m));
        }
        case GateName::ccx:
            return mcx_matrix(3);
        case GateName::mcx:
            if (arity < 2 || arity > kMaxUnitaryQubits) {
                throw ParameterError("mcx arity must be in [2, " + std::to_string(kMaxUnitaryQubits) + "], got " +
                                     std::to_string(arity));
            }
            return mcx_matrix(arity);
    }
    throw ParameterError("unhandled gate");
}

void validate(const Circuit &circuit, const OracleTable *oracles) {
    if (circuit.n_qubits < 1 || circuit.n_qubits > kMaxQubits) {
        throw CapacityError("circuit qubit count " + std::to_string(circuit.n_qubits) + " outside [1, " +
                            std::to_string(kMaxQubits) + "]");
    }
    for (size_t k = 0; k < circuit.ops.size(); ++k) {
        const GateApp &g = circuit.ops[k];
        const std::string where = "gate " + std::to_string(k) + " (" + g.kind() + ")";
        uint64_t seen = 0;
        for (int q : g.targets) {
            if (q < 0 || q >= circuit.n_qubits) {
                throw IndexError(where + ": target " + std::to_string(q) + " out of range for " +
                                 std::to_string(circuit.n_qubits) + " qubits");
            }
            if (seen & (uint64_t{1} << q)) {
                throw IndexError(where + ": target " + std::to_string(q) + " repeated");
            }
            seen |= uint64_t{1} << q;
        }
        const int arity = static_cast<int>(g.targets.size());
        if (const auto *n = std::get_if<NamedGate>(&g.op)) {
            if (is_parametric(n->name) != n->angle.has_value()) {
                throw ParameterError(where + (n->angle ? ": takes no angle" : ": requires an angle"));
            }
            if (n->angle && !std::isfinite(*n->angle)) {
                throw ParameterError(where + ": angle must be finite");
            }
            int want = fixed_arity(n->name);
            if (want == 0 ? arity < 2 : arity != want) {
                throw DimensionError(where + ": expects " + (want == 0 ? "at least 2" : std::to_string(want)) +
                                     " targets, got " + std::to_string(arity));
            }
        } else if (const auto *o = std::get_if<OracleCall>(&g.op)) {
            if (arity < 2) {
                throw DimensionError(where + ": needs at least one input and an ancilla");
            }
            if (oracles) {
                auto it = oracles->find(o->name);
                if (it == oracles->end()) {
                    throw OracleError("unresolved oracle '" + o->name + "'");
                }
                if (it->second.n_inputs() + 1 != arity) {
                    throw DimensionError(where + ": oracle '" + o->name + "' has " +
                                         std::to_string(it->second.n_inputs()) + " inputs but the gate has " +
                                         std::to_string(arity) + " targets");
                }
            }
        } else {
            const auto &raw = std::get<RawUnitary>(g.op);
            if (raw.n_controls < 0 || (raw.n_controls > 0 && raw.u.dim() != 2)) {
                throw DimensionError(where + ": controls are only supported on 2x2 unitaries");
            }
            if (arity != raw.n_controls + raw.u.n_qubits()) {
                throw DimensionError(where + ": matrix of dimension " + std::to_string(raw.u.dim()) + " with " +
                                     std::to_string(raw.n_controls) + " controls needs " +
                                     std::to_string(raw.n_controls + raw.u.n_qubits()) + " targets, got " +
                                     std::to_string(arity));
            }
        }
    }
}

StateVector simulate(const Circuit &circuit, StateVector state, const OracleTable &oracles, QueryCounter &counter) {
    if (state.n_qubits() != circuit.n_qubits) {
        throw DimensionError("initial state has " + std::to_string(state.n_qubits()) + " qubits, circuit has " +
                             std::to_string(circuit.n_qubits));
    }
    validate(circuit, &oracles);

    for (const GateApp &g : circuit.ops) {
        std::span<const int> t(g.targets);
        if (const auto *n = std::get_if<NamedGate>(&g.op)) {
            switch (n->name) {
                case GateName::i:
                    break;
                case GateName::cphase:
                    apply_controlled(state, standard_gate_matrix(GateName::phase, n->angle), t.first(1), t[1]);
                    break;
                case GateName::cx:
                case GateName::ccx:
                case GateName::mcx:
                    apply_controlled(state, pauli_x(), t.first(t.size() - 1), t.back());
                    break;
                case GateName::swap: {
                    const uint64_t a = state.mask(t[0]), b = state.mask(t[1]);
                    apply_involution(state, [a, b](uint64_t i) {
                        bool ba = i & a, bb = i & b;
                        return ba == bb ? i : (i ^ a ^ b);
                    });
                    break;
                }
                default:
                    apply_unitary(state, standard_gate_matrix(n->name, n->angle), t);
            }
        } else if (const auto *o = std::get_if<OracleCall>(&g.op)) {
            apply_oracle(state, oracles.find(o->name)->second, t.first(t.size() - 1), t.back(), counter);
        } else {
            const auto &raw = std::get<RawUnitary>(g.op);
            if (raw.u.dim() == 2) {
                apply_controlled(state, raw.u, t.first(raw.n_controls), t.back());
            } else {
                apply_unitary(state, raw.u, t);
            }
        }
    }
    return state;
}

StateVector simulate(const Circuit &circuit, StateVector initial, const OracleTable &oracles) {
    QueryCounter counter;
    return simulate(circuit, std::move(initial), oracles, counter);
}

UnitaryMatrix circuit_unitary(const Circuit &circuit, const OracleTable &oracles) {
    if (circuit.n_qubits > kMaxUnitaryQubits) {
        throw CapacityError("circuit_unitary limited to " + std::to_string(kMaxUnitaryQubits) + " qubits, circuit has " +
                            std::to_string(circuit.n_qubits));
    }
    validate(circuit, &oracles);
    const size_t dim = size_t{1} << circuit.n_qubits;
    Matrix m(dim);
    for (size_t col = 0; col < dim; ++col) {
        StateVector out = simulate(circuit, StateVector::basis(circuit.n_qubits, col), oracles);
        for (size_t row = 0; row < dim; ++row) {
            m(row, col) = out[row];
        }
    }
    return UnitaryMatrix(std::move(m));
}

Circuit inverse(const Circuit &circuit) {
    Circuit out(circuit.n_qubits, circuit.name.empty() ? "" : circuit.name + "_inverse");
    for (auto it = circuit.ops.rbegin(); it != circuit.ops.rend(); ++it) {
        GateApp g = *it;
        if (auto *n = std::get_if<NamedGate>(&g.op)) {
            switch (n->name) {
                case GateName::s:
                    *n = {GateName::phase, -std::numbers::pi / 2};
                    break;
                case GateName::t:
                    *n = {GateName::phase, -std::numbers::pi / 4};
                    break;
                case GateName::phase:
                case GateName::cphase:
                    n->angle = -*n->angle;
                    break;
                default:
                    break;
            }
        } else if (auto *raw = std::get_if<RawUnitary>(&g.op)) {
            raw->u = raw->u.adjoint();
        }
        out.ops.push_back(std::move(g));
    }
    return out;
}

std::map<std::string, int> gate_counts(const Circuit &circuit) {
    std::map<std::string, int> counts;
    for (const auto &g : circuit.ops) {
        ++counts[g.kind()];
    }
    return counts;
}

}  // namespace qtk
