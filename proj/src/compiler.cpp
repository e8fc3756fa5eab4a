#include "qtk/compiler.hpp"

#include <bit>
#include <cmath>

#include "qtk/errors.hpp"

namespace qtk {

namespace {

// Entries at or below this magnitude are treated as already eliminated.
constexpr double kNegligible = 1e-13;

using Block = std::array<std::array<Amp, 2>, 2>;

Block multiply(const Block &a, const Block &b) {
    Block out{};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    return out;
}

Block adjoint(const Block &a) {
    return {{{std::conj(a[0][0]), std::conj(a[1][0])}, {std::conj(a[0][1]), std::conj(a[1][1])}}};
}

// Left-multiplies rows i and j of v by `block`.
void apply_rows(Matrix &v, size_t i, size_t j, const Block &block) {
    for (size_t c = 0; c < v.dim(); ++c) {
        Amp a = v(i, c), b = v(j, c);
        v(i, c) = block[0][0] * a + block[0][1] * b;
        v(j, c) = block[1][0] * a + block[1][1] * b;
    }
}

}  // namespace

Matrix TwoLevelFactor::embed() const {
    Matrix m = Matrix::identity(dim);
    m(i, i) = block[0][0];
    m(i, j) = block[0][1];
    m(j, i) = block[1][0];
    m(j, j) = block[1][1];
    return m;
}

std::vector<TwoLevelFactor> decompose_two_level(const Matrix &u, double tol) {
    const size_t d = u.dim();
    if (d == 0 || d > kMaxDecomposeDim) {
        throw CapacityError("two-level decomposition supports dimensions 1.." + std::to_string(kMaxDecomposeDim) +
                            ", got " + std::to_string(d));
    }
    double dev = u.unitarity_deviation();
    if (!(dev < tol)) {
        throw NotUnitaryError("cannot decompose a non-unitary matrix (max |U^dagger U - I| = " + std::to_string(dev) +
                              ")");
    }
    if (d == 1) {
        return {};
    }

    // Left-multiply two-level eliminators G until G_k ... G_1 u = I.
    Matrix v = u;
    std::vector<TwoLevelFactor> eliminators;
    for (size_t c = 0; c + 1 < d; ++c) {
        for (size_t r = c + 1; r < d; ++r) {
            Amp b = v(r, c);
            if (std::abs(b) <= kNegligible) {
                continue;
            }
            Amp a = v(c, c);
            double nrm = std::hypot(std::abs(a), std::abs(b));
            Block g{{{std::conj(a) / nrm, std::conj(b) / nrm}, {-b / nrm, a / nrm}}};
            apply_rows(v, c, r, g);
            v(r, c) = 0;
            eliminators.push_back({d, c, r, g});
        }
        Amp phase = v(c, c);
        if (std::abs(phase - 1.0) > kNegligible) {
            // Column had nothing to eliminate; only a phase remains on the diagonal.
            Block g{{{std::conj(phase), 0}, {0, phase}}};
            apply_rows(v, c, c + 1, g);
            eliminators.push_back({d, c, c + 1, g});
        }
    }
    Amp last = v(d - 1, d - 1);
    if (std::abs(last - 1.0) > kNegligible) {
        Block fix{{{1, 0}, {0, std::conj(last)}}};
        if (!eliminators.empty() && eliminators.back().i == d - 2 && eliminators.back().j == d - 1) {
            eliminators.back().block = multiply(fix, eliminators.back().block);
        } else {
            eliminators.push_back({d, d - 2, d - 1, fix});
        }
    }

    // u = G_1^dagger ... G_k^dagger, so G_k^dagger is applied first.
    std::vector<TwoLevelFactor> factors;
    factors.reserve(eliminators.size());
    for (auto it = eliminators.rbegin(); it != eliminators.rend(); ++it) {
        factors.push_back({it->dim, it->i, it->j, adjoint(it->block)});
    }
    return factors;
}

Matrix compose_two_level(const std::vector<TwoLevelFactor> &factors, size_t dim) {
    Matrix m = Matrix::identity(dim);
    for (const auto &f : factors) {
        if (f.dim != dim) {
            throw DimensionError("factor of dimension " + std::to_string(f.dim) + " in a product of dimension " +
                                 std::to_string(dim));
        }
        apply_rows(m, f.i, f.j, f.block);
    }
    return m;
}

std::vector<GateApp> two_level_to_gates(const TwoLevelFactor &factor, int n_qubits) {
    if (n_qubits < 1 || n_qubits > 62 || factor.dim != (size_t{1} << n_qubits)) {
        throw DimensionError("factor of dimension " + std::to_string(factor.dim) + " does not act on " +
                             std::to_string(n_qubits) + " qubits");
    }
    if (factor.i >= factor.j || factor.j >= factor.dim) {
        throw IndexError("two-level factor indices must satisfy i < j < dim");
    }
    auto qubit_of_bit = [n_qubits](int bit) { return n_qubits - 1 - bit; };
    const size_t diff = factor.i ^ factor.j;
    const int pivot = std::bit_width(diff) - 1;  // factor.i has 0 here, factor.j has 1

    std::vector<GateApp> routing;
    for (int b = 0; b < n_qubits; ++b) {
        if (b != pivot && ((diff >> b) & 1)) {
            routing.push_back({NamedGate{GateName::cx, std::nullopt}, {qubit_of_bit(pivot), qubit_of_bit(b)}});
        }
    }
    std::vector<GateApp> flips;
    std::vector<int> controls;
    for (int q = 0; q < n_qubits; ++q) {
        int bit = n_qubits - 1 - q;
        if (bit == pivot) {
            continue;
        }
        controls.push_back(q);
        if (((factor.i >> bit) & 1) == 0) {
            flips.push_back({NamedGate{GateName::x, std::nullopt}, {q}});
        }
    }

    const auto &b = factor.block;
    UnitaryMatrix core(Matrix{{b[0][0], b[0][1]}, {b[1][0], b[1][1]}});
    std::vector<int> targets = controls;
    targets.push_back(qubit_of_bit(pivot));

    std::vector<GateApp> gates = routing;
    gates.insert(gates.end(), flips.begin(), flips.end());
    gates.push_back({RawUnitary{std::move(core), static_cast<int>(controls.size())}, std::move(targets)});
    gates.insert(gates.end(), flips.begin(), flips.end());
    gates.insert(gates.end(), routing.rbegin(), routing.rend());
    return gates;
}

Matrix padded_step_matrix(const QtmDef &qtm, int tape_cells, size_t padded_dim) {
    StepOperator op = step_operator(qtm, tape_cells);
    const size_t n = op.space.size();
    if (padded_dim < n) {
        throw DimensionError("padding dimension smaller than the configuration space");
    }
    Matrix m = Matrix::identity(padded_dim);
    for (size_t c = 0; c < n; ++c) {
        m(c, c) = 0;
    }
    for (size_t c = 0; c < n; ++c) {
        for (const auto &[r, v] : op.columns[c]) {
            m(r, c) += v;
        }
    }
    return m;
}

Compilation compile_qtm_step(const QtmDef &qtm, int tape_cells, double tol) {
    WellFormedness wf = check_well_formed(qtm, tape_cells);
    if (!wf.well_formed) {
        throw MachineError("machine is not well-formed on " + std::to_string(tape_cells) + " cells: " +
                           (wf.violations.empty() ? std::string("step operator not unitary")
                                                  : wf.violations.front().description));
    }
    ConfigSpace space(static_cast<int>(qtm.states().size()), static_cast<int>(qtm.alphabet().size()), tape_cells);
    const size_t n = space.size();
    if (n > kMaxCompiledConfigurations) {
        throw CapacityError("compilation limited to " + std::to_string(kMaxCompiledConfigurations) +
                            " configurations, machine has " + std::to_string(n));
    }
    const int qubits = std::max(1, static_cast<int>(std::bit_width(n - 1)));
    const size_t padded = size_t{1} << qubits;
    Matrix target = padded_step_matrix(qtm, tape_cells, padded);

    auto factors = decompose_two_level(target, tol);
    Circuit circuit(qubits, "qtm_step_T" + std::to_string(tape_cells));
    for (const auto &f : factors) {
        auto gates = two_level_to_gates(f, qubits);
        circuit.ops.insert(circuit.ops.end(), gates.begin(), gates.end());
    }

    CompilationReport report;
    report.qubits = qubits;
    report.configurations = n;
    report.padded_dim = padded;
    report.tape_cells = tape_cells;
    report.two_level_factors = factors.size();
    report.gate_counts = gate_counts(circuit);
    report.max_deviation = Matrix::max_abs_diff(circuit_unitary(circuit).matrix(), target);
    report.tolerance = tol;
    if (!(report.max_deviation < tol)) {
        throw Error("compiled circuit deviates from the step operator by " + std::to_string(report.max_deviation));
    }
    return {std::move(circuit), std::move(report)};
}

}  // namespace qtk
