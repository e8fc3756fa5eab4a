#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qtk/circuit.hpp"
#include "qtk/matrix.hpp"
#include "qtk/qtm.hpp"

namespace qtk {

/// Unitary acting as `block` on basis states {i, j} (i < j) and as the
/// identity on every other basis state of a `dim`-dimensional space.
struct TwoLevelFactor {
    size_t dim;
    size_t i;
    size_t j;
    std::array<std::array<Amp, 2>, 2> block;  ///< block[r][c], rows/cols ordered (i, j)

    Matrix embed() const;
};

/// Largest matrix decompose_two_level() accepts.
inline constexpr size_t kMaxDecomposeDim = 256;

/// Factors `u` into two-level unitaries F_1..F_k with u = F_k ... F_2 F_1, so
/// applying the list in order reproduces u. k <= dim(dim-1)/2 and the identity
/// gives an empty list. Throws NotUnitaryError if u is not unitary within
/// `tol`, CapacityError beyond kMaxDecomposeDim.
std::vector<TwoLevelFactor> decompose_two_level(const Matrix &u, double tol = kAlgebraTol);

/// Product F_k ... F_1 of a factor list (dense reconstruction).
Matrix compose_two_level(const std::vector<TwoLevelFactor> &factors, size_t dim);

/// Gates implementing one factor on n_qubits (dim == 2^n_qubits): CNOTs that
/// route j next to i along their highest differing bit, X gates selecting the
/// control values of i, one multi-controlled single-qubit gate, then the
/// routing undone. Throws DimensionError if the dimensions disagree.
std::vector<GateApp> two_level_to_gates(const TwoLevelFactor &factor, int n_qubits);

struct CompilationReport {
    int qubits = 0;
    size_t configurations = 0;  ///< machine configurations on the window
    size_t padded_dim = 0;      ///< 2^qubits; states past `configurations` are held fixed
    int tape_cells = 0;
    size_t two_level_factors = 0;
    std::map<std::string, int> gate_counts;
    double max_deviation = 0;  ///< max |circuit_unitary - padded step operator|
    double tolerance = 0;
};

struct Compilation {
    Circuit circuit;
    CompilationReport report;
};

/// Largest configuration count compile_qtm_step() accepts.
inline constexpr size_t kMaxCompiledConfigurations = 256;

/// Compiles one step of `qtm` on a `tape_cells` window into a circuit over
/// ceil(log2(configurations)) qubits, basis state c encoding configuration c.
/// Throws MachineError if the machine is not well-formed on the window,
/// CapacityError past kMaxCompiledConfigurations, and Error if the achieved
/// deviation is not below `tol`.
Compilation compile_qtm_step(const QtmDef &qtm, int tape_cells, double tol = 1e-8);

/// The step operator of `qtm` padded with identity up to `padded_dim`.
Matrix padded_step_matrix(const QtmDef &qtm, int tape_cells, size_t padded_dim);

}  // namespace qtk
