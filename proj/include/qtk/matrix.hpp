#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace qtk {

using Amp = std::complex<double>;

/// Tolerance for algebraic identities (unitarity, norm preservation).
inline constexpr double kAlgebraTol = 1e-9;
/// Tolerance for precondition gating (normalization of inputs).
inline constexpr double kPreconditionTol = 1e-6;

/// Dense square complex matrix, row-major.
class Matrix {
   public:
    Matrix() = default;
    explicit Matrix(size_t dim) : dim_(dim), data_(dim * dim) {
    }
    /// Row-major nested initializer; throws DimensionError if not square.
    Matrix(std::initializer_list<std::initializer_list<Amp>> rows);

    static Matrix identity(size_t dim);

    size_t dim() const {
        return dim_;
    }
    Amp &operator()(size_t row, size_t col) {
        return data_[row * dim_ + col];
    }
    const Amp &operator()(size_t row, size_t col) const {
        return data_[row * dim_ + col];
    }
    const std::vector<Amp> &data() const {
        return data_;
    }

    Matrix adjoint() const;
    Matrix operator*(const Matrix &rhs) const;
    Matrix operator*(Amp scale) const;
    bool operator==(const Matrix &rhs) const = default;

    /// max_{r,c} |a(r,c) - b(r,c)|. Throws DimensionError on shape mismatch.
    static double max_abs_diff(const Matrix &a, const Matrix &b);

    /// max_{r,c} |(M^dagger M - I)(r,c)|.
    double unitarity_deviation() const;

    bool is_unitary(double tol = kAlgebraTol) const {
        return unitarity_deviation() < tol;
    }

   private:
    size_t dim_ = 0;
    std::vector<Amp> data_;
};

/// A Matrix whose dimension is a power of two (so it acts on a whole number of
/// qubits) and, when constructed with Verify::yes, whose unitarity was checked.
class UnitaryMatrix {
   public:
    enum class Verify { no, yes };

    UnitaryMatrix() : m_(Matrix::identity(1)) {
    }
    /// Throws DimensionError if dim is not a power of two, NotUnitaryError if
    /// verification is requested and fails at `tol`.
    explicit UnitaryMatrix(Matrix m, Verify verify = Verify::no, double tol = kAlgebraTol);

    static UnitaryMatrix identity(int n_qubits);

    size_t dim() const {
        return m_.dim();
    }
    int n_qubits() const;
    const Amp &operator()(size_t row, size_t col) const {
        return m_(row, col);
    }
    const Matrix &matrix() const {
        return m_;
    }
    UnitaryMatrix adjoint() const {
        return UnitaryMatrix(m_.adjoint());
    }
    bool operator==(const UnitaryMatrix &rhs) const = default;

   private:
    Matrix m_;
};

}  // namespace qtk
