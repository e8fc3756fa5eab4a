#include "qtk/matrix.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qtk/errors.hpp"

namespace qtk {

Matrix::Matrix(std::initializer_list<std::initializer_list<Amp>> rows) : Matrix(rows.size()) {
    size_t r = 0;
    for (const auto &row : rows) {
        if (row.size() != dim_) {
            throw DimensionError("matrix literal is not square");
        }
        std::copy(row.begin(), row.end(), data_.begin() + r * dim_);
        ++r;
    }
}

Matrix Matrix::identity(size_t dim) {
    Matrix m(dim);
    for (size_t k = 0; k < dim; ++k) {
        m(k, k) = 1.0;
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix out(dim_);
    for (size_t r = 0; r < dim_; ++r) {
        for (size_t c = 0; c < dim_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Matrix Matrix::operator*(const Matrix &rhs) const {
    if (rhs.dim_ != dim_) {
        throw DimensionError("matrix product of " + std::to_string(dim_) + " and " + std::to_string(rhs.dim_));
    }
    Matrix out(dim_);
    for (size_t r = 0; r < dim_; ++r) {
        for (size_t k = 0; k < dim_; ++k) {
            Amp a = (*this)(r, k);
            if (a == Amp{}) {
                continue;
            }
            const Amp *src = &rhs.data_[k * dim_];
            Amp *dst = &out.data_[r * dim_];
            for (size_t c = 0; c < dim_; ++c) {
                dst[c] += a * src[c];
            }
        }
    }
    return out;
}

Matrix Matrix::operator*(Amp scale) const {
    Matrix out = *this;
    for (auto &v : out.data_) {
        v *= scale;
    }
    return out;
}

double Matrix::max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.dim_ != b.dim_) {
        throw DimensionError("cannot compare " + std::to_string(a.dim_) + "x" + std::to_string(a.dim_) + " with " +
                             std::to_string(b.dim_) + "x" + std::to_string(b.dim_));
    }
    double worst = 0;
    for (size_t k = 0; k < a.data_.size(); ++k) {
        worst = std::max(worst, std::abs(a.data_[k] - b.data_[k]));
    }
    return worst;
}

double Matrix::unitarity_deviation() const {
    double worst = 0;
    for (size_t a = 0; a < dim_; ++a) {
        for (size_t b = a; b < dim_; ++b) {
            Amp g = 0;
            for (size_t r = 0; r < dim_; ++r) {
                g += std::conj((*this)(r, a)) * (*this)(r, b);
            }
            if (a == b) {
                g -= 1.0;
            }
            worst = std::max(worst, std::abs(g));
        }
    }
    return worst;
}

UnitaryMatrix::UnitaryMatrix(Matrix m, Verify verify, double tol) : m_(std::move(m)) {
    if (m_.dim() == 0 || !std::has_single_bit(m_.dim())) {
        throw DimensionError("unitary dimension " + std::to_string(m_.dim()) + " is not a power of two");
    }
    for (const auto &v : m_.data()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw NotUnitaryError("matrix has a non-finite entry");
        }
    }
    if (verify == Verify::yes) {
        double dev = m_.unitarity_deviation();
        if (!(dev < tol)) {
            throw NotUnitaryError("matrix is not unitary: max |U^dagger U - I| = " + std::to_string(dev));
        }
    }
}

UnitaryMatrix UnitaryMatrix::identity(int n_qubits) {
    return UnitaryMatrix(Matrix::identity(size_t{1} << n_qubits));
}

int UnitaryMatrix::n_qubits() const {
    return std::countr_zero(m_.dim());
}

}  // namespace qtk
