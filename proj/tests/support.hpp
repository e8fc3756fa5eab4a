#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "qtk/matrix.hpp"
#include "qtk/rng.hpp"
#include "qtk/state.hpp"

namespace qtk::testing {

inline std::vector<Amp> random_amps(size_t len, Rng &rng) {
    std::vector<Amp> a(len);
    double total = 0;
    for (auto &x : a) {
        x = {rng.normal(), rng.normal()};
        total += std::norm(x);
    }
    for (auto &x : a) {
        x /= std::sqrt(total);
    }
    return a;
}

inline StateVector random_state(int n, Rng &rng) {
    return StateVector::from_amplitudes(random_amps(size_t{1} << n, rng));
}

// Haar-ish unitary: QR of a complex Gaussian matrix with R's diagonal phases removed.
inline Matrix random_unitary(size_t dim, Rng &rng) {
    Eigen::MatrixXcd g(dim, dim);
    for (size_t r = 0; r < dim; ++r) {
        for (size_t c = 0; c < dim; ++c) {
            g(r, c) = {rng.normal(), rng.normal()};
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd rm = qr.matrixQR().triangularView<Eigen::Upper>();
    Matrix out(dim);
    for (size_t c = 0; c < dim; ++c) {
        Amp d = rm(c, c);
        Amp phase = std::abs(d) > 0 ? d / std::abs(d) : Amp{1};
        for (size_t r = 0; r < dim; ++r) {
            out(r, c) = q(r, c) * phase;
        }
    }
    return out;
}

// Full 2^n matrix of `u` on `targets`, built entry by entry from the definition.
inline Matrix dense_embed(const Matrix &u, std::span<const int> targets, int n) {
    const size_t dim = size_t{1} << n;
    const size_t k = targets.size();
    auto bit = [n](size_t idx, int q) { return (idx >> (n - 1 - q)) & 1; };
    auto local = [&](size_t idx) {
        size_t l = 0;
        for (size_t t = 0; t < k; ++t) {
            l = (l << 1) | bit(idx, targets[t]);
        }
        return l;
    };
    auto rest = [&](size_t idx) {
        size_t r = idx;
        for (int q : targets) {
            r &= ~(size_t{1} << (n - 1 - q));
        }
        return r;
    };
    Matrix out(dim);
    for (size_t r = 0; r < dim; ++r) {
        for (size_t c = 0; c < dim; ++c) {
            if (rest(r) == rest(c)) {
                out(r, c) = u(local(r), local(c));
            }
        }
    }
    return out;
}

inline std::vector<Amp> matvec(const Matrix &m, const std::vector<Amp> &v) {
    std::vector<Amp> out(m.dim());
    for (size_t r = 0; r < m.dim(); ++r) {
        for (size_t c = 0; c < m.dim(); ++c) {
            out[r] += m(r, c) * v[c];
        }
    }
    return out;
}

inline double max_diff(const std::vector<Amp> &a, const std::vector<Amp> &b) {
    double d = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return a.size() == b.size() ? d : INFINITY;
}

}  // namespace qtk::testing
