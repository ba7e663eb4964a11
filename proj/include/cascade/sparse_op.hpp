#pragma once

// Minimal COO kernels for the propagation hot loops. The model operators
// here have at most a few dozen nonzeros at dim <= 20, so looping triplets
// beats dense BLAS by a wide margin and keeps evaluation order (and thus
// bitwise results) fixed.

#include <vector>

#include "cascade/core.hpp"

namespace cascade::detail {

struct SparseOp {
    struct Entry {
        int row;
        int col;
        Amplitude val;
    };

    int dim = 0;
    std::vector<Entry> nz;

    static SparseOp from_dense(const Matrix& m, double drop_tol = 0.0) {
        SparseOp out;
        out.dim = static_cast<int>(m.rows());
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c)
                if (std::abs(m(r, c)) > drop_tol) out.nz.push_back({r, c, m(r, c)});
        return out;
    }

    /// y += a * A * x
    void apply(const Vector& x, Vector& y, Amplitude a) const {
        for (const auto& e : nz) y[e.row] += a * e.val * x[e.col];
    }

    /// y += A * x (hot path: prefactors are premultiplied into the entries)
    void apply(const Vector& x, Vector& y) const {
        for (const auto& e : nz) y[e.row] += e.val * x[e.col];
    }

    /// y += s * A * x with a real scale (one real-complex multiply per entry)
    void apply_scaled(const Vector& x, Vector& y, double s) const {
        for (const auto& e : nz) y[e.row] += s * (e.val * x[e.col]);
    }

    /// M += s * A * R
    void apply_left_scaled(const Matrix& r, Matrix& m, double s) const {
        for (const auto& e : nz) m.row(e.row) += (s * e.val) * r.row(e.col);
    }

    /// M += s * R * A
    void apply_right_scaled(const Matrix& r, Matrix& m, double s) const {
        for (const auto& e : nz) m.col(e.col) += (s * e.val) * r.col(e.row);
    }

    SparseOp premultiplied(Amplitude a) const {
        SparseOp out = *this;
        for (auto& e : out.nz) e.val *= a;
        return out;
    }

    /// M += a * A * R   (row e.row of M accumulates rows of R)
    void apply_left(const Matrix& r, Matrix& m, Amplitude a) const {
        for (const auto& e : nz) m.row(e.row) += (a * e.val) * r.row(e.col);
    }

    /// M += a * R * A
    void apply_right(const Matrix& r, Matrix& m, Amplitude a) const {
        for (const auto& e : nz) m.col(e.col) += (a * e.val) * r.col(e.row);
    }

    /// M += a * R * A^dagger
    void apply_right_adjoint(const Matrix& r, Matrix& m, Amplitude a) const {
        for (const auto& e : nz) m.col(e.row) += (a * std::conj(e.val)) * r.col(e.col);
    }

    /// M += A * R * A^dagger  (the Lindblad sandwich; O(nnz^2) entry updates)
    void apply_sandwich(const Matrix& r, Matrix& m) const {
        for (const auto& e1 : nz)
            for (const auto& e2 : nz)
                m(e1.row, e2.row) += e1.val * std::conj(e2.val) * r(e1.col, e2.col);
    }
};

} // namespace cascade::detail
