#pragma once

// Dense complex linear algebra and operator construction on small composite
// Hilbert spaces. Basis ordering is row-major over the subsystem order, so
// for two subsystems of sizes (m, n) the composite index is i*n + j.

#include <complex>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cascade/errors.hpp"

namespace cascade {

using Amplitude = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace detail {
inline constexpr Amplitude kI{0.0, 1.0};
}

struct Subsystem {
    std::string name;
    std::vector<std::string> levels;

    bool operator==(const Subsystem&) const = default;
};

class CompositeSpace {
public:
    CompositeSpace() = default;

    explicit CompositeSpace(std::vector<Subsystem> subsystems)
        : subs_(std::move(subsystems)) {
        dim_ = 1;
        for (const auto& s : subs_) {
            if (s.levels.empty())
                throw config_error("subsystem '" + s.name + "' has no levels");
            for (std::size_t a = 0; a < s.levels.size(); ++a)
                for (std::size_t b = a + 1; b < s.levels.size(); ++b)
                    if (s.levels[a] == s.levels[b])
                        throw config_error("duplicate level '" + s.levels[a] +
                                           "' in subsystem '" + s.name + "'");
            dim_ *= static_cast<int>(s.levels.size());
        }
        strides_.assign(subs_.size(), 1);
        for (int k = static_cast<int>(subs_.size()) - 2; k >= 0; --k)
            strides_[k] = strides_[k + 1] * static_cast<int>(subs_[k + 1].levels.size());
    }

    int dim() const { return dim_; }
    const std::vector<Subsystem>& subsystems() const { return subs_; }

    int subsystem_index(std::string_view name) const {
        for (std::size_t k = 0; k < subs_.size(); ++k)
            if (subs_[k].name == name) return static_cast<int>(k);
        throw config_error("unknown subsystem '" + std::string(name) + "'");
    }

    int level_index(int subsystem, std::string_view level) const {
        const auto& levels = subs_.at(subsystem).levels;
        for (std::size_t k = 0; k < levels.size(); ++k)
            if (levels[k] == level) return static_cast<int>(k);
        throw config_error("unknown level '" + std::string(level) + "' in subsystem '" +
                           subs_.at(subsystem).name + "'");
    }

    /// Multi-index -> flat basis index (row-major over subsystem order).
    int pack(const std::vector<int>& multi) const {
        if (multi.size() != subs_.size())
            throw dimension_error("multi-index rank does not match subsystem count");
        int idx = 0;
        for (std::size_t k = 0; k < multi.size(); ++k) {
            if (multi[k] < 0 || multi[k] >= static_cast<int>(subs_[k].levels.size()))
                throw dimension_error("multi-index out of range");
            idx += multi[k] * strides_[k];
        }
        return idx;
    }

    std::vector<int> unpack(int index) const {
        if (index < 0 || index >= dim_) throw dimension_error("basis index out of range");
        std::vector<int> multi(subs_.size());
        for (std::size_t k = 0; k < subs_.size(); ++k) {
            multi[k] = index / strides_[k];
            index %= strides_[k];
        }
        return multi;
    }

    bool operator==(const CompositeSpace&) const = default;

private:
    std::vector<Subsystem> subs_;
    std::vector<int> strides_;
    int dim_ = 1;
};

struct StateVector {
    CompositeSpace space;
    Vector amp;
};

struct Operator {
    CompositeSpace space;
    Matrix mat;
};

inline Operator zero_operator(const CompositeSpace& space) {
    return {space, Matrix::Zero(space.dim(), space.dim())};
}

inline Operator identity_operator(const CompositeSpace& space) {
    return {space, Matrix::Identity(space.dim(), space.dim())};
}

/// Basis state |l_0, l_1, ...> given one level label per subsystem.
inline StateVector basis_state(const CompositeSpace& space,
                               const std::vector<std::string>& levels) {
    if (levels.size() != space.subsystems().size())
        throw dimension_error("one level label per subsystem required");
    std::vector<int> multi(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k)
        multi[k] = space.level_index(static_cast<int>(k), levels[k]);
    Vector amp = Vector::Zero(space.dim());
    amp[space.pack(multi)] = 1.0;
    return {space, std::move(amp)};
}

/// Kronecker product consistent with the row-major basis bijection.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Wrap a dense matrix as an Operator on `space`, checking dimensions.
inline Operator make_operator(const CompositeSpace& space, Matrix mat) {
    if (mat.rows() != space.dim() || mat.cols() != space.dim())
        throw dimension_error("matrix dimensions do not match space");
    return {space, std::move(mat)};
}

/// Embed a single-subsystem matrix into the composite space (identity elsewhere).
inline Operator embed(const CompositeSpace& space, int subsystem, const Matrix& local) {
    const auto& subs = space.subsystems();
    const int n = static_cast<int>(subs.at(subsystem).levels.size());
    if (local.rows() != n || local.cols() != n)
        throw dimension_error("local matrix does not match subsystem size");
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < subs.size(); ++k) {
        const int nk = static_cast<int>(subs[k].levels.size());
        out = kron(out, static_cast<int>(k) == subsystem
                            ? local
                            : Matrix(Matrix::Identity(nk, nk)));
    }
    return {space, std::move(out)};
}

/// |i><j| on the named subsystem, identity on all others.
inline Operator sigma(const CompositeSpace& space, std::string_view subsystem,
                      std::string_view i, std::string_view j) {
    const int s = space.subsystem_index(subsystem);
    const int n = static_cast<int>(space.subsystems()[s].levels.size());
    Matrix local = Matrix::Zero(n, n);
    local(space.level_index(s, i), space.level_index(s, j)) = 1.0;
    return embed(space, s, local);
}

inline StateVector apply(const Operator& op, const StateVector& psi) {
    if (!(op.space == psi.space)) throw dimension_error("operator/state space mismatch");
    return {psi.space, op.mat * psi.amp};
}

/// <psi|op|psi> without normalization; the caller decides.
inline Amplitude expectation(const StateVector& psi, const Operator& op) {
    if (!(op.space == psi.space)) throw dimension_error("operator/state space mismatch");
    return psi.amp.dot(op.mat * psi.amp); // Eigen's dot conjugates the left argument
}

inline Operator dagger(const Operator& op) { return {op.space, op.mat.adjoint()}; }

inline double norm2(const StateVector& psi) { return psi.amp.squaredNorm(); }

inline StateVector normalize(const StateVector& psi) {
    const double n = psi.amp.norm();
    if (n < 1e-15) throw degenerate_state_error("cannot normalize near-zero state");
    return {psi.space, psi.amp / n};
}

inline Operator add(const Operator& a, const Operator& b) {
    if (!(a.space == b.space)) throw dimension_error("operator space mismatch");
    return {a.space, a.mat + b.mat};
}

inline StateVector add(const StateVector& a, const StateVector& b) {
    if (!(a.space == b.space)) throw dimension_error("state space mismatch");
    return {a.space, a.amp + b.amp};
}

inline Operator scale(const Operator& a, Amplitude c) { return {a.space, c * a.mat}; }

inline StateVector scale(const StateVector& a, Amplitude c) { return {a.space, c * a.amp}; }

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_finite(const Vector& v) { return v.allFinite(); }

inline bool is_finite(const Matrix& m) { return m.allFinite(); }

} // namespace cascade
