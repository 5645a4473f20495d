// Exact dense linear algebra over the rationals: RREF, kernels, solves,
// inverses, minimal polynomials. Free functions over Eigen expressions.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "centra/rational.hpp"
#include "centra/unipoly.hpp"

namespace centra {

struct RrefResult {
    RatMatrix reduced;
    Index rank = 0;
    std::vector<Index> pivot_cols;
};

/// Reduced row echelon form by Gauss-Jordan. Pivot choice within a column:
/// the entry of largest |numerator|, which keeps intermediate fractions tame.
template <typename Derived>
RrefResult rref(const Eigen::MatrixBase<Derived>& input) {
    RrefResult res;
    res.reduced = input;
    RatMatrix& m = res.reduced;
    const Index rows = m.rows(), cols = m.cols();
    Index row = 0;
    for (Index col = 0; col < cols && row < rows; ++col) {
        Index pivot = -1;
        for (Index i = row; i < rows; ++i) {
            if (m(i, col).is_zero()) continue;
            if (pivot < 0 || numerator_magnitude_less(m(pivot, col), m(i, col))) pivot = i;
        }
        if (pivot < 0) continue;
        if (pivot != row) m.row(pivot).swap(m.row(row));
        const Rational inv = Rational(1) / m(row, col);
        for (Index j = col; j < cols; ++j) m(row, j) *= inv;
        for (Index i = 0; i < rows; ++i) {
            if (i == row || m(i, col).is_zero()) continue;
            const Rational f = m(i, col);
            for (Index j = col; j < cols; ++j) m(i, j) -= f * m(row, j);
        }
        res.pivot_cols.push_back(col);
        ++row;
    }
    res.rank = row;
    return res;
}

template <typename Derived>
Index rank(const Eigen::MatrixBase<Derived>& m) {
    return rref(m).rank;
}

/// Basis of the null space {x : m x = 0}, one vector per free column, in the
/// canonical RREF parametrization. Size is always cols - rank.
template <typename Derived>
std::vector<RatVector> kernel_basis(const Eigen::MatrixBase<Derived>& m) {
    const RrefResult r = rref(m);
    const Index cols = m.cols();
    std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
    for (Index p : r.pivot_cols) is_pivot[static_cast<size_t>(p)] = true;
    std::vector<RatVector> basis;
    for (Index free = 0; free < cols; ++free) {
        if (is_pivot[static_cast<size_t>(free)]) continue;
        RatVector v = rat_zero_vec(cols);
        v(free) = Rational(1);
        for (Index i = 0; i < r.rank; ++i) v(r.pivot_cols[static_cast<size_t>(i)]) = -r.reduced(i, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Any X with m X = b, or nullopt when b is outside the column space.
/// Free variables are set to zero, so the result is deterministic.
template <typename D1, typename D2>
std::optional<RatMatrix> solve_linear(const Eigen::MatrixBase<D1>& m,
                                      const Eigen::MatrixBase<D2>& b) {
    if (m.rows() != b.rows())
        throw std::invalid_argument("solve_linear: row count mismatch");
    const Index cols = m.cols(), rhs = b.cols();
    RatMatrix aug(m.rows(), cols + rhs);
    aug.leftCols(cols) = m;
    aug.rightCols(rhs) = b;
    const RrefResult r = rref(aug);
    for (Index p : r.pivot_cols)
        if (p >= cols) return std::nullopt;  // inconsistent row 0 ... 0 | nonzero
    RatMatrix x = rat_zero(cols, rhs);
    for (Index i = 0; i < static_cast<Index>(r.pivot_cols.size()); ++i)
        for (Index j = 0; j < rhs; ++j) x(r.pivot_cols[static_cast<size_t>(i)], j) = r.reduced(i, cols + j);
    return x;
}

/// Exact inverse, or nullopt for singular input.
template <typename Derived>
std::optional<RatMatrix> inverse(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    const Index n = m.rows();
    RatMatrix aug(n, 2 * n);
    aug.leftCols(n) = m;
    aug.rightCols(n) = rat_identity(n);
    const RrefResult r = rref(aug);
    if (r.rank < n || r.pivot_cols.back() >= n) return std::nullopt;
    return RatMatrix(r.reduced.rightCols(n));
}

/// Incremental span with coordinate tracking: each accepted vector is stored
/// reduced, together with its expression in the original inserted vectors.
class SpanTracker {
public:
    explicit SpanTracker(Index ambient) : ambient_(ambient) {}

    Index size() const { return static_cast<Index>(rows_.size()); }

    /// If v is independent of the span, absorbs it and returns nullopt.
    /// Otherwise returns coefficients c with v = sum_i c_i * inserted_i.
    std::optional<RatVector> insert(const RatVector& v) {
        RatVector red = v;
        RatVector combo = rat_zero_vec(size() + 1);
        combo(size()) = Rational(1);  // slot for v itself
        for (Index i = 0; i < size(); ++i) {
            const Rational f = red(pivots_[static_cast<size_t>(i)]);
            if (f.is_zero()) continue;
            red -= f * rows_[static_cast<size_t>(i)];
            combo.head(size()) -= f * coords_[static_cast<size_t>(i)];
        }
        Index piv = -1;
        for (Index j = 0; j < ambient_; ++j)
            if (!red(j).is_zero()) { piv = j; break; }
        if (piv < 0) {
            // dependent: v = -combo.head(size()) gives v as combo of others
            RatVector c = rat_zero_vec(size());
            for (Index i = 0; i < size(); ++i) c(i) = -combo(i);
            return c;
        }
        const Rational inv = Rational(1) / red(piv);
        red *= inv;
        RatVector coord = combo.head(size() + 1) * inv;
        for (auto& cv : coords_) {
            RatVector grown = rat_zero_vec(size() + 1);
            grown.head(cv.size()) = cv;
            cv = std::move(grown);
        }
        rows_.push_back(std::move(red));
        coords_.push_back(std::move(coord));
        pivots_.push_back(piv);
        return std::nullopt;
    }

    bool contains(const RatVector& v) const {
        RatVector red = v;
        for (Index i = 0; i < size(); ++i) {
            const Rational f = red(pivots_[static_cast<size_t>(i)]);
            if (!f.is_zero()) red -= f * rows_[static_cast<size_t>(i)];
        }
        return is_exactly_zero(red);
    }

private:
    Index ambient_;
    std::vector<RatVector> rows_;    // reduced representatives
    std::vector<RatVector> coords_;  // their expressions in inserted vectors
    std::vector<Index> pivots_;
};

/// Monic least-degree p with p(m) = 0. Krylov chains from each standard basis
/// vector give local annihilators; the answer is their lcm, with an early
/// exit once the running lcm already kills the matrix.
template <typename Derived>
UniPoly minimal_polynomial(const Eigen::MatrixBase<Derived>& m_in) {
    if (m_in.rows() != m_in.cols())
        throw std::invalid_argument("minimal_polynomial: matrix not square");
    const RatMatrix m = m_in;
    const Index n = m.rows();
    if (n == 0) return UniPoly::one();
    UniPoly acc = UniPoly::one();

    auto annihilates = [&](const UniPoly& p) {
        RatMatrix val = rat_zero(n, n);
        for (int i = p.degree(); i >= 0; --i) {
            val = val * m;
            for (Index k = 0; k < n; ++k) val(k, k) += p.coeff(i);
        }
        return is_exactly_zero(val);
    };

    for (Index start = 0; start < n; ++start) {
        SpanTracker span(n);
        RatVector v = rat_zero_vec(n);
        v(start) = Rational(1);
        std::optional<RatVector> dep;
        while (!(dep = span.insert(v))) v = m * v;
        // v_k = sum_j c_j v_j  ==>  local annihilator t^k - sum c_j t^j
        const Index k = span.size();
        std::vector<Rational> coeffs(static_cast<size_t>(k) + 1, Rational(0));
        for (Index j = 0; j < k; ++j) coeffs[static_cast<size_t>(j)] = -(*dep)(j);
        coeffs[static_cast<size_t>(k)] = Rational(1);
        acc = lcm(acc, UniPoly(std::move(coeffs)));
        if (acc.degree() >= n || annihilates(acc)) break;
    }
    return acc.monic();
}

/// Do the given vectors span the same subspace? Compared via canonical RREFs.
inline bool same_span(const std::vector<RatVector>& a, const std::vector<RatVector>& b) {
    if (a.empty() && b.empty()) return true;
    const Index n = a.empty() ? b.front().size() : a.front().size();
    auto pack = [n](const std::vector<RatVector>& vs) {
        RatMatrix m = rat_zero(static_cast<Index>(vs.size()), n);
        for (Index i = 0; i < static_cast<Index>(vs.size()); ++i) m.row(i) = vs[static_cast<size_t>(i)].transpose();
        return m;
    };
    const RrefResult ra = rref(pack(a));
    const RrefResult rb = rref(pack(b));
    if (ra.rank != rb.rank) return false;
    return exact_equal(ra.reduced.topRows(ra.rank), rb.reduced.topRows(rb.rank));
}

/// Canonical column basis matrix for the span of the given vectors (RREF rows
/// transposed back to columns). Empty list gives an n x 0 matrix.
inline RatMatrix span_basis_matrix(const std::vector<RatVector>& vs, Index n) {
    RatMatrix m = rat_zero(static_cast<Index>(vs.size()), n);
    for (Index i = 0; i < static_cast<Index>(vs.size()); ++i) m.row(i) = vs[static_cast<size_t>(i)].transpose();
    const RrefResult r = rref(m);
    return r.reduced.topRows(r.rank).transpose();
}

}  // namespace centra
