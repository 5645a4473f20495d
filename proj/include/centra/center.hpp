// The center of a multilinear form/map: the simultaneous solution space of
// X^T A_s = A_s X over every slice matrix A_s and every target component.
#pragma once

#include <vector>

#include "centra/linalg.hpp"
#include "centra/multiform.hpp"
#include "centra/rational.hpp"

namespace centra {

struct CenterBasis {
    Index n = 0;
    std::vector<RatMatrix> basis;   // linearly independent n x n matrices spanning Z
    bool contains_identity = false;

    Index dim() const { return static_cast<Index>(basis.size()); }
};

/// Does X satisfy X^T A_s = A_s X for every slice of f?
inline bool satisfies_center_equations(const MultiForm& f, const RatMatrix& x) {
    if (x.rows() != f.dim() || x.cols() != f.dim()) return false;
    bool ok = true;
    const RatMatrix xt = x.transpose();
    for_each_slice(f, [&](const SlicePair& s) {
        if (!ok) return;
        const RatMatrix a = f.slice_matrix(s);
        if (!exact_equal(xt * a, a * x)) ok = false;
    });
    return ok;
}

namespace cdetail {

/// Appends the n^2 linear equations of X^T A = A X (unknowns x_{mc}, flattened
/// as m*n + c) as rows of `sys` starting at `row`.
inline void append_slice_equations(const RatMatrix& a, RatMatrix& sys, Index& row) {
    const Index n = a.rows();
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
            for (Index m = 0; m < n; ++m) {
                sys(row, m * n + i) += a(m, j);
                sys(row, m * n + j) -= a(i, m);
            }
            ++row;
        }
}

/// Rescales to the integer matrix with coprime entries and a positive first
/// nonzero entry. Solution-space membership is scale-invariant, and integer
/// entries keep all later arithmetic cheap.
inline RatMatrix integer_normalized(const RatMatrix& m) {
    mpz_class den_lcm = 1, num_gcd = 0;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            const mpz_class d = m(i, j).denominator();
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
        }
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            mpz_class v = ::abs(mpz_class(m(i, j).numerator() * (den_lcm / m(i, j).denominator())));
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_mpz_t());
        }
    if (num_gcd == 0) return m;  // zero matrix
    Rational scale(den_lcm, num_gcd);
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) {
                if (m(i, j).sign() < 0) scale = -scale;
                return RatMatrix(scale * m);
            }
    return m;
}

}  // namespace cdetail

/// Basis of Z(V, T, Theta): the exact intersection of the slice-equation
/// solution spaces, computed slice by slice. The first slice is solved in the
/// full n^2-dimensional unknown space; every later slice is restricted to the
/// current (rapidly shrinking) solution basis, so its system has only as many
/// columns as the space still has dimensions. Densest slices go first.
inline CenterBasis center_basis(const MultiForm& f) {
    const Index n = f.dim();
    std::vector<RatMatrix> slices;
    for_each_slice(f, [&](const SlicePair& s) { slices.push_back(f.slice_matrix(s)); });
    std::stable_sort(slices.begin(), slices.end(), [](const RatMatrix& a, const RatMatrix& b) {
        int na = 0, nb = 0;
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j) {
                na += !a(i, j).is_zero();
                nb += !b(i, j).is_zero();
            }
        return na > nb;
    });

    // current solution basis, as matrices; starts as all of End(V)
    std::vector<RatMatrix> basis;
    bool unrestricted = true;
    for (const RatMatrix& a : slices) {
        if (unrestricted) {
            if (is_exactly_zero(a)) continue;  // vacuous equations
            RatMatrix sys = rat_zero(n * n, n * n);
            Index row = 0;
            cdetail::append_slice_equations(a, sys, row);
            basis.clear();
            for (const auto& kv : kernel_basis(sys))
                basis.push_back(cdetail::integer_normalized(unvectorize(kv, n, n)));
            unrestricted = false;
            continue;
        }
        const Index k = static_cast<Index>(basis.size());
        // restriction of X -> X^T A - A X to the current basis
        RatMatrix m(n * n, k);
        bool all_zero = true;
        for (Index j = 0; j < k; ++j) {
            const RatMatrix& x = basis[static_cast<size_t>(j)];
            const RatMatrix img = x.transpose() * a - a * x;
            m.col(j) = vectorize(img);
            all_zero = all_zero && is_exactly_zero(img);
        }
        if (all_zero) continue;  // slice already satisfied on the whole space
        const auto coords = kernel_basis(m);
        std::vector<RatMatrix> next;
        next.reserve(coords.size());
        for (const auto& c : coords) {
            RatMatrix comb = rat_zero(n, n);
            for (Index j = 0; j < k; ++j)
                if (!c(j).is_zero()) comb += c(j) * basis[static_cast<size_t>(j)];
            next.push_back(cdetail::integer_normalized(comb));
        }
        basis = std::move(next);
    }
    if (unrestricted) {  // every slice was zero: the center is all of End(V)
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b) {
                RatMatrix e = rat_zero(n, n);
                e(a, b) = Rational(1);
                basis.push_back(std::move(e));
            }
    }

    CenterBasis cb;
    cb.n = n;
    cb.basis = std::move(basis);
    // identity is always a solution; recorded honestly via an exact solve
    RatMatrix span = rat_zero(n * n, cb.dim());
    for (Index j = 0; j < cb.dim(); ++j) span.col(j) = vectorize(cb.basis[static_cast<size_t>(j)]);
    cb.contains_identity = cb.dim() > 0 && solve_linear(span, vectorize(rat_identity(n))).has_value();
    return cb;
}

/// Central means Z is exactly the scalars: solution space dimension 1,
/// equivalently the coefficient matrix has rank n^2 - 1.
inline bool is_central(const MultiForm& f) { return center_basis(f).dim() == 1; }

inline bool center_commutes(const CenterBasis& cb) {
    for (size_t i = 0; i < cb.basis.size(); ++i)
        for (size_t j = i + 1; j < cb.basis.size(); ++j)
            if (!exact_equal(cb.basis[i] * cb.basis[j], cb.basis[j] * cb.basis[i])) return false;
    return true;
}

inline bool center_closed_under_product(const CenterBasis& cb) {
    if (cb.basis.empty()) return true;
    const Index n = cb.n;
    RatMatrix span = rat_zero(n * n, cb.dim());
    for (Index j = 0; j < cb.dim(); ++j) span.col(j) = vectorize(cb.basis[static_cast<size_t>(j)]);
    for (size_t i = 0; i < cb.basis.size(); ++i)
        for (size_t j = 0; j < cb.basis.size(); ++j)
            if (!solve_linear(span, vectorize(cb.basis[i] * cb.basis[j]))) return false;
    return true;
}

}  // namespace centra
