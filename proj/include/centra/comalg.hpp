// Finite-dimensional commutative algebra engine: structure constants, trace
// radical, primitive idempotent splitting (Las Vegas), Hensel d-th roots.
#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <vector>

#include "centra/errors.hpp"
#include "centra/factor.hpp"
#include "centra/linalg.hpp"
#include "centra/rational.hpp"
#include "centra/rng.hpp"
#include "centra/unipoly.hpp"

namespace centra {

/// Exact coordinates with respect to a fixed full-column-rank basis matrix.
/// A pivot-row square solve gives candidate coordinates; membership is then
/// certified by multiplying back.
class CoordSolver {
public:
    explicit CoordSolver(RatMatrix basis) : basis_(std::move(basis)) {
        const RrefResult r = rref(basis_.transpose());
        if (r.rank != basis_.cols())
            throw precondition_error("DependentBasis", "basis vectors are linearly dependent");
        rows_ = r.pivot_cols;  // row indices of an invertible square subblock
        RatMatrix sub(basis_.cols(), basis_.cols());
        for (Index i = 0; i < basis_.cols(); ++i) sub.row(i) = basis_.row(rows_[static_cast<size_t>(i)]);
        inv_ = *inverse(sub);
    }

    Index dim() const { return basis_.cols(); }
    const RatMatrix& basis() const { return basis_; }

    std::optional<RatVector> try_coords(const RatVector& v) const {
        RatVector picked(basis_.cols());
        for (Index i = 0; i < basis_.cols(); ++i) picked(i) = v(rows_[static_cast<size_t>(i)]);
        RatVector c = inv_ * picked;
        if (!exact_equal(basis_ * c, v)) return std::nullopt;
        return c;
    }

    RatVector coords(const RatVector& v) const {
        auto c = try_coords(v);
        if (!c) throw precondition_error("NotInSpan", "vector outside the spanned subspace");
        return *c;
    }

private:
    RatMatrix basis_;
    std::vector<Index> rows_;
    RatMatrix inv_;
};

/// Commutative unital matrix algebra given by a basis of commuting n x n
/// matrices whose span is closed under products and contains the identity.
/// Elements are coordinate vectors over that basis.
class CommAlgebra {
public:
    static CommAlgebra from_matrix_span(std::vector<RatMatrix> basis) {
        if (basis.empty())
            throw precondition_error("NoIdentity", "empty basis spans no unital algebra");
        const Index n = basis.front().rows();
        for (const auto& b : basis)
            if (b.rows() != n || b.cols() != n)
                throw precondition_error("BadDimension", "basis matrices must share one size");
        for (size_t i = 0; i < basis.size(); ++i)
            for (size_t j = i + 1; j < basis.size(); ++j)
                if (!exact_equal(basis[i] * basis[j], basis[j] * basis[i]))
                    throw precondition_error("NotCommutative", "basis matrices do not commute");

        CommAlgebra a;
        a.n_ = n;
        a.m_ = static_cast<Index>(basis.size());
        a.basis_ = std::move(basis);
        RatMatrix span = rat_zero(n * n, a.m_);
        for (Index j = 0; j < a.m_; ++j) span.col(j) = vectorize(a.basis_[static_cast<size_t>(j)]);
        a.span_.emplace(std::move(span));

        auto one = a.span_->try_coords(vectorize(rat_identity(n)));
        if (!one)
            throw precondition_error("NoIdentity", "identity matrix is not in the span");
        a.one_ = *one;

        a.lmul_.reserve(static_cast<size_t>(a.m_));
        for (Index i = 0; i < a.m_; ++i) {
            RatMatrix li(a.m_, a.m_);
            for (Index j = 0; j < a.m_; ++j) {
                auto c = a.span_->try_coords(
                    vectorize(a.basis_[static_cast<size_t>(i)] * a.basis_[static_cast<size_t>(j)]));
                if (!c)
                    throw precondition_error("NotClosed", "basis product escapes the span");
                li.col(j) = *c;
            }
            a.lmul_.push_back(std::move(li));
        }
        return a;
    }

    Index dim() const { return m_; }
    Index ambient_dim() const { return n_; }
    const std::vector<RatMatrix>& basis() const { return basis_; }
    const RatVector& one() const { return one_; }

    /// Structure constants as the regular representation of basis element i.
    const RatMatrix& left_mul_of_basis(Index i) const { return lmul_[static_cast<size_t>(i)]; }

    RatMatrix left_mul_matrix(const RatVector& x) const {
        RatMatrix l = rat_zero(m_, m_);
        for (Index i = 0; i < m_; ++i)
            if (!x(i).is_zero()) l += x(i) * lmul_[static_cast<size_t>(i)];
        return l;
    }

    RatVector mul(const RatVector& x, const RatVector& y) const {
        RatVector z = rat_zero_vec(m_);
        for (Index i = 0; i < m_; ++i)
            if (!x(i).is_zero()) z += x(i) * (lmul_[static_cast<size_t>(i)] * y);
        return z;
    }

    RatVector power(const RatVector& x, long k) const {
        assert(k >= 0);
        RatVector acc = one_;
        for (long i = 0; i < k; ++i) acc = mul(acc, x);
        return acc;
    }

    std::optional<RatVector> try_inverse(const RatVector& x) const {
        auto sol = solve_linear(left_mul_matrix(x), one_);
        if (!sol) return std::nullopt;
        return RatVector(sol->col(0));
    }

    RatMatrix to_matrix(const RatVector& x) const {
        RatMatrix m = rat_zero(n_, n_);
        for (Index i = 0; i < m_; ++i)
            if (!x(i).is_zero()) m += x(i) * basis_[static_cast<size_t>(i)];
        return m;
    }

    RatVector coords_of(const RatMatrix& mat) const { return span_->coords(vectorize(mat)); }
    std::optional<RatVector> try_coords_of(const RatMatrix& mat) const {
        return span_->try_coords(vectorize(mat));
    }

    /// Jacobson radical in characteristic 0: the kernel of the trace form
    /// (x, y) -> trace(L_{xy}) of the regular representation.
    std::vector<RatVector> radical() const {
        RatMatrix t(m_, m_);
        for (Index i = 0; i < m_; ++i)
            for (Index j = 0; j < m_; ++j) {
                Rational acc(0);
                const RatMatrix& li = lmul_[static_cast<size_t>(i)];
                const RatMatrix& lj = lmul_[static_cast<size_t>(j)];
                for (Index a = 0; a < m_; ++a)
                    for (Index b = 0; b < m_; ++b) acc += li(a, b) * lj(b, a);
                t(i, j) = acc;
            }
        return kernel_basis(t);
    }

private:
    CommAlgebra() = default;

    Index n_ = 0, m_ = 0;
    std::vector<RatMatrix> basis_;
    std::vector<RatMatrix> lmul_;
    std::optional<CoordSolver> span_;
    RatVector one_;
};

struct IdempotentSet {
    std::vector<RatMatrix> elements;
};

struct LocalityReport {
    bool local = false;
    Index residue_degree = 0;  // dim(a) - dim(radical); the residue field degree when local
};

namespace adetail {

constexpr int kSplitRetryCap = 32;

/// Newton refinement e <- 3e^2 - 2e^3 on coordinates; exact fixed point is an
/// idempotent. Terminates because e^2 - e lives in the nilpotent radical.
inline RatVector newton_lift_coords(const CommAlgebra& a, RatVector e) {
    for (int it = 0; it < 64; ++it) {
        const RatVector sq = a.mul(e, e);
        if (exact_equal(sq, e)) return e;
        e = Rational(3) * sq - Rational(2) * a.mul(sq, e);
    }
    throw precondition_error("LiftDiverged",
                             "idempotent refinement did not reach a fixed point; "
                             "e0^2 - e0 is not in the radical");
}

struct CornerSplit {
    std::vector<RatVector> units;      // primitive idempotents, coords in A
    std::vector<Index> residue_degrees;
};

/// Recursive split-and-certify on the corner e*A with identity `unit` and the
/// given A-coordinate basis. Certification of locality: some element of the
/// semisimple quotient has an irreducible minimal polynomial of full degree.
inline void split_corner(const CommAlgebra& a, const RatVector& unit,
                         const std::vector<RatVector>& corner_basis, Rng& rng,
                         CornerSplit& out) {
    const Index k = static_cast<Index>(corner_basis.size());
    if (k == 1) {  // one-dimensional corner: a copy of Q
        out.units.push_back(unit);
        out.residue_degrees.push_back(1);
        return;
    }
    RatMatrix cb = rat_zero(a.dim(), k);
    for (Index j = 0; j < k; ++j) cb.col(j) = corner_basis[static_cast<size_t>(j)];
    const CoordSolver corner(cb);

    // regular representation of the corner on itself
    std::vector<RatMatrix> lc;
    lc.reserve(static_cast<size_t>(k));
    for (Index i = 0; i < k; ++i) {
        RatMatrix li(k, k);
        for (Index j = 0; j < k; ++j)
            li.col(j) = corner.coords(
                a.mul(corner_basis[static_cast<size_t>(i)], corner_basis[static_cast<size_t>(j)]));
        lc.push_back(std::move(li));
    }
    RatMatrix trace_form(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            Rational acc(0);
            for (Index u = 0; u < k; ++u)
                for (Index v = 0; v < k; ++v) acc += lc[static_cast<size_t>(i)](u, v) * lc[static_cast<size_t>(j)](v, u);
            trace_form(i, j) = acc;
        }
    const std::vector<RatVector> rad = kernel_basis(trace_form);  // corner coords
    const Index q = k - static_cast<Index>(rad.size());
    assert(q >= 1);
    if (q == 1) {  // local with residue field Q
        out.units.push_back(unit);
        out.residue_degrees.push_back(1);
        return;
    }

    // complement of the radical inside the corner: coordinates not pivotal
    // in the RREF of the radical rows
    RatMatrix rad_rows = rat_zero(static_cast<Index>(rad.size()), k);
    for (Index i = 0; i < static_cast<Index>(rad.size()); ++i)
        rad_rows.row(i) = rad[static_cast<size_t>(i)].transpose();
    const RrefResult rr = rref(rad_rows);
    std::vector<Index> comp_cols;
    {
        std::vector<bool> is_piv(static_cast<size_t>(k), false);
        for (Index p : rr.pivot_cols) is_piv[static_cast<size_t>(p)] = true;
        for (Index j = 0; j < k; ++j)
            if (!is_piv[static_cast<size_t>(j)]) comp_cols.push_back(j);
    }
    assert(static_cast<Index>(comp_cols.size()) == q);
    RatMatrix mix(k, k);  // [radical basis | complement unit vectors]
    for (Index j = 0; j < static_cast<Index>(rad.size()); ++j) mix.col(j) = rad[static_cast<size_t>(j)];
    for (Index j = 0; j < q; ++j) {
        RatVector e = rat_zero_vec(k);
        e(comp_cols[static_cast<size_t>(j)]) = Rational(1);
        mix.col(static_cast<Index>(rad.size()) + j) = e;
    }
    const RatMatrix mix_inv = *inverse(mix);

    auto project = [&](const RatVector& corner_coords) {  // corner -> quotient
        const RatVector z = mix_inv * corner_coords;
        return RatVector(z.tail(q));
    };
    auto lift = [&](const RatVector& quot_coords) {  // quotient -> corner (section)
        RatVector v = rat_zero_vec(k);
        for (Index j = 0; j < q; ++j) v(comp_cols[static_cast<size_t>(j)]) = quot_coords(j);
        return v;
    };
    auto quot_mul = [&](const RatVector& x, const RatVector& y) {
        return project(corner.coords(a.mul(cb * lift(x), cb * lift(y))));
    };

    for (int attempt = 0; attempt < kSplitRetryCap; ++attempt) {
        const long window = 2 + attempt;
        RatVector z = rat_zero_vec(q);
        bool nonzero = false;
        for (Index i = 0; i < q; ++i) {
            const long c = rng.between(-window, window);
            z(i) = Rational(c);
            nonzero |= c != 0;
        }
        if (!nonzero) continue;
        RatMatrix lz(q, q);
        for (Index j = 0; j < q; ++j) {
            RatVector ej = rat_zero_vec(q);
            ej(j) = Rational(1);
            lz.col(j) = quot_mul(z, ej);
        }
        const UniPoly mu = minimal_polynomial(lz);
        const auto factors = factor_rationals(mu);
        for (const auto& pf : factors) assert(pf.multiplicity == 1);  // quotient is semisimple
        if (factors.size() == 1) {
            if (factors.front().factor.degree() == q) {
                // certified local: primitive element found, residue field
                // degree equals the quotient dimension
                out.units.push_back(unit);
                out.residue_degrees.push_back(q);
                return;
            }
            continue;  // generator was not primitive, retry
        }
        std::vector<UniPoly> parts;
        parts.reserve(factors.size());
        for (const auto& pf : factors) parts.push_back(pf.factor);
        const auto hs = crt_idempotent_polys(parts);

        std::vector<RatVector> new_units;
        const RatVector quot_one = project(corner.coords(unit));
        for (const auto& h : hs) {
            // Horner in the quotient, then lift and refine in A
            RatVector acc = rat_zero_vec(q);
            for (int i = h.degree(); i >= 0; --i) {
                acc = quot_mul(acc, z);
                const Rational ci = h.coeff(i);
                if (!ci.is_zero()) acc += ci * quot_one;
            }
            const RatVector approx = cb * lift(acc);  // A coordinates
            new_units.push_back(newton_lift_coords(a, approx));
        }
        // exactness: orthogonal, sum to the corner unit
        RatVector total = rat_zero_vec(a.dim());
        for (const auto& e : new_units) total += e;
        assert(exact_equal(total, unit));
        for (size_t i = 0; i < new_units.size(); ++i)
            for (size_t j = i + 1; j < new_units.size(); ++j)
                assert(is_exactly_zero(a.mul(new_units[i], new_units[j])));

        for (const auto& e : new_units) {
            std::vector<RatVector> sub_basis;
            {
                RatMatrix prods = rat_zero(static_cast<Index>(corner_basis.size()), a.dim());
                for (Index i = 0; i < static_cast<Index>(corner_basis.size()); ++i)
                    prods.row(i) = a.mul(e, corner_basis[static_cast<size_t>(i)]).transpose();
                const RrefResult pr = rref(prods);
                for (Index i = 0; i < pr.rank; ++i)
                    sub_basis.push_back(RatVector(pr.reduced.row(i).transpose()));
            }
            split_corner(a, e, sub_basis, rng, out);
        }
        return;
    }
    throw retry_limit_error("RetryLimitExceeded",
                            "generator search failed to split or certify a corner");
}

inline CornerSplit split_all(const CommAlgebra& a, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<RatVector> full;
    for (Index i = 0; i < a.dim(); ++i) {
        RatVector e = rat_zero_vec(a.dim());
        e(i) = Rational(1);
        full.push_back(std::move(e));
    }
    CornerSplit out;
    split_corner(a, a.one(), full, rng, out);
    // canonical order: lex on the ambient matrices
    std::vector<size_t> order(out.units.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<RatMatrix> mats;
    mats.reserve(out.units.size());
    for (const auto& u : out.units) mats.push_back(a.to_matrix(u));
    std::sort(order.begin(), order.end(),
              [&](size_t x, size_t y) { return lex_compare(mats[x], mats[y]) < 0; });
    CornerSplit sorted;
    for (size_t i : order) {
        sorted.units.push_back(out.units[i]);
        sorted.residue_degrees.push_back(out.residue_degrees[i]);
    }
    return sorted;
}

}  // namespace adetail

/// Complete set of primitive orthogonal idempotents of the algebra, as
/// ambient matrices in a canonical (entry-lexicographic) order.
inline IdempotentSet primitive_idempotents(const CommAlgebra& a, std::uint64_t seed) {
    const auto split = adetail::split_all(a, seed);
    IdempotentSet s;
    for (const auto& u : split.units) s.elements.push_back(a.to_matrix(u));
    return s;
}

/// Exact idempotent congruent to e0 modulo the radical, via e <- 3e^2 - 2e^3.
inline RatMatrix idempotent_newton_lift(const RatMatrix& e0, const CommAlgebra& a) {
    const RatVector coords = a.coords_of(e0);
    // precondition: e0^2 - e0 in the radical
    const RatVector defect = a.mul(coords, coords) - coords;
    if (!is_exactly_zero(defect)) {
        const auto rad = a.radical();
        RatMatrix rm = rat_zero(a.dim(), static_cast<Index>(rad.size()));
        for (Index j = 0; j < static_cast<Index>(rad.size()); ++j) rm.col(j) = rad[static_cast<size_t>(j)];
        if (!solve_linear(rm, defect))
            throw precondition_error("NotAlmostIdempotent",
                                     "e0^2 - e0 does not lie in the radical");
    }
    return a.to_matrix(adetail::newton_lift_coords(a, coords));
}

/// Local iff the primitive idempotent set is {1}. residue_degree follows the
/// dim(a) - dim(radical) convention and names the residue field degree when
/// the algebra is local. Over Q: absolutely indecomposable center iff local
/// with residue_degree 1.
inline LocalityReport is_local(const CommAlgebra& a, std::uint64_t seed) {
    const auto idems = primitive_idempotents(a, seed);
    LocalityReport r;
    r.local = idems.elements.size() == 1;
    r.residue_degree = a.dim() - static_cast<Index>(a.radical().size());
    return r;
}

/// Exact d-th root of a unipotent unit u = 1 + nilpotent, by Newton iteration
/// x <- x - (x^d - u) / (d x^(d-1)) from x = 1. Coordinates in and out.
inline RatVector dth_root_unit(const CommAlgebra& a, const RatVector& u, int d) {
    if (d < 1) throw precondition_error("BadOrder", "dth_root_unit: d must be >= 1");
    {
        const auto rad = a.radical();
        RatMatrix rm = rat_zero(a.dim(), static_cast<Index>(rad.size()));
        for (Index j = 0; j < static_cast<Index>(rad.size()); ++j) rm.col(j) = rad[static_cast<size_t>(j)];
        const RatVector defect = u - a.one();
        if (!is_exactly_zero(defect) && !solve_linear(rm, defect))
            throw precondition_error("NotUnipotentResidue",
                                     "dth_root_unit: u is not congruent to 1 modulo the radical");
    }
    RatVector x = a.one();
    for (int it = 0; it < 64; ++it) {
        const RatVector xd = a.power(x, d);
        const RatVector err = xd - u;
        if (is_exactly_zero(err)) return x;
        const RatVector denom = Rational(d) * a.power(x, d - 1);
        const auto inv = a.try_inverse(denom);
        assert(inv);
        x = x - a.mul(*inv, err);
    }
    throw precondition_error("LiftDiverged", "dth_root_unit: Newton iteration did not terminate");
}

inline RatMatrix dth_root_unit(const CommAlgebra& a, const RatMatrix& u, int d) {
    return a.to_matrix(dth_root_unit(a, a.coords_of(u), d));
}

/// The unique scalar c with u - c*1 in the radical; requires a rational
/// residue (residue_degree 1 when the algebra is local).
inline Rational residue_scalar(const CommAlgebra& a, const RatVector& u) {
    const auto rad = a.radical();
    RatMatrix sys = rat_zero(a.dim(), 1 + static_cast<Index>(rad.size()));
    sys.col(0) = a.one();
    for (Index j = 0; j < static_cast<Index>(rad.size()); ++j) sys.col(j + 1) = rad[static_cast<size_t>(j)];
    const auto sol = solve_linear(sys, u);
    if (!sol)
        throw precondition_error("ResidueNotRational",
                                 "element has no rational residue modulo the radical");
    return (*sol)(0, 0);
}

inline Rational residue_scalar(const CommAlgebra& a, const RatMatrix& u) {
    return residue_scalar(a, a.coords_of(u));
}

}  // namespace centra
