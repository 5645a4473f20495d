// Dense order-d multilinear forms/maps over Q: evaluation, slices, congruence
// action, radical, direct sums, and the fixture generators.
#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

#include "centra/errors.hpp"
#include "centra/linalg.hpp"
#include "centra/rational.hpp"
#include "centra/rng.hpp"

namespace centra {

/// A pair of free slot positions with everything else pinned: describes one
/// n x n slice of the tensor. Positions and indices are 0-based.
struct SlicePair {
    int pos_k = 0;                // first free slot, pos_k < pos_l
    int pos_l = 1;                // second free slot
    std::vector<Index> fixed;     // indices of the remaining d-2 slots, in slot order
    Index component = 0;          // target coordinate
};

/// Order-d multilinear map V^d -> Q^r on V = Q^n, stored densely as r stacked
/// scalar tensors of shape n^d (row-major, last index fastest).
class MultiForm {
public:
    MultiForm(Index n, int d, Index r = 1)
        : n_(n), d_(d), r_(r), e_(static_cast<size_t>(r) * pow_n(n, d), Rational(0)) {
        if (d < 3) throw precondition_error("BadOrder", "multilinear order d must be >= 3");
        if (n < 1 || r < 1)
            throw precondition_error("BadDimension", "need dim >= 1 and target_dim >= 1");
    }

    static MultiForm zero(Index n, int d, Index r = 1) { return MultiForm(n, d, r); }

    Index dim() const { return n_; }
    int order() const { return d_; }
    Index target_dim() const { return r_; }
    Index entries_per_component() const { return pow_n(n_, d_); }

    Index flat(const std::vector<Index>& idx) const {
        assert(static_cast<int>(idx.size()) == d_);
        Index f = 0;
        for (Index i : idx) {
            assert(i >= 0 && i < n_);
            f = f * n_ + i;
        }
        return f;
    }

    const Rational& entry(Index component, const std::vector<Index>& idx) const {
        return e_[static_cast<size_t>(component * entries_per_component() + flat(idx))];
    }
    Rational& entry(Index component, const std::vector<Index>& idx) {
        return e_[static_cast<size_t>(component * entries_per_component() + flat(idx))];
    }
    const Rational& entry_flat(Index component, Index f) const {
        return e_[static_cast<size_t>(component * entries_per_component() + f)];
    }
    Rational& entry_flat(Index component, Index f) {
        return e_[static_cast<size_t>(component * entries_per_component() + f)];
    }

    /// Theta(v_1, ..., v_d) as a vector in Q^r, by mode-by-mode contraction.
    RatVector evaluate(const std::vector<RatVector>& vs) const {
        if (static_cast<int>(vs.size()) != d_)
            throw precondition_error("BadArity", "evaluate needs exactly d vectors");
        for (const auto& v : vs)
            if (v.size() != n_)
                throw precondition_error("BadDimension", "evaluate: vector length != dim");
        RatVector out(r_);
        for (Index c = 0; c < r_; ++c) {
            std::vector<Rational> buf(
                e_.begin() + static_cast<std::ptrdiff_t>(c * entries_per_component()),
                e_.begin() + static_cast<std::ptrdiff_t>((c + 1) * entries_per_component()));
            for (int mode = d_ - 1; mode >= 0; --mode) {
                const size_t blocks = buf.size() / static_cast<size_t>(n_);
                std::vector<Rational> next(blocks, Rational(0));
                for (size_t b = 0; b < blocks; ++b) {
                    Rational acc(0);
                    for (Index i = 0; i < n_; ++i)
                        acc += buf[b * static_cast<size_t>(n_) + static_cast<size_t>(i)] * vs[static_cast<size_t>(mode)](i);
                    next[b] = acc;
                }
                buf = std::move(next);
            }
            out(c) = buf[0];
        }
        return out;
    }

    /// The n x n matrix with (i, j) entry = tensor entry having i in slot
    /// pos_k, j in slot pos_l, and the fixed indices elsewhere.
    RatMatrix slice_matrix(const SlicePair& s) const {
        if (s.pos_k < 0 || s.pos_l >= d_ || s.pos_k >= s.pos_l)
            throw precondition_error("BadSlice", "slice positions out of range");
        if (static_cast<int>(s.fixed.size()) != d_ - 2)
            throw precondition_error("BadSlice", "slice needs d-2 fixed indices");
        if (s.component < 0 || s.component >= r_)
            throw precondition_error("BadSlice", "slice component out of range");
        for (Index ix : s.fixed)
            if (ix < 0 || ix >= n_) throw precondition_error("BadSlice", "fixed index out of range");
        RatMatrix m(n_, n_);
        std::vector<Index> idx(static_cast<size_t>(d_));
        for (Index i = 0; i < n_; ++i)
            for (Index j = 0; j < n_; ++j) {
                size_t fx = 0;
                for (int pos = 0; pos < d_; ++pos) {
                    if (pos == s.pos_k) idx[static_cast<size_t>(pos)] = i;
                    else if (pos == s.pos_l) idx[static_cast<size_t>(pos)] = j;
                    else idx[static_cast<size_t>(pos)] = s.fixed[fx++];
                }
                m(i, j) = entry(s.component, idx);
            }
        return m;
    }

    friend bool operator==(const MultiForm& a, const MultiForm& b) {
        return a.n_ == b.n_ && a.d_ == b.d_ && a.r_ == b.r_ && a.e_ == b.e_;
    }
    friend bool operator!=(const MultiForm& a, const MultiForm& b) { return !(a == b); }

    friend MultiForm operator*(const Rational& s, const MultiForm& f) {
        MultiForm out = f;
        for (auto& x : out.e_) x *= s;
        return out;
    }

    friend MultiForm operator-(const MultiForm& a, const MultiForm& b) {
        if (a.n_ != b.n_ || a.d_ != b.d_ || a.r_ != b.r_)
            throw precondition_error("BadDimension", "form subtraction shape mismatch");
        MultiForm out = a;
        for (size_t i = 0; i < out.e_.size(); ++i) out.e_[i] -= b.e_[i];
        return out;
    }

    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [](const Rational& x) { return x.is_zero(); });
    }

    static Index pow_n(Index n, int d) {
        Index p = 1;
        for (int i = 0; i < d; ++i) p *= n;
        return p;
    }

private:
    Index n_;
    int d_;
    Index r_;
    std::vector<Rational> e_;

    friend MultiForm transform_modes(const MultiForm&, const std::vector<RatMatrix>&);
    friend MultiForm apply_target(const MultiForm&, const RatMatrix&);
};

/// Generic per-mode change of variables: result(j_1..j_d) =
/// sum entries(i_1..i_d) * mats[1](i_1,j_1) ... mats[d](i_d,j_d).
/// All matrices must have `dim` rows and a common column count.
inline MultiForm transform_modes(const MultiForm& f, const std::vector<RatMatrix>& mats) {
    if (static_cast<int>(mats.size()) != f.order())
        throw precondition_error("BadArity", "transform_modes needs one matrix per slot");
    const Index cols = mats.front().cols();
    for (const auto& m : mats)
        if (m.rows() != f.dim() || m.cols() != cols)
            throw precondition_error("BadDimension", "transform_modes: matrix shape mismatch");
    MultiForm out(cols, f.order(), f.target_dim());
    for (Index c = 0; c < f.target_dim(); ++c) {
        std::vector<Rational> buf(static_cast<size_t>(f.entries_per_component()));
        for (Index i = 0; i < f.entries_per_component(); ++i) buf[static_cast<size_t>(i)] = f.entry_flat(c, i);
        std::vector<Index> shape(static_cast<size_t>(f.order()), f.dim());
        for (int mode = f.order() - 1; mode >= 0; --mode) {
            const RatMatrix& p = mats[static_cast<size_t>(mode)];
            Index inner = 1, outer = 1;
            for (int j = mode + 1; j < f.order(); ++j) inner *= shape[static_cast<size_t>(j)];
            for (int j = 0; j < mode; ++j) outer *= shape[static_cast<size_t>(j)];
            const Index rows = shape[static_cast<size_t>(mode)];
            std::vector<Rational> next(static_cast<size_t>(outer * cols * inner), Rational(0));
            for (Index o = 0; o < outer; ++o)
                for (Index cc = 0; cc < cols; ++cc)
                    for (Index in = 0; in < inner; ++in) {
                        Rational acc(0);
                        for (Index i = 0; i < rows; ++i)
                            acc += buf[static_cast<size_t>((o * rows + i) * inner + in)] * p(i, cc);
                        next[static_cast<size_t>((o * cols + cc) * inner + in)] = acc;
                    }
            buf = std::move(next);
            shape[static_cast<size_t>(mode)] = cols;
        }
        for (Index i = 0; i < out.entries_per_component(); ++i) out.entry_flat(c, i) = buf[static_cast<size_t>(i)];
    }
    return out;
}

/// Base change by an invertible P in every slot: the form v -> Theta(Pv, ..., Pv).
inline MultiForm congruence_transform(const MultiForm& f, const RatMatrix& p) {
    if (p.rows() != f.dim() || p.cols() != f.dim())
        throw precondition_error("BadDimension", "congruence_transform: P must be n x n");
    if (!inverse(p)) throw precondition_error("Singular", "congruence_transform: P is singular");
    return transform_modes(f, std::vector<RatMatrix>(static_cast<size_t>(f.order()), p));
}

/// Restriction to the column span of W (no invertibility requirement).
inline MultiForm restrict_to(const MultiForm& f, const RatMatrix& w) {
    if (w.rows() != f.dim())
        throw precondition_error("BadDimension", "restrict_to: W must have n rows");
    if (w.cols() < 1) throw precondition_error("BadDimension", "restrict_to: W needs >= 1 column");
    return transform_modes(f, std::vector<RatMatrix>(static_cast<size_t>(f.order()), w));
}

/// Post-compose the target with psi: (psi . Theta). psi is r_out x r.
inline MultiForm apply_target(const MultiForm& f, const RatMatrix& psi) {
    if (psi.cols() != f.target_dim())
        throw precondition_error("BadDimension", "apply_target: psi column count != target_dim");
    MultiForm out(f.dim(), f.order(), psi.rows());
    for (Index c = 0; c < psi.rows(); ++c)
        for (Index i = 0; i < f.entries_per_component(); ++i) {
            Rational acc(0);
            for (Index s = 0; s < f.target_dim(); ++s) acc += psi(c, s) * f.entry_flat(s, i);
            out.entry_flat(c, i) = acc;
        }
    return out;
}

/// Basis of the radical V_0: vectors u annihilating the form when placed in
/// any one slot with arbitrary basis vectors elsewhere. Empty iff nondegenerate.
inline std::vector<RatVector> radical(const MultiForm& f) {
    const Index n = f.dim();
    const int d = f.order();
    const Index per = MultiForm::pow_n(n, d - 1);
    RatMatrix sys = rat_zero(static_cast<Index>(d) * per * f.target_dim(), n);
    Index row = 0;
    std::vector<Index> idx(static_cast<size_t>(d));
    for (int slot = 0; slot < d; ++slot)
        for (Index rest = 0; rest < per; ++rest) {
            // decode the other d-1 positions from `rest`
            Index tmp = rest;
            for (int pos = d - 1; pos >= 0; --pos) {
                if (pos == slot) continue;
                idx[static_cast<size_t>(pos)] = tmp % n;
                tmp /= n;
            }
            for (Index c = 0; c < f.target_dim(); ++c) {
                for (Index u = 0; u < n; ++u) {
                    idx[static_cast<size_t>(slot)] = u;
                    sys(row, u) = f.entry(c, idx);
                }
                ++row;
            }
        }
    return kernel_basis(sys);
}

inline bool is_nondegenerate(const MultiForm& f) { return radical(f).empty(); }

/// Outer direct sum: block tensor on Q^(n_f + n_g), zero on mixed tuples.
inline MultiForm direct_sum(const MultiForm& f, const MultiForm& g) {
    if (f.order() != g.order())
        throw precondition_error("BadOrder", "direct_sum: order mismatch");
    if (f.target_dim() != g.target_dim())
        throw precondition_error("BadDimension", "direct_sum: target mismatch");
    const Index nf = f.dim(), n = nf + g.dim();
    MultiForm out(n, f.order(), f.target_dim());
    std::vector<Index> idx(static_cast<size_t>(f.order()));
    const Index total = out.entries_per_component();
    for (Index c = 0; c < f.target_dim(); ++c)
        for (Index flatix = 0; flatix < total; ++flatix) {
            Index tmp = flatix;
            bool all_f = true, all_g = true;
            for (int pos = f.order() - 1; pos >= 0; --pos) {
                const Index i = tmp % n;
                tmp /= n;
                idx[static_cast<size_t>(pos)] = i;
                (i < nf ? all_g : all_f) = false;
            }
            if (all_f) {
                out.entry_flat(c, flatix) = f.entry(c, idx);
            } else if (all_g) {
                std::vector<Index> shifted = idx;
                for (auto& i : shifted) i -= nf;
                out.entry_flat(c, flatix) = g.entry(c, shifted);
            }
        }
    return out;
}

/// The central d-linear form fixtures: for n = 2 the tensor repeats the 2 x 2
/// pattern [[1,-1],[1,0]] over the first two slots; for n >= 3 the first slot
/// selects among diag(1..n), diag(1,4,...,n^2) and the all-ones matrix.
inline MultiForm make_example_central(Index n, int d) {
    if (n < 2 || d < 3)
        throw precondition_error("BadDimension", "make_example_central: need n >= 2, d >= 3");
    MultiForm out(n, d, 1);
    std::vector<Index> idx(static_cast<size_t>(d));
    const Index total = out.entries_per_component();
    for (Index flatix = 0; flatix < total; ++flatix) {
        Index tmp = flatix;
        for (int pos = d - 1; pos >= 0; --pos) {
            idx[static_cast<size_t>(pos)] = tmp % n;
            tmp /= n;
        }
        Rational v(0);
        if (n == 2) {
            static const int pat[2][2] = {{1, -1}, {1, 0}};
            v = Rational(pat[idx[0]][idx[1]]);
        } else {
            const Index i2 = idx[1], i3 = idx[2];
            if (idx[0] == 0 && i2 == i3) v = Rational(static_cast<long>(i2) + 1);
            else if (idx[0] == 1 && i2 == i3) v = Rational((static_cast<long>(i2) + 1) * (static_cast<long>(i2) + 1));
            else if (idx[0] == 2) v = Rational(1);
        }
        out.entry_flat(0, flatix) = v;
    }
    return out;
}

/// Random integer tensor with entries in [-bound, bound], reproducible per seed.
inline MultiForm random_form(Index n, int d, Index r, long bound, std::uint64_t seed) {
    if (bound < 0) throw precondition_error("BadBound", "random_form: bound must be >= 0");
    MultiForm out(n, d, r);
    Rng rng(seed);
    for (Index c = 0; c < r; ++c)
        for (Index i = 0; i < out.entries_per_component(); ++i)
            out.entry_flat(c, i) = Rational(bound == 0 ? 0L : rng.between(-bound, bound));
    return out;
}

/// Visits every slice (pos pair, fixed assignment, component) of the form.
template <typename Fn>
void for_each_slice(const MultiForm& f, Fn&& fn) {
    const int d = f.order();
    const Index n = f.dim();
    const Index per = MultiForm::pow_n(n, d - 2);
    SlicePair s;
    s.fixed.resize(static_cast<size_t>(d - 2));
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
            s.pos_k = k;
            s.pos_l = l;
            for (Index rest = 0; rest < per; ++rest) {
                Index tmp = rest;
                for (int j = d - 3; j >= 0; --j) {
                    s.fixed[static_cast<size_t>(j)] = tmp % n;
                    tmp /= n;
                }
                for (Index c = 0; c < f.target_dim(); ++c) {
                    s.component = c;
                    fn(static_cast<const SlicePair&>(s));
                }
            }
        }
}

}  // namespace centra
