// End-to-end direct-sum decomposition: radical split, center, primitive
// idempotents, change of basis, block extraction, certificate verification.
#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <vector>

#include "centra/center.hpp"
#include "centra/comalg.hpp"
#include "centra/errors.hpp"
#include "centra/linalg.hpp"
#include "centra/multiform.hpp"

namespace centra {

struct BlockFlags {
    bool indecomposable = true;
    bool absolutely_indecomposable = false;
    Index residue_degree = 1;
};

struct DecompositionCertificate {
    RatMatrix p;                     // invertible change of basis
    std::vector<Index> block_dims;   // non-radical block sizes, in P's column order
    Index radical_dim = 0;           // trailing zero block size
    IdempotentSet idempotents;       // k x k center idempotents of the nondegenerate part
    std::vector<MultiForm> blocks;   // the extracted block forms
    std::vector<BlockFlags> flags;

    Index block_offset(size_t i) const {
        Index o = 0;
        for (size_t j = 0; j < i; ++j) o += block_dims[j];
        return o;
    }
};

inline int lex_compare(const MultiForm& a, const MultiForm& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim() ? -1 : 1;
    if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
    if (a.target_dim() != b.target_dim()) return a.target_dim() < b.target_dim() ? -1 : 1;
    for (Index c = 0; c < a.target_dim(); ++c)
        for (Index i = 0; i < a.entries_per_component(); ++i) {
            const Rational &x = a.entry_flat(c, i), &y = b.entry_flat(c, i);
            if (x < y) return -1;
            if (y < x) return 1;
        }
    return 0;
}

namespace ddetail {

/// Complement of the span of the given vectors: the standard basis vectors at
/// the non-pivot coordinates of the span's RREF.
inline RatMatrix standard_complement(const std::vector<RatVector>& span_vecs, Index n) {
    RatMatrix rows = rat_zero(static_cast<Index>(span_vecs.size()), n);
    for (Index i = 0; i < static_cast<Index>(span_vecs.size()); ++i)
        rows.row(i) = span_vecs[static_cast<size_t>(i)].transpose();
    const RrefResult r = rref(rows);
    std::vector<bool> piv(static_cast<size_t>(n), false);
    for (Index p : r.pivot_cols) piv[static_cast<size_t>(p)] = true;
    RatMatrix w = rat_zero(n, n - r.rank);
    Index col = 0;
    for (Index j = 0; j < n; ++j)
        if (!piv[static_cast<size_t>(j)]) w(j, col++) = Rational(1);
    return w;
}

/// The shared front half of the pipeline: radical split, complement choice,
/// center of the nondegenerate part, primitive idempotent split.
struct CenterSplit {
    RatMatrix complement;      // n x k
    RatMatrix radical_basis;   // n x radical_dim
    std::optional<CommAlgebra> algebra;  // center of the restricted form
    adetail::CornerSplit split;          // idempotent coords + residue degrees
};

inline CenterSplit center_split(const MultiForm& f, std::uint64_t seed) {
    const Index n = f.dim();
    CenterSplit out;
    const std::vector<RatVector> rad = radical(f);
    const Index kr = static_cast<Index>(rad.size());
    out.radical_basis = rat_zero(n, kr);
    for (Index j = 0; j < kr; ++j) out.radical_basis.col(j) = rad[static_cast<size_t>(j)];
    out.complement = standard_complement(rad, n);
    if (n - kr == 0) return out;
    const MultiForm f1 = restrict_to(f, out.complement);
    out.algebra.emplace(CommAlgebra::from_matrix_span(center_basis(f1).basis));
    out.split = adetail::split_all(*out.algebra, seed);
    return out;
}

struct DecompositionWork {
    DecompositionCertificate cert;
    RatMatrix complement;       // n x k columns spanning the chosen complement of V_0
    RatMatrix radical_basis;    // n x radical_dim
    std::vector<RatMatrix> block_cols;  // per block: k x dim_i columns inside the complement
};

inline DecompositionWork decompose_work(const MultiForm& f, std::uint64_t seed) {
    const Index n = f.dim();
    DecompositionWork work;
    CenterSplit cs = center_split(f, seed);
    const Index kr = cs.radical_basis.cols();
    const Index k = n - kr;
    work.radical_basis = cs.radical_basis;
    work.complement = cs.complement;
    work.cert.radical_dim = kr;

    if (k == 0) {  // the zero form: everything is radical
        work.cert.p = work.radical_basis;
        return work;
    }

    const MultiForm f1 = restrict_to(f, work.complement);
    const CommAlgebra& alg = *cs.algebra;
    const auto& split = cs.split;

    struct BlockData {
        RatMatrix idem;      // k x k
        RatMatrix cols;      // k x dim
        MultiForm content;
        Index residue_degree;
    };
    std::vector<BlockData> blocks;
    for (size_t t = 0; t < split.units.size(); ++t) {
        const RatMatrix e = alg.to_matrix(split.units[t]);
        const RrefResult r = rref(e);
        RatMatrix cols(k, r.rank);
        for (Index j = 0; j < r.rank; ++j) cols.col(j) = e.col(r.pivot_cols[static_cast<size_t>(j)]);
        blocks.push_back({e, cols, restrict_to(f1, cols), split.residue_degrees[t]});
    }
    // stable: ties (identical content) keep the canonical idempotent order
    std::stable_sort(blocks.begin(), blocks.end(), [](const BlockData& a, const BlockData& b) {
        if (a.cols.cols() != b.cols.cols()) return a.cols.cols() < b.cols.cols();
        return lex_compare(a.content, b.content) < 0;
    });

    RatMatrix q(k, k);
    Index col = 0;
    for (const auto& b : blocks) {
        q.block(0, col, k, b.cols.cols()) = b.cols;
        col += b.cols.cols();
    }
    assert(col == k);

    work.cert.p = rat_zero(n, n);
    work.cert.p.leftCols(k) = work.complement * q;
    if (kr > 0) work.cert.p.rightCols(kr) = work.radical_basis;

    for (const auto& b : blocks) {
        work.cert.block_dims.push_back(b.cols.cols());
        work.cert.idempotents.elements.push_back(b.idem);
        work.cert.blocks.push_back(b.content);
        work.block_cols.push_back(b.cols);

        // honest per-block flags, from the block's own center
        const CenterBasis bc = center_basis(b.content);
        const CommAlgebra balg = CommAlgebra::from_matrix_span(bc.basis);
        const LocalityReport rep = is_local(balg, seed ^ 0x51f0c9a2d03e6b74ULL);
        assert(rep.local);
        assert(rep.residue_degree == b.residue_degree);
        work.cert.flags.push_back(
            {rep.local, rep.local && rep.residue_degree == 1, rep.residue_degree});
    }
    return work;
}

}  // namespace ddetail

/// Decomposes f into indecomposable summands plus a trailing zero block:
/// congruence_transform(f, cert.p) is exactly block-diagonal with the listed
/// block dimensions, and every block's center is local.
inline DecompositionCertificate decompose(const MultiForm& f, std::uint64_t seed) {
    return ddetail::decompose_work(f, seed).cert;
}

/// Exact check of a certificate against f: the transformed tensor must vanish
/// whenever indices leave a single declared block, and the idempotent
/// identities must hold.
inline bool verify_certificate(const MultiForm& f, const DecompositionCertificate& c) {
    const Index n = f.dim();
    if (c.p.rows() != n || c.p.cols() != n) return false;
    Index k = 0;
    for (Index b : c.block_dims) k += b;
    if (k + c.radical_dim != n) return false;
    if (!inverse(c.p)) return false;

    const MultiForm t = congruence_transform(f, c.p);
    // block id per coordinate: 0..s-1 for blocks, -1 for the radical tail
    std::vector<int> owner(static_cast<size_t>(n), -1);
    {
        Index at = 0;
        for (size_t b = 0; b < c.block_dims.size(); ++b)
            for (Index j = 0; j < c.block_dims[b]; ++j) owner[static_cast<size_t>(at++)] = static_cast<int>(b);
    }
    const int d = f.order();
    std::vector<Index> idx(static_cast<size_t>(d));
    for (Index comp = 0; comp < f.target_dim(); ++comp)
        for (Index flat = 0; flat < t.entries_per_component(); ++flat) {
            if (t.entry_flat(comp, flat).is_zero()) continue;
            Index tmp = flat;
            int first = -2;
            bool same = true;
            for (int pos = d - 1; pos >= 0; --pos) {
                const int o = owner[static_cast<size_t>(tmp % n)];
                tmp /= n;
                if (first == -2) first = o;
                else if (o != first) same = false;
            }
            if (!same || first < 0) return false;  // straddles blocks or touches V_0
        }

    if (!c.idempotents.elements.empty()) {
        RatMatrix sum = rat_zero(k, k);
        for (const auto& e : c.idempotents.elements) {
            if (e.rows() != k || e.cols() != k) return false;
            if (!exact_equal(e * e, e)) return false;
            sum += e;
        }
        if (!exact_equal(sum, rat_identity(k))) return false;
        for (size_t i = 0; i < c.idempotents.elements.size(); ++i)
            for (size_t j = i + 1; j < c.idempotents.elements.size(); ++j)
                if (!is_exactly_zero(c.idempotents.elements[i] * c.idempotents.elements[j]))
                    return false;
    }
    return true;
}

/// Theorem-level uniqueness probe: the idempotent set must come out identical
/// (as a set of exact matrices) across independently seeded runs. Runs the
/// splitting pipeline only; block extraction does not affect the set.
inline bool decomposition_is_unique(const MultiForm& f, int trials, std::uint64_t seed0 = 0) {
    if (trials <= 1) return true;
    auto idempotent_matrices = [&](std::uint64_t seed) {
        const ddetail::CenterSplit cs = ddetail::center_split(f, seed);
        std::vector<RatMatrix> out;  // split_all already orders canonically
        for (const auto& u : cs.split.units) out.push_back(cs.algebra->to_matrix(u));
        return out;
    };
    const std::vector<RatMatrix> first = idempotent_matrices(seed0);
    for (int t = 1; t < trials; ++t) {
        const std::vector<RatMatrix> cur =
            idempotent_matrices(seed0 + static_cast<std::uint64_t>(t));
        if (cur.size() != first.size()) return false;
        for (size_t i = 0; i < first.size(); ++i)
            if (!exact_equal(cur[i], first[i])) return false;
    }
    return true;
}

}  // namespace centra
