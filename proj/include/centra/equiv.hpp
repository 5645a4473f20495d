// Symmetric equivalence of d-linear maps: witness verification over all slot
// reorderings, center transport, normalization to a scalar-twisted
// isomorphism, and block-by-block summand matching.
#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <vector>

#include "centra/center.hpp"
#include "centra/comalg.hpp"
#include "centra/decomp.hpp"
#include "centra/errors.hpp"
#include "centra/multiform.hpp"

namespace centra {

/// The data of a symmetric equivalence Delta ~ Theta: slot maps phi_1..phi_d
/// and a target map psi with psi Delta(u_1..u_d) = Theta(phi_s1 u_1, ...) for
/// every reordering s.
struct EquivalenceWitness {
    std::vector<RatMatrix> phis;
    RatMatrix psi;
};

struct NormalizedEquivalence {
    Rational scalar;  // a, with psi Delta = a Theta(phi x ... x phi)
    RatMatrix phi;    // b * phi_1
    RatMatrix root;   // the center element b, b^d = (a_1...a_d) / a
};

/// Exhaustive check of the reordering identity on all basis tuples and all d!
/// permutations of the slot maps.
inline bool verify_witness(const MultiForm& delta, const MultiForm& theta,
                           const EquivalenceWitness& w) {
    const int d = delta.order();
    if (theta.order() != d) return false;
    if (delta.dim() != theta.dim() || delta.target_dim() != theta.target_dim()) return false;
    if (static_cast<int>(w.phis.size()) != d) return false;
    for (const auto& phi : w.phis) {
        if (phi.rows() != theta.dim() || phi.cols() != delta.dim()) return false;
        if (!inverse(phi)) return false;
    }
    if (w.psi.rows() != theta.target_dim() || w.psi.cols() != delta.target_dim()) return false;
    if (!inverse(w.psi)) return false;

    const MultiForm lhs = apply_target(delta, w.psi);
    std::vector<int> perm(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) perm[static_cast<size_t>(i)] = i;
    do {
        std::vector<RatMatrix> mats;
        mats.reserve(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) mats.push_back(w.phis[static_cast<size_t>(perm[static_cast<size_t>(i)])]);
        if (transform_modes(theta, mats) != lhs) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
}

/// The ratios a_i = phi_i phi_1^{-1}, each certified to satisfy the center
/// equations of theta. Throws CenterMembershipFailed otherwise.
inline std::vector<RatMatrix> phi_ratios_in_center(const MultiForm& theta,
                                                   const EquivalenceWitness& w) {
    if (w.phis.empty()) throw precondition_error("BadArity", "witness has no slot maps");
    const auto inv1 = inverse(w.phis.front());
    if (!inv1) throw witness_error("CenterMembershipFailed", "phi_1 is singular");
    std::vector<RatMatrix> ratios;
    ratios.reserve(w.phis.size());
    for (const auto& phi : w.phis) {
        RatMatrix a = phi * (*inv1);
        if (!satisfies_center_equations(theta, a))
            throw witness_error("CenterMembershipFailed",
                                "phi_i phi_1^{-1} violates the center equations; the witness "
                                "is invalid or theta is degenerate");
        ratios.push_back(std::move(a));
    }
    return ratios;
}

struct CenterTransport {
    std::vector<RatMatrix> delta_basis;   // basis of Z(Delta)
    std::vector<RatMatrix> theta_images;  // phi_1 z phi_1^{-1}, certified in Z(Theta)
};

/// The algebra isomorphism Z(Delta) -> Z(Theta), z -> phi_1 z phi_1^{-1},
/// realized on a center basis and certified element by element.
inline CenterTransport transport_center(const MultiForm& theta, const MultiForm& delta,
                                        const EquivalenceWitness& w) {
    if (w.phis.empty()) throw precondition_error("BadArity", "witness has no slot maps");
    const RatMatrix& phi1 = w.phis.front();
    const auto inv1 = inverse(phi1);
    if (!inv1) throw witness_error("CenterMembershipFailed", "phi_1 is singular");
    CenterTransport out;
    out.delta_basis = center_basis(delta).basis;
    for (const auto& z : out.delta_basis) {
        RatMatrix img = phi1 * z * (*inv1);
        if (!satisfies_center_equations(theta, img))
            throw witness_error("CenterMembershipFailed",
                                "transported center element leaves Z(Theta)");
        out.theta_images.push_back(std::move(img));
    }
    // bijectivity: conjugation is injective, so matching dimensions suffice
    if (center_basis(theta).dim() != static_cast<Index>(out.theta_images.size()))
        throw witness_error("CenterMembershipFailed",
                            "center dimensions differ; the witness is invalid");
    return out;
}

/// Rewrites a valid witness into (a, phi): psi Delta = a Theta(phi x ... x phi),
/// with a the rational residue of pi = a_1 ... a_d and phi = b phi_1 for the
/// Hensel d-th root b of pi / a. Requires theta absolutely indecomposable.
inline NormalizedEquivalence normalize(const MultiForm& delta, const MultiForm& theta,
                                       const EquivalenceWitness& w, std::uint64_t seed) {
    if (!verify_witness(delta, theta, w))
        throw witness_error("InvalidWitness", "the reordering identity fails");
    const CenterBasis cb = center_basis(theta);
    const CommAlgebra alg = CommAlgebra::from_matrix_span(cb.basis);
    const LocalityReport loc = is_local(alg, seed);
    if (!loc.local || loc.residue_degree != 1)
        throw precondition_error("NotAbsolutelyIndecomposable",
                                 "normalize needs a local center with rational residue field");

    const auto ratios = phi_ratios_in_center(theta, w);
    const int d = theta.order();
    RatMatrix pi = rat_identity(theta.dim());
    for (const auto& a : ratios) pi = pi * a;
    const RatVector pi_coords = alg.coords_of(pi);
    const Rational a = residue_scalar(alg, pi_coords);
    assert(!a.is_zero());
    const RatVector unipotent = (Rational(1) / a) * pi_coords;
    const RatVector b = dth_root_unit(alg, unipotent, d);
    NormalizedEquivalence out;
    out.scalar = a;
    out.root = alg.to_matrix(b);
    out.phi = out.root * w.phis.front();

    // the certificate identity, re-verified on every basis tuple
    const MultiForm lhs = apply_target(delta, w.psi);
    const MultiForm rhs =
        a * transform_modes(theta, std::vector<RatMatrix>(static_cast<size_t>(d), out.phi));
    if (lhs != rhs)
        throw witness_error("NormalizationFailed",
                            "exact identity psi Delta = a Theta(phi^d) does not hold");
    return out;
}

struct SummandPair {
    int delta_index;  // block index in the delta certificate
    int theta_index;  // matched block index in the theta certificate
    MultiForm delta_block;
    MultiForm theta_block;
    EquivalenceWitness block_witness;
    Index residue_degree;
    std::optional<NormalizedEquivalence> normalized;  // absent when residue_degree > 1
};

struct SummandMatching {
    Index radical_dim = 0;
    DecompositionCertificate delta_cert;
    DecompositionCertificate theta_cert;
    std::vector<SummandPair> pairs;
};

/// Decomposes both sides and pairs indecomposable summands through the
/// transported idempotents phi_1 e phi_1^{-1}; radical blocks are matched by
/// dimension. Each absolutely indecomposable pair is normalized.
inline SummandMatching match_summands(const MultiForm& delta, const MultiForm& theta,
                                      const EquivalenceWitness& w, std::uint64_t seed) {
    if (!verify_witness(delta, theta, w))
        throw witness_error("InvalidWitness", "the reordering identity fails");
    const int d = delta.order();
    const Index n = delta.dim();

    auto dwork = ddetail::decompose_work(delta, seed);
    auto twork = ddetail::decompose_work(theta, seed ^ 0xa5b35705f29c1e08ULL);
    assert(dwork.cert.radical_dim == twork.cert.radical_dim);  // forced by the bijections
    SummandMatching out;
    out.radical_dim = dwork.cert.radical_dim;
    const Index k = n - out.radical_dim;
    if (k == 0) {
        out.delta_cert = std::move(dwork.cert);
        out.theta_cert = std::move(twork.cert);
        return out;
    }

    // induced slot maps on the nondegenerate quotients, in complement coordinates
    RatMatrix p_delta_full = rat_zero(n, n), p_theta_full = rat_zero(n, n);
    p_delta_full.leftCols(k) = dwork.complement;
    p_theta_full.leftCols(k) = twork.complement;
    if (out.radical_dim > 0) {
        p_delta_full.rightCols(out.radical_dim) = dwork.radical_basis;
        p_theta_full.rightCols(out.radical_dim) = twork.radical_basis;
    }
    const RatMatrix proj_theta = inverse(p_theta_full)->topRows(k);  // W-part along V_0
    std::vector<RatMatrix> induced;
    induced.reserve(static_cast<size_t>(d));
    for (const auto& phi : w.phis) induced.push_back(proj_theta * phi * dwork.complement);

    const auto inv1 = inverse(induced.front());
    assert(inv1);

    for (size_t j = 0; j < dwork.cert.idempotents.elements.size(); ++j) {
        const RatMatrix transported =
            induced.front() * dwork.cert.idempotents.elements[j] * (*inv1);
        int match = -1;
        for (size_t i = 0; i < twork.cert.idempotents.elements.size(); ++i)
            if (exact_equal(transported, twork.cert.idempotents.elements[i])) {
                match = static_cast<int>(i);
                break;
            }
        if (match < 0)
            throw witness_error("CenterMembershipFailed",
                                "transported idempotent is not primitive on the theta side");

        const RatMatrix& cd = dwork.block_cols[j];                       // k x dim
        const RatMatrix& ct = twork.block_cols[static_cast<size_t>(match)];
        EquivalenceWitness bw;
        bw.psi = w.psi;
        for (const auto& ind : induced) {
            const auto x = solve_linear(ct, RatMatrix(ind * cd));
            assert(x);  // phi_k maps the j-th delta summand onto the matched theta summand
            bw.phis.push_back(*x);
        }
        SummandPair pair{static_cast<int>(j),
                         match,
                         dwork.cert.blocks[j],
                         twork.cert.blocks[static_cast<size_t>(match)],
                         bw,
                         twork.cert.flags[static_cast<size_t>(match)].residue_degree,
                         std::nullopt};
        if (!verify_witness(pair.delta_block, pair.theta_block, bw))
            throw witness_error("InvalidWitness", "restricted block witness failed to verify");
        if (pair.residue_degree == 1)
            pair.normalized = normalize(pair.delta_block, pair.theta_block, bw,
                                        seed ^ (0x9e3779b97f4a7c15ULL + j));
        out.pairs.push_back(std::move(pair));
    }
    out.delta_cert = std::move(dwork.cert);
    out.theta_cert = std::move(twork.cert);
    return out;
}

}  // namespace centra
