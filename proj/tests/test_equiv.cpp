#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "centra/equiv.hpp"
#include "centra/multiform.hpp"
#include "centra/polyjet.hpp"
#include "oracles.hpp"

using namespace centra;

namespace {

MultiForm diag_cubes(Index n) {
    MultiForm f(n, 3, 1);
    for (Index i = 0; i < n; ++i) f.entry(0, {i, i, i}) = Rational(1);
    return f;
}

MultiForm scaled_cubes(std::initializer_list<long> coeffs, int d = 3) {
    MultiForm f(static_cast<Index>(coeffs.size()), d, 1);
    Index i = 0;
    for (long c : coeffs) {
        std::vector<Index> idx(static_cast<size_t>(d), i);
        f.entry(0, idx) = Rational(c);
        ++i;
    }
    return f;
}

MultiForm x2y_form() {  // center is the dual numbers Q[eps]/(eps^2)
    HomogPoly f(2, 3);
    f.set_coeff({2, 1}, Rational(1));
    return poly_to_form(f);
}

RatMatrix mat2(long a, long b, long c, long d) {
    RatMatrix m(2, 2);
    m(0, 0) = Rational(a);
    m(0, 1) = Rational(b);
    m(1, 0) = Rational(c);
    m(1, 1) = Rational(d);
    return m;
}

EquivalenceWitness identity_witness(Index n, int d, Index r = 1) {
    return {std::vector<RatMatrix>(static_cast<size_t>(d), rat_identity(n)), rat_identity(r)};
}

/// Delta defined by psi^{-1} Theta(phi_1 x ... x phi_d) with psi = identity.
MultiForm twisted_delta(const MultiForm& theta, const std::vector<RatMatrix>& phis) {
    return transform_modes(theta, phis);
}

}  // namespace

TEST_CASE("verify_witness basics") {
    const MultiForm theta = make_example_central(2, 3);
    SUBCASE("identity witness is valid") {
        CHECK(verify_witness(theta, theta, identity_witness(2, 3)));
    }
    SUBCASE("scalar-twisted slot maps stay valid because the twists are central") {
        const RatMatrix phi = mat2(1, 2, 1, 3);
        const std::vector<RatMatrix> phis{RatMatrix(Rational(2) * phi),
                                          RatMatrix(Rational(-1) * phi), phi};
        const MultiForm delta = twisted_delta(theta, phis);
        const EquivalenceWitness w{phis, rat_identity(1)};
        CHECK(verify_witness(delta, theta, w));
        // every reordering of the slot maps is also a witness
        std::vector<RatMatrix> perm{phis[2], phis[0], phis[1]};
        CHECK(verify_witness(delta, theta, {perm, rat_identity(1)}));
    }
    SUBCASE("dual-number center units give valid witnesses") {
        const MultiForm theta2 = x2y_form();
        RatMatrix z1 = rat_identity(2);
        z1(1, 0) = Rational(1);  // 1 + eps
        const RatMatrix phi = mat2(2, 1, 1, 1);
        const std::vector<RatMatrix> phis{RatMatrix(z1 * phi), phi, phi};
        const MultiForm delta = twisted_delta(theta2, phis);
        CHECK(verify_witness(delta, theta2, {phis, rat_identity(1)}));
    }
    SUBCASE("a perturbed slot map breaks the witness") {
        const RatMatrix phi = mat2(1, 2, 1, 3);
        std::vector<RatMatrix> phis(3, phi);
        const MultiForm delta = twisted_delta(theta, phis);
        phis[1](0, 0) += Rational(1);
        CHECK(!verify_witness(delta, theta, {phis, rat_identity(1)}));
    }
    SUBCASE("singular slot maps are rejected as invalid") {
        std::vector<RatMatrix> phis(3, mat2(1, 2, 2, 4));
        CHECK(!verify_witness(theta, theta, {phis, rat_identity(1)}));
    }
}

TEST_CASE("phi_ratios_in_center") {
    const MultiForm theta = make_example_central(2, 3);
    SUBCASE("equal slot maps give identity ratios") {
        const RatMatrix phi = mat2(1, 2, 1, 3);
        const auto ratios = phi_ratios_in_center(theta, {{phi, phi, phi}, rat_identity(1)});
        REQUIRE(ratios.size() == 3);
        for (const auto& a : ratios) CHECK(exact_equal(a, rat_identity(2)));
    }
    SUBCASE("scalar twists reappear as the ratios") {
        const RatMatrix phi = mat2(1, 2, 1, 3);
        const std::vector<RatMatrix> phis{RatMatrix(Rational(2) * phi),
                                          RatMatrix(Rational(3) * phi), phi};
        const auto ratios = phi_ratios_in_center(theta, {phis, rat_identity(1)});
        CHECK(exact_equal(ratios[0], rat_identity(2)));
        CHECK(exact_equal(ratios[1], RatMatrix(Rational(3, 2) * rat_identity(2))));
        CHECK(exact_equal(ratios[2], RatMatrix(Rational(1, 2) * rat_identity(2))));
    }
    SUBCASE("the cube-scaling witness certifies its diagonal ratios") {
        const MultiForm theta2 = diag_cubes(2);
        // both orders: the contract pins a_i = phi_i phi_1^{-1}
        const auto r1 = phi_ratios_in_center(
            theta2, {{mat2(8, 0, 0, 1), rat_identity(2), rat_identity(2)}, rat_identity(1)});
        CHECK(exact_equal(r1[0], rat_identity(2)));
        CHECK(exact_equal(r1[1], mat2(1, 0, 0, 8) * RatMatrix(Rational(1, 8) * rat_identity(2))));
        const auto r2 = phi_ratios_in_center(
            theta2, {{rat_identity(2), rat_identity(2), mat2(8, 0, 0, 1)}, rat_identity(1)});
        CHECK(exact_equal(r2[2], mat2(8, 0, 0, 1)));
    }
    SUBCASE("non-central ratios are refused") {
        const MultiForm theta2 = diag_cubes(2);
        const RatMatrix mix = mat2(1, 1, 0, 1);
        CHECK_THROWS_WITH_AS(
            phi_ratios_in_center(theta2, {{mix, rat_identity(2), rat_identity(2)}, rat_identity(1)}),
            doctest::Contains("CenterMembershipFailed"), witness_error);
    }
}

TEST_CASE("transport_center") {
    const MultiForm theta = diag_cubes(2);
    SUBCASE("identity witness transports identically") {
        const auto tr = transport_center(theta, theta, identity_witness(2, 3));
        REQUIRE(tr.delta_basis.size() == 2);
        for (size_t i = 0; i < tr.delta_basis.size(); ++i)
            CHECK(exact_equal(tr.delta_basis[i], tr.theta_images[i]));
    }
    SUBCASE("a congruence conjugates the center") {
        Rng rng(7);
        const RatMatrix p = oracles::random_unimodular(2, 6, 2, rng);
        const MultiForm delta = congruence_transform(theta, p);
        const auto tr =
            transport_center(theta, delta, {{p, p, p}, rat_identity(1)});
        CHECK(tr.delta_basis.size() == 2);
        CHECK(tr.theta_images.size() == 2);
        for (const auto& img : tr.theta_images) CHECK(satisfies_center_equations(theta, img));
    }
}

TEST_CASE("normalize") {
    SUBCASE("identity witness normalizes trivially") {
        const MultiForm theta = make_example_central(2, 3);
        const NormalizedEquivalence nz = normalize(theta, theta, identity_witness(2, 3), 0);
        CHECK(nz.scalar == Rational(1));
        CHECK(exact_equal(nz.phi, rat_identity(2)));
        CHECK(exact_equal(nz.root, rat_identity(2)));
    }
    SUBCASE("scalar twists on a central form") {
        const MultiForm theta = make_example_central(2, 3);
        const RatMatrix phi = mat2(1, 2, 1, 3);
        const std::vector<RatMatrix> phis{RatMatrix(Rational(2) * phi),
                                          RatMatrix(Rational(3) * phi),
                                          RatMatrix(Rational(-1) * phi)};
        const MultiForm delta = twisted_delta(theta, phis);
        const NormalizedEquivalence nz =
            normalize(delta, theta, {phis, rat_identity(1)}, 0);
        // pi = a_1 a_2 a_3 = (3/2)(-1/2) I, residue -3/4, unipotent part = 1
        CHECK(nz.scalar == Rational(-3, 4));
        CHECK(exact_equal(nz.root, rat_identity(2)));
        CHECK(exact_equal(nz.phi, phis[0]));
    }
    SUBCASE("dual-number twist needs a genuine Hensel root") {
        const MultiForm theta = x2y_form();
        RatMatrix z1 = rat_identity(2);
        z1(1, 0) = Rational(1);
        const RatMatrix phi = mat2(2, 1, 1, 1);
        const std::vector<RatMatrix> phis{RatMatrix(z1 * phi), phi, phi};
        const MultiForm delta = twisted_delta(theta, phis);
        const NormalizedEquivalence nz =
            normalize(delta, theta, {phis, rat_identity(1)}, 0);
        CHECK(nz.scalar == Rational(1));
        // root^3 = pi = z1^{-2} = I - 2 eps
        RatMatrix pi = rat_identity(2);
        pi(1, 0) = Rational(-2);
        CHECK(exact_equal(nz.root * nz.root * nz.root, pi));
        RatMatrix expected_root = rat_identity(2);
        expected_root(1, 0) = Rational(-2, 3);
        CHECK(exact_equal(nz.root, expected_root));
    }
    SUBCASE("even order with a negative scalar: a = c < 0") {
        MultiForm theta(1, 4, 1), delta(1, 4, 1);
        theta.entry(0, {0, 0, 0, 0}) = Rational(1);
        delta.entry(0, {0, 0, 0, 0}) = Rational(-1);
        RatMatrix minus(1, 1), one(1, 1);
        minus(0, 0) = Rational(-1);
        one(0, 0) = Rational(1);
        const NormalizedEquivalence nz =
            normalize(delta, theta, {{minus, one, one, one}, one}, 0);
        CHECK(nz.scalar == Rational(-1));
        CHECK(nz.scalar.sign() < 0);
    }
    SUBCASE("irrational residue fields are refused") {
        HomogPoly f(2, 3);
        f.set_coeff({3, 0}, Rational(1));
        f.set_coeff({1, 2}, Rational(6));
        const MultiForm theta = poly_to_form(f);
        CHECK_THROWS_WITH_AS(normalize(theta, theta, identity_witness(2, 3), 0),
                             doctest::Contains("NotAbsolutelyIndecomposable"),
                             precondition_error);
    }
    SUBCASE("an invalid witness is refused up front") {
        const MultiForm theta = make_example_central(2, 3);
        auto w = identity_witness(2, 3);
        w.phis[0](0, 1) += Rational(1);
        CHECK_THROWS_AS(normalize(theta, theta, w, 0), witness_error);
    }
}

TEST_CASE("match_summands") {
    SUBCASE("identity witness on x^3 + y^3: two one-dimensional pairs") {
        const MultiForm f = diag_cubes(2);
        const SummandMatching m = match_summands(f, f, identity_witness(2, 3), 0);
        CHECK(m.radical_dim == 0);
        REQUIRE(m.pairs.size() == 2);
        for (const auto& p : m.pairs) {
            CHECK(p.delta_index == p.theta_index);
            CHECK(p.residue_degree == 1);
            REQUIRE(p.normalized);
            CHECK(p.normalized->scalar == Rational(1));
        }
    }
    SUBCASE("the cube-scaling fixture: 8x^3 pairs with x^3 through the ratio 8") {
        const MultiForm theta = diag_cubes(2);            // x^3 + y^3
        const MultiForm delta = scaled_cubes({8, 1});     // 8x^3 + y^3
        const EquivalenceWitness w{{mat2(8, 0, 0, 1), rat_identity(2), rat_identity(2)},
                                   rat_identity(1)};
        REQUIRE(verify_witness(delta, theta, w));
        const SummandMatching m = match_summands(delta, theta, w, 0);
        REQUIRE(m.pairs.size() == 2);
        // blocks sort by content: delta block 0 = [1] (the y cube), block 1 = [8]
        const auto& py = m.pairs[0];
        const auto& px = m.pairs[1];
        CHECK(py.delta_block.entry(0, {0, 0, 0}) == Rational(1));
        CHECK(px.delta_block.entry(0, {0, 0, 0}) == Rational(8));
        REQUIRE(py.normalized);
        REQUIRE(px.normalized);
        CHECK(py.normalized->scalar == Rational(1));
        // contract: a = residue of a_1 a_2 a_3 = 1/64; the canonical block
        // ratio a * content(phi)^3 recovers 8 = 2^3
        CHECK(px.normalized->scalar == Rational(1, 64));
        CHECK(px.normalized->phi(0, 0) == Rational(8));
        // per-pair certificate identity, re-checked here
        for (const auto& p : m.pairs) {
            const MultiForm lhs = apply_target(p.delta_block, w.psi);
            const MultiForm rhs =
                p.normalized->scalar *
                transform_modes(p.theta_block,
                                std::vector<RatMatrix>(3, p.normalized->phi));
            CHECK(lhs == rhs);
        }
    }
    SUBCASE("scrambled sums with a congruence witness pair bijectively") {
        Rng rng(99);
        const MultiForm base = direct_sum(make_example_central(2, 3), diag_cubes(2));
        const MultiForm theta =
            congruence_transform(base, oracles::random_unimodular(4, 8, 2, rng));
        const RatMatrix phi = oracles::random_unimodular(4, 8, 2, rng);
        const MultiForm delta = congruence_transform(theta, phi);
        const SummandMatching m =
            match_summands(delta, theta, {{phi, phi, phi, }, rat_identity(1)}, 4);
        REQUIRE(m.pairs.size() == 3);
        std::vector<bool> hit(3, false);
        for (const auto& p : m.pairs) {
            CHECK(p.delta_block.dim() == p.theta_block.dim());
            CHECK(!hit[static_cast<size_t>(p.theta_index)]);
            hit[static_cast<size_t>(p.theta_index)] = true;
            REQUIRE(p.normalized);
        }
    }
    SUBCASE("radical blocks are matched by dimension") {
        Rng rng(123);
        const MultiForm base = direct_sum(diag_cubes(2), MultiForm::zero(1, 3));
        const RatMatrix p = oracles::random_unimodular(3, 8, 2, rng);
        const MultiForm theta = congruence_transform(base, p);
        const RatMatrix phi = oracles::random_unimodular(3, 8, 2, rng);
        const MultiForm delta = congruence_transform(theta, phi);
        const SummandMatching m =
            match_summands(delta, theta, {{phi, phi, phi}, rat_identity(1)}, 4);
        CHECK(m.radical_dim == 1);
        CHECK(m.pairs.size() == 2);
    }
    SUBCASE("sqrt(2)-residue blocks pair but stay unnormalized") {
        HomogPoly f(2, 3);
        f.set_coeff({3, 0}, Rational(1));
        f.set_coeff({1, 2}, Rational(6));
        const MultiForm theta = poly_to_form(f);
        const SummandMatching m = match_summands(theta, theta, identity_witness(2, 3), 0);
        REQUIRE(m.pairs.size() == 1);
        CHECK(m.pairs[0].residue_degree == 2);
        CHECK(!m.pairs[0].normalized);
    }
    SUBCASE("pairing agrees when transported through a different slot map") {
        const MultiForm theta = diag_cubes(3);
        Rng rng(17);
        const RatMatrix phi = oracles::random_unimodular(3, 8, 2, rng);
        const std::vector<RatMatrix> phis{RatMatrix(Rational(2) * phi), phi,
                                          RatMatrix(Rational(3) * phi)};
        const MultiForm delta = twisted_delta(theta, phis);
        const EquivalenceWitness w{phis, rat_identity(1)};
        const SummandMatching m = match_summands(delta, theta, w, 0);
        // recompute the pairing through phi_2 by hand; it must agree
        const auto dcert = decompose(delta, 0);
        const auto tcert = decompose(theta, 0 ^ 0xa5b35705f29c1e08ULL);
        const RatMatrix inv2 = *inverse(phis[1]);
        for (const auto& p : m.pairs) {
            const RatMatrix transported =
                phis[1] * dcert.idempotents.elements[static_cast<size_t>(p.delta_index)] * inv2;
            CHECK(exact_equal(transported,
                              tcert.idempotents.elements[static_cast<size_t>(p.theta_index)]));
        }
    }
    SUBCASE("invalid witnesses are rejected") {
        const MultiForm f = diag_cubes(2);
        auto w = identity_witness(2, 3);
        w.phis[2](0, 1) = Rational(5);
        CHECK_THROWS_AS(match_summands(f, f, w, 0), witness_error);
    }
}

TEST_CASE("vector-valued maps with a nontrivial target map") {
    // two stacked components on n = 2: the diagonal cubes and x^2 y; their
    // centers intersect in the scalars, so the map is central
    const MultiForm cubes = diag_cubes(2);
    const MultiForm x2y = x2y_form();
    MultiForm theta(2, 3, 2);
    for (Index i = 0; i < theta.entries_per_component(); ++i) {
        theta.entry_flat(0, i) = cubes.entry_flat(0, i);
        theta.entry_flat(1, i) = x2y.entry_flat(0, i);
    }
    REQUIRE(is_nondegenerate(theta));
    REQUIRE(center_basis(theta).dim() == 1);

    Rng rng(4242);
    const RatMatrix phi = oracles::random_unimodular(2, 6, 2, rng);
    const std::vector<RatMatrix> phis{RatMatrix(Rational(2) * phi),
                                      RatMatrix(Rational(-3) * phi), phi};
    RatMatrix psi = rat_identity(2);
    psi(0, 1) = Rational(1);  // shear on the target space

    // delta := psi^{-1} . theta(phi_1 x phi_2 x phi_3), so psi delta = theta(...)
    const MultiForm delta = apply_target(transform_modes(theta, phis), *inverse(psi));
    const EquivalenceWitness w{phis, psi};
    REQUIRE(verify_witness(delta, theta, w));

    const auto ratios = phi_ratios_in_center(theta, w);
    CHECK(exact_equal(ratios[1], RatMatrix(Rational(-3, 2) * rat_identity(2))));

    const NormalizedEquivalence nz = normalize(delta, theta, w, 1);
    // pi = (-3/2)(1/2) I = -3/4 I
    CHECK(nz.scalar == Rational(-3, 4));
    const MultiForm lhs = apply_target(delta, psi);
    const MultiForm rhs =
        nz.scalar * transform_modes(theta, std::vector<RatMatrix>(3, nz.phi));
    CHECK(lhs == rhs);

    const SummandMatching m = match_summands(delta, theta, w, 2);
    REQUIRE(m.pairs.size() == 1);
    CHECK(m.pairs[0].normalized);
}

TEST_CASE("decomposable vector-valued maps split with their targets intact") {
    // components x^3 + y^3 and x^3 - y^3 share the diagonal center: Q x Q
    MultiForm theta(2, 3, 2);
    theta.entry(0, {0, 0, 0}) = Rational(1);
    theta.entry(0, {1, 1, 1}) = Rational(1);
    theta.entry(1, {0, 0, 0}) = Rational(1);
    theta.entry(1, {1, 1, 1}) = Rational(-1);
    const DecompositionCertificate cert = decompose(theta, 11);
    CHECK(cert.block_dims == std::vector<Index>({1, 1}));
    CHECK(cert.radical_dim == 0);
    CHECK(verify_certificate(theta, cert));
    for (const auto& b : cert.blocks) CHECK(b.target_dim() == 2);
    // matching a twisted copy pairs both summands
    Rng rng(5);
    const RatMatrix phi = oracles::random_unimodular(2, 6, 2, rng);
    const MultiForm delta = transform_modes(theta, {phi, phi, phi});
    const SummandMatching m =
        match_summands(delta, theta, {{phi, phi, phi}, rat_identity(2)}, 3);
    CHECK(m.pairs.size() == 2);
    for (const auto& p : m.pairs) {
        REQUIRE(p.normalized);
        CHECK(p.normalized->scalar == Rational(1));
    }
}
