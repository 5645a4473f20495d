#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "centra/center.hpp"
#include "centra/comalg.hpp"
#include "centra/multiform.hpp"

using namespace centra;

namespace {

RatMatrix e_mat(Index n, Index i, Index j) {
    RatMatrix m = rat_zero(n, n);
    m(i, j) = Rational(1);
    return m;
}

/// Q[eps]/(eps^k) as the algebra generated by the k x k nilpotent shift.
CommAlgebra truncated_poly_algebra(Index k) {
    RatMatrix shift = rat_zero(k, k);
    for (Index i = 0; i + 1 < k; ++i) shift(i, i + 1) = Rational(1);
    std::vector<RatMatrix> basis{rat_identity(k)};
    RatMatrix pw = rat_identity(k);
    for (Index t = 1; t < k; ++t) {
        pw = RatMatrix(pw * shift);
        basis.push_back(pw);
    }
    return CommAlgebra::from_matrix_span(basis);
}

/// Q x Q as diagonal 2 x 2 matrices.
CommAlgebra q_times_q() {
    return CommAlgebra::from_matrix_span({rat_identity(2), e_mat(2, 0, 0)});
}

/// Q(sqrt 2): span{I, M} with M^2 = 2I.
CommAlgebra q_sqrt2() {
    RatMatrix m = rat_zero(2, 2);
    m(0, 1) = Rational(2);
    m(1, 0) = Rational(1);
    return CommAlgebra::from_matrix_span({rat_identity(2), m});
}

MultiForm diag_cubes(Index n) {
    MultiForm f(n, 3, 1);
    for (Index i = 0; i < n; ++i) f.entry(0, {i, i, i}) = Rational(1);
    return f;
}

}  // namespace

TEST_CASE("from_matrix_span fixtures and error paths") {
    SUBCASE("Q x Q") {
        const CommAlgebra a = q_times_q();
        CHECK(a.dim() == 2);
        CHECK(a.radical().empty());
    }
    SUBCASE("dual numbers") {
        const CommAlgebra a = CommAlgebra::from_matrix_span({rat_identity(2), e_mat(2, 0, 1)});
        CHECK(a.dim() == 2);
        CHECK(a.radical().size() == 1);
    }
    SUBCASE("Q(sqrt 2): the generator squares to 2") {
        const CommAlgebra a = q_sqrt2();
        RatVector gen = rat_zero_vec(2);
        gen(1) = Rational(1);
        const RatVector sq = a.mul(gen, gen);
        CHECK(sq(0) == Rational(2));
        CHECK(sq(1).is_zero());
        CHECK(a.radical().empty());
    }
    SUBCASE("NotClosed: E12 + E23 escapes its two-element span") {
        RatMatrix n = rat_zero(3, 3);
        n(0, 1) = Rational(1);
        n(1, 2) = Rational(1);
        CHECK_THROWS_WITH_AS(CommAlgebra::from_matrix_span({rat_identity(3), n}),
                             doctest::Contains("NotClosed"), precondition_error);
    }
    SUBCASE("NotCommutative") {
        CHECK_THROWS_WITH_AS(
            CommAlgebra::from_matrix_span({rat_identity(2), e_mat(2, 0, 1), e_mat(2, 1, 0)}),
            doctest::Contains("NotCommutative"), precondition_error);
    }
    SUBCASE("NoIdentity") {
        CHECK_THROWS_WITH_AS(CommAlgebra::from_matrix_span({e_mat(2, 0, 1)}),
                             doctest::Contains("NoIdentity"), precondition_error);
    }
}

TEST_CASE("radical fixtures and nilpotency") {
    CHECK(q_times_q().radical().empty());
    CHECK(q_sqrt2().radical().empty());
    for (Index k = 2; k <= 4; ++k) {
        const CommAlgebra a = truncated_poly_algebra(k);
        const auto rad = a.radical();
        CHECK(static_cast<Index>(rad.size()) == k - 1);
        for (const auto& r : rad) {
            RatVector pw = a.one();
            for (Index t = 0; t < a.dim() + 1; ++t) pw = a.mul(pw, r);
            CHECK(is_exactly_zero(pw));
        }
    }
}

TEST_CASE("primitive idempotents fixtures") {
    SUBCASE("Q x Q splits into the two diagonal projectors") {
        const IdempotentSet s = primitive_idempotents(q_times_q(), 1);
        REQUIRE(s.elements.size() == 2);
        CHECK(exact_equal(s.elements[0] + s.elements[1], rat_identity(2)));
        for (const auto& e : s.elements) CHECK(exact_equal(e * e, e));
        CHECK(is_exactly_zero(s.elements[0] * s.elements[1]));
    }
    SUBCASE("a local algebra stays whole") {
        const IdempotentSet s = primitive_idempotents(truncated_poly_algebra(2), 1);
        REQUIRE(s.elements.size() == 1);
        CHECK(exact_equal(s.elements[0], rat_identity(2)));
    }
    SUBCASE("the center of x^3+y^3+z^3 yields the three coordinate projectors") {
        const CenterBasis cb = center_basis(diag_cubes(3));
        const CommAlgebra a = CommAlgebra::from_matrix_span(cb.basis);
        const IdempotentSet s = primitive_idempotents(a, 7);
        REQUIRE(s.elements.size() == 3);
        RatMatrix sum = rat_zero(3, 3);
        for (const auto& e : s.elements) {
            CHECK(exact_equal(e * e, e));
            CHECK(rank(e) == 1);
            sum += e;
        }
        CHECK(exact_equal(sum, rat_identity(3)));
        // they are exactly the diagonal projectors, in canonical order
        for (size_t i = 0; i < 3; ++i) {
            for (Index r = 0; r < 3; ++r)
                for (Index c = 0; c < 3; ++c)
                    if (!(r == c)) CHECK(s.elements[i](r, c).is_zero());
        }
    }
}

TEST_CASE("idempotent sets are seed-independent") {
    const CenterBasis cb = center_basis(diag_cubes(3));
    const CommAlgebra a = CommAlgebra::from_matrix_span(cb.basis);
    const IdempotentSet first = primitive_idempotents(a, 0);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const IdempotentSet s = primitive_idempotents(a, seed);
        REQUIRE(s.elements.size() == first.elements.size());
        for (size_t i = 0; i < s.elements.size(); ++i)
            CHECK(exact_equal(s.elements[i], first.elements[i]));
    }
}

TEST_CASE("idempotent_newton_lift") {
    SUBCASE("an exact idempotent is a fixed point") {
        const CommAlgebra a = q_times_q();
        const RatMatrix e = e_mat(2, 0, 0);
        CHECK(exact_equal(idempotent_newton_lift(e, a), e));
    }
    SUBCASE("the (1 + eps, 0) example lifts to (1, 0) in one step") {
        // Q[eps]/(eps^2) x Q inside 3x3 matrices
        RatMatrix u1 = rat_zero(3, 3), eps = rat_zero(3, 3), u2 = rat_zero(3, 3);
        u1(0, 0) = u1(1, 1) = Rational(1);
        eps(0, 1) = Rational(1);
        u2(2, 2) = Rational(1);
        const CommAlgebra a = CommAlgebra::from_matrix_span({u1, eps, u2});
        const RatMatrix lifted = idempotent_newton_lift(RatMatrix(u1 + eps), a);
        CHECK(exact_equal(lifted, u1));
    }
    SUBCASE("random radical perturbations converge") {
        const CommAlgebra a = truncated_poly_algebra(4);
        Rng rng(12);
        for (int t = 0; t < 10; ++t) {
            RatVector e0 = a.one();  // the only idempotents here are 0 and 1
            for (Index j = 1; j < 4; ++j) e0(j) = Rational(rng.between(-3, 3));
            const RatMatrix lifted = idempotent_newton_lift(a.to_matrix(e0), a);
            CHECK(exact_equal(lifted, rat_identity(4)));
        }
    }
    SUBCASE("a non-almost-idempotent is rejected") {
        const CommAlgebra a = q_times_q();
        CHECK_THROWS_AS(idempotent_newton_lift(RatMatrix(Rational(3) * rat_identity(2)), a),
                        precondition_error);
    }
}

TEST_CASE("is_local fixtures") {
    SUBCASE("Q(sqrt 2) is local with an irrational residue field") {
        const LocalityReport r = is_local(q_sqrt2(), 5);
        CHECK(r.local);
        CHECK(r.residue_degree == 2);
    }
    SUBCASE("dual numbers are local with rational residue") {
        const LocalityReport r =
            is_local(CommAlgebra::from_matrix_span({rat_identity(2), e_mat(2, 0, 1)}), 5);
        CHECK(r.local);
        CHECK(r.residue_degree == 1);
    }
    SUBCASE("Q x Q is not local") {
        CHECK(!is_local(q_times_q(), 5).local);
    }
}

TEST_CASE("dth_root_unit") {
    SUBCASE("the identity is its own root") {
        const CommAlgebra a = truncated_poly_algebra(3);
        CHECK(exact_equal(dth_root_unit(a, a.one(), 7), a.one()));
    }
    SUBCASE("cube root of 1 + eps in the dual numbers") {
        const CommAlgebra a = truncated_poly_algebra(2);
        RatVector u = a.one();
        u(1) = Rational(1);
        const RatVector b = dth_root_unit(a, u, 3);
        CHECK(b(0) == Rational(1));
        CHECK(b(1) == Rational(1, 3));
    }
    SUBCASE("square root of 1 + eps modulo eps^3 is 1 + eps/2 - eps^2/8") {
        const CommAlgebra a = truncated_poly_algebra(3);
        RatVector u = a.one();
        u(1) = Rational(1);
        const RatVector b = dth_root_unit(a, u, 2);
        CHECK(b(0) == Rational(1));
        CHECK(b(1) == Rational(1, 2));
        CHECK(b(2) == Rational(-1, 8));
        CHECK(exact_equal(a.mul(b, b), u));
    }
    SUBCASE("random unipotent units have exact roots for d in {3,4,5}") {
        Rng rng(55);
        for (Index k = 2; k <= 4; ++k) {
            const CommAlgebra a = truncated_poly_algebra(k);
            for (int d : {3, 4, 5}) {
                for (int t = 0; t < 4; ++t) {
                    RatVector u = a.one();
                    for (Index j = 1; j < k; ++j)
                        u(j) = Rational(rng.between(-9, 9), rng.between(1, 9));
                    const RatVector b = dth_root_unit(a, u, d);
                    CHECK(exact_equal(a.power(b, d), u));
                    // b is itself unipotent
                    CHECK(b(0) == Rational(1));
                }
            }
        }
    }
    SUBCASE("non-unipotent residues are rejected") {
        const CommAlgebra a = truncated_poly_algebra(2);
        CHECK_THROWS_WITH_AS(dth_root_unit(a, RatVector(Rational(2) * a.one()), 3),
                             doctest::Contains("NotUnipotentResidue"), precondition_error);
    }
}

TEST_CASE("residue_scalar") {
    const CommAlgebra a = truncated_poly_algebra(3);
    SUBCASE("scalar plus nilpotent") {
        RatVector u = RatVector(Rational(5) * a.one());
        u(1) = Rational(7);
        CHECK(residue_scalar(a, u) == Rational(5));
    }
    SUBCASE("identity and nilpotents") {
        CHECK(residue_scalar(a, a.one()) == Rational(1));
        RatVector nil = rat_zero_vec(3);
        nil(2) = Rational(4);
        CHECK(residue_scalar(a, nil) == Rational(0));
    }
    SUBCASE("multiplicative on units") {
        Rng rng(21);
        for (int t = 0; t < 10; ++t) {
            RatVector u = rat_zero_vec(3), v = rat_zero_vec(3);
            for (Index j = 0; j < 3; ++j) {
                u(j) = Rational(rng.between(-5, 5));
                v(j) = Rational(rng.between(-5, 5));
            }
            if (u(0).is_zero()) u(0) = Rational(1);
            if (v(0).is_zero()) v(0) = Rational(2);
            CHECK(residue_scalar(a, a.mul(u, v)) ==
                  residue_scalar(a, u) * residue_scalar(a, v));
        }
    }
    SUBCASE("irrational residues are rejected") {
        const CommAlgebra b = q_sqrt2();
        RatVector gen = rat_zero_vec(2);
        gen(1) = Rational(1);
        CHECK_THROWS_WITH_AS(residue_scalar(b, gen), doctest::Contains("ResidueNotRational"),
                             precondition_error);
    }
}

TEST_CASE("corner recursion handles a three-factor product with a field component") {
    // Q x Q x Q(sqrt2) inside 4x4 block-diagonal matrices
    RatMatrix b1 = rat_zero(4, 4), b2 = rat_zero(4, 4), b3 = rat_zero(4, 4);
    b1(0, 0) = Rational(1);
    b2(1, 1) = Rational(1);
    b3(2, 3) = Rational(2);
    b3(3, 2) = Rational(1);
    RatMatrix b4 = rat_zero(4, 4);
    b4(2, 2) = b4(3, 3) = Rational(1);
    const CommAlgebra a = CommAlgebra::from_matrix_span({b1, b2, b3, b4});
    const IdempotentSet s = primitive_idempotents(a, 17);
    CHECK(s.elements.size() == 3);  // the sqrt2 block stays together
    RatMatrix sum = rat_zero(4, 4);
    for (const auto& e : s.elements) sum += e;
    CHECK(exact_equal(sum, rat_identity(4)));
}
