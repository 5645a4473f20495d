#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "centra/factor.hpp"
#include "centra/rng.hpp"
#include "centra/unipoly.hpp"
#include "oracles.hpp"

using namespace centra;

namespace {

UniPoly poly(std::initializer_list<long> ascending) {
    std::vector<Rational> c;
    for (long v : ascending) c.emplace_back(v);
    return UniPoly(std::move(c));
}

UniPoly product_of_factors(const std::vector<PolyFactor>& fs) {
    UniPoly p = UniPoly::one();
    for (const auto& [f, m] : fs)
        for (int i = 0; i < m; ++i) p = p * f;
    return p;
}

bool has_rational_root(const UniPoly& f) {
    // rational root theorem over the integer rescaling of f
    mpz_class lcm = 1;
    for (int i = 0; i <= f.degree(); ++i)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), f.coeff(i).denominator().get_mpz_t());
    const UniPoly g = Rational(lcm) * f;
    const mpz_class a0 = g.coeff(0).numerator(), an = g.coeff(g.degree()).numerator();
    if (a0 == 0) return true;
    for (const auto& p : oracles::signed_divisors(a0))
        for (const auto& q : oracles::signed_divisors(an))
            if (q > 0 && g(Rational(p, q)).is_zero()) return true;
    return false;
}

}  // namespace

TEST_CASE("gcd fixtures") {
    CHECK(gcd(poly({-1, 0, 1}), poly({1, -2, 1})) == poly({-1, 1}));  // t-1
    CHECK(gcd(poly({2, 4}), UniPoly::zero()) == poly({2, 4}).monic());
    CHECK(gcd(poly({1, 0, 1}), poly({-1, 1})) == UniPoly::one());
    CHECK_THROWS_AS(gcd(UniPoly::zero(), UniPoly::zero()), std::domain_error);
}

TEST_CASE("squarefree_part fixtures") {
    CHECK(squarefree_part(poly({0, 0, -1, 1})) == poly({0, -1, 1}));  // t^2(t-1) -> t(t-1)
    CHECK(squarefree_part(poly({0, 0, 0, 1})) == poly({0, 1}));       // t^3 -> t
    const UniPoly sf = poly({2, 0, 2});                               // 2t^2+2, squarefree
    CHECK(squarefree_part(sf) == sf.monic());
}

TEST_CASE("factor_rationals fixtures") {
    SUBCASE("t^2 - 1") {
        const auto fs = factor_rationals(poly({-1, 0, 1}));
        REQUIRE(fs.size() == 2);
        CHECK(fs[0].factor == poly({-1, 1}));
        CHECK(fs[1].factor == poly({1, 1}));
        CHECK(fs[0].multiplicity == 1);
        CHECK(fs[1].multiplicity == 1);
    }
    SUBCASE("t^2 + 1 stays irreducible") {
        const auto fs = factor_rationals(poly({1, 0, 1}));
        REQUIRE(fs.size() == 1);
        CHECK(fs[0].factor == poly({1, 0, 1}));
    }
    SUBCASE("t^4 - 4 against the Kronecker oracle") {
        const UniPoly f = poly({-4, 0, 0, 0, 1});
        const auto fs = factor_rationals(f);
        REQUIRE(fs.size() == 2);
        CHECK(fs[0].factor == poly({-2, 0, 1}));
        CHECK(fs[1].factor == poly({2, 0, 1}));
        const auto oracle = oracles::kronecker_factor(f);
        REQUIRE(oracle.size() == fs.size());
        for (size_t i = 0; i < oracle.size(); ++i) {
            CHECK(oracle[i].first == fs[i].factor);
            CHECK(oracle[i].second == fs[i].multiplicity);
        }
    }
    SUBCASE("non-monic with content") {
        const auto fs = factor_rationals(poly({-6, 0, 0, 0, 6}));  // 6t^4 - 6
        CHECK(product_of_factors(fs) == poly({-1, 0, 0, 0, 1}));
        CHECK(fs.size() == 3);  // (t-1)(t+1)(t^2+1)
    }
    SUBCASE("two close quartic factors") {
        const UniPoly f = poly({1, 1, 1}) * poly({2, 1, 1});  // (t^2+t+1)(t^2+t+2)
        const auto fs = factor_rationals(f);
        REQUIRE(fs.size() == 2);
        CHECK(product_of_factors(fs) == f.monic());
    }
    SUBCASE("high multiplicities") {
        const UniPoly f =
            poly({-2, 1}) * poly({-2, 1}) * poly({-2, 1}) * poly({1, 0, 1}) * poly({1, 0, 1});
        const auto fs = factor_rationals(f);
        REQUIRE(fs.size() == 2);
        CHECK(fs[0].factor == poly({-2, 1}));
        CHECK(fs[0].multiplicity == 3);
        CHECK(fs[1].factor == poly({1, 0, 1}));
        CHECK(fs[1].multiplicity == 2);
    }
    SUBCASE("degree-8 stress through the hensel tree") {
        UniPoly f = UniPoly::one();
        for (long r = 1; r <= 4; ++r) f = f * poly({-r, 1});
        f = f * poly({1, 1, 1}) * poly({3, 0, 1});
        const auto fs = factor_rationals(f);
        CHECK(fs.size() == 6);
        CHECK(product_of_factors(fs) == f.monic());
    }
}

TEST_CASE("crt_idempotent_polys fixtures") {
    SUBCASE("pair t-1, t+1") {
        const auto hs = crt_idempotent_polys({poly({-1, 1}), poly({1, 1})});
        REQUIRE(hs.size() == 2);
        CHECK(hs[0] == UniPoly({Rational(1, 2), Rational(1, 2)}));   // (t+1)/2
        CHECK(hs[1] == UniPoly({Rational(1, 2), Rational(-1, 2)})); // -(t-1)/2
    }
    SUBCASE("single factor") {
        const auto hs = crt_idempotent_polys({poly({3, 0, 1})});
        REQUIRE(hs.size() == 1);
        CHECK(hs[0] == UniPoly::one());
    }
    SUBCASE("t, t-1, t+1: three quadratics with the 1/0 root pattern") {
        const std::vector<UniPoly> fs{poly({0, 1}), poly({-1, 1}), poly({1, 1})};
        const auto hs = crt_idempotent_polys(fs);
        REQUIRE(hs.size() == 3);
        UniPoly sum = UniPoly::zero();
        const Rational roots[3] = {Rational(0), Rational(1), Rational(-1)};
        for (size_t i = 0; i < 3; ++i) {
            CHECK(hs[i].degree() == 2);
            sum = sum + hs[i];
            for (size_t j = 0; j < 3; ++j)
                CHECK(hs[i](roots[j]) == (i == j ? Rational(1) : Rational(0)));
        }
        CHECK(sum == UniPoly::one());
    }
}

TEST_CASE("crt identities modulo the product") {
    const std::vector<UniPoly> fs{poly({-1, 1}), poly({1, 0, 1}), poly({3, 1})};
    UniPoly mu = UniPoly::one();
    for (const auto& f : fs) mu = mu * f;
    const auto hs = crt_idempotent_polys(fs);
    UniPoly sum = UniPoly::zero();
    for (const auto& h : hs) sum = sum + h;
    CHECK((sum - UniPoly::one()) % mu == UniPoly::zero());
    for (size_t i = 0; i < hs.size(); ++i) {
        CHECK(((hs[i] * hs[i] - hs[i]) % mu) == UniPoly::zero());
        for (size_t j = i + 1; j < hs.size(); ++j)
            CHECK((hs[i] * hs[j]) % mu == UniPoly::zero());
    }
}

TEST_CASE("factorization properties on random inputs") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const int deg = static_cast<int>(rng.between(1, 4));
        std::vector<Rational> c(static_cast<size_t>(deg) + 1);
        for (auto& x : c) x = Rational(rng.between(-20, 20));
        if (c.back().is_zero()) c.back() = Rational(1);
        const UniPoly f{std::vector<Rational>(c)};
        const auto fs = factor_rationals(f);
        CHECK(product_of_factors(fs) == f.monic());
        for (const auto& [g, m] : fs)
            if (g.degree() >= 2) CHECK(!has_rational_root(g));
        const auto oracle = oracles::kronecker_factor(f);
        REQUIRE(oracle.size() == fs.size());
        for (size_t i = 0; i < fs.size(); ++i) {
            CHECK(oracle[i].first == fs[i].factor);
            CHECK(oracle[i].second == fs[i].multiplicity);
        }
    }
}

TEST_CASE("factor_rationals rejects bad input") {
    CHECK_THROWS_AS(factor_rationals(UniPoly::zero()), std::domain_error);
    CHECK_THROWS_AS(factor_rationals(UniPoly::constant(Rational(5))), std::domain_error);
}
