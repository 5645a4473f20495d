// Univariate polynomial arithmetic over the rationals.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "centra/rational.hpp"

namespace centra {

/// Polynomial over Q, coefficients ascending by degree, trailing zeros trimmed.
/// The zero polynomial has an empty coefficient list and degree() == -1.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
    UniPoly(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }

    static UniPoly zero() { return UniPoly(); }
    static UniPoly constant(const Rational& a) { return UniPoly({a}); }
    static UniPoly one() { return constant(Rational(1)); }
    /// t^k monomial with coefficient a.
    static UniPoly monomial(const Rational& a, int k) {
        std::vector<Rational> c(static_cast<size_t>(k) + 1, Rational(0));
        c.back() = a;
        return UniPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(i)]
                                                           : Rational(0);
    }
    Rational leading() const { return is_zero() ? Rational(0) : c_.back(); }

    UniPoly monic() const {
        if (is_zero()) return *this;
        UniPoly r = *this;
        const Rational lc = leading();
        for (auto& x : r.c_) x /= lc;
        return r;
    }

    Rational operator()(const Rational& x) const {
        Rational acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    UniPoly derivative() const {
        if (degree() < 1) return zero();
        std::vector<Rational> d(c_.size() - 1);
        for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
        return UniPoly(std::move(d));
    }

    UniPoly operator-() const {
        UniPoly r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend UniPoly operator+(const UniPoly& a, const UniPoly& b) {
        std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()), Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return UniPoly(std::move(c));
    }
    friend UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }
    friend UniPoly operator*(const UniPoly& a, const UniPoly& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return UniPoly(std::move(c));
    }
    friend UniPoly operator*(const Rational& s, const UniPoly& p) {
        UniPoly r = p;
        for (auto& x : r.c_) x *= s;
        r.trim();
        return r;
    }

    friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const UniPoly& a, const UniPoly& b) { return !(a == b); }

    /// Euclidean division: *this = q * d + r with deg r < deg d.
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
        if (d.is_zero()) throw std::domain_error("UniPoly: division by zero polynomial");
        UniPoly r = *this;
        std::vector<Rational> q(
            degree() >= d.degree() ? static_cast<size_t>(degree() - d.degree()) + 1 : 0,
            Rational(0));
        const Rational lc = d.leading();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            const int k = r.degree() - d.degree();
            const Rational f = r.leading() / lc;
            q[static_cast<size_t>(k)] = f;
            for (int i = 0; i <= d.degree(); ++i)
                r.c_[static_cast<size_t>(i + k)] -= f * d.c_[static_cast<size_t>(i)];
            r.trim();
        }
        return {UniPoly(std::move(q)), r};
    }
    UniPoly operator/(const UniPoly& d) const { return divmod(d).first; }
    UniPoly operator%(const UniPoly& d) const { return divmod(d).second; }

    std::string str(const std::string& var = "t") const {
        if (is_zero()) return "0";
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            const Rational& a = c_[static_cast<size_t>(i)];
            if (a.is_zero()) continue;
            if (!s.empty()) s += a.sign() > 0 ? " + " : " - ";
            else if (a.sign() < 0) s += "-";
            const Rational m = abs(a);
            if (i == 0 || !m.is_one()) s += m.str();
            if (i > 0) {
                if (!m.is_one()) s += "*";
                s += var;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    std::vector<Rational> c_;
};

/// Monic gcd. gcd(0, 0) is rejected; gcd(p, 0) = monic(p).
inline UniPoly gcd(UniPoly a, UniPoly b) {
    if (a.is_zero() && b.is_zero())
        throw std::domain_error("UniPoly gcd: both arguments zero");
    while (!b.is_zero()) {
        UniPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

/// Extended Euclid: returns (g, u, v) with u*a + v*b = g = monic gcd.
inline std::tuple<UniPoly, UniPoly, UniPoly> ext_gcd(const UniPoly& a, const UniPoly& b) {
    UniPoly r0 = a, r1 = b;
    UniPoly u0 = UniPoly::one(), u1 = UniPoly::zero();
    UniPoly v0 = UniPoly::zero(), v1 = UniPoly::one();
    while (!r1.is_zero()) {
        auto [q, r2] = r0.divmod(r1);
        r0 = std::move(r1);
        r1 = std::move(r2);
        UniPoly u2 = u0 - q * u1;
        u0 = std::move(u1);
        u1 = std::move(u2);
        UniPoly v2 = v0 - q * v1;
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    if (r0.is_zero()) throw std::domain_error("UniPoly ext_gcd: both arguments zero");
    const Rational lc = r0.leading();
    const Rational inv = Rational(1) / lc;
    return {inv * r0, inv * u0, inv * v0};
}

inline UniPoly lcm(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly::zero();
    return ((a * b) / gcd(a, b)).monic();
}

/// p / gcd(p, p'), monic: the product of the distinct irreducible factors.
inline UniPoly squarefree_part(const UniPoly& p) {
    if (p.is_zero()) throw std::domain_error("squarefree_part: zero polynomial");
    if (p.degree() == 0) return UniPoly::one();
    return (p / gcd(p, p.derivative())).monic();
}

/// For pairwise coprime f_1,...,f_s with product mu, returns h_1,...,h_s with
/// h_i = 1 mod f_i, h_i = 0 mod f_j (j != i), deg h_i < deg mu. These are the
/// idempotent generators of the factor decomposition of Q[t]/(mu).
inline std::vector<UniPoly> crt_idempotent_polys(const std::vector<UniPoly>& factors) {
    if (factors.empty())
        throw std::domain_error("crt_idempotent_polys: empty factor list");
    if (factors.size() == 1) return {UniPoly::one()};
    UniPoly mu = UniPoly::one();
    for (const auto& f : factors) mu = mu * f;
    std::vector<UniPoly> hs;
    hs.reserve(factors.size());
    for (const auto& f : factors) {
        const UniPoly cof = mu / f;
        auto [g, u, v] = ext_gcd(cof, f);
        if (g.degree() != 0)
            throw std::domain_error("crt_idempotent_polys: factors not pairwise coprime");
        // u*cof = 1 mod f and = 0 mod every other factor.
        hs.push_back((u * cof) % mu);
    }
    return hs;
}

}  // namespace centra
