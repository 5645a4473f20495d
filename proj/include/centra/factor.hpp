// Rational univariate factorization: content/primitive split, Yun squarefree
// decomposition, Berlekamp factoring mod a small prime, quadratic Hensel
// lifting to a Mignotte-height modulus, and subset recombination.
#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <numeric>
#include <vector>

#include "centra/rational.hpp"
#include "centra/unipoly.hpp"

namespace centra {

struct PolyFactor {
    UniPoly factor;  // monic irreducible over Q
    int multiplicity = 1;
};

namespace fdetail {

// ---------------------------------------------------------------- F_p layer

using ZPoly = std::vector<long>;  // ascending coefficients in [0, p)

inline void ztrim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline int zdeg(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

inline long mod_inv(long a, long p) {
    long t = 0, nt = 1, r = p, nr = a % p;
    if (nr < 0) nr += p;
    while (nr != 0) {
        const long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    assert(r == 1);
    return t < 0 ? t + p : t;
}

inline ZPoly zmul(const ZPoly& a, const ZPoly& b, long p) {
    if (a.empty() || b.empty()) return {};
    ZPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    ztrim(c);
    return c;
}

inline ZPoly zsub(ZPoly a, const ZPoly& b, long p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
    ztrim(a);
    return a;
}

inline std::pair<ZPoly, ZPoly> zdivmod(ZPoly a, const ZPoly& d, long p) {
    assert(!d.empty());
    const long inv = mod_inv(d.back(), p);
    ZPoly q(a.size() >= d.size() ? a.size() - d.size() + 1 : 0, 0);
    while (zdeg(a) >= zdeg(d)) {
        const int k = zdeg(a) - zdeg(d);
        const long f = (a.back() * inv) % p;
        q[static_cast<size_t>(k)] = f;
        for (size_t i = 0; i < d.size(); ++i) {
            const size_t ix = i + static_cast<size_t>(k);
            a[ix] = ((a[ix] - f * d[i]) % p + p) % p;
        }
        ztrim(a);
    }
    ztrim(q);
    return {q, a};
}

inline ZPoly zmonic(ZPoly f, long p) {
    if (f.empty()) return f;
    const long inv = mod_inv(f.back(), p);
    for (auto& c : f) c = (c * inv) % p;
    return f;
}

inline ZPoly zgcd(ZPoly a, ZPoly b, long p) {
    while (!b.empty()) {
        ZPoly r = zdivmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return zmonic(a, p);
}

inline ZPoly zderiv(const ZPoly& f, long p) {
    if (f.size() < 2) return {};
    ZPoly d(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) d[i - 1] = (f[i] * static_cast<long>(i % static_cast<size_t>(p))) % p;
    ztrim(d);
    return d;
}

/// x^e mod f over F_p.
inline ZPoly zpow_x(long e, const ZPoly& f, long p) {
    ZPoly base = zdivmod(ZPoly{0, 1}, f, p).second;
    ZPoly acc{1};
    while (e > 0) {
        if (e & 1) acc = zdivmod(zmul(acc, base, p), f, p).second;
        base = zdivmod(zmul(base, base, p), f, p).second;
        e >>= 1;
    }
    return acc;
}

/// Nullspace basis of an n x n matrix over F_p (rows as vectors).
inline std::vector<std::vector<long>> znullspace(std::vector<std::vector<long>> m, long p,
                                                 int n) {
    std::vector<int> pivot_of_col(static_cast<size_t>(n), -1);
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int piv = -1;
        for (int i = row; i < n; ++i)
            if (m[static_cast<size_t>(i)][static_cast<size_t>(col)] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(row)]);
        const long inv = mod_inv(m[static_cast<size_t>(row)][static_cast<size_t>(col)], p);
        for (int j = 0; j < n; ++j)
            m[static_cast<size_t>(row)][static_cast<size_t>(j)] =
                (m[static_cast<size_t>(row)][static_cast<size_t>(j)] * inv) % p;
        for (int i = 0; i < n; ++i) {
            if (i == row) continue;
            const long f = m[static_cast<size_t>(i)][static_cast<size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j < n; ++j) {
                long& x = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
                x = ((x - f * m[static_cast<size_t>(row)][static_cast<size_t>(j)]) % p + p) % p;
            }
        }
        pivot_of_col[static_cast<size_t>(col)] = row;
        ++row;
    }
    std::vector<std::vector<long>> basis;
    for (int free = 0; free < n; ++free) {
        if (pivot_of_col[static_cast<size_t>(free)] >= 0) continue;
        std::vector<long> v(static_cast<size_t>(n), 0);
        v[static_cast<size_t>(free)] = 1;
        for (int col = 0; col < n; ++col) {
            const int pr = pivot_of_col[static_cast<size_t>(col)];
            if (pr >= 0)
                v[static_cast<size_t>(col)] =
                    (p - m[static_cast<size_t>(pr)][static_cast<size_t>(free)]) % p;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Berlekamp factorization of a monic squarefree polynomial over F_p.
inline std::vector<ZPoly> berlekamp(const ZPoly& f, long p) {
    const int n = zdeg(f);
    if (n <= 1) return {f};
    // Petr matrix: row i = x^{i p} mod f.
    std::vector<std::vector<long>> q(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
    const ZPoly xp = zpow_x(p, f, p);
    ZPoly cur{1};
    for (int i = 0; i < n; ++i) {
        for (size_t j = 0; j < cur.size(); ++j) q[static_cast<size_t>(i)][j] = cur[j];
        cur = zdivmod(zmul(cur, xp, p), f, p).second;
    }
    // Berlekamp subalgebra = left nullspace of Q - I = nullspace of (Q - I)^T.
    std::vector<std::vector<long>> bt(static_cast<size_t>(n), std::vector<long>(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            long x = q[static_cast<size_t>(i)][static_cast<size_t>(j)] % p;
            if (i == j) x = ((x - 1) % p + p) % p;
            bt[static_cast<size_t>(j)][static_cast<size_t>(i)] = x;
        }
    const auto null_basis = znullspace(std::move(bt), p, n);
    const size_t r = null_basis.size();
    std::vector<ZPoly> factors{zmonic(f, p)};
    if (r <= 1) return factors;
    for (const auto& vraw : null_basis) {
        if (factors.size() >= r) break;
        ZPoly v = vraw;
        ztrim(v);
        if (zdeg(v) < 1) continue;  // the constant vector never splits
        for (long s = 0; s < p && factors.size() < r; ++s) {
            ZPoly vs = v;
            vs[0] = ((vs[0] - s) % p + p) % p;
            ztrim(vs);
            std::vector<ZPoly> next;
            for (auto& u : factors) {
                if (zdeg(u) <= 1) {
                    next.push_back(std::move(u));
                    continue;
                }
                ZPoly g = zgcd(u, vs, p);
                if (zdeg(g) > 0 && zdeg(g) < zdeg(u)) {
                    next.push_back(zmonic(zdivmod(u, g, p).first, p));
                    next.push_back(std::move(g));
                } else {
                    next.push_back(std::move(u));
                }
            }
            factors = std::move(next);
        }
    }
    assert(factors.size() == r);
    return factors;
}

// ------------------------------------------------------------ Z/p^k layer

using MPoly = std::vector<mpz_class>;  // ascending, reduced into [0, M)

inline void mtrim(MPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline int mdeg(const MPoly& f) { return static_cast<int>(f.size()) - 1; }

inline MPoly mreduce(MPoly f, const mpz_class& m) {
    for (auto& c : f) {
        c %= m;
        if (c < 0) c += m;
    }
    mtrim(f);
    return f;
}

inline MPoly mmul(const MPoly& a, const MPoly& b, const mpz_class& m) {
    if (a.empty() || b.empty()) return {};
    MPoly c(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    return mreduce(std::move(c), m);
}

inline MPoly madd(MPoly a, const MPoly& b, const mpz_class& m) {
    if (a.size() < b.size()) a.resize(b.size(), mpz_class(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return mreduce(std::move(a), m);
}

inline MPoly msub(MPoly a, const MPoly& b, const mpz_class& m) {
    if (a.size() < b.size()) a.resize(b.size(), mpz_class(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return mreduce(std::move(a), m);
}

/// Division with remainder by a monic divisor over Z/m.
inline std::pair<MPoly, MPoly> mdivmod(MPoly a, const MPoly& d, const mpz_class& m) {
    assert(!d.empty() && d.back() == 1);
    MPoly q(a.size() >= d.size() ? a.size() - d.size() + 1 : 0, mpz_class(0));
    while (mdeg(a) >= mdeg(d)) {
        const int k = mdeg(a) - mdeg(d);
        const mpz_class f = a.back();
        q[static_cast<size_t>(k)] = f;
        for (size_t i = 0; i < d.size(); ++i) {
            const size_t ix = i + static_cast<size_t>(k);
            a[ix] = ((a[ix] - f * d[i]) % m + m) % m;
        }
        mtrim(a);
    }
    return {mreduce(std::move(q), m), a};
}

struct HenselPair {
    MPoly g, h;  // monic cofactor pair
    MPoly s, t;  // Bezout data: s g + t h = 1 (mod modulus)
};

/// One quadratic lift step from modulus m to m_next, where m | m_next | m^2.
/// Capping m_next below m^2 lets the chain stop exactly at p^l.
inline HenselPair hensel_step(const MPoly& f, const HenselPair& in, const mpz_class& m_next) {
    const mpz_class& m2 = m_next;
    const MPoly e = msub(mreduce(f, m2), mmul(in.g, in.h, m2), m2);
    auto [q, r] = mdivmod(mmul(in.s, e, m2), in.h, m2);
    HenselPair out;
    out.g = madd(madd(in.g, mmul(in.t, e, m2), m2), mmul(q, in.g, m2), m2);
    out.h = madd(in.h, r, m2);
    const MPoly b = msub(madd(mmul(in.s, out.g, m2), mmul(in.t, out.h, m2), m2), MPoly{1}, m2);
    auto [c, d] = mdivmod(mmul(in.s, b, m2), out.h, m2);
    out.s = msub(in.s, d, m2);
    out.t = msub(msub(in.t, mmul(in.t, b, m2), m2), mmul(c, out.g, m2), m2);
    assert(!out.g.empty() && out.g.back() == 1 && !out.h.empty() && out.h.back() == 1);
    return out;
}

inline MPoly zpoly_to_mpoly(const ZPoly& f) {
    MPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    return r;
}

/// Lifts the coprime factorization f = prod(parts) from mod p to mod p^l
/// (balanced product tree, quadratic steps). f and all parts monic.
inline std::vector<MPoly> hensel_tree(const MPoly& f, const std::vector<ZPoly>& parts, long p,
                                      const mpz_class& pl) {
    if (parts.size() == 1) return {mreduce(f, pl)};
    const size_t half = parts.size() / 2;
    const std::vector<ZPoly> left(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<ZPoly> right(parts.begin() + static_cast<std::ptrdiff_t>(half), parts.end());
    ZPoly g0{1}, h0{1};
    for (const auto& u : left) g0 = zmul(g0, u, p);
    for (const auto& u : right) h0 = zmul(h0, u, p);
    // Bezout pair over F_p via extended Euclid.
    ZPoly r0 = g0, r1 = h0, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        auto [q, r2] = zdivmod(r0, r1, p);
        r0 = std::move(r1);
        r1 = std::move(r2);
        ZPoly s2 = zsub(s0, zmul(q, s1, p), p);
        s0 = std::move(s1);
        s1 = std::move(s2);
        ZPoly t2 = zsub(t0, zmul(q, t1, p), p);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    assert(zdeg(r0) == 0);
    const long inv = mod_inv(r0[0], p);
    for (auto& c : s0) c = (c * inv) % p;
    for (auto& c : t0) c = (c * inv) % p;

    HenselPair hp{zpoly_to_mpoly(g0), zpoly_to_mpoly(h0), zpoly_to_mpoly(s0), zpoly_to_mpoly(t0)};
    mpz_class m = p;
    while (m < pl) {
        mpz_class nxt = m * m;
        if (nxt > pl) nxt = pl;
        hp = hensel_step(f, hp, nxt);
        m = nxt;
    }
    hp.g = mreduce(hp.g, pl);
    hp.h = mreduce(hp.h, pl);
    assert(msub(mreduce(f, pl), mmul(hp.g, hp.h, pl), pl).empty());
    auto out = hensel_tree(hp.g, left, p, pl);
    auto rhs = hensel_tree(hp.h, right, p, pl);
    out.insert(out.end(), rhs.begin(), rhs.end());
    return out;
}

// ------------------------------------------------------------ Z[x] layer

/// Symmetric representative in (-m/2, m/2].
inline mpz_class symrep(const mpz_class& c, const mpz_class& m) {
    return 2 * c > m ? mpz_class(c - m) : c;
}

inline UniPoly mpoly_to_unipoly_sym(const MPoly& f, const mpz_class& m) {
    std::vector<Rational> c(f.size());
    for (size_t i = 0; i < f.size(); ++i) c[i] = Rational(symrep(f[i], m));
    return UniPoly(std::move(c));
}

inline mpz_class int_coeff(const UniPoly& f, int i) {
    const Rational c = f.coeff(i);
    assert(c.is_integer());
    return c.numerator();
}

inline bool is_prime_long(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline ZPoly unipoly_to_zpoly(const UniPoly& f, long p) {
    ZPoly r(static_cast<size_t>(f.degree()) + 1);
    for (int i = 0; i <= f.degree(); ++i) {
        mpz_class c = int_coeff(f, i) % p;
        if (c < 0) c += p;
        r[static_cast<size_t>(i)] = c.get_si();
    }
    ztrim(r);
    return r;
}

/// Content (gcd of coefficients, positive) of an integer polynomial.
inline mpz_class int_content(const UniPoly& f) {
    mpz_class g = 0;
    for (int i = 0; i <= f.degree(); ++i) {
        mpz_class c = ::abs(int_coeff(f, i));
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    return g;
}

inline UniPoly divide_by_integer(const UniPoly& f, const mpz_class& g) {
    std::vector<Rational> c(static_cast<size_t>(f.degree()) + 1);
    for (int i = 0; i <= f.degree(); ++i)
        c[static_cast<size_t>(i)] = f.coeff(i) / Rational(g);
    return UniPoly(std::move(c));
}

/// Zassenhaus on a monic squarefree integer polynomial; returns monic integer
/// irreducible factors.
inline std::vector<UniPoly> factor_monic_squarefree_int(const UniPoly& f) {
    const int n = f.degree();
    if (n == 1) return {f};
    long p = std::max<long>(n, 2);
    ZPoly fp;
    for (;;) {
        ++p;
        if (!is_prime_long(p)) continue;
        fp = unipoly_to_zpoly(f, p);
        if (zdeg(fp) != n) continue;
        const ZPoly g = zgcd(fp, zderiv(fp, p), p);
        if (zdeg(g) == 0) break;
    }
    const auto modular = berlekamp(zmonic(fp, p), p);
    if (modular.size() == 1) return {f};

    // Mignotte-style height bound for monic factors: 2^n * ||f||_2.
    mpz_class norm2 = 0;
    for (int i = 0; i <= n; ++i) {
        const mpz_class c = int_coeff(f, i);
        norm2 += c * c;
    }
    mpz_class bound = sqrt(norm2) + 1;
    bound <<= static_cast<unsigned>(n);
    mpz_class pl = p;
    while (pl < 2 * bound + 1) pl *= p;

    MPoly fm(static_cast<size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) fm[static_cast<size_t>(i)] = ((int_coeff(f, i) % pl) + pl) % pl;
    std::vector<MPoly> lifted = hensel_tree(fm, modular, p, pl);

    // Subset recombination with exact trial division.
    std::vector<UniPoly> found;
    std::vector<size_t> active(lifted.size());
    std::iota(active.begin(), active.end(), size_t{0});
    UniPoly rem = f;
    size_t take = 1;
    while (2 * take <= active.size()) {
        // enumerate subsets of `active` of size `take`
        std::vector<size_t> pick(take);
        std::iota(pick.begin(), pick.end(), size_t{0});
        bool found_here = false;
        for (;;) {
            MPoly cand{1};
            for (size_t i : pick) cand = mmul(cand, lifted[active[i]], pl);
            const UniPoly c = mpoly_to_unipoly_sym(cand, pl);
            if (rem.divmod(c).second.is_zero()) {
                found.push_back(c);
                rem = rem / c;
                std::vector<size_t> next_active;
                for (size_t i = 0; i < active.size(); ++i)
                    if (std::find(pick.begin(), pick.end(), i) == pick.end())
                        next_active.push_back(active[i]);
                active = std::move(next_active);
                found_here = true;
                break;
            }
            // next combination
            size_t i = take;
            while (i > 0 && pick[i - 1] == active.size() - take + (i - 1)) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (size_t j = i; j < take; ++j) pick[j] = pick[j - 1] + 1;
        }
        if (!found_here) ++take;
    }
    if (rem.degree() >= 1) found.push_back(rem);
    return found;
}

/// General leading coefficients via the classic monicizing substitution
/// F(x) = b^(n-1) f(x/b); factors map back through primitive parts.
inline std::vector<UniPoly> factor_primitive_squarefree_int(const UniPoly& f) {
    const int n = f.degree();
    const mpz_class b = int_coeff(f, n);
    assert(b > 0);
    if (n == 1) return {f};
    if (b == 1) return factor_monic_squarefree_int(f);
    std::vector<Rational> fc(static_cast<size_t>(n) + 1);
    fc[static_cast<size_t>(n)] = Rational(1);  // a_n = b contributes b * b^{-1} = 1
    mpz_class pw = 1;
    for (int i = n - 1; i >= 0; --i) {  // coefficient of x^i gets b^{n-1-i}
        fc[static_cast<size_t>(i)] = Rational(int_coeff(f, i) * pw);
        pw *= b;
    }
    std::vector<UniPoly> out;
    for (const auto& g : factor_monic_squarefree_int(UniPoly(std::move(fc)))) {
        // map back: h(x) = primitive part of g(b x)
        std::vector<Rational> hc(static_cast<size_t>(g.degree()) + 1);
        mpz_class bp = 1;
        for (int i = 0; i <= g.degree(); ++i) {
            hc[static_cast<size_t>(i)] = Rational(int_coeff(g, i) * bp);
            bp *= b;
        }
        UniPoly h{std::move(hc)};
        h = divide_by_integer(h, int_content(h));
        if (h.leading().sign() < 0) h = Rational(-1) * h;
        out.push_back(std::move(h));
    }
    return out;
}

}  // namespace fdetail

/// Full factorization over Q into monic irreducibles with multiplicities.
/// The product of factor^multiplicity equals monic(p) exactly.
inline std::vector<PolyFactor> factor_rationals(const UniPoly& p) {
    if (p.is_zero() || p.degree() < 1)
        throw std::domain_error("factor_rationals: need a nonzero polynomial of degree >= 1");
    const UniPoly f = p.monic();

    // Yun squarefree decomposition: f = prod a_i^i with a_i squarefree, coprime.
    std::vector<std::pair<UniPoly, int>> squarefree_parts;
    {
        const UniPoly fp = f.derivative();
        UniPoly g = gcd(f, fp);
        UniPoly c = f / g;
        UniPoly d = fp / g - c.derivative();
        for (int i = 1; c.degree() >= 1; ++i) {
            UniPoly a = gcd(c, d);
            if (a.degree() >= 1) squarefree_parts.emplace_back(a, i);
            c = c / a;
            d = d / a - c.derivative();
        }
    }

    std::vector<PolyFactor> out;
    for (const auto& [part, mult] : squarefree_parts) {
        // clear denominators -> primitive integer polynomial with positive lc
        mpz_class den_lcm = 1;
        for (int i = 0; i <= part.degree(); ++i) {
            const mpz_class d = part.coeff(i).denominator();
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
        }
        UniPoly z = Rational(den_lcm) * part;
        z = fdetail::divide_by_integer(z, fdetail::int_content(z));
        if (z.leading().sign() < 0) z = Rational(-1) * z;
        for (const auto& irr : fdetail::factor_primitive_squarefree_int(z))
            out.push_back({irr.monic(), mult});
    }
    std::sort(out.begin(), out.end(), [](const PolyFactor& a, const PolyFactor& b) {
        if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
        for (int i = a.factor.degree(); i >= 0; --i) {
            if (a.factor.coeff(i) < b.factor.coeff(i)) return true;
            if (b.factor.coeff(i) < a.factor.coeff(i)) return false;
        }
        return a.multiplicity < b.multiplicity;
    });
    return out;
}

}  // namespace centra
