// Homogeneous polynomials over Q: symmetric-form conversion, partials,
// Hessian centers, Jacobian-span transitions, and the constructive
// reconstruction of the linear change of variables from equal Jacobian spans.
#pragma once

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>
#include <vector>

#include "centra/center.hpp"
#include "centra/equiv.hpp"
#include "centra/errors.hpp"
#include "centra/multiform.hpp"

namespace centra {

/// Homogeneous polynomial of degree d in n variables; sparse exponent-vector
/// to coefficient map, zero coefficients never stored.
class HomogPoly {
public:
    using Exponents = std::vector<int>;

    HomogPoly(Index nvars, int degree) : n_(nvars), d_(degree) {
        if (nvars < 1) throw precondition_error("BadDimension", "need at least one variable");
        if (degree < 0) throw precondition_error("BadOrder", "degree must be >= 0");
    }

    Index nvars() const { return n_; }
    int degree() const { return d_; }
    const std::map<Exponents, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void set_coeff(const Exponents& exps, const Rational& c) {
        check_exps(exps);
        if (c.is_zero()) terms_.erase(exps);
        else terms_[exps] = c;
    }
    void add_coeff(const Exponents& exps, const Rational& c) {
        check_exps(exps);
        auto it = terms_.find(exps);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(exps, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
    Rational coeff(const Exponents& exps) const {
        auto it = terms_.find(exps);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Formal partial derivative with respect to variable i (degree drops by 1).
    HomogPoly partial(Index i) const {
        HomogPoly out(n_, d_ - 1 < 0 ? 0 : d_ - 1);
        for (const auto& [e, c] : terms_) {
            const int ei = e[static_cast<size_t>(i)];
            if (ei == 0) continue;
            Exponents de = e;
            --de[static_cast<size_t>(i)];
            out.add_coeff(de, Rational(static_cast<long>(ei)) * c);
        }
        return out;
    }

    friend HomogPoly operator*(const Rational& s, const HomogPoly& f) {
        HomogPoly out(f.n_, f.d_);
        if (s.is_zero()) return out;
        for (const auto& [e, c] : f.terms_) out.terms_.emplace(e, s * c);
        return out;
    }

    friend bool operator==(const HomogPoly& a, const HomogPoly& b) {
        return a.n_ == b.n_ && a.d_ == b.d_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const HomogPoly& a, const HomogPoly& b) { return !(a == b); }

private:
    void check_exps(const Exponents& exps) const {
        if (static_cast<Index>(exps.size()) != n_)
            throw precondition_error("BadExponents", "exponent vector length != nvars");
        int sum = 0;
        for (int e : exps) {
            if (e < 0) throw precondition_error("BadExponents", "negative exponent");
            sum += e;
        }
        if (sum != d_)
            throw precondition_error("BadExponents", "exponents do not sum to the degree");
    }

    Index n_;
    int d_;
    std::map<Exponents, Rational> terms_;
};

inline std::vector<HomogPoly> partials(const HomogPoly& f) {
    std::vector<HomogPoly> out;
    out.reserve(static_cast<size_t>(f.nvars()));
    for (Index i = 0; i < f.nvars(); ++i) out.push_back(f.partial(i));
    return out;
}

namespace pdetail {

/// All exponent vectors of length n summing to total, lexicographically.
inline std::vector<std::vector<int>> exponent_vectors(Index n, int total) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<size_t>(n), 0);
    auto rec = [&](auto&& self, Index pos, int left) -> void {
        if (pos == n - 1) {
            cur[static_cast<size_t>(pos)] = left;
            out.push_back(cur);
            return;
        }
        for (int e = left; e >= 0; --e) {
            cur[static_cast<size_t>(pos)] = e;
            self(self, pos + 1, left - e);
        }
    };
    rec(rec, 0, total);
    return out;
}

inline mpz_class factorial(int k) {
    mpz_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

/// d! / (e_1! ... e_n!): the number of index tuples realizing the monomial.
inline Rational multinomial(int d, const std::vector<int>& exps) {
    mpz_class den = 1;
    for (int e : exps) den *= factorial(e);
    return Rational(factorial(d), den);
}

inline std::vector<int> exps_of_tuple(const std::vector<Index>& idx, Index n) {
    std::vector<int> e(static_cast<size_t>(n), 0);
    for (Index i : idx) ++e[static_cast<size_t>(i)];
    return e;
}

}  // namespace pdetail

/// The symmetric tensor of f: entry(i_1..i_d) = coeff(monomial) / multinomial.
inline MultiForm poly_to_form(const HomogPoly& f) {
    const int d = f.degree();
    if (d < 3) throw precondition_error("BadOrder", "poly_to_form needs degree >= 3");
    const Index n = f.nvars();
    MultiForm out(n, d, 1);
    std::vector<Index> idx(static_cast<size_t>(d));
    for (Index flat = 0; flat < out.entries_per_component(); ++flat) {
        Index tmp = flat;
        for (int pos = d - 1; pos >= 0; --pos) {
            idx[static_cast<size_t>(pos)] = tmp % n;
            tmp /= n;
        }
        const auto exps = pdetail::exps_of_tuple(idx, n);
        const Rational c = f.coeff(exps);
        if (!c.is_zero()) out.entry_flat(0, flat) = c / pdetail::multinomial(d, exps);
    }
    return out;
}

/// Inverse of poly_to_form: evaluation at a generic vector. Input must be a
/// symmetric scalar form.
inline HomogPoly form_to_poly(const MultiForm& t) {
    if (t.target_dim() != 1)
        throw precondition_error("BadTarget", "form_to_poly needs a scalar-valued form");
    const Index n = t.dim();
    const int d = t.order();
    std::vector<Index> idx(static_cast<size_t>(d)), sorted(static_cast<size_t>(d));
    for (Index flat = 0; flat < t.entries_per_component(); ++flat) {
        Index tmp = flat;
        for (int pos = d - 1; pos >= 0; --pos) {
            idx[static_cast<size_t>(pos)] = tmp % n;
            tmp /= n;
        }
        sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        if (t.entry_flat(0, flat) != t.entry(0, sorted))
            throw precondition_error("NotSymmetric", "tensor is not symmetric in its indices");
    }
    HomogPoly out(n, d);
    for (const auto& exps : pdetail::exponent_vectors(n, d)) {
        std::vector<Index> rep;
        for (Index v = 0; v < n; ++v)
            rep.insert(rep.end(), static_cast<size_t>(exps[static_cast<size_t>(v)]), v);
        const Rational a = t.entry(0, rep);
        if (!a.is_zero()) out.set_coeff(exps, pdetail::multinomial(d, exps) * a);
    }
    return out;
}

/// Z(f) = {X : (H X)^T = H X} with H the Hessian, solved by equating the
/// polynomial coefficients of all off-diagonal differences.
inline CenterBasis hessian_center(const HomogPoly& f) {
    const Index n = f.nvars();
    const int d = f.degree();
    if (d < 3) throw precondition_error("BadOrder", "hessian_center needs degree >= 3");
    std::vector<std::vector<HomogPoly>> h;  // Hessian entries, degree d-2
    h.reserve(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) {
        std::vector<HomogPoly> row;
        const HomogPoly fi = f.partial(i);
        for (Index j = 0; j < n; ++j) row.push_back(fi.partial(j));
        h.push_back(std::move(row));
    }
    const auto monomials = pdetail::exponent_vectors(n, d - 2);
    const Index pairs = n * (n - 1) / 2;
    RatMatrix sys = rat_zero(pairs * static_cast<Index>(monomials.size()), n * n);
    Index row = 0;
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            for (const auto& mu : monomials) {
                // coefficient of mu in (HX)_{ij} - (HX)_{ji}
                for (Index m = 0; m < n; ++m) {
                    sys(row, m * n + j) += h[static_cast<size_t>(i)][static_cast<size_t>(m)].coeff(mu);
                    sys(row, m * n + i) -= h[static_cast<size_t>(j)][static_cast<size_t>(m)].coeff(mu);
                }
                ++row;
            }
    CenterBasis cb;
    cb.n = n;
    for (const auto& kv : kernel_basis(sys)) cb.basis.push_back(unvectorize(kv, n, n));
    RatMatrix span = rat_zero(n * n, cb.dim());
    for (Index j = 0; j < cb.dim(); ++j) span.col(j) = vectorize(cb.basis[static_cast<size_t>(j)]);
    cb.contains_identity = cb.dim() > 0 && solve_linear(span, vectorize(rat_identity(n))).has_value();
    return cb;
}

/// The unique invertible A with (dg/dx_1 ... dg/dx_n) = (df/dx_1 ... df/dx_n) A,
/// i.e. equality of the degree-(d-1) graded pieces of the Jacobian ideals.
inline RatMatrix jacobian_transition(const HomogPoly& f, const HomogPoly& g) {
    if (f.nvars() != g.nvars() || f.degree() != g.degree())
        throw precondition_error("BadDimension", "jacobian_transition: shape mismatch");
    const Index n = f.nvars();
    const auto monomials = pdetail::exponent_vectors(n, f.degree() - 1);
    RatMatrix fm(static_cast<Index>(monomials.size()), n), gm(static_cast<Index>(monomials.size()), n);
    for (Index i = 0; i < n; ++i) {
        const HomogPoly fi = f.partial(i), gi = g.partial(i);
        for (size_t m = 0; m < monomials.size(); ++m) {
            fm(static_cast<Index>(m), i) = fi.coeff(monomials[m]);
            gm(static_cast<Index>(m), i) = gi.coeff(monomials[m]);
        }
    }
    if (rank(fm) < n)
        throw precondition_error("DegeneratePartials",
                                 "partials of f do not span an n-dimensional space");
    const auto a = solve_linear(fm, gm);
    if (!a) throw precondition_error("NotSameIdeal", "partials of g leave the span of those of f");
    if (!inverse(*a))
        throw precondition_error("NotSameIdeal", "partial spans differ (transition is singular)");
    return *a;
}

struct TorelliCertificate {
    Rational c;    // nonzero scalar
    RatMatrix b;   // invertible change of variables
    bool exact;    // true when c == 1
};

namespace pdetail {

/// Exact d-th root of an integer when one exists (sign handled for odd d).
inline std::optional<mpz_class> exact_int_root(const mpz_class& x, int d) {
    if (x < 0 && d % 2 == 0) return std::nullopt;
    mpz_class ax = ::abs(x), r;
    const int exact = mpz_root(r.get_mpz_t(), ax.get_mpz_t(), static_cast<unsigned long>(d));
    if (!exact) return std::nullopt;
    return x < 0 ? mpz_class(-r) : r;
}

inline std::optional<Rational> rational_dth_root(const Rational& x, int d) {
    const auto nr = exact_int_root(x.numerator(), d);
    if (!nr) return std::nullopt;
    const auto dr = exact_int_root(x.denominator(), d);
    if (!dr) return std::nullopt;
    return Rational(*nr, *dr);
}

/// d-th-power-free part of x > 0: the unique s with x = s * t^d and no prime
/// d-th power dividing s. Trial division up to 10^6; once the loop ends the
/// cofactor is either prime, 1, or has only prime factors above 10^6, so any
/// p^d inside it would push it past 10^(6d). Beyond that bound only a pure
/// d-th power cofactor can be decided, and anything else is refused.
inline mpz_class dth_power_free_part_int(mpz_class x, int d) {
    assert(x > 0);
    mpz_class s = 1;
    for (long p = 2; p <= 1000000 && mpz_class(p) * p <= x; ++p) {
        if (x % p != 0) continue;
        int e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        for (int r = 0; r < e % d; ++r) s *= p;
    }
    if (x == 1) return s;
    mpz_class guard = 1;
    for (int i = 0; i < d; ++i) guard *= 1000000;
    if (x < guard) return s * x;  // every remaining prime exponent is < d
    if (exact_int_root(x, d)) return s;  // pure d-th power cofactor
    throw precondition_error("PowerFreeOverflow",
                             "cofactor too large for exact d-th-power-free splitting");
}

/// x = s * t^d with s canonical (d-th-power-free; carries the sign iff d even).
inline Rational dth_power_free_part(const Rational& x, int d) {
    assert(!x.is_zero());
    const mpz_class sn = dth_power_free_part_int(::abs(x.numerator()), d);
    const mpz_class sd = dth_power_free_part_int(x.denominator(), d);
    Rational s(sn, sd);
    if (x.sign() < 0 && d % 2 == 0) s = -s;
    return s;
}

/// Positive rational content: the unique gamma > 0 with m / gamma an integer
/// matrix of coprime entries.
inline Rational matrix_content(const RatMatrix& m) {
    mpz_class den_lcm = 1;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            const mpz_class d = m(i, j).denominator();
            mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
        }
    mpz_class num_gcd = 0;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            mpz_class v = ::abs(mpz_class(m(i, j).numerator() * (den_lcm / m(i, j).denominator())));
            mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), v.get_mpz_t());
        }
    assert(num_gcd > 0);
    return Rational(num_gcd, den_lcm);
}

}  // namespace pdetail

/// Exact expansion check of g = c * f(Bx), term by term.
inline bool verify_torelli(const HomogPoly& f, const HomogPoly& g, const TorelliCertificate& cert) {
    if (f.nvars() != g.nvars() || f.degree() != g.degree()) return false;
    if (cert.b.rows() != f.nvars() || cert.b.cols() != f.nvars()) return false;
    if (cert.c.is_zero()) return false;
    if (f.is_zero() && g.is_zero()) return true;
    if (f.is_zero() != g.is_zero()) return false;
    const MultiForm tf = poly_to_form(f);
    const MultiForm sub =
        transform_modes(tf, std::vector<RatMatrix>(static_cast<size_t>(f.degree()), cert.b));
    return cert.c * form_to_poly(sub) == g;
}

/// Reconstructs (c, B) with g(x) = c * f(Bx) from equal Jacobian spans:
/// radical split, Jacobian transition A in Z(f), the witness (A, Id, ..., Id),
/// summand matching with per-block normalization, and exact reassembly.
inline TorelliCertificate torelli_reconstruct(const HomogPoly& f, const HomogPoly& g,
                                              std::uint64_t seed) {
    if (f.nvars() != g.nvars() || f.degree() != g.degree())
        throw precondition_error("BadDimension", "torelli_reconstruct: shape mismatch");
    const Index n = f.nvars();
    const int d = f.degree();
    if (d < 3) throw precondition_error("BadOrder", "torelli_reconstruct needs degree >= 3");

    if (f.is_zero() != g.is_zero())
        throw precondition_error("RadicalMismatch", "exactly one of the polynomials is zero");
    if (f.is_zero()) return {Rational(1), rat_identity(n), true};

    const MultiForm tf = poly_to_form(f), tg = poly_to_form(g);
    const auto rad_f = radical(tf), rad_g = radical(tg);
    if (!same_span(rad_f, rad_g))
        throw precondition_error("RadicalMismatch",
                                 "the polynomials have different radical subspaces");
    const Index kr = static_cast<Index>(rad_f.size());
    const Index k = n - kr;
    if (k == 0) throw precondition_error("RadicalMismatch", "zero form after nonzero check");

    const RatMatrix w = ddetail::standard_complement(rad_f, n);
    RatMatrix p0 = rat_zero(n, n);
    p0.leftCols(k) = w;
    for (Index j = 0; j < kr; ++j) p0.col(k + j) = rad_f[static_cast<size_t>(j)];

    const MultiForm theta = restrict_to(tf, w);  // f-side, nondegenerate
    const MultiForm delta = restrict_to(tg, w);  // g-side
    const HomogPoly fbar = form_to_poly(theta), gbar = form_to_poly(delta);

    const RatMatrix a = jacobian_transition(fbar, gbar);
    if (!satisfies_center_equations(theta, a))
        throw precondition_error("JacobianNotCentral",
                                 "the Jacobian transition matrix violates the center equations");

    EquivalenceWitness witness;
    witness.phis.assign(static_cast<size_t>(d), rat_identity(k));
    witness.phis[0] = a;
    witness.psi = rat_identity(1);
    const SummandMatching match = match_summands(delta, theta, witness, seed);

    // canonical scalar: c is the d-th-power-free part of the first block's
    // content-adjusted ratio rho_0 = a_0 * content(phi_0)^d; the other blocks
    // must then split as a_j = c * t_j^d with t_j rational, or no single
    // scalar certificate exists over Q
    for (const auto& pair : match.pairs)
        if (!pair.normalized)
            throw precondition_error(
                "PartialCertificate",
                "a summand has an irrational residue field (residue_degree > 1); "
                "only a partial certificate exists over Q");
    const Rational rho0 = [&] {
        const auto& first = *match.pairs.front().normalized;
        const Rational gamma = pdetail::matrix_content(first.phi);
        Rational gpow(1);
        for (int t = 0; t < d; ++t) gpow *= gamma;
        return first.scalar * gpow;
    }();
    const Rational c = pdetail::dth_power_free_part(rho0, d);
    const Index kk = k;
    RatMatrix m = rat_zero(kk, kk);
    for (size_t j = 0; j < match.pairs.size(); ++j) {
        const auto& pair = match.pairs[j];
        const auto tj = pdetail::rational_dth_root(pair.normalized->scalar / c, d);
        if (!tj)
            throw precondition_error("PartialCertificate",
                                     "block scalars are not compatible modulo rational d-th "
                                     "powers; no single scalar certificate exists over Q");
        const Index ro = match.theta_cert.block_offset(static_cast<size_t>(pair.theta_index));
        const Index co = match.delta_cert.block_offset(static_cast<size_t>(pair.delta_index));
        const Index bd = match.delta_cert.block_dims[static_cast<size_t>(pair.delta_index)];
        m.block(ro, co, bd, bd) = *tj * pair.normalized->phi;
    }
    const RatMatrix b_bar = match.theta_cert.p * m * (*inverse(match.delta_cert.p));

    RatMatrix full = rat_zero(n, n);
    full.block(0, 0, k, k) = b_bar;
    for (Index j = 0; j < kr; ++j) full(k + j, k + j) = Rational(1);
    TorelliCertificate cert{c, p0 * full * (*inverse(p0)), c.is_one()};
    if (!verify_torelli(f, g, cert))
        throw precondition_error("CertificateCheckFailed",
                                 "internal error: reconstructed certificate failed verification");
    return cert;
}

}  // namespace centra
