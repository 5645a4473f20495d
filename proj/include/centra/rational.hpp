// Exact rational scalar on top of GMP, plus the dense Eigen types built on it.
#pragma once

#include <Eigen/Core>
#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace centra {

/// Arbitrary-precision rational, always kept canonical: gcd(|num|, den) = 1,
/// den > 0, zero stored as 0/1. Value semantics throughout.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}                 // NOLINT: implicit by design
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    explicit Rational(const mpz_class& n) : v_(n) {}
    Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        v_.canonicalize();
    }
    Rational(long num, long den) : Rational(mpz_class(num), mpz_class(den)) {}

    /// Parses "p/q" or "p" (base 10). Throws std::invalid_argument on junk.
    static Rational from_string(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("Rational: empty string");
        mpq_class q;
        if (q.set_str(s, 10) != 0)
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        if (q.get_den() == 0)
            throw std::invalid_argument("Rational: zero denominator in '" + s + "'");
        q.canonicalize();
        Rational r;
        r.v_ = q;
        return r;
    }

    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    std::string str() const { return v_.get_str(); }

    Rational operator-() const { Rational r; r.v_ = -v_; return r; }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend Rational abs(const Rational& a) { Rational r; r.v_ = ::abs(a.v_); return r; }

    /// Strict total order on (|numerator|, denominator) used for pivot picks.
    friend bool numerator_magnitude_less(const Rational& a, const Rational& b) {
        return cmp(::abs(a.v_.get_num()), ::abs(b.v_.get_num())) < 0;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.v_.get_str();
    }

    double to_double() const { return v_.get_d(); }

private:
    mpq_class v_;
};

}  // namespace centra

namespace Eigen {

template <>
struct NumTraits<centra::Rational> : GenericNumTraits<centra::Rational> {
    using Real = centra::Rational;
    using NonInteger = centra::Rational;
    using Nested = centra::Rational;
    using Literal = int;

    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 60,
        MulCost = 60,
    };

    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace centra {

using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

inline RatMatrix rat_identity(Index n) {
    RatMatrix m = RatMatrix::Constant(n, n, Rational(0));
    for (Index i = 0; i < n; ++i) m(i, i) = Rational(1);
    return m;
}

inline RatMatrix rat_zero(Index rows, Index cols) {
    return RatMatrix::Constant(rows, cols, Rational(0));
}

inline RatVector rat_zero_vec(Index n) { return RatVector::Constant(n, Rational(0)); }

template <typename D1, typename D2>
bool exact_equal(const Eigen::MatrixBase<D1>& a, const Eigen::MatrixBase<D2>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

template <typename Derived>
bool is_exactly_zero(const Eigen::MatrixBase<Derived>& a) {
    for (Index j = 0; j < a.cols(); ++j)
        for (Index i = 0; i < a.rows(); ++i)
            if (!a(i, j).is_zero()) return false;
    return true;
}

/// Column-stacks an n x m matrix into a vector of length n*m (row-major walk,
/// so entry (i,j) lands at i*m + j; the convention every vectorized solve uses).
template <typename Derived>
RatVector vectorize(const Eigen::MatrixBase<Derived>& m) {
    RatVector v(m.rows() * m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
    return v;
}

inline RatMatrix unvectorize(const RatVector& v, Index rows, Index cols) {
    RatMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
    return m;
}

/// Lexicographic compare of matrix entries in row-major order.
inline int lex_compare(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows() != b.rows()) return a.rows() < b.rows() ? -1 : 1;
    if (a.cols() != b.cols()) return a.cols() < b.cols() ? -1 : 1;
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) {
            if (a(i, j) < b(i, j)) return -1;
            if (b(i, j) < a(i, j)) return 1;
        }
    return 0;
}

}  // namespace centra
