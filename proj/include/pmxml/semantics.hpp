#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pmxml/codec.hpp"
#include "pmxml/model.hpp"

// Exact-arithmetic interpretation of the mathematical conventions of the
// format: rationals, homogeneous coordinates, vertex/facet incidence,
// quadratic extensions and polynomial decoding.
namespace pmxml::semantics {

using BigInt = boost::multiprecision::cpp_int;

class SemanticsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public SemanticsError {
public:
    using SemanticsError::SemanticsError;
};

class ZeroDenominatorError : public ParseError {
public:
    ZeroDenominatorError() : ParseError("rational with zero denominator") {}
};

class PointAtInfinityError : public SemanticsError {
public:
    PointAtInfinityError() : SemanticsError("homogenizing coordinate is zero") {}
};

class DimensionMismatchError : public SemanticsError {
public:
    DimensionMismatchError(std::size_t a, std::size_t b)
        : SemanticsError("dimension mismatch: " + std::to_string(a) + " vs " +
                         std::to_string(b)) {}
};

class ArityError : public SemanticsError {
public:
    using SemanticsError::SemanticsError;
};

class NegativeRadicandError : public SemanticsError {
public:
    NegativeRadicandError() : SemanticsError("negative radicand in quadratic extension") {}
};

class ShapeError : public SemanticsError {
public:
    using SemanticsError::SemanticsError;
};

/// Exact fraction, always normalized: gcd(|num|, den) = 1, den >= 1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(BigInt numerator, BigInt denominator);
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }

    Rational operator-() const;
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;

    bool operator==(const Rational& o) const = default;
    std::strong_ordering operator<=>(const Rational& o) const;

    int sign() const;
    bool is_zero() const { return num_ == 0; }
    std::string str() const;

private:
    BigInt num_;
    BigInt den_;
};

Rational parse_rational(std::string_view token);

struct HomPoint {
    std::vector<Rational> coords;  // first entry is the homogenizing coordinate
};

struct IneqVector {
    std::vector<Rational> coeffs;  // a0 + a1 x1 + ... + an xn >= 0
};

/// Divides the affine part by the leading coordinate.
std::vector<Rational> dehomogenize(const HomPoint& p);

Rational pairing(const HomPoint& p, const IneqVector& a);

struct IncidenceReport {
    std::vector<std::vector<Rational>> products;  // vertices x facets
    std::vector<std::vector<bool>> incident;      // product exactly zero
    std::vector<std::pair<std::size_t, std::size_t>> violations;  // negative products
};

IncidenceReport incidence_check(const codec::DenseMatrix& vertices,
                                const codec::DenseMatrix& facets);

/// Compares N_FACETS / N_VERTICES against the respective row counts.
std::vector<std::string> check_counts(const model::ObjectNode& obj);

/// a + b*sqrt(c), with c = 0 whenever b = 0.
struct QuadExt {
    Rational a;
    Rational b;
    Rational c;
    bool operator==(const QuadExt&) const = default;
};

QuadExt quad_from_tuple(const model::TupleV& t);

/// Exact sign of a + b*sqrt(c), computed with rational arithmetic only.
int quad_sign(const QuadExt& q);

/// Decimal approximation to 12 significant digits, round half to even.
std::string quad_approx(const QuadExt& q);

struct Term {
    std::vector<std::uint64_t> exponents;
    QuadExt coefficient;
    bool operator==(const Term&) const = default;
};

struct Polynomial {
    std::vector<Term> terms;
    std::vector<std::string> variables;
    bool operator==(const Polynomial&) const = default;
};

/// Decodes the (terms-matrix, variable-names) tuple encoding, resolving a
/// reference to the variable tuple through the id table when needed.
Polynomial decode_polynomial(const model::TupleV& t, const model::IdTable& table,
                             const model::Value& tree_root);

std::string render_polynomial(const Polynomial& p);

}  // namespace pmxml::semantics
