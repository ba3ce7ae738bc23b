#include "pmxml/semantics.hpp"

#include <algorithm>
#include <cctype>

#include <boost/multiprecision/cpp_dec_float.hpp>

namespace pmxml::semantics {

namespace {

using boost::multiprecision::cpp_dec_float_100;

BigInt pow10(unsigned exp) {
    BigInt out = 1;
    for (unsigned i = 0; i < exp; ++i) out *= 10;
    return out;
}

}  // namespace

Rational::Rational(BigInt numerator, BigInt denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_ == 0) throw ZeroDenominatorError();
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = gcd(abs(num_), den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::operator-() const { return Rational(-num_, den_); }

Rational Rational::operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw ZeroDenominatorError();
    return Rational(num_ * o.den_, den_ * o.num_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    BigInt lhs = num_ * o.den_;
    BigInt rhs = o.num_ * den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

int Rational::sign() const {
    if (num_ == 0) return 0;
    return num_ < 0 ? -1 : 1;
}

std::string Rational::str() const {
    std::string out = num_.str();
    if (den_ != 1) out += "/" + den_.str();
    return out;
}

Rational parse_rational(std::string_view token) {
    std::size_t i = 0;
    auto read_int = [&](bool allow_sign) -> BigInt {
        bool negative = false;
        if (allow_sign && i < token.size() && (token[i] == '+' || token[i] == '-')) {
            negative = token[i] == '-';
            ++i;
        }
        std::size_t start = i;
        while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) ++i;
        if (i == start)
            throw ParseError("malformed rational token '" + std::string(token) + "'");
        BigInt value(std::string(token.substr(start, i - start)));
        return negative ? BigInt(-value) : value;
    };
    BigInt num = read_int(true);
    BigInt den = 1;
    if (i < token.size() && token[i] == '/') {
        ++i;
        den = read_int(false);
        if (den == 0) throw ZeroDenominatorError();
    }
    if (i != token.size())
        throw ParseError("malformed rational token '" + std::string(token) + "'");
    return Rational(std::move(num), std::move(den));
}

std::vector<Rational> dehomogenize(const HomPoint& p) {
    if (p.coords.empty()) throw SemanticsError("empty point");
    const Rational& lead = p.coords.front();
    if (lead.is_zero()) throw PointAtInfinityError();
    std::vector<Rational> out;
    for (std::size_t i = 1; i < p.coords.size(); ++i) out.push_back(p.coords[i] / lead);
    return out;
}

Rational pairing(const HomPoint& p, const IneqVector& a) {
    if (p.coords.size() != a.coeffs.size())
        throw DimensionMismatchError(p.coords.size(), a.coeffs.size());
    Rational sum;
    for (std::size_t i = 0; i < p.coords.size(); ++i)
        sum = sum + p.coords[i] * a.coeffs[i];
    return sum;
}

namespace {

std::vector<Rational> parse_row(const codec::DenseVector& row) {
    std::vector<Rational> out;
    for (const std::string& token : row.entries) out.push_back(parse_rational(token));
    return out;
}

}  // namespace

IncidenceReport incidence_check(const codec::DenseMatrix& vertices,
                                const codec::DenseMatrix& facets) {
    if (!vertices.rows.empty() && !facets.rows.empty() && vertices.cols != facets.cols)
        throw DimensionMismatchError(vertices.cols, facets.cols);
    std::vector<std::vector<Rational>> points, ineqs;
    for (const auto& row : vertices.rows) points.push_back(parse_row(row));
    for (const auto& row : facets.rows) ineqs.push_back(parse_row(row));

    IncidenceReport report;
    for (std::size_t i = 0; i < points.size(); ++i) {
        std::vector<Rational> products;
        std::vector<bool> incident;
        for (std::size_t j = 0; j < ineqs.size(); ++j) {
            Rational value = pairing(HomPoint{points[i]}, IneqVector{ineqs[j]});
            incident.push_back(value.is_zero());
            if (value.sign() < 0) report.violations.emplace_back(i, j);
            products.push_back(std::move(value));
        }
        report.products.push_back(std::move(products));
        report.incident.push_back(std::move(incident));
    }
    return report;
}

namespace {

std::optional<std::uint64_t> matrix_row_count(const model::Property& p) {
    const auto* data = std::get_if<model::TypedData>(&p.payload);
    if (!data) return std::nullopt;
    const auto* m = std::get_if<model::MatrixM>(&data->value.node);
    if (!m) return std::nullopt;
    if (const auto* dense = std::get_if<model::DenseRows>(&m->rows))
        return dense->rows.size();
    if (std::holds_alternative<model::SparseRows>(m->rows)) return m->dim;
    return std::nullopt;
}

std::optional<std::string> scalar_of(const model::Property& p) {
    if (const auto* scalar = std::get_if<model::ScalarValue>(&p.payload)) return scalar->text;
    if (const auto* data = std::get_if<model::TypedData>(&p.payload)) {
        if (const auto* scalar = std::get_if<model::ScalarText>(&data->value.node))
            return scalar->raw;
    }
    return std::nullopt;
}

}  // namespace

std::vector<std::string> check_counts(const model::ObjectNode& obj) {
    std::vector<std::string> out;
    const std::pair<const char*, const char*> pairs[] = {{"N_FACETS", "FACETS"},
                                                         {"N_VERTICES", "VERTICES"}};
    for (const auto& [count_name, matrix_name] : pairs) {
        auto counts = find_properties(obj, count_name);
        auto matrices = find_properties(obj, matrix_name);
        if (counts.empty() || matrices.empty()) continue;
        std::optional<std::string> declared = scalar_of(*counts.front());
        std::optional<std::uint64_t> actual = matrix_row_count(*matrices.front());
        if (!declared || !actual) continue;
        std::uint64_t declared_count = 0;
        try {
            Rational r = parse_rational(*declared);
            if (r.denominator() != 1 || r.sign() < 0) throw ParseError("not a count");
            declared_count = r.numerator().convert_to<std::uint64_t>();
        } catch (const ParseError&) {
            out.push_back(std::string(count_name) + " value '" + *declared +
                          "' is not a nonnegative integer");
            continue;
        }
        if (declared_count != *actual) {
            out.push_back(std::string(count_name) + " is " + *declared + " but " +
                          matrix_name + " has " + std::to_string(*actual) + " rows");
        }
    }
    return out;
}

namespace {

QuadExt normalized(Rational a, Rational b, Rational c) {
    if (c.sign() < 0) throw NegativeRadicandError();
    if (b.is_zero()) c = Rational();
    if (c.is_zero()) b = Rational();
    return QuadExt{std::move(a), std::move(b), std::move(c)};
}

}  // namespace

QuadExt quad_from_tuple(const model::TupleV& t) {
    if (!t.is_raw())
        throw ArityError("quadratic-extension tuple must carry three rational tokens");
    std::vector<std::string> tokens = codec::tokenize_dense(t.raw());
    if (tokens.size() != 3)
        throw ArityError("quadratic-extension tuple has " + std::to_string(tokens.size()) +
                         " entries, expected 3");
    return normalized(parse_rational(tokens[0]), parse_rational(tokens[1]),
                      parse_rational(tokens[2]));
}

int quad_sign(const QuadExt& q) {
    if (q.b.is_zero()) return q.a.sign();
    if (q.a.is_zero()) return q.b.sign();
    if (q.a.sign() == q.b.sign()) return q.a.sign();
    // Opposite signs: compare a^2 against b^2 * c exactly.
    Rational lhs = q.a * q.a;
    Rational rhs = q.b * q.b * q.c;
    if (lhs == rhs) return 0;
    return lhs > rhs ? q.a.sign() : q.b.sign();
}

namespace {

constexpr int kSignificant = 12;

std::string format_digits(bool negative, std::string digits, long exponent) {
    // digits has exactly kSignificant characters; exponent is the power of
    // ten of the leading digit.
    std::string out;
    if (negative) out += "-";
    if (exponent >= 0) {
        if (exponent >= kSignificant - 1) {
            out += digits;
            out.append(static_cast<std::size_t>(exponent - (kSignificant - 1)), '0');
        } else {
            out += digits.substr(0, static_cast<std::size_t>(exponent) + 1);
            out += ".";
            out += digits.substr(static_cast<std::size_t>(exponent) + 1);
        }
    } else {
        out += "0.";
        out.append(static_cast<std::size_t>(-exponent - 1), '0');
        out += digits;
    }
    return out;
}

std::string approx_rational(const Rational& r) {
    if (r.is_zero()) return "0";
    BigInt p = abs(r.numerator());
    const BigInt& q = r.denominator();
    // exponent of the leading digit: 10^e <= p/q < 10^(e+1)
    auto less_than_pow10 = [&](long e) {
        // p/q < 10^e ?
        return e >= 0 ? p < q * pow10(static_cast<unsigned>(e))
                      : p * pow10(static_cast<unsigned>(-e)) < q;
    };
    long e = static_cast<long>(p.str().size()) - static_cast<long>(q.str().size());
    while (less_than_pow10(e)) --e;
    while (!less_than_pow10(e + 1)) ++e;

    long shift = (kSignificant - 1) - e;
    BigInt num = p;
    BigInt den = q;
    if (shift >= 0) num *= pow10(static_cast<unsigned>(shift));
    else den *= pow10(static_cast<unsigned>(-shift));
    BigInt quotient = num / den;
    BigInt remainder = num % den;
    BigInt twice = remainder * 2;
    if (twice > den || (twice == den && quotient % 2 != 0)) ++quotient;
    std::string digits = quotient.str();
    if (digits.size() == kSignificant + 1) {  // rounding carried over
        digits.pop_back();
        ++e;
    }
    return format_digits(r.sign() < 0, digits, e);
}

std::string approx_irrational(const QuadExt& q) {
    auto to_float = [](const Rational& r) {
        return cpp_dec_float_100(r.numerator().str()) /
               cpp_dec_float_100(r.denominator().str());
    };
    cpp_dec_float_100 value = to_float(q.a) + to_float(q.b) * sqrt(to_float(q.c));
    if (value == 0) return "0";
    bool negative = value < 0;
    if (negative) value = -value;
    std::string sci = value.str(40, std::ios_base::scientific);  // d.dd...e+XX
    std::size_t epos = sci.find('e');
    std::string mantissa = sci.substr(0, epos);
    long exponent = std::stol(sci.substr(epos + 1));
    mantissa.erase(std::remove(mantissa.begin(), mantissa.end(), '.'), mantissa.end());
    std::string digits = mantissa.substr(0, kSignificant);
    std::string rest = mantissa.substr(kSignificant);
    bool round_up;
    if (rest.empty() || rest[0] < '5') {
        round_up = false;
    } else if (rest[0] > '5' || rest.find_first_not_of('0', 1) != std::string::npos) {
        round_up = true;
    } else {  // a tie as far as the approximation shows: half to even
        round_up = (digits.back() - '0') % 2 != 0;
    }
    if (round_up) {
        int i = kSignificant - 1;
        while (i >= 0 && digits[i] == '9') digits[i--] = '0';
        if (i < 0) {
            digits.insert(digits.begin(), '1');
            digits.pop_back();
            ++exponent;
        } else {
            ++digits[i];
        }
    }
    return format_digits(negative, digits, exponent);
}

}  // namespace

std::string quad_approx(const QuadExt& q) {
    if (q.b.is_zero()) return approx_rational(q.a);
    return approx_irrational(q);
}

namespace {

const model::VectorV* single_vector_item(const model::TupleV& t) {
    if (t.is_raw() || t.item_list().size() != 1) return nullptr;
    return std::get_if<model::VectorV>(&t.item_list().front().node);
}

std::vector<std::uint64_t> parse_exponents(const model::VectorV& v,
                                           std::size_t expected_arity) {
    codec::DenseVector dense = codec::densify_vector(
        v, expected_arity > 0 ? std::optional<std::size_t>(expected_arity) : std::nullopt);
    std::vector<std::uint64_t> out;
    for (const std::string& token : dense.entries) {
        Rational r = parse_rational(token);
        if (r.denominator() != 1 || r.sign() < 0)
            throw ShapeError("exponent '" + token + "' is not a nonnegative integer");
        out.push_back(r.numerator().convert_to<std::uint64_t>());
    }
    return out;
}

}  // namespace

Polynomial decode_polynomial(const model::TupleV& t, const model::IdTable& table,
                             const model::Value& tree_root) {
    if (t.is_raw() || t.item_list().size() != 2)
        throw ShapeError("polynomial tuple must have a terms matrix and a variable tuple");
    const model::Value& terms_item = t.item_list()[0];
    const model::Value& vars_item = t.item_list()[1];

    const auto* matrix = std::get_if<model::MatrixM>(&terms_item.node);
    if (!matrix) throw ShapeError("polynomial terms must form a matrix");

    const model::TupleV* vars_tuple = nullptr;
    if (const auto* ref = std::get_if<model::RefR>(&vars_item.node)) {
        model::NodePath path = model::resolve_reference(table, *ref);
        vars_tuple = model::tuple_at(tree_root, path);
        if (!vars_tuple) throw ShapeError("variable reference does not lead to a tuple");
    } else if (const auto* tuple = std::get_if<model::TupleV>(&vars_item.node)) {
        vars_tuple = tuple;
    } else {
        throw ShapeError("polynomial variables must be a tuple or a reference");
    }

    Polynomial poly;
    const model::VectorV* names = single_vector_item(*vars_tuple);
    if (!names) throw ShapeError("variable tuple must contain one vector of names");
    poly.variables = codec::densify_vector(*names).entries;

    std::vector<const model::TupleV*> term_tuples;
    if (const auto* tuples = std::get_if<model::TupleRows>(&matrix->rows)) {
        for (const model::TupleV& row : tuples->rows) term_tuples.push_back(&row);
    } else if (const auto* dense = std::get_if<model::DenseRows>(&matrix->rows)) {
        if (!dense->rows.empty())
            throw ShapeError("polynomial terms must be tuples");
    } else {
        throw ShapeError("polynomial terms must be tuples");
    }

    for (const model::TupleV* row : term_tuples) {
        if (row->is_raw() || row->item_list().size() != 2)
            throw ShapeError("each term must pair an exponent vector with a coefficient");
        const auto* exps = std::get_if<model::VectorV>(&row->item_list()[0].node);
        const auto* coeff = std::get_if<model::TupleV>(&row->item_list()[1].node);
        if (!exps || !coeff)
            throw ShapeError("each term must pair an exponent vector with a coefficient");
        Term term;
        term.exponents = parse_exponents(*exps, poly.variables.size());
        if (term.exponents.size() != poly.variables.size())
            throw ShapeError("exponent vector arity disagrees with the variable count");
        term.coefficient = quad_from_tuple(*coeff);
        for (const Term& existing : poly.terms) {
            if (existing.exponents == term.exponents)
                throw ShapeError("two terms share an exponent vector");
        }
        poly.terms.push_back(std::move(term));
    }
    return poly;
}

namespace {

std::string coefficient_string(const QuadExt& q) {
    if (q.c.is_zero()) return q.a.str();
    std::string radical = q.b.str() + "√" + q.c.str();
    if (q.a.is_zero()) return radical;
    return "(" + q.a.str() + "+" + radical + ")";
}

}  // namespace

std::string render_polynomial(const Polynomial& p) {
    if (p.terms.empty()) return "0";
    std::string out;
    for (const Term& term : p.terms) {
        if (!out.empty()) out += " + ";
        std::string factors;
        for (std::size_t i = 0; i < term.exponents.size(); ++i) {
            if (term.exponents[i] == 0) continue;
            if (!factors.empty()) factors += "*";
            factors += i < p.variables.size() ? p.variables[i] : "?";
            if (term.exponents[i] > 1) factors += "^" + std::to_string(term.exponents[i]);
        }
        out += coefficient_string(term.coefficient);
        if (!factors.empty()) out += "*" + factors;
    }
    return out;
}

}  // namespace pmxml::semantics
