/*
 * series.hpp
 * ----------
 * Exact truncated multivariate formal power series over Q.
 *
 * A Series knows its coefficients exactly for all total degrees < trunc().
 * Polynomial values additionally carry an `exact` flag: for those the
 * coefficient map is the whole series and trunc is treated as infinite by
 * every decision that asks "is this zero / what is its order".
 *
 * Coefficients are GMP rationals, always reduced; zero coefficients are
 * never stored.  Storage is bucketed by total degree so graded slices
 * (heavily used by the determinacy solver) come out for free.
 */
#ifndef SUMSQ_SERIES_HPP
#define SUMSQ_SERIES_HPP

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "sumsq/error.hpp"

namespace sumsq {

using Rational = mpq_class;

Rational rat_of(long num, long den = 1);
std::string rat_str(const Rational& q);

// Inline exponent storage: at most 8 ambient variables, exponents < 2^16.
// Keeps monomial arithmetic allocation-free on the hot paths.
struct ExpVec {
    static constexpr std::size_t kMaxVars = 8;
    std::array<std::uint16_t, kMaxVars> v{};
    std::uint8_t n = 0;

    ExpVec() = default;
    ExpVec(std::initializer_list<unsigned> init);
    explicit ExpVec(const std::vector<unsigned>& init);

    std::size_t size() const { return n; }
    std::uint16_t& operator[](std::size_t i) { return v[i]; }
    const std::uint16_t& operator[](std::size_t i) const { return v[i]; }
    std::uint16_t* begin() { return v.data(); }
    std::uint16_t* end() { return v.data() + n; }
    const std::uint16_t* begin() const { return v.data(); }
    const std::uint16_t* end() const { return v.data() + n; }
    bool operator==(const ExpVec& o) const;
};

// Exponent vector; length equals the ambient variable count.
struct Monomial {
    ExpVec e;

    Monomial() = default;
    explicit Monomial(std::vector<unsigned> exps) : e(exps) {}
    Monomial(std::initializer_list<unsigned> exps) : e(exps) {}
    static Monomial unit(std::size_t nvars, std::size_t var, unsigned exp = 1);
    static Monomial one(std::size_t nvars);

    unsigned degree() const;
    std::size_t nvars() const { return e.size(); }
    bool divides(const Monomial& m) const;
    Monomial operator*(const Monomial& m) const;
    Monomial operator/(const Monomial& m) const; // requires divides(m) the other way
    bool operator==(const Monomial& m) const { return e == m.e; }
    // lex on exponent vectors; buckets already fix the total degree
    std::strong_ordering operator<=>(const Monomial& m) const;
};

struct OrderResult {
    bool known = false;
    int value = 0; // order if known, else the truncation bound ("AtLeast")
    static OrderResult Known(int k) { return {true, k}; }
    static OrderResult AtLeast(int n) { return {false, n}; }
    bool operator==(const OrderResult&) const = default;
};

class Series {
public:
    // Truncation bound used for exact polynomial values.
    static constexpr int kInfTrunc = 1 << 24;

    Series() = default;
    Series(std::vector<std::string> vars, int trunc, bool exact = false);

    static Series make(std::vector<std::string> vars, int trunc,
                       const std::vector<std::pair<Monomial, Rational>>& terms);
    // Exact polynomial constructor: trunc is irrelevant for decisions.
    static Series poly(std::vector<std::string> vars,
                       const std::vector<std::pair<Monomial, Rational>>& terms);
    static Series zero(std::vector<std::string> vars, int trunc);
    static Series constant(std::vector<std::string> vars, const Rational& c, int trunc,
                           bool exact = false);
    static Series variable(std::vector<std::string> vars, std::size_t idx, int trunc,
                           bool exact = false);

    const std::vector<std::string>& vars() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }
    int trunc() const { return exact_ ? kInfTrunc : trunc_; }
    int stated_trunc() const { return trunc_; }
    bool exact() const { return exact_; }
    bool is_zero() const; // identically zero below truncation
    bool same_vars(const Series& g) const { return vars_ == g.vars_; }

    // Forget exactness / lower the truncation bound.
    Series truncated(int new_trunc) const;
    // Reinterpret over a variable list extending vars() (old vars keep names).
    Series extended(const std::vector<std::string>& new_vars) const;
    // Drop trailing variables that appear in no monomial.
    Series restricted(const std::vector<std::string>& new_vars) const;

    Rational coeff(const Monomial& m) const;
    Rational coeff_at_origin() const;
    int max_stored_degree() const;
    std::size_t term_count() const;
    // Graded slice: terms of the given total degree (empty map if none).
    const std::map<Monomial, Rational>& slice(int degree) const;
    void for_each(const std::function<void(const Monomial&, const Rational&)>& f) const;
    std::vector<std::pair<Monomial, Rational>> terms() const;

    Series operator+(const Series& g) const;
    Series operator-(const Series& g) const;
    Series operator-() const;
    Series operator*(const Series& g) const;
    Series scalar_mul(const Rational& c) const;
    bool equal_below_common_trunc(const Series& g) const;

    OrderResult order() const;
    Series initial_form() const;           // ZeroUpToTruncation if order unknown
    Series homogeneous_part(int d) const;  // zero series if no terms of degree d
    Series partial(std::size_t var) const; // trunc drops by 1 (floor 1)
    Series substitute(const std::vector<Series>& images) const;
    Series invert_unit() const;                 // NotAUnit if constant term is 0
    Series invert_unit_at(int out_trunc) const; // explicit output precision
    Series nth_root_unit(unsigned n) const;     // ConstantTermNotOne unless f(0)=1
    Series nth_root_unit_at(unsigned n, int out_trunc) const;
    Series monomial_divide(const Monomial& m) const;
    Series mul_monomial(const Monomial& m, const Rational& c) const;
    Series integrate(std::size_t var) const; // exact antiderivative, no constant

    // Canonical text form; round-trips through parse_expr.
    std::string str() const;

    void insert_term(const Monomial& m, const Rational& c); // drops degrees >= trunc when inexact

private:
    void check_vars(const Series& g) const;

    std::vector<std::string> vars_;
    int trunc_ = 1;
    bool exact_ = false;
    std::vector<std::map<Monomial, Rational>> buckets_;
};

Series add(const Series& f, const Series& g);
Series sub(const Series& f, const Series& g);
Series mul(const Series& f, const Series& g);
Series scalar_mul(const Rational& c, const Series& f);
OrderResult order(const Series& f);
Series initial_form(const Series& f);
Series partial(const Series& f, std::size_t var);
Series substitute(const Series& f, const std::vector<Series>& images);
Series invert_unit(const Series& f);
Series nth_root_unit(const Series& f, unsigned n);
Series monomial_divide(const Series& f, const Monomial& m);

// All monomials of the given total degree in nvars variables, lex order.
std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree);

} // namespace sumsq

#endif
