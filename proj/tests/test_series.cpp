#include <doctest.h>

#include "sumsq/expr.hpp"
#include "sumsq/series.hpp"

using namespace sumsq;

namespace {

const std::vector<std::string> XY{"x", "y"};

Series S(const std::string& text, int trunc) {
    return parse_poly(text, XY).truncated(trunc);
}
Series P(const std::string& text) { return parse_poly(text, XY); }

// deterministic random series for the ring-axiom checks
Series random_series(std::uint64_t& state, int trunc) {
    auto next = [&]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    Series f = Series::zero(XY, trunc);
    for (int d = 0; d < trunc; ++d)
        for (auto& m : monomials_of_degree(2, (unsigned)d))
            if (next() % 3 == 0) f.insert_term(m, Rational((long)(next() % 9) - 4, (long)(next() % 4) + 1));
    return f;
}

} // namespace

TEST_CASE("make: constructor identities and errors") {
    Series f = Series::make(XY, 5, {{Monomial({2, 0}), Rational(1)}, {Monomial({0, 3}), Rational(1)}});
    CHECK(f.str() == "x^2 + y^3");
    Series z = Series::make({"x"}, 3, {{Monomial({0}), Rational(0)}});
    CHECK(z.is_zero());
    CHECK(z.term_count() == 0);
    CHECK_THROWS_AS(Series::make(XY, 2, {{Monomial({2, 0}), Rational(1)}}), Error);
    CHECK_THROWS_AS(Series::make(XY, 5, {{Monomial({2}), Rational(1)}}), Error);
}

TEST_CASE("ring operations") {
    Series a = S("x+y", 6), b = S("x-y", 6);
    CHECK((a * b).str() == "x^2 - y^2");
    // geometric series: (1+y) * (1-y+y^2-y^3) == 1 below trunc 4
    Series one_plus = S("1+y", 4);
    Series inv = S("1-y+y^2-y^3", 4);
    CHECK((one_plus * inv).equal_below_common_trunc(S("1", 4)));
    Series f = S("1/2*x*y^2 - y^3 + x", 7);
    CHECK((f + f.scalar_mul(Rational(-1))).is_zero());
}

TEST_CASE("ring axioms at trunc 8 (random)") {
    std::uint64_t st = 42;
    for (int i = 0; i < 12; ++i) {
        Series f = random_series(st, 8), g = random_series(st, 8), h = random_series(st, 8);
        CHECK(((f + g) + h).equal_below_common_trunc(f + (g + h)));
        CHECK((f * (g + h)).equal_below_common_trunc(f * g + f * h));
        CHECK((f * g).equal_below_common_trunc(g * f));
    }
}

TEST_CASE("order and initial form") {
    CHECK(S("x^2+y^3", 9).order() == OrderResult::Known(2));
    CHECK(Series::zero(XY, 7).order() == OrderResult::AtLeast(7));
    CHECK(S("x^3+x*y^3", 9).order() == OrderResult::Known(3));
    CHECK(S("x^2*y + y^5", 9).initial_form().str() == "x^2*y");
    Series f = S("x^3 + 2*x*y^2 + 5*y^3 + x^4 + y^6", 9);
    CHECK(f.initial_form().str() == "x^3 + 2*x*y^2 + 5*y^3");
    CHECK_THROWS_AS(Series::zero(XY, 4).initial_form(), Error);
}

TEST_CASE("partial derivatives") {
    CHECK(S("x^2+y^3", 9).partial(0).str() == "2*x");
    CHECK(S("3*x^2 + 5*y^4", 9).partial(1).str() == "20*y^3");
    CHECK(S("7", 9).partial(0).is_zero());
    // Leibniz below trunc-1
    std::uint64_t st = 7;
    for (int i = 0; i < 6; ++i) {
        Series f = random_series(st, 8), g = random_series(st, 8);
        Series lhs = (f * g).partial(0);
        Series rhs = f.partial(0) * g + f * g.partial(0);
        CHECK(lhs.equal_below_common_trunc(rhs));
    }
}

TEST_CASE("substitution") {
    Series f = S("x^2", 8);
    Series img = S("x+y", 8);
    CHECK(f.substitute({img, S("y", 8)}).str() == "x^2 + 2*x*y + y^2");
    Series id = S("x^3+x*y^3", 9);
    CHECK(id.substitute({S("x", 9), S("y", 9)}).equal_below_common_trunc(id));
    // spec arc example: F = x^3 + y^5 at (zeta - b t^2, t), zeta = 0, b = 1
    Series F = parse_poly("x^3+y^5", XY);
    std::vector<std::string> T{"t"};
    Series mt2 = Series::poly(T, {{Monomial({2}), Rational(-1)}});
    Series t = Series::poly(T, {{Monomial({1}), Rational(1)}});
    Series comp = F.substitute({mt2, t});
    CHECK(comp.str() == "t^5 - t^6");
    // homomorphism property
    std::uint64_t st = 11;
    Series g1 = random_series(st, 7), g2 = random_series(st, 7);
    Series i1 = S("x+y^2", 7), i2 = S("y-x^2", 7);
    CHECK((g1 * g2).substitute({i1, i2})
              .equal_below_common_trunc(g1.substitute({i1, i2}) * g2.substitute({i1, i2})));
    // order-0 image rejected for non-polynomial sources
    CHECK_THROWS_AS(S("x", 5).substitute({S("1+x", 5), S("y", 5)}), Error);
}

TEST_CASE("unit inversion") {
    Series f = S("1+y", 4);
    CHECK(f.invert_unit().str() == "1 - y + y^2 - y^3");
    CHECK(S("2", 5).invert_unit().str() == "1/2");
    CHECK_THROWS_AS(S("y", 5).invert_unit(), Error);
    std::uint64_t st = 19;
    for (int i = 0; i < 100; ++i) {
        Series u = random_series(st, 7) + S("1", 7);
        if (u.coeff_at_origin() == 0) continue;
        CHECK((u * u.invert_unit()).equal_below_common_trunc(S("1", 7)));
    }
}

TEST_CASE("nth roots of units") {
    Series f = S("1+y", 4);
    Series r = f.nth_root_unit(3);
    CHECK(r.str() == "1 + 1/3*y - 1/9*y^2 + 5/81*y^3");
    CHECK((r * r * r).equal_below_common_trunc(f));
    CHECK(S("1", 6).nth_root_unit(5).str() == "1");
    Series sq = S("1+x", 6);
    CHECK((sq * sq).nth_root_unit(2).equal_below_common_trunc(sq));
    CHECK_THROWS_AS(S("2+x", 6).nth_root_unit(2), Error);
    std::uint64_t st = 23;
    for (int i = 0; i < 20; ++i) {
        Series u = random_series(st, 7);
        Series v = u - Series::constant(XY, u.coeff_at_origin(), 7) + S("1", 7);
        unsigned n = (unsigned)(i % 4) + 1;
        Series root = v.nth_root_unit(n);
        Series pow = S("1", 7);
        for (unsigned j = 0; j < n; ++j) pow = pow * root;
        CHECK(pow.equal_below_common_trunc(v));
    }
}

TEST_CASE("monomial division") {
    CHECK(S("x^2*y + x*y^2", 8).monomial_divide(Monomial({1, 1})).str() == "x + y");
    Series f = S("y^4 + x*y^4", 9);
    CHECK(f.monomial_divide(Monomial({0, 4})).str() == "1 + x");
    CHECK_THROWS_AS(S("x+y", 8).monomial_divide(Monomial({1, 0})), Error);
}

TEST_CASE("order subadditivity") {
    std::uint64_t st = 31;
    for (int i = 0; i < 20; ++i) {
        Series f = random_series(st, 9), g = random_series(st, 9);
        OrderResult of = f.order(), og = g.order();
        if (!of.known || !og.known) continue;
        if (of.value + og.value >= 9) continue;
        OrderResult op = (f * g).order();
        CHECK(op.known);
        CHECK(op.value == of.value + og.value);
    }
}

TEST_CASE("exact polynomial flag") {
    Series p = P("x^2+y^3");
    CHECK(p.exact());
    CHECK(p.trunc() == Series::kInfTrunc);
    Series q = p * p;
    CHECK(q.exact());
    CHECK(q.coeff(Monomial({0, 6})) == 1);
    CHECK(!p.truncated(5).exact());
}
