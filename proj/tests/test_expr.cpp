#include <doctest.h>

#include "sumsq/expr.hpp"

using namespace sumsq;

TEST_CASE("grammar basics") {
    ExprAst a = parse_expr("x^3 + 2*y^3");
    CHECK(print_expr(a) == "x^3 + 2*y^3");
    ExprAst b = parse_expr("1/2*x*y^2 - y^3");
    CHECK(print_expr(b) == "1/2*x*y^2 - y^3");
    CHECK(b.terms.size() == 2);
    CHECK(b.terms[0].coeff == Rational(1, 2));
}

TEST_CASE("whitespace-insensitive, '*' optional") {
    CHECK(print_expr(parse_expr("  x ^ 2   y + 3 x ")) == "3*x + x^2*y");
    CHECK(print_expr(parse_expr("2x")) == "2*x");
    CHECK(print_expr(parse_expr("x y z")) == "x*y*z");
}

TEST_CASE("parse errors carry offsets") {
    try {
        parse_expr("x^^2");
        CHECK(false);
    } catch (const ParseFail& e) {
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(parse_expr("x+"), ParseFail);
    CHECK_THROWS_AS(parse_expr("q"), ParseFail);
    CHECK_THROWS_AS(parse_expr(""), ParseFail);
}

TEST_CASE("round trip: parse . print . parse == parse") {
    for (const char* s : {"x^3 + 2*y^3", "-x^2", "x^2*y - y^3", "1/3 - x + x*y",
                          "x^3 - 1/2*x*y^2 + 7/5*y^3 - y^4"}) {
        ExprAst once = parse_expr(s);
        ExprAst twice = parse_expr(print_expr(once));
        CHECK(print_expr(once) == print_expr(twice));
    }
}

TEST_CASE("series round trip") {
    Series f = parse_poly("x^3 + 1/2*x*y^2 - y^3");
    CHECK(f.str() == "x^3 + 1/2*x*y^2 - y^3");
    Series g = parse_poly(f.str());
    CHECK((f - g).is_zero());
    CHECK(parse_poly("0", {"x", "y"}).is_zero());
}

TEST_CASE("canonicalization merges terms") {
    CHECK(print_expr(parse_expr("x + x - 2*x")) == "0");
    CHECK(print_expr(parse_expr("x*x*x")) == "x^3");
    CHECK(print_expr(parse_expr("2*x*3*y")) == "6*x*y");
}
