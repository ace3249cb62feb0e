#include <doctest.h>

#include "sumsq/determinacy.hpp"
#include "sumsq/expr.hpp"
#include "sumsq/weierstrass.hpp"

using namespace sumsq;

namespace {

const std::vector<std::string> XY{"x", "y"};
Series P(const std::string& text) { return parse_poly(text, XY); }

} // namespace

TEST_CASE("jacobian generators") {
    auto g1 = jacobian_generators(P("3*x^2 + 2*y^4"));
    CHECK(g1[0].str() == "6*x");
    CHECK(g1[1].str() == "8*y^3");
    auto g2 = jacobian_generators(P("x^2*y"));
    CHECK(g2[0].str() == "2*x*y");
    CHECK(g2[1].str() == "x^2");
    auto g3 = jacobian_generators(P("5"));
    CHECK(g3[0].is_zero());
    CHECK(g3[1].is_zero());
}

TEST_CASE("graded membership basics") {
    // m^1 in (x, y) with full multipliers: x = 1*x
    std::vector<Series> gens{P("x"), P("y")};
    auto cert = graded_membership(1, gens, MultiplierIdeal::Full, nullptr);
    REQUIRE(cert.has_value());
    verify_certificate(*cert, gens, nullptr);

    // with the maximal-ideal multiplier the same inclusion fails
    auto cert2 = graded_membership(1, gens, MultiplierIdeal::MaximalIdeal, nullptr);
    CHECK(!cert2.has_value());

    // Example-style: J(a x^2 + b y^l), l = 4: m^4 in m J
    Series f = P("x^2 + 3*y^4");
    auto certs = graded_membership(4, jacobian_generators(f), MultiplierIdeal::MaximalIdeal, nullptr);
    REQUIRE(certs.has_value());
    verify_certificate(*certs, jacobian_generators(f), nullptr);

    // degenerate cubic: 4a^3 + 27b^2 = 0 for a = -3, b = 2 fails at 3
    Series fd = P("x^3 - 3*x*y^2 + 2*y^3");
    auto certd = graded_membership(3, jacobian_generators(fd), MultiplierIdeal::MaximalIdeal, nullptr);
    CHECK(!certd.has_value());
}

TEST_CASE("determinacy golden values from the worked families") {
    // a x^2 + b y^l is l-determined
    for (int l : {2, 3, 4, 5, 6}) {
        Series f = P("2*x^2 + 3*y^" + std::to_string(l));
        DeterminacyReport rep = determinacy_bound(f, 10);
        CHECK(rep.kind == DeterminacyReport::Kind::Determined);
        CHECK(rep.k == l);
    }
    // a x^2 y + b y^l is l-determined
    for (int l : {3, 4, 5}) {
        Series f = P("x^2*y - 2*y^" + std::to_string(l));
        DeterminacyReport rep = determinacy_bound(f, 10);
        CHECK(rep.kind == DeterminacyReport::Kind::Determined);
        CHECK(rep.k == l);
    }
    // nondegenerate cubic: 3-determined
    Series fc = P("x^3 + x*y^2 + y^3"); // 4 + 27 != 0
    DeterminacyReport rc = determinacy_bound(fc, 8);
    CHECK(rc.kind == DeterminacyReport::Kind::Determined);
    CHECK(rc.k == 3);
    // x^3 + x y^3: 5-determined
    DeterminacyReport r4 = determinacy_bound(P("x^3+x*y^3"), 9);
    CHECK(r4.kind == DeterminacyReport::Kind::Determined);
    CHECK(r4.k == 5);
    // x^3 + a y^k: k-determined
    for (int k : {4, 5, 6}) {
        DeterminacyReport rep = determinacy_bound(P("x^3 + 2*y^" + std::to_string(k)), 10);
        CHECK(rep.kind == DeterminacyReport::Kind::Determined);
        CHECK(rep.k == k);
    }
}

TEST_CASE("x^2 y is not certified at any k") {
    DeterminacyReport rep = determinacy_bound(P("x^2*y"), 8);
    CHECK(rep.kind == DeterminacyReport::Kind::NotCertified);
    CHECK(rep.k == 8);
    CHECK(!rep.determined_k.has_value());
    CHECK(!rep.quasidetermined_k.has_value());
}

TEST_CASE("monotonicity: a certified quasi inclusion persists at k+1") {
    Series f = P("x^3 + x*y^2 + y^4"); // some mixed shape
    std::vector<Series> gens = jacobian_generators(f);
    for (int k = 1; k <= 7; ++k) {
        auto ck = graded_membership(k, gens, MultiplierIdeal::MaximalIdeal, &f);
        if (!ck) continue;
        auto ck1 = graded_membership(k + 1, gens, MultiplierIdeal::MaximalIdeal, &f);
        CHECK(ck1.has_value());
    }
}

TEST_CASE("invariance under linear change") {
    std::uint64_t st = 13;
    auto next = [&]() {
        st ^= st << 13;
        st ^= st >> 7;
        st ^= st << 17;
        return st;
    };
    std::vector<Series> inputs{P("x^2 + y^5"), P("x^3 + x*y^3"), P("x^3 + 2*y^4")};
    for (const Series& f : inputs) {
        DeterminacyReport base = determinacy_bound(f, 9);
        for (int t = 0; t < 3; ++t) {
            LinearChange L;
            do {
                L.matrix = {{Rational((long)(next() % 5) - 2), Rational((long)(next() % 5) - 2)},
                            {Rational((long)(next() % 5) - 2), Rational((long)(next() % 5) - 2)}};
            } while (L.det() == 0);
            DeterminacyReport moved = determinacy_bound(L.apply(f), 9);
            CHECK(moved.kind == base.kind);
            CHECK(moved.k == base.k);
        }
    }
}

TEST_CASE("precision guards") {
    Series f = P("x^2+y^3").truncated(6);
    CHECK_THROWS_AS(determinacy_bound(f, 6), Error);
    std::vector<Series> gens{P("x").truncated(3)};
    CHECK_THROWS_AS(graded_membership(4, gens, MultiplierIdeal::Full, nullptr), Error);
}
