#include <doctest.h>

#include "sumsq/expr.hpp"
#include "sumsq/psd.hpp"

using namespace sumsq;

namespace {

const std::vector<std::string> XY{"x", "y"};
const std::vector<std::string> XYZ{"x", "y", "z"};
const std::vector<std::string> SV{"s"};
Series P(const std::string& t) { return parse_poly(t, XY); }
Series P3(const std::string& t) { return parse_poly(t, XYZ); }

Series smono(const Rational& c, unsigned e, int tr = 30) {
    Series g = Series::zero(SV, tr);
    if (c != 0) g.insert_term(Monomial::unit(1, 0, e), c);
    return g;
}

Arc arc2(const Series& xi, const Series& eta, bool pos = true, unsigned q = 1) {
    Arc a;
    a.ramification = q;
    a.xi = xi;
    a.eta = eta;
    a.positive_side = pos;
    return a;
}

} // namespace

TEST_CASE("four squares") {
    for (long n : {0L, 1L, 2L, 3L, 7L, 12L, 4095L}) {
        FourSquares fs = four_square_decomposition(Rational(n));
        Rational sum = 0;
        for (const auto& p : fs.parts) sum += p * p;
        CHECK(sum == n);
    }
    FourSquares q = four_square_decomposition(Rational(3, 7));
    Rational sum = 0;
    for (const auto& p : q.parts) sum += p * p;
    CHECK(sum == Rational(3, 7));
    CHECK_THROWS_AS(four_square_decomposition(Rational(-1)), Error);
}

TEST_CASE("arc signs") {
    // exact cancellation on the cusp
    SignResult s1 = arc_sign(P("x^2-y^3"), arc2(smono(1, 3), smono(1, 2)));
    CHECK(s1.sign == 0);
    // spec example: x^3 + y^5 along (-t^2, t) is positive (leading +t^5)
    SignResult s2 = arc_sign(P("x^3+y^5"), arc2(smono(-1, 2), smono(1, 1)));
    CHECK(s2 == SignResult::Positive());
    // f = x along (-t^2, t): negative
    SignResult s3 = arc_sign(P("x"), arc2(smono(-1, 2), smono(1, 1)));
    CHECK(s3 == SignResult::Negative());
    // negative side flips odd orders
    SignResult s4 = arc_sign(P("y"), arc2(smono(0, 1), smono(1, 1), false));
    CHECK(s4 == SignResult::Negative());
    SignResult s5 = arc_sign(P("y^2"), arc2(smono(0, 1), smono(1, 1), false));
    CHECK(s5 == SignResult::Positive());
    // agreement with shrinking rational evaluations
    Series f = P("x^3 - 2*x*y^2 + y^4");
    Arc a = arc2(smono(1, 1) + smono(-2, 2), smono(1, 1));
    SignResult s = arc_sign(f, a);
    REQUIRE(s.sign != 0);
    for (int k = 11; k <= 25; ++k) {
        Rational t(1, 1L << k);
        Rational xv = t - 2 * t * t, yv = t;
        Rational v = xv * xv * xv - 2 * xv * yv * yv + yv * yv * yv * yv;
        CHECK((v > 0 ? 1 : -1) == s.sign);
    }
}

TEST_CASE("standard arc family is fixed and within spec bounds") {
    const auto& fam = standard_arc_family();
    CHECK(fam.size() == 200);
    for (const auto& a : fam) {
        CHECK(a.ramification >= 1);
        CHECK(a.ramification <= 4);
        OrderResult ox = a.xi.order(), oy = a.eta.order();
        CHECK((!ox.known || (ox.value >= 1 && ox.value <= 9)));
        CHECK((!oy.known || (oy.value >= 1 && oy.value <= 9)));
        if (!a.positive_side) CHECK(a.ramification % 2 == 1);
    }
}

TEST_CASE("base oracle: quadratic forms decided exactly") {
    CHECK(base_psd_oracle(P("x^2+y^2")) == PsdAnswer::Yes);
    CHECK(base_psd_oracle(P("x^2 - y^2")) == PsdAnswer::No);
    CHECK(base_psd_oracle(P("x^2 + 2*x*y + y^2")) == PsdAnswer::Yes);
    CHECK(base_psd_oracle(P("x^2 + 3*x*y + y^2")) == PsdAnswer::No);
    CHECK(base_psd_oracle(P("-5*x^2")) == PsdAnswer::No);
    CHECK(base_psd_oracle(P("0")) == PsdAnswer::Yes);
    CHECK(base_psd_oracle(P("2")) == PsdAnswer::Yes);
    CHECK(base_psd_oracle(P("-2")) == PsdAnswer::No);
    // falsification only beyond quadratic forms
    CHECK(base_psd_oracle(P("x^2*y")) == PsdAnswer::No); // arc with y < 0
    CHECK(base_psd_oracle(P("x^4+y^4")) == PsdAnswer::Inconclusive);
}

TEST_CASE("quadratic_z_psd") {
    CHECK(quadratic_z_psd(P("1"), P("0"), P("1")) == PsdAnswer::Yes);
    CHECK(quadratic_z_psd(P("x^2"), P("2*x"), P("1")) == PsdAnswer::Yes);
    CHECK(quadratic_z_psd(P("x^2"), P("3*x"), P("1")) == PsdAnswer::No);
}

TEST_CASE("lagrange transfer") {
    Series z = Series::variable(XYZ, 2, 12, true);
    // alpha = (1, 0), beta = (0, 1), a1 = 0: 1 + z^2
    auto c1 = lagrange_transfer({P("1"), P("0")}, {P("0"), P("1")}, P("0"), z);
    CHECK(c1.target.equal_below_common_trunc(P3("1+z^2").truncated(c1.target.trunc())));
    // alpha = (x, y), beta = (y, -x): a1 = 0, cert for (x^2+y^2)(1 + z^2)
    auto c2 = lagrange_transfer({P("x"), P("y")}, {P("y"), P("-x")}, P("0"), z);
    CHECK(c2.target.equal_below_common_trunc(
        P3("x^2 + y^2 + x^2*z^2 + y^2*z^2").truncated(c2.target.trunc())));
    // mismatched a1
    CHECK_THROWS_AS(lagrange_transfer({P("x")}, {P("y")}, P("x*y"), z), Error);
    // eps = -1 branch
    auto c3 = lagrange_transfer({P("x")}, {P("y")}, P("-2*x*y"), z);
    verify_certificate(c3);
}

TEST_CASE("erase denominators: the worked instance") {
    // y^2 (x^2 + y^2) = (x y)^2 + (y^2)^2, h = y, r = 1, k = 1, b = 0, g = 0
    DenomIdentity in;
    in.f = P3("x^2+y^2");
    in.a = {P3("x*y"), P3("y^2")};
    in.b = P3("0");
    in.h = P3("y");
    in.g = P3("0");
    in.r = 1;
    in.k = 1;
    in.z_index = 2;
    SosCertificate cert = erase_denominators(in);
    CHECK(cert.target.equal_below_common_trunc(P3("x^2+y^2")));
    CHECK(cert.summands.size() == 2);
    CHECK(cert.summands[0].str() == "x");
    CHECK(cert.summands[1].str() == "y");

    // r = 0 is a no-op
    DenomIdentity nop = in;
    nop.f = P3("x^2*y^2 + y^4");
    nop.r = 0;
    SosCertificate c2 = erase_denominators(nop);
    CHECK(c2.summands[0].str() == "x*y");

    // h without the real-radical property: (x^2+y^2)^2 * 1 = (x^2-y^2)^2 + (2xy)^2
    // holds, but x^2+y^2 divides neither summand
    DenomIdentity bad;
    bad.f = P3("1");
    bad.a = {P3("x^2-y^2"), P3("2*x*y")};
    bad.b = P3("0");
    bad.h = P3("x^2+y^2");
    bad.g = P3("1");
    bad.r = 1;
    bad.k = 1;
    CHECK_THROWS_AS(erase_denominators(bad), Error);
}

TEST_CASE("quadratic Galois descent") {
    // (1 + sqrt2 x)^2 + (1 - sqrt2 x)^2 = 2 + 4x^2
    std::vector<std::pair<Series, Series>> summands{{P("1"), P("x")}, {P("1"), P("-x")}};
    SosCertificate cert = sos_descend_quadratic(summands, Rational(2));
    CHECK(cert.target.equal_below_common_trunc(P("2+4*x^2")));
    verify_certificate(cert);
    // d_i = 0 stays unchanged
    SosCertificate c2 = sos_descend_quadratic({{P("x+y"), P("0")}}, Rational(3));
    CHECK(c2.target.equal_below_common_trunc(P("x^2 + 2*x*y + y^2")));
    // with a modulus carried through
    Series rel = P3("z^2 - x^3");
    SosCertificate c3 = sos_descend_quadratic(
        {{P3("z"), P3("x")}}, Rational(2),
        std::make_pair(rel, std::array<Series, 2>{P3("1"), P3("0")}));
    verify_certificate(c3);
    CHECK(c3.target.equal_below_common_trunc(P3("2*x^2 - x^3 + 2*z^2")));
}

TEST_CASE("cubic trace descent") {
    // b_i = c_i = 0: psi = sum a_i^2
    SosCertificate c0 =
        cubic_trace_descend({{P("x"), P("0"), P("0")}}, Rational(-1), Rational(1, 3));
    CHECK(c0.target.equal_below_common_trunc(P("x^2")));
    verify_certificate(c0);
    // a = -1, b = 1/3: -4a^3 - 27b^2 = 4 - 3 = 1 > 0; nontrivial summand
    SosCertificate c1 =
        cubic_trace_descend({{P("x"), P("y"), P("x+y")}}, Rational(-1), Rational(1, 3));
    verify_certificate(c1);
    // side conditions
    CHECK_THROWS_AS(cubic_trace_descend({{P("x"), P("0"), P("0")}}, Rational(1), Rational(1)),
                    Error);
    CHECK_THROWS_AS(cubic_trace_descend({{P("x"), P("0"), P("0")}}, Rational(-1), Rational(5)),
                    Error);
}

TEST_CASE("sturm chains match the displayed sequences up to positive scalars") {
    // p = x^3 + a x + b, a != 0: chain ~ (p, 3x^2 + a, -2a x - 3b, -4a^3 - 27 b^2)
    Rational a(-2), b(1);
    UniPoly p{b, a, 0, 1};
    SturmSequence chain = sturm(p);
    REQUIRE(chain.polys.size() == 4);
    CHECK(chain.polys[1] == UniPoly{a, 0, 3});
    REQUIRE(chain.polys[2].size() == 2);
    Rational lam = chain.polys[2][1] / (-2 * a);
    CHECK(lam > 0);
    CHECK(chain.polys[2][0] == lam * (-3 * b));
    REQUIRE(chain.polys[3].size() == 1);
    Rational target = -4 * a * a * a - 27 * b * b;
    CHECK(chain.polys[3][0] * target > 0);

    // a = 0 chain ~ (p, x^2, -b)
    UniPoly p0{Rational(5), 0, 0, 1};
    SturmSequence chain0 = sturm(p0);
    REQUIRE(chain0.polys.size() == 3);
    CHECK(chain0.polys[1] == UniPoly{0, 0, 3});
    REQUIRE(chain0.polys[2].size() == 1);
    CHECK(chain0.polys[2][0] * Rational(-5) > 0);

    // p = x - 1 -> (x-1, 1)
    SturmSequence lin = sturm(UniPoly{-1, 1});
    CHECK(lin.polys.size() == 2);
}

TEST_CASE("real root counts") {
    CHECK(count_real_roots(UniPoly{0, -1, 0, 1}) == 3); // x^3 - x
    CHECK(count_real_roots(UniPoly{0, 1, 0, 1}) == 1);  // x^3 + x
    CHECK(count_real_roots(UniPoly{1, 0, 1}) == 0);     // x^2 + 1
    // squarefree part taken: (x-1)^2 has one distinct root
    CHECK(count_real_roots(UniPoly{1, -2, 1}) == 1);
    Interval iv;
    iv.lo = Rational(0);
    iv.hi = Rational(2);
    CHECK(count_real_roots(UniPoly{0, -1, 0, 1}, iv) == 2); // roots 0 and 1 in [0,2]
}

TEST_CASE("obstruction arcs") {
    NormalForm bare;
    bare.kind = NormalForm::Case::X3Bare;
    bare.exact_cube = true;
    Obstruction ob = obstruction_arcs(bare);
    CHECK(ob.element.coeff(Monomial({1, 0})) == 1);
    CHECK(ob.element.coeff(Monomial({0, 2})) == 4); // M = 2 -> M^2 = 4
    Series F = parse_poly("x^3", XY);
    bool found_negative = false;
    for (const auto& a : ob.arcs) {
        SignResult sF = arc_sign(F, a);
        SignResult sE = arc_sign(ob.element, a);
        if (sF.sign >= 0 && sE.sign != 0) CHECK(sE.sign > 0);
        if (sF.sign < 0) found_negative = true;
    }
    CHECK(found_negative);

    NormalForm odd;
    odd.kind = NormalForm::Case::Order2;
    odd.tail = NormalForm::Order2Tail::OddPow;
    odd.a = Rational(-1);
    odd.k = 1;
    Obstruction o2 = obstruction_arcs(odd);
    CHECK(o2.element.str() == "y");

    NormalForm evenk;
    evenk.kind = NormalForm::Case::Order2;
    evenk.tail = NormalForm::Order2Tail::EvenPow;
    evenk.a = Rational(-1);
    evenk.b = Rational(1);
    evenk.k = 2;
    Obstruction o3 = obstruction_arcs(evenk);
    Series F3 = parse_poly("-x^2 + y^4", XY);
    for (const auto& a : o3.arcs) {
        SignResult sF = arc_sign(F3, a);
        if (sF.sign >= 0) {
            SignResult sE = arc_sign(o3.element, a);
            CHECK(sE.sign >= 0);
        }
    }

    NormalForm good;
    good.kind = NormalForm::Case::X2Y;
    CHECK_THROWS_AS(obstruction_arcs(good), Error);
}

TEST_CASE("dominating constant") {
    // f = 3 x^2 y^2, s = 2: M = 10 + 4 = 14 over the five degree-4 exponents
    DominatingConstant d1 = dominating_constant(P("3*x^2*y^2"), 2);
    CHECK(d1.M == 14);
    // f = 0: M = #{nu}
    DominatingConstant d0 = dominating_constant(P("0"), 2);
    CHECK(d0.M == 5);
    // f = x^4: assignment nu = (4,0), M = (1+1) + 4 = 6
    DominatingConstant d2 = dominating_constant(P("x^4"), 2);
    CHECK(d2.M == 6);
    REQUIRE(d2.assignment.size() == 1);
    CHECK(d2.assignment[0].second == Monomial({4, 0}));
    CHECK_THROWS_AS(dominating_constant(P("x^2"), 2), Error);

    // arc check: M^2 ||x||^{2s} - f nonnegative on the standard family
    for (const Series& f : {P("3*x^2*y^2"), P("x^4"), P("x^4 - 2*x^3*y + y^5")}) {
        DominatingConstant d = dominating_constant(f, 2);
        Series dom = (P("x^2+y^2") * P("x^2+y^2")).scalar_mul(d.M * d.M) - f;
        for (const auto& a : standard_arc_family()) CHECK(arc_sign(dom, a).sign >= 0);
    }
}
