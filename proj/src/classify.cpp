#include "sumsq/classify.hpp"

#include <algorithm>

#include "sumsq/expr.hpp"
#include "sumsq/polyfactor.hpp"
#include "sumsq/weierstrass.hpp"

namespace sumsq {

namespace {

const std::vector<std::string> kXY{"x", "y"};

Series xy_poly(const std::vector<std::pair<Monomial, Rational>>& terms) {
    return Series::poly(kXY, terms);
}

Monomial mono_xy(unsigned ex, unsigned ey) { return Monomial({ex, ey}); }

Series lift_y(const Series& f_y, int trunc) {
    // univariate series over {y} -> bivariate over {x,y}
    Series r(kXY, f_y.exact() ? std::max(1, f_y.stated_trunc()) : std::min(trunc, f_y.trunc()),
             f_y.exact());
    f_y.for_each([&](const Monomial& m, const Rational& c) { r.insert_term(mono_xy(0, m.e[0]), c); });
    return r;
}

Series var_x(int tr, bool exact = false) { return Series::variable(kXY, 0, tr, exact); }
Series var_y(int tr, bool exact = false) { return Series::variable(kXY, 1, tr, exact); }

} // namespace

Series NormalForm::representative() const {
    switch (kind) {
    case Case::Smooth: return xy_poly({{mono_xy(1, 0), Rational(1)}});
    case Case::Order2: {
        std::vector<std::pair<Monomial, Rational>> t{{mono_xy(2, 0), a}};
        if (tail == Order2Tail::OddPow) t.push_back({mono_xy(0, (unsigned)(2 * k + 1)), Rational(1)});
        if (tail == Order2Tail::EvenPow) t.push_back({mono_xy(0, (unsigned)(2 * k)), b});
        return xy_poly(t);
    }
    case Case::X2Y: return xy_poly({{mono_xy(2, 1), Rational(1)}});
    case Case::X2YPlus: {
        Rational c2 = k % 2 == 0 ? a : -a;
        return xy_poly({{mono_xy(2, 1), Rational(1)}, {mono_xy(0, (unsigned)k), c2}});
    }
    case Case::IrreducibleCubic:
        return xy_poly({{mono_xy(3, 0), Rational(1)}, {mono_xy(1, 2), a}, {mono_xy(0, 3), b}});
    case Case::X3Y4: return xy_poly({{mono_xy(3, 0), Rational(1)}, {mono_xy(0, 4), a}});
    case Case::X3XY3: return xy_poly({{mono_xy(3, 0), Rational(1)}, {mono_xy(1, 3), Rational(1)}});
    case Case::X3Y5: return xy_poly({{mono_xy(3, 0), Rational(1)}, {mono_xy(0, 5), Rational(1)}});
    case Case::X3Bare: return xy_poly({{mono_xy(3, 0), Rational(1)}});
    case Case::HighOrder:
    case Case::NotReduced: return xy_poly({});
    }
    return xy_poly({});
}

std::string NormalForm::case_name() const {
    switch (kind) {
    case Case::Smooth: return "smooth";
    case Case::Order2:
        return tail == Order2Tail::None ? "a_x2"
                                        : (tail == Order2Tail::OddPow ? "a_x2_plus_y_odd"
                                                                      : "a_x2_plus_b_y_even");
    case Case::X2Y: return "x2y";
    case Case::X2YPlus: return "x2y_plus_a_yk";
    case Case::IrreducibleCubic: return "irreducible_cubic";
    case Case::X3Y4: return "x3_plus_a_y4";
    case Case::X3XY3: return "x3_plus_xy3";
    case Case::X3Y5: return "x3_plus_y5";
    case Case::X3Bare: return "x3";
    case Case::HighOrder: return "high_order";
    case Case::NotReduced: return "not_reduced";
    }
    return "?";
}

Verdict decide(const NormalForm& nf) {
    switch (nf.kind) {
    case NormalForm::Case::Smooth: return Verdict::Yes;
    case NormalForm::Case::Order2:
        if (nf.tail == NormalForm::Order2Tail::EvenPow && nf.k == 1)
            return (nf.a > 0 || nf.b > 0) ? Verdict::Yes : Verdict::No;
        return nf.a > 0 ? Verdict::Yes : Verdict::No;
    case NormalForm::Case::X2Y: return Verdict::Yes;
    case NormalForm::Case::X2YPlus: return nf.a > 0 ? Verdict::Yes : Verdict::No;
    case NormalForm::Case::IrreducibleCubic: return Verdict::Yes;
    case NormalForm::Case::X3Y4: return nf.a > 0 ? Verdict::Yes : Verdict::No;
    case NormalForm::Case::X3XY3: return Verdict::Yes;
    case NormalForm::Case::X3Y5: return Verdict::Yes;
    case NormalForm::Case::X3Bare:
    case NormalForm::Case::HighOrder:
    case NormalForm::Case::NotReduced: return Verdict::No;
    }
    return Verdict::Unknown;
}

std::vector<Series> invert_map(const std::vector<Series>& images, int trunc) {
    std::size_t n = images.size();
    if (n == 0) return {};
    const auto& vars = images[0].vars();
    if (vars.size() != n) fail(Errc::variable_mismatch, "square map required");

    // linear part must be invertible
    LinearChange L;
    L.matrix.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        if (images[i].coeff_at_origin() != 0)
            fail(Errc::inconsistent_input, "map does not fix the origin");
        for (std::size_t j = 0; j < n; ++j)
            L.matrix[i][j] = images[i].coeff(Monomial::unit(n, j));
    }
    LinearChange Linv = L.inverse();

    std::vector<Series> tau;
    for (std::size_t i = 0; i < n; ++i) {
        Series t = Series::zero(vars, trunc);
        for (std::size_t j = 0; j < n; ++j)
            if (Linv.matrix[i][j] != 0)
                t.insert_term(Monomial::unit(n, j), Linv.matrix[i][j]);
        tau.push_back(t);
    }
    // Newton-style fixed point: tau <- tau - L^{-1} (g(tau) - id)
    for (int it = 0; it <= trunc + 1; ++it) {
        std::vector<Series> errs;
        for (std::size_t j = 0; j < n; ++j)
            errs.push_back(images[j].truncated(trunc).substitute(tau) -
                           Series::variable(vars, j, trunc));
        bool stable = true;
        std::vector<Series> next;
        for (std::size_t i = 0; i < n; ++i) {
            Series corr = Series::zero(vars, trunc);
            for (std::size_t j = 0; j < n; ++j)
                if (Linv.matrix[i][j] != 0) corr = corr + errs[j].scalar_mul(Linv.matrix[i][j]);
            Series cand = tau[i] - corr;
            if (!cand.equal_below_common_trunc(tau[i])) stable = false;
            next.push_back(cand);
        }
        tau = std::move(next);
        if (stable) break;
    }
    // verify
    for (std::size_t i = 0; i < n; ++i) {
        Series gt = images[i].truncated(trunc).substitute(tau);
        if (!gt.equal_below_common_trunc(Series::variable(vars, i, trunc)))
            fail(Errc::internal, "map inversion failed");
    }
    return tau;
}

ChainCheck verify_chain(const Series& F, const std::vector<ChainStep>& chain, const Series& target,
                        int work_trunc) {
    ChainCheck out;
    std::size_t n = F.nvars();
    for (std::size_t i = 0; i < n; ++i) out.sub.push_back(Series::variable(F.vars(), i, work_trunc));
    out.unit = Series::constant(F.vars(), Rational(1), work_trunc);
    for (const auto& step : chain) {
        // F_{i+1} = unit * (F_i o sub)  =>  U' = unit * (U o sub), Phi' = Phi o sub
        Series ucomp = out.unit.substitute(step.sub);
        out.unit = step.unit.truncated(std::min(work_trunc, step.unit.trunc())) * ucomp;
        std::vector<Series> comp;
        for (std::size_t i = 0; i < n; ++i) comp.push_back(out.sub[i].substitute(step.sub));
        out.sub = comp;
    }
    Series lhs = target.truncated(std::min(work_trunc, target.trunc()));
    Series rhs = out.unit * F.truncated(std::min(work_trunc, F.trunc())).substitute(out.sub);
    Series diff = lhs - rhs;
    OrderResult o = diff.order();
    out.verified_to = o.known ? o.value : diff.trunc();
    return out;
}

// --------------------------------------------------------------- order two

ReductionResult order2_reduce(const Series& F_in, int N) {
    if (!F_in.exact()) fail(Errc::inconsistent_input, "order2_reduce needs an exact polynomial");
    ReductionResult out;
    int W = N + 4;

    // regularize in x; the chain step records exactly L's images
    auto [L, F1] = make_regular(F_in, 0);
    {
        std::vector<Series> imgs;
        for (std::size_t i = 0; i < 2; ++i) {
            Series im = Series::poly(kXY, {});
            for (std::size_t j = 0; j < 2; ++j)
                if (L.matrix[i][j] != 0) im.insert_term(Monomial::unit(2, j), L.matrix[i][j]);
            imgs.push_back(im);
        }
        out.chain.push_back({imgs, Series::constant(kXY, Rational(1), W, true), "regularizing shear"});
    }

    // prepare and complete the square
    WeierstrassFactorization Wf = prepare(F1.truncated(W + 4), 0);
    Rational a = Wf.unit.coeff_at_origin();
    auto [shift_red, Wt] = tschirnhaus(Wf);
    Series shift = lift_y(shift_red, W + 2);
    std::vector<Series> sigma{var_x(W + 2) + shift, var_y(W + 2)};
    Series Us = Wf.unit.substitute(sigma);
    Series unit2 = Us.scalar_mul(1 / a).invert_unit_at(W).scalar_mul(1); // (U/a)^{-1}
    out.chain.push_back({sigma, unit2, "tschirnhaus shift, unit absorbed into z"});

    // F2 = a * (x^2 + coeffs[0]), so the tail of the a x^2 + psi form is a * coeffs[0]
    Series psi_y = Wt.coeffs[0].scalar_mul(a); // over {y}
    // certified psi == 0 test: F is (unit) * (order-1 branch)^2 exactly
    bool psi_zero = false;
    {
        SquarefreeDecomposition sfd = squarefree_decomposition(F1);
        bool good = true;
        int doubles = 0;
        for (const auto& [fac, e] : sfd.factors) {
            OrderResult of = fac.order();
            int ord = of.known ? of.value : 0;
            if (ord == 0) continue;
            if (e == 2 && ord == 1) ++doubles;
            else good = false;
        }
        psi_zero = good && doubles == 1;
    }

    if (psi_zero) {
        out.nf.kind = NormalForm::Case::Order2;
        out.nf.tail = NormalForm::Order2Tail::None;
        out.nf.a = a;
        return out;
    }

    // find the order of psi, raising precision if needed
    OrderResult opsi = psi_y.order();
    int tries = 0;
    Series F1w = F1;
    while (!opsi.known && tries < 4) {
        ++tries;
        W = 2 * W;
        Wf = prepare(F1.truncated(W + 4), 0);
        auto ts = tschirnhaus(Wf);
        psi_y = ts.second.coeffs[0].scalar_mul(a);
        opsi = psi_y.order();
    }
    if (!opsi.known) {
        out.uncertified = true;
        out.precision_note = "psi vanishes below truncation but F is not a certified square";
        out.nf.kind = NormalForm::Case::Order2;
        out.nf.tail = NormalForm::Order2Tail::None;
        out.nf.a = a;
        return out;
    }
    int l = opsi.value;
    Rational b = psi_y.coeff(Monomial::unit(1, 0, (unsigned)l));

    // normalize the unit of psi: psi = b y^l u^l, then y -> eta with eta*u(eta) = y
    {
        Series u_y = psi_y.monomial_divide(Monomial::unit(1, 0, (unsigned)l)).scalar_mul(1 / b);
        Series u_root = u_y.nth_root_unit((unsigned)l);
        Series u2 = lift_y(u_root, W);
        std::vector<Series> scaled{var_x(W), var_y(W) * u2};
        std::vector<Series> eta = invert_map(scaled, W);
        out.chain.push_back({eta, Series::constant(kXY, Rational(1), W), "tail unit absorbed into y"});
    }

    if (l % 2 == 1) {
        int kk = (l - 1) / 2;
        // (x,y,z) -> (b^{k+1} x, b y, b^{k+1} z)
        Rational bk1 = 1;
        for (int i = 0; i <= kk; ++i) bk1 *= b;
        Rational scale = bk1 * bk1; // b^{2k+2}
        out.chain.push_back({{var_x(W, true).scalar_mul(bk1), var_y(W, true).scalar_mul(b)},
                             Series::constant(kXY, 1 / scale, W),
                             "odd tail rescaled to y^(2k+1)"});
        out.nf.kind = NormalForm::Case::Order2;
        out.nf.tail = NormalForm::Order2Tail::OddPow;
        out.nf.a = a;
        out.nf.k = kk;
        return out;
    }

    int kk = l / 2;
    if (kk == 1 && a < 0 && b > 0) {
        // swap x and y so that the Sigma-coefficient leads
        out.chain.push_back({{var_y(W, true), var_x(W, true)},
                             Series::constant(kXY, Rational(1), W),
                             "swap so the positive coefficient multiplies x^2"});
        out.nf.kind = NormalForm::Case::Order2;
        out.nf.tail = NormalForm::Order2Tail::EvenPow;
        out.nf.a = b;
        out.nf.b = a;
        out.nf.k = 1;
        return out;
    }
    out.nf.kind = NormalForm::Case::Order2;
    out.nf.tail = NormalForm::Order2Tail::EvenPow;
    out.nf.a = a;
    out.nf.b = b;
    out.nf.k = kk;
    return out;
}

// ------------------------------------------------------------- order three

namespace {

struct LinearFactor {
    long alpha, beta; // alpha x + beta y, primitive, deterministic sign
    int multiplicity;
};

std::vector<LinearFactor> rational_linear_factors(const Series& cubic) {
    // candidates from rational roots of In(t,1) plus the y | In case
    std::vector<LinearFactor> out;
    Rational c3 = cubic.coeff(mono_xy(3, 0));
    Rational c2 = cubic.coeff(mono_xy(2, 1));
    Rational c1 = cubic.coeff(mono_xy(1, 2));
    Rational c0 = cubic.coeff(mono_xy(0, 3));

    if (c3 == 0) out.push_back({0, 1, 0}); // the factor y; multiplicity fixed below

    // integerize c3 t^3 + c2 t^2 + c1 t + c0 and deflate zero roots
    std::vector<Rational> cs{c0, c1, c2, c3};
    while (!cs.empty() && cs.back() == 0) cs.pop_back();
    bool zero_root = false;
    while (!cs.empty() && cs.front() == 0) {
        zero_root = true;
        cs.erase(cs.begin());
    }
    std::vector<std::pair<long, long>> roots; // p/q, q > 0
    if (zero_root) roots.emplace_back(0, 1);
    if (cs.size() >= 2) {
        mpz_class den = 1;
        for (const Rational& c : cs) {
            mpz_class d = c.get_den();
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), den.get_mpz_t(), d.get_mpz_t());
            den = den / g * d;
        }
        mpz_class lead = mpz_class(Rational(cs.back() * den));
        mpz_class cst = mpz_class(Rational(cs.front() * den));
        auto divisors = [](const mpz_class& n_in) {
            std::vector<long> ds;
            mpz_class n = abs(n_in);
            if (n == 0) return ds;
            for (mpz_class d = 1; d * d <= n; ++d)
                if (n % d == 0) {
                    ds.push_back(mpz_class(d).get_si());
                    ds.push_back(mpz_class(n / d).get_si());
                }
            std::sort(ds.begin(), ds.end());
            ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
            return ds;
        };
        for (long p : divisors(cst))
            for (long q : divisors(lead))
                for (int sg : {1, -1}) {
                    Rational t(sg * p, q);
                    t.canonicalize();
                    Rational v = 0;
                    for (std::size_t i = cs.size(); i-- > 0;) v = v * t + cs[i];
                    if (v == 0)
                        roots.emplace_back(mpz_class(t.get_num()).get_si(),
                                           mpz_class(t.get_den()).get_si());
                }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    for (auto [p, q] : roots) out.push_back({q, -p, 0});

    // multiplicities via exact division
    for (auto& f : out) {
        Series lf = xy_poly({{mono_xy(1, 0), Rational(f.alpha)}, {mono_xy(0, 1), Rational(f.beta)}});
        Series cur = cubic;
        int m = 0;
        while (true) {
            auto q = poly_divide_exact(cur, lf);
            if (!q) break;
            cur = *q;
            ++m;
        }
        f.multiplicity = m;
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const LinearFactor& f) { return f.multiplicity == 0; }),
              out.end());
    // deterministic order: smallest |alpha|+|beta| first, then positive beta
    std::sort(out.begin(), out.end(), [](const LinearFactor& a, const LinearFactor& b) {
        long sa = std::abs(a.alpha) + std::abs(a.beta), sb = std::abs(b.alpha) + std::abs(b.beta);
        if (sa != sb) return sa < sb;
        if (a.beta != b.beta) return a.beta > b.beta;
        return a.alpha > b.alpha;
    });
    return out;
}

void ext_gcd(long a, long b, long& u, long& v) {
    if (b == 0) {
        u = a >= 0 ? 1 : -1;
        v = 0;
        return;
    }
    long u1, v1;
    ext_gcd(b, a % b, u1, v1);
    u = v1;
    v = u1 - (a / b) * v1;
}

// append a witness step "target = unit * (cur o phi)" for the tail beyond
// the determinacy order
void append_determinacy_step(std::vector<ChainStep>& chain, const Series& target,
                             const Series& cur, int k, int N, const std::string& note) {
    Series diff = cur - target.truncated(std::min(cur.trunc(), target.trunc()));
    if (diff.is_zero()) return;
    EquivalenceWitness wit = right_equivalence_witness(target, cur, k, N);
    chain.push_back({wit.substitutions, wit.unit, note});
}

} // namespace

ReductionResult order3_reduce(const Series& F_in, int N, bool witnesses) {
    if (!F_in.exact()) fail(Errc::inconsistent_input, "order3_reduce needs an exact polynomial");
    ReductionResult out;
    int W = N + 4;

    Series In = F_in.initial_form();
    std::vector<LinearFactor> factors = rational_linear_factors(In);
    int total_mult = 0, max_mult = 0;
    for (const auto& f : factors) {
        total_mult += f.multiplicity;
        max_mult = std::max(max_mult, f.multiplicity);
    }

    Series F = F_in;
    auto push_linear = [&](const std::vector<std::vector<Rational>>& m, const Rational& unit_c,
                           const std::string& note) {
        Series ix = var_x(W, true).scalar_mul(m[0][0]) + var_y(W, true).scalar_mul(m[0][1]);
        Series iy = var_x(W, true).scalar_mul(m[1][0]) + var_y(W, true).scalar_mul(m[1][1]);
        std::vector<Series> sub{ix, iy};
        F = F.substitute(sub).scalar_mul(unit_c);
        out.chain.push_back({sub, Series::constant(kXY, unit_c, W, true), note});
    };

    if (factors.empty() || (max_mult == 1 && total_mult >= 1)) {
        // nondegenerate cubic: irreducible over Q, or squarefree reducible
        // -- first bring In to x^3 + a x y^2 + b y^3
        if (max_mult == 1 && total_mult >= 1) {
            // reducible: send the preferred linear factor to y, then handle as x^2 y? no:
            // squarefree reducible cubics go through the y (x^2 - a y^2) form below
            const LinearFactor& lf = factors[0];
            long u, v;
            std::vector<std::vector<Rational>> m(2, std::vector<Rational>(2, Rational(0)));
            if (lf.alpha == 0) {
                // beta * y -> y
                m = {{Rational(1), Rational(0)}, {Rational(0), Rational(1, lf.beta)}};
            } else {
                ext_gcd(lf.alpha, lf.beta, u, v);
                // x -> -beta x + u y, y -> alpha x + v y gives l -> y
                m = {{Rational(-lf.beta), Rational(u)}, {Rational(lf.alpha), Rational(v)}};
            }
            push_linear(m, Rational(1), "send the rational linear factor to y");
            // now In = y * q(x,y), q(1,0) != 0
            Series In2 = F.initial_form();
            Rational A = In2.coeff(mono_xy(2, 1));
            Rational B = In2.coeff(mono_xy(1, 2));
            Rational C = In2.coeff(mono_xy(0, 3));
            if (A == 0) fail(Errc::internal, "factor map failed to keep q regular in x");
            // Tschirnhaus in x: x -> x - B/(2A) y
            push_linear({{Rational(1), -B / (2 * A)}, {Rational(0), Rational(1)}}, Rational(1),
                        "complete the square in the quadratic cofactor");
            In2 = F.initial_form();
            Rational a1 = -In2.coeff(mono_xy(0, 3)) / A; // In = A (x^2 y - a1 y^3)? recompute below
            // normalize A: (x,y,z) -> (A x, A y, A^2 z)
            push_linear({{Rational(A), Rational(0)}, {Rational(0), Rational(A)}},
                        1 / (A * A * A * A), "rescale the cubic to x^2 y - a y^3");
            In2 = F.initial_form();
            if (In2.coeff(mono_xy(2, 1)) != 1) fail(Errc::internal, "cubic normalization failed");
            a1 = -In2.coeff(mono_xy(0, 3));
            if (a1 == 0) fail(Errc::internal, "degenerate cubic escaped the multiplicity check");
            Series target = xy_poly({{mono_xy(2, 1), Rational(1)}, {mono_xy(0, 3), -a1}});
            if (witnesses) append_determinacy_step(out.chain, target, F, 3, std::min(2 * 3 + 2, W),
                                                   "3-determined tail absorbed (flow witness)");
            out.nf.kind = NormalForm::Case::X2YPlus;
            out.nf.k = 3;
            out.nf.a = a1;
            return out;
        }

        // irreducible: Tschirnhaus + scale to x^3 + a x y^2 + b y^3
        Rational c3 = In.coeff(mono_xy(3, 0));
        if (c3 == 0) fail(Errc::internal, "irreducible cubic with vanishing x^3 coefficient");
        Rational c2 = In.coeff(mono_xy(2, 1));
        push_linear({{Rational(1), -c2 / (3 * c3)}, {Rational(0), Rational(1)}}, Rational(1),
                    "tschirnhaus: kill the x^2 y term");
        Series In2 = F.initial_form();
        Rational A = In2.coeff(mono_xy(1, 2)) / c3;
        Rational B = In2.coeff(mono_xy(0, 3)) / c3;
        // (x,y,z) -> (c3 x, c3 y, c3^2 z)
        push_linear({{c3, Rational(0)}, {Rational(0), c3}}, 1 / (c3 * c3 * c3 * c3),
                    "rescale to a monic cubic");
        In2 = F.initial_form();
        Rational a = In2.coeff(mono_xy(1, 2));
        Rational b = In2.coeff(mono_xy(0, 3));
        if (In2.coeff(mono_xy(3, 0)) != 1 || a != A || b != B)
            fail(Errc::internal, "cubic normalization failed");
        Rational disc = 4 * a * a * a + 27 * b * b;
        if (disc == 0) fail(Errc::internal, "degenerate cubic escaped the multiplicity check");
        Series target = xy_poly({{mono_xy(3, 0), Rational(1)}, {mono_xy(1, 2), a}, {mono_xy(0, 3), b}});
        if (witnesses) append_determinacy_step(out.chain, target, F, 3, std::min(2 * 3 + 2, W),
                                               "3-determined tail absorbed (flow witness)");
        out.nf.kind = NormalForm::Case::IrreducibleCubic;
        out.nf.a = a;
        out.nf.b = b;
        return out;
    }

    if (max_mult == 2) {
        // In ~ x^2 y: send the double factor to x, the simple one to y
        const LinearFactor* dbl = nullptr;
        const LinearFactor* simple = nullptr;
        for (const auto& f : factors)
            (f.multiplicity == 2 ? dbl : simple) = &f;
        if (!dbl || !simple) fail(Errc::internal, "inconsistent factor multiplicities");
        // invert [[alpha,beta],[alpha',beta']]
        Rational det = Rational(dbl->alpha) * simple->beta - Rational(dbl->beta) * simple->alpha;
        if (det == 0) fail(Errc::internal, "parallel factors");
        std::vector<std::vector<Rational>> m{
            {Rational(simple->beta) / det, Rational(-dbl->beta) / det},
            {Rational(-simple->alpha) / det, Rational(dbl->alpha) / det}};
        push_linear(m, Rational(1), "send the double factor to x, the simple one to y");
        Series In2 = F.initial_form();
        Rational c = In2.coeff(mono_xy(2, 1));
        if (c == 0) fail(Errc::internal, "x^2 y normalization failed");
        if (c != 1)
            push_linear({{Rational(1), Rational(0)}, {Rational(0), 1 / c}}, Rational(1),
                        "rescale the x^2 y coefficient to 1");

        // absorption loop
        Series x2y = xy_poly({{mono_xy(2, 1), Rational(1)}});
        int s_cap = N;
        for (int guard = 0; guard <= s_cap + 2; ++guard) {
            Series R = F - x2y;
            if (R.is_zero()) {
                out.nf.kind = NormalForm::Case::X2Y;
                return out;
            }
            OrderResult orr = R.order();
            int s = orr.value;
            if (!orr.known || s > s_cap) break;
            Rational a = R.coeff(mono_xy(0, (unsigned)s));
            Rational bc = R.coeff(mono_xy(1, (unsigned)(s - 1)));
            // phi := (x^2-divisible part of R) / x^2, all degrees
            Series phi = Series::poly(kXY, {});
            R.for_each([&](const Monomial& mm, const Rational& cc) {
                if (mm.e[0] >= 2) phi.insert_term(Monomial({mm.e[0] - 2, mm.e[1]}), cc);
            });
            if (a != 0) {
                Series target = xy_poly({{mono_xy(2, 1), Rational(1)}, {mono_xy(0, (unsigned)s), a}});
                Series tail = F - target;
                OrderResult ot = tail.order();
                if (ot.known && ot.value <= s) {
                    // kill the coordinate-s slice first
                    std::vector<Series> sub{
                        var_x(W, true) - var_y(W, true) /*placeh*/, var_y(W, true)};
                    sub[0] = var_x(W, true) +
                             Series::poly(kXY, {{mono_xy(0, (unsigned)(s - 2)), -bc / 2}});
                    sub[1] = var_y(W, true) - phi;
                    F = F.substitute(sub);
                    out.chain.push_back({sub, Series::constant(kXY, Rational(1), W, true),
                                         "absorb the degree-" + std::to_string(s) + " slice"});
                    tail = F - target;
                    ot = tail.order();
                    if (ot.known && ot.value <= s)
                        fail(Errc::internal, "absorption step failed to clear the slice");
                }
                if (witnesses)
                    append_determinacy_step(out.chain, target, F, s, std::min(2 * s + 2, W),
                                            std::to_string(s) + "-determined tail absorbed");
                out.nf.kind = NormalForm::Case::X2YPlus;
                out.nf.k = s;
                out.nf.a = s % 2 == 0 ? a : -a;
                return out;
            }
            std::vector<Series> sub{
                var_x(W, true) + Series::poly(kXY, {{mono_xy(0, (unsigned)(s - 2)), -bc / 2}}),
                var_y(W, true) - phi};
            F = F.substitute(sub);
            out.chain.push_back({sub, Series::constant(kXY, Rational(1), W, true),
                                 "absorb the degree-" + std::to_string(s) + " slice"});
        }
        out.uncertified = true;
        out.precision_note = "x^2 y absorption exhausted the degree cap";
        out.nf.kind = NormalForm::Case::X2Y;
        return out;
    }

    // max_mult == 3: In ~ x^3
    {
        const LinearFactor& lf = factors[0];
        long u, v;
        std::vector<std::vector<Rational>> m(2, std::vector<Rational>(2, Rational(0)));
        if (lf.beta == 0) {
            m = {{Rational(1, lf.alpha), Rational(0)}, {Rational(0), Rational(1)}};
        } else {
            ext_gcd(lf.alpha, lf.beta, u, v);
            // l -> x: x -> u x - beta y, y -> v x + alpha y
            m = {{Rational(u), Rational(-lf.beta)}, {Rational(v), Rational(lf.alpha)}};
        }
        push_linear(m, Rational(1), "send the triple factor to x");
        Series In2 = F.initial_form();
        Rational c = In2.coeff(mono_xy(3, 0));
        if (c == 0) fail(Errc::internal, "x^3 normalization failed");
        if (c != 1)
            push_linear({{c, Rational(0)}, {Rational(0), c}}, 1 / (c * c * c * c),
                        "rescale the cube to x^3");

        // certified F ~ x^3 exactly?
        {
            SquarefreeDecomposition sfd = squarefree_decomposition(F);
            int cubes = 0;
            bool good = true;
            for (const auto& [fac, e] : sfd.factors) {
                OrderResult of = fac.order();
                int ord = of.known ? of.value : 0;
                if (ord == 0) continue;
                if (e == 3 && ord == 1) ++cubes;
                else good = false;
            }
            if (good && cubes == 1) {
                // map the cubed branch q to x exactly; (q, complement) must be
                // invertible, so the complement is whichever axis q misses
                const Series* q = nullptr;
                for (const auto& [fac, e] : sfd.factors)
                    if (e == 3 && fac.order().known && fac.order().value == 1) q = &fac;
                Series qs = q->truncated(W + 2);
                Series other = qs.coeff(Monomial::unit(2, 0)) != 0 ? var_y(W + 2) : var_x(W + 2);
                std::vector<Series> fwd{qs, other};
                std::vector<Series> tau = invert_map(fwd, W);
                Series Fq = F.truncated(W).substitute(tau); // = (unit) * x^3
                Series unit3 = Fq.monomial_divide(Monomial::unit(2, 0, 3));
                out.chain.push_back({tau, unit3.invert_unit_at(std::max(1, W - 3)),
                                     "exact cube: branch becomes the x-axis"});
                F = xy_poly({{mono_xy(3, 0), Rational(1)}});
                out.nf.kind = NormalForm::Case::X3Bare;
                out.nf.exact_cube = true;
                return out;
            }
        }

        // prepare + tschirnhaus: F ~ x^3 + B(y) x + C(y)
        WeierstrassFactorization Wf = prepare(F.truncated(W + 8), 0);
        auto [shift_red, Wt] = tschirnhaus(Wf);
        Series shift = lift_y(shift_red, W + 4);
        std::vector<Series> sigma{var_x(W + 4) + shift, var_y(W + 4)};
        Series Us = Wf.unit.substitute(sigma);
        out.chain.push_back({sigma, Us.invert_unit_at(W), "weierstrass cubic, unit absorbed"});
        Series B = Wt.coeffs[1], C = Wt.coeffs[0]; // over {y}
        F = lift_y(C, W) + lift_y(B, W) * var_x(W) + xy_poly({{mono_xy(3, 0), Rational(1)}}).truncated(W);

        OrderResult oB = B.order(), oC = C.order();
        int beta = oB.known ? oB.value + 1 : Series::kInfTrunc;  // order of the B x term minus ... (B coeff of x)
        int betaY = oB.known ? oB.value : Series::kInfTrunc;     // k+3 in the paper
        int gamma = oC.known ? oC.value : Series::kInfTrunc;     // l+4 in the paper
        (void)beta;

        if (betaY >= Series::kInfTrunc && gamma >= Series::kInfTrunc) {
            out.uncertified = true;
            out.precision_note = "B and C vanish below truncation but F is not a certified cube";
            out.nf.kind = NormalForm::Case::X3Bare;
            return out;
        }
        if (oB.known && betaY < 3) fail(Errc::internal, "B order below 3");
        if (oC.known && gamma < 4) fail(Errc::internal, "C order below 4");

        Rational b = oB.known ? B.coeff(Monomial::unit(1, 0, (unsigned)betaY)) : Rational(0);
        Rational c0 = oC.known ? C.coeff(Monomial::unit(1, 0, (unsigned)gamma)) : Rational(0);

        // normalize the unit of B: B = b y^betaY V^betaY, y -> eta
        if (oB.known && b != 0 && betaY == 3) {
            Series Vb = B.monomial_divide(Monomial::unit(1, 0, (unsigned)betaY)).scalar_mul(1 / b);
            if (!(Vb - Series::constant({"y"}, Rational(1), Vb.stated_trunc())).is_zero()) {
                Series vroot = Vb.nth_root_unit((unsigned)betaY);
                Series v2 = lift_y(vroot, W);
                std::vector<Series> scaled{var_x(W), var_y(W) * v2};
                std::vector<Series> eta = invert_map(scaled, W);
                F = F.substitute(eta);
                out.chain.push_back({eta, Series::constant(kXY, Rational(1), W),
                                     "absorb the unit of B into y"});
                // recompute C data after the change
                Series Cnew = Series::zero(std::vector<std::string>{"y"}, W);
                F.for_each([&](const Monomial& mm, const Rational& cc) {
                    if (mm.e[0] == 0) Cnew.insert_term(Monomial::unit(1, 0, mm.e[1]), cc);
                });
                C = Cnew;
                oC = C.order();
                gamma = oC.known ? oC.value : Series::kInfTrunc;
                c0 = oC.known ? C.coeff(Monomial::unit(1, 0, (unsigned)gamma)) : Rational(0);
            }
        }

        auto finish_with_witness = [&](const Series& target, int k, NormalForm nf,
                                       const std::string& note) {
            if (witnesses) append_determinacy_step(out.chain, target, F, k, std::min(2 * k + 2, W), note);
            out.nf = nf;
        };

        if (gamma == 4) {
            if (betaY == 3 && b != 0) {
                // quartic shift killing the b x y^3 term
                Series sx = var_x(W, true) +
                            xy_poly({{mono_xy(2, 0), b * b * b * b / (256 * c0 * c0 * c0)},
                                     {mono_xy(1, 1), -b * b * b / (24 * c0 * c0)},
                                     {mono_xy(0, 2), b * b / (8 * c0)}});
                Series sy = var_y(W, true) + xy_poly({{mono_xy(1, 0), -b / (4 * c0)}});
                std::vector<Series> sub{sx, sy};
                F = F.substitute(sub);
                out.chain.push_back({sub, Series::constant(kXY, Rational(1), W),
                                     "explicit quartic change removing b x y^3"});
            }
            Series target = xy_poly({{mono_xy(3, 0), Rational(1)}, {mono_xy(0, 4), c0}});
            NormalForm nf;
            nf.kind = NormalForm::Case::X3Y4;
            nf.a = c0;
            finish_with_witness(target, 4, nf, "4-determined tail absorbed");
            return out;
        }
        if (gamma == 5 && betaY == 4 && b != 0) {
            // explicit change for x^3 + b x y^4 + c y^5 W
            Series sx = var_x(W, true) +
                        xy_poly({{mono_xy(3, 0), -4 * b * b * b * b * b / (9375 * c0 * c0 * c0 * c0)},
                                 {mono_xy(2, 1), b * b * b * b / (125 * c0 * c0 * c0)},
                                 {mono_xy(1, 2), -4 * b * b * b / (75 * c0 * c0)},
                                 {mono_xy(0, 3), 2 * b * b / (15 * c0)}});
            Series sy = var_y(W, true) + xy_poly({{mono_xy(1, 0), -b / (5 * c0)}});
            std::vector<Series> sub{sx, sy};
            F = F.substitute(sub);
            out.chain.push_back({sub, Series::constant(kXY, Rational(1), W),
                                 "explicit change removing b x y^4"});
            betaY = Series::kInfTrunc;
            b = 0;
        }
        if (gamma >= 5 && (betaY > gamma || b == 0)) {
            // direct witness against x^3 + c y^gamma; only gamma == 5 is a candidate
            if (gamma == 5) {
                Series target = xy_poly({{mono_xy(3, 0), Rational(1)}, {mono_xy(0, 5), c0}});
                if (witnesses)
                    append_determinacy_step(out.chain, target, F, 5, std::min(12, W),
                                            "5-determined tail absorbed");
                // scale to x^3 + y^5: (x,y,z) -> (c^2 x, c y, c^3 z)
                F = target;
                if (c0 != 1) {
                    push_linear({{c0 * c0, Rational(0)}, {Rational(0), c0}},
                                1 / (c0 * c0 * c0 * c0 * c0 * c0), "rescale to x^3 + y^5");
                }
                out.nf.kind = NormalForm::Case::X3Y5;
                return out;
            }
            // gamma >= 6 (or C == 0 below truncation): obstruction case
            out.nf.kind = NormalForm::Case::X3Bare;
            out.nf.exact_cube = false;
            out.nf.b = b;
            out.nf.c = c0;
            out.nf.k = betaY >= Series::kInfTrunc ? 1 : betaY - 3;
            out.nf.l = gamma >= Series::kInfTrunc ? 2 : gamma - 4;
            return out;
        }
        if (betaY == 3 && b != 0) {
            // x^3 + b x y^3 + higher: scale b to 1
            push_linear({{b * b, Rational(0)}, {Rational(0), b}},
                        1 / (b * b * b * b * b * b), "rescale the x y^3 coefficient to 1");
            // after scaling: x^3 + x y^3 + c' y^5 W + ...
            Series target = xy_poly({{mono_xy(3, 0), Rational(1)}, {mono_xy(1, 3), Rational(1)}});
            Series R = F - target;
            OrderResult orr = R.order();
            if (orr.known && orr.value == 5) {
                Rational cq = R.coeff(mono_xy(0, 5));
                if (cq != 0) {
                    // explicit quintic change from the x^3 + x y^3 + c y^5 W case
                    Series sx =
                        var_x(W, true) +
                        xy_poly({{mono_xy(0, 2), -cq},
                                 {mono_xy(2, 0), -cq * cq * cq / 3},
                                 {mono_xy(1, 1), -cq * cq},
                                 {mono_xy(3, 0), -cq * cq * cq * cq * cq * cq / 3},
                                 {mono_xy(2, 1), -5 * cq * cq * cq * cq * cq / 3},
                                 {mono_xy(1, 2), -2 * cq * cq * cq * cq},
                                 {mono_xy(0, 3), -5 * cq * cq * cq / 9}});
                    Series sy = var_y(W, true) +
                                xy_poly({{mono_xy(1, 0), cq}, {mono_xy(0, 2), -4 * cq * cq / 3}});
                    std::vector<Series> sub{sx, sy};
                    F = F.substitute(sub);
                    out.chain.push_back({sub, Series::constant(kXY, Rational(1), W),
                                         "explicit quintic change removing c y^5"});
                }
            }
            NormalForm nf;
            nf.kind = NormalForm::Case::X3XY3;
            finish_with_witness(target, 5, nf, "5-determined tail absorbed");
            return out;
        }
        // remaining: betaY >= 4, b != 0, gamma in {4 handled, 5 handled via (iii'), else}
        // gamma == 5 with betaY >= 5 was handled by the direct branch; what is
        // left is the k >= 1, l >= 2 obstruction territory
        out.nf.kind = NormalForm::Case::X3Bare;
        out.nf.exact_cube = false;
        out.nf.b = b;
        out.nf.c = c0;
        out.nf.k = betaY >= Series::kInfTrunc ? 1 : betaY - 3;
        out.nf.l = gamma >= Series::kInfTrunc ? 2 : gamma - 4;
        return out;
    }
}

// ----------------------------------------------------------------- classify

ClassificationReport classify(const Series& F_in, const ClassifyOptions& opts) {
    Series F = F_in;
    if (!F.exact()) fail(Errc::inconsistent_input, "classify expects an exact polynomial");
    if (F.nvars() == 1) F = F.extended(std::vector<std::string>{F.vars()[0], F.vars()[0] == "x" ? "y" : "x"});
    if (F.nvars() != 2) fail(Errc::variable_mismatch, "classify expects a polynomial in x, y");

    ClassificationReport rep;
    rep.input = F.str();
    int deg = std::max(0, F.max_stored_degree());
    int N = opts.trunc > 0 ? opts.trunc : std::max(2 * deg + 4, 12);
    rep.trunc = N;
    rep.unit = Series::constant(kXY, Rational(1), N);

    OrderResult o = F.order();
    if (!o.known) {
        rep.order_infinite = true;
        rep.normal_form.kind = NormalForm::Case::NotReduced;
        rep.verdict = Verdict::No;
        rep.reason = "F = 0: z^2 = 0 makes A non-reduced, so P(A) != Sigma A^2";
        rep.verified_to = N;
        return rep;
    }
    rep.order = o.value;

    if (o.value <= 1) {
        rep.normal_form.kind = NormalForm::Case::Smooth;
        rep.verdict = Verdict::Yes;
        rep.reason = o.value == 0 ? "F is a unit: A is a 2-dimensional regular (semi)local ring"
                                  : "omega(F) = 1: A is isomorphic to Q[[x,y]]";
        rep.verified_to = N;
        rep.notes.push_back("p(A) <= 16 (p(A) <= 4 tau(Q) and tau(Q) = 4)");
        return rep;
    }

    if (o.value >= 4) {
        rep.normal_form.kind = NormalForm::Case::HighOrder;
        rep.normal_form.k = o.value;
        rep.verdict = Verdict::No;
        rep.reason = "omega(F) = " + std::to_string(o.value) +
                     " >= 4: no candidate surface has order above 3";
        rep.dominating = dominating_constant(F, 2);
        rep.notes.push_back("obstruction element M(x^2+y^2) + z with M = " +
                            rat_str(rep.dominating->M) + " has order 1");
        rep.verified_to = N;
        if (opts.determinacy) {
            int mk = opts.max_k > 0 ? opts.max_k : std::min(N - 2, 12);
            rep.determinacy = determinacy_bound(F, mk);
        }
        return rep;
    }

    ReductionResult red = o.value == 2 ? order2_reduce(F, N) : order3_reduce(F, N, opts.witnesses);
    rep.normal_form = red.nf;
    rep.witness = red.chain;
    if (red.uncertified) {
        rep.verdict = Verdict::Unknown;
        rep.reason = "precision: " + red.precision_note;
        return rep;
    }

    ChainCheck chk = verify_chain(F, red.chain, red.nf.representative(), N);
    rep.unit = chk.unit;
    rep.verified_to = chk.verified_to;
    if (chk.verified_to < N)
        fail(Errc::internal,
             "witness chain verifies only to m^" + std::to_string(chk.verified_to));

    rep.verdict = decide(red.nf);
    const NormalForm& nf = red.nf;
    switch (rep.verdict) {
    case Verdict::Yes:
        rep.reason = "normal form " + nf.case_name() + " is in the affirmative list";
        rep.notes.push_back("p(A) <= 16 (p(A) <= 4 tau(Q) and tau(Q) = 4)");
        break;
    case Verdict::No: {
        bool nonreal = nf.kind == NormalForm::Case::Order2 &&
                       ((nf.tail == NormalForm::Order2Tail::None && nf.a < 0) ||
                        (nf.tail == NormalForm::Order2Tail::EvenPow && nf.a < 0 && nf.b < 0));
        if (nonreal) {
            // -F_rep is a sum of squares: A is not a real (reduced) ring
            SosCertificate cert;
            cert.target = -nf.representative();
            cert.summands.push_back(var_x(N, true));
            cert.weights.push_back(SosWeight{four_square_decomposition(-nf.a)});
            if (nf.tail == NormalForm::Order2Tail::EvenPow) {
                cert.summands.push_back(
                    Series::poly(kXY, {{mono_xy(0, (unsigned)nf.k), Rational(1)}}));
                cert.weights.push_back(SosWeight{four_square_decomposition(-nf.b)});
            }
            cert.verified_to = Series::kInfTrunc;
            verify_certificate(cert);
            rep.minus_f_sos = cert;
            rep.reason = "-F is a sum of squares: A is not a real (reduced) ring";
        } else {
            rep.obstruction = obstruction_arcs(nf);
            rep.reason = "obstruction: " + rep.obstruction->reason;
            if (nf.kind == NormalForm::Case::X3Bare && !nf.exact_cube)
                rep.notes.push_back("case excluded from the candidate list (k >= 1 and l >= 2)");
            if (nf.kind == NormalForm::Case::X3Bare && nf.exact_cube)
                rep.notes.push_back("by exclusion: x^3 is not in the candidate list");
        }
        break;
    }
    case Verdict::Unknown: rep.reason = "unresolved"; break;
    }

    if (opts.determinacy) {
        int mk = opts.max_k > 0 ? opts.max_k : std::min(N - 2, 12);
        rep.determinacy = determinacy_bound(F, mk);
    }
    return rep;
}

Verdict preordering_saturated(const Series& F) {
    Series G = F;
    if (!G.exact()) fail(Errc::inconsistent_input, "exact polynomial expected");
    OrderResult o = G.order();
    if (!o.known || o.value < 2 || o.value > 3)
        fail(Errc::order_out_of_range, "saturation wrapper covers omega(F) in {2,3}");
    ClassifyOptions opts;
    opts.witnesses = false;
    opts.determinacy = false;
    return classify(G, opts).verdict;
}

} // namespace sumsq
