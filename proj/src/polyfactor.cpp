#include "sumsq/polyfactor.hpp"

#include <algorithm>

namespace sumsq {

std::pair<Monomial, Rational> lead_term(const Series& f) {
    int d = f.max_stored_degree();
    if (d < 0) fail(Errc::internal, "lead term of zero");
    const auto& sl = f.slice(d);
    auto it = std::prev(sl.end()); // lex-largest within the top degree
    return {it->first, it->second};
}

std::optional<Series> poly_divide_exact(const Series& f, const Series& h) {
    if (!f.exact() || !h.exact()) fail(Errc::inconsistent_input, "exact polynomials required");
    if (!f.same_vars(h)) fail(Errc::variable_mismatch, "operands live in different rings");
    if (h.is_zero()) fail(Errc::inconsistent_input, "division by zero");
    Series r = f;
    Series q = Series::poly(f.vars(), {});
    auto [hm, hc] = lead_term(h);
    int guard = 0;
    while (!r.is_zero()) {
        auto [rm, rc] = lead_term(r);
        if (!hm.divides(rm)) return std::nullopt;
        Monomial qm = rm / hm;
        Rational qc = rc / hc;
        q.insert_term(qm, qc);
        r = r - h.mul_monomial(qm, qc);
        if (++guard > 100000) fail(Errc::internal, "runaway polynomial division");
    }
    return q;
}

namespace {

// ---- dense Q[y] arithmetic ----
using YPoly = std::vector<Rational>;

YPoly ytrim(YPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}
bool yzero(const YPoly& p) { return p.empty(); }
int ydeg(const YPoly& p) { return (int)p.size() - 1; }

YPoly yadd(const YPoly& a, const YPoly& b) {
    YPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return ytrim(r);
}
YPoly yneg(YPoly a) {
    for (auto& c : a) c = -c;
    return a;
}
YPoly ymul(const YPoly& a, const YPoly& b) {
    if (yzero(a) || yzero(b)) return {};
    YPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return ytrim(r);
}
YPoly yscale(YPoly a, const Rational& c) {
    for (auto& x : a) x *= c;
    return ytrim(a);
}

// remainder of a by b (b nonzero), rational arithmetic
YPoly yrem(YPoly a, const YPoly& b) {
    a = ytrim(a);
    while (!yzero(a) && ydeg(a) >= ydeg(b)) {
        Rational c = a.back() / b.back();
        int shift = ydeg(a) - ydeg(b);
        for (std::size_t i = 0; i < b.size(); ++i) a[(std::size_t)shift + i] -= c * b[i];
        a = ytrim(a);
    }
    return a;
}
YPoly ydivexact(YPoly a, const YPoly& b) {
    YPoly q(std::max<std::size_t>(1, a.size()), Rational(0));
    a = ytrim(a);
    while (!yzero(a) && ydeg(a) >= ydeg(b)) {
        Rational c = a.back() / b.back();
        int shift = ydeg(a) - ydeg(b);
        q[(std::size_t)shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[(std::size_t)shift + i] -= c * b[i];
        a = ytrim(a);
    }
    if (!yzero(a)) fail(Errc::internal, "inexact coefficient division");
    return ytrim(q);
}
YPoly ygcd(YPoly a, YPoly b) {
    a = ytrim(a);
    b = ytrim(b);
    while (!yzero(b)) {
        YPoly r = yrem(a, b);
        a = b;
        b = r;
    }
    if (yzero(a)) return {};
    return yscale(a, 1 / a.back()); // monic
}

// ---- Q[y][x] view of an exact 2-variable Series ----
using XYPoly = std::vector<YPoly>; // index = x-degree

XYPoly xtrim(XYPoly p) {
    while (!p.empty() && yzero(p.back())) p.pop_back();
    return p;
}
bool xzero(const XYPoly& p) { return p.empty(); }
int xdeg(const XYPoly& p) { return (int)p.size() - 1; }

XYPoly to_xy(const Series& f) {
    XYPoly p;
    f.for_each([&](const Monomial& m, const Rational& c) {
        if (m.e.size() != 2) fail(Errc::variable_mismatch, "bivariate polynomial expected");
        if (p.size() <= m.e[0]) p.resize(m.e[0] + 1);
        auto& yp = p[m.e[0]];
        if (yp.size() <= m.e[1]) yp.resize(m.e[1] + 1, Rational(0));
        yp[m.e[1]] += c;
    });
    for (auto& yp : p) yp = ytrim(yp);
    return xtrim(p);
}

Series from_xy(const XYPoly& p, const std::vector<std::string>& vars) {
    std::vector<std::pair<Monomial, Rational>> terms;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p[i].size(); ++j)
            if (p[i][j] != 0) terms.emplace_back(Monomial({(unsigned)i, (unsigned)j}), p[i][j]);
    return Series::poly(vars, terms);
}

XYPoly xmul_y(const XYPoly& p, const YPoly& c) {
    XYPoly r;
    for (const auto& yp : p) r.push_back(ymul(yp, c));
    return xtrim(r);
}
XYPoly xsub(const XYPoly& a, const XYPoly& b) {
    XYPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        YPoly t = i < a.size() ? a[i] : YPoly{};
        if (i < b.size()) t = yadd(t, yneg(b[i]));
        r[i] = t;
    }
    return xtrim(r);
}

YPoly xcontent(const XYPoly& p) {
    YPoly g;
    for (const auto& yp : p)
        if (!yzero(yp)) g = ygcd(g, yp);
    return g;
}
XYPoly xprimitive(const XYPoly& p) {
    YPoly c = xcontent(p);
    if (yzero(c)) return {};
    XYPoly r;
    for (const auto& yp : p) r.push_back(yzero(yp) ? YPoly{} : ydivexact(yp, c));
    return xtrim(r);
}

// pseudo-remainder of a by b with respect to x
XYPoly xprem(XYPoly a, const XYPoly& b) {
    a = xtrim(a);
    if (xzero(a) || xdeg(a) < xdeg(b)) return a;
    const YPoly& lb = b.back();
    int steps = xdeg(a) - xdeg(b) + 1;
    for (int s = 0; s < steps && !xzero(a) && xdeg(a) >= xdeg(b); ++s) {
        YPoly la = a.back();
        int shift = xdeg(a) - xdeg(b);
        a = xmul_y(a, lb);
        XYPoly t;
        t.assign((std::size_t)shift, YPoly{});
        for (const auto& yp : b) t.push_back(ymul(yp, la));
        a = xsub(a, t);
    }
    return a;
}

XYPoly xy_gcd(XYPoly a, XYPoly b) {
    a = xtrim(a);
    b = xtrim(b);
    if (xzero(a)) return b;
    if (xzero(b)) return a;
    if (xdeg(a) < xdeg(b)) std::swap(a, b);
    YPoly ca = xcontent(a), cb = xcontent(b);
    YPoly cont = ygcd(ca, cb);
    a = xprimitive(a);
    b = xprimitive(b);
    while (true) {
        if (xdeg(b) == 0) {
            // primitive and x-free: the primitive-part gcd is 1
            XYPoly one{YPoly{Rational(1)}};
            return xmul_y(one, cont);
        }
        XYPoly r = xprimitive(xprem(a, b));
        if (xzero(r)) break;
        a = b;
        b = r;
    }
    XYPoly g = xmul_y(b, cont);
    // normalize: make the leading y-coefficient of the leading x-coefficient 1
    if (!xzero(g)) {
        Rational lead = g.back().back();
        g = xmul_y(g, YPoly{1 / lead});
    }
    return g;
}

} // namespace

Series poly_gcd(const Series& f, const Series& g) {
    if (!f.exact() || !g.exact()) fail(Errc::inconsistent_input, "exact polynomials required");
    if (!f.same_vars(g) || f.nvars() != 2) fail(Errc::variable_mismatch, "bivariate polynomials expected");
    if (f.is_zero()) return g;
    if (g.is_zero()) return f;
    return from_xy(xy_gcd(to_xy(f), to_xy(g)), f.vars());
}

SquarefreeDecomposition squarefree_decomposition(const Series& f) {
    if (!f.exact() || f.nvars() != 2) fail(Errc::inconsistent_input, "exact bivariate polynomial expected");
    SquarefreeDecomposition out;
    out.unit = 1;
    if (f.is_zero()) fail(Errc::inconsistent_input, "squarefree decomposition of zero");

    // P_1 := f; P_{i+1} := gcd(P_i, dP_i/dx, dP_i/dy); w_i := P_i / P_{i+1}
    // is the product of the primes of multiplicity >= i, so the
    // multiplicity-m part is w_m / w_{m+1}.
    std::vector<Series> P{f};
    Series one = Series::poly(f.vars(), {{Monomial::one(2), Rational(1)}});
    while (P.back().max_stored_degree() > 0) {
        const Series& cur = P.back();
        Series g = poly_gcd(poly_gcd(cur, cur.partial(0)), cur.partial(1));
        if (g.max_stored_degree() == 0) g = one;
        P.push_back(g);
        if (P.size() > 200) fail(Errc::internal, "squarefree chain did not terminate");
    }

    std::vector<Series> w;
    for (std::size_t i = 0; i + 1 < P.size(); ++i) {
        auto q = poly_divide_exact(P[i], P[i + 1]);
        if (!q) fail(Errc::internal, "squarefree chain division failed");
        w.push_back(*q);
    }
    w.push_back(one);

    for (std::size_t m = 0; m + 1 < w.size(); ++m) {
        auto q = poly_divide_exact(w[m], w[m + 1]);
        if (!q) fail(Errc::internal, "squarefree stratification failed");
        if (q->max_stored_degree() > 0) out.factors.emplace_back(*q, (int)m + 1);
    }

    Series prod = one;
    for (const auto& [fac, e] : out.factors)
        for (int i = 0; i < e; ++i) prod = prod * fac;
    auto u = poly_divide_exact(f, prod);
    if (!u || u->max_stored_degree() != 0)
        fail(Errc::internal, "squarefree decomposition does not recombine");
    out.unit = lead_term(*u).second;
    return out;
}

} // namespace sumsq
