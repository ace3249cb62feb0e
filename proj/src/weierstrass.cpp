#include "sumsq/weierstrass.hpp"

#include <algorithm>

namespace sumsq {

LinearChange LinearChange::identity(std::size_t n) {
    LinearChange L;
    L.matrix.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) L.matrix[i][i] = 1;
    return L;
}

LinearChange LinearChange::shear(std::size_t n, std::size_t var, const std::vector<Rational>& params) {
    LinearChange L = identity(n);
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j == var) continue;
        L.matrix[j][var] = params.at(k++);
    }
    return L;
}

Rational LinearChange::det() const {
    auto a = matrix;
    std::size_t n = a.size();
    Rational d(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return Rational(0);
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rational t = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= t * a[c][k];
        }
    }
    return d;
}

Series LinearChange::apply(const Series& f) const {
    std::vector<Series> images;
    for (std::size_t i = 0; i < f.nvars(); ++i) {
        Series im = Series::zero(f.vars(), std::max(2, f.stated_trunc()));
        if (f.exact()) im = Series::poly(f.vars(), {});
        for (std::size_t j = 0; j < f.nvars(); ++j)
            if (matrix[i][j] != 0) im.insert_term(Monomial::unit(f.nvars(), j), matrix[i][j]);
        images.push_back(im);
    }
    return f.substitute(images);
}

LinearChange LinearChange::inverse() const {
    std::size_t n = matrix.size();
    auto a = matrix;
    auto inv = identity(n).matrix;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) fail(Errc::inconsistent_input, "singular linear change");
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        Rational piv = a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] /= piv;
            inv[c][k] /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rational t = a[r][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[r][k] -= t * a[c][k];
                inv[r][k] -= t * inv[c][k];
            }
        }
    }
    LinearChange L;
    L.matrix = inv;
    return L;
}

OrderResult regular_order(const Series& f, std::size_t var) {
    if (var >= f.nvars()) fail(Errc::variable_mismatch, "no such variable");
    int best = -1;
    f.for_each([&](const Monomial& m, const Rational&) {
        for (std::size_t j = 0; j < m.e.size(); ++j)
            if (j != var && m.e[j] != 0) return;
        if (best < 0 || (int)m.e[var] < best) best = (int)m.e[var];
    });
    if (best < 0) return OrderResult::AtLeast(f.trunc());
    return OrderResult::Known(best);
}

namespace {

// 0, 1, -1, 2, -2, ...
Rational shear_param(unsigned idx) {
    if (idx == 0) return Rational(0);
    long k = (long)(idx + 1) / 2;
    return Rational(idx % 2 == 1 ? k : -k);
}

std::vector<std::string> drop_var(const std::vector<std::string>& vars, std::size_t var) {
    std::vector<std::string> r;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (i != var) r.push_back(vars[i]);
    return r;
}

// coefficient of var^j as a series over the remaining variables
Series coeff_in_var(const Series& f, std::size_t var, unsigned j) {
    Series r(drop_var(f.vars(), var), std::max(1, f.trunc() == Series::kInfTrunc
                                                      ? f.max_stored_degree() + 1
                                                      : f.stated_trunc() - (int)j),
             f.exact());
    f.for_each([&](const Monomial& m, const Rational& c) {
        if (m.e[var] != j) return;
        Monomial m2 = Monomial::one(f.nvars() - 1);
        std::size_t k = 0;
        for (std::size_t i = 0; i < m.e.size(); ++i)
            if (i != var) m2.e[k++] = m.e[i];
        r.insert_term(m2, c);
    });
    return r;
}

Series lift_coeff(const Series& a, const std::vector<std::string>& vars, std::size_t var, int trunc) {
    Series r(vars, a.exact() ? trunc : std::min(trunc, a.trunc()), a.exact());
    a.for_each([&](const Monomial& m, const Rational& c) {
        Monomial m2 = Monomial::one(vars.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (i != var) m2.e[i] = m.e[k++];
        r.insert_term(m2, c);
    });
    return r;
}

// split f = lo + var^d * hi with deg_var(lo) < d
void split_at_var_degree(const Series& f, std::size_t var, unsigned d, Series& lo, Series& hi) {
    lo = Series(f.vars(), std::max(1, f.stated_trunc()), f.exact());
    Series hi_shifted(f.vars(), std::max(1, f.stated_trunc()), f.exact());
    f.for_each([&](const Monomial& m, const Rational& c) {
        if (m.e[var] < d) lo.insert_term(m, c);
        else hi_shifted.insert_term(m, c);
    });
    hi = hi_shifted.monomial_divide(Monomial::unit(f.nvars(), var, d));
}

} // namespace

std::pair<LinearChange, Series> make_regular(const Series& f, std::size_t var) {
    OrderResult o = f.order();
    if (!o.known) fail(Errc::order_unknown, "cannot regularize a series of unknown order");
    Series in = f.initial_form();
    std::size_t nparams = f.nvars() - 1;

    // evaluate In(f) at the point with 1 in `var` and the shear parameters
    // elsewhere; nonzero value == regular of order omega(f)
    auto value_at = [&](const std::vector<Rational>& params) {
        Rational total(0);
        in.for_each([&](const Monomial& m, const Rational& c) {
            Rational term = c;
            std::size_t k = 0;
            for (std::size_t j = 0; j < m.e.size(); ++j) {
                if (j == var) continue;
                const Rational& p = params[k++];
                for (unsigned t = 0; t < m.e[j]; ++t) term *= p;
            }
            total += term;
        });
        return total;
    };

    // enumerate parameter tuples with bounded index, smallest bound first
    for (unsigned bound = 0;; ++bound) {
        std::vector<unsigned> idx(nparams, 0);
        for (;;) {
            unsigned mx = 0;
            for (unsigned i : idx) mx = std::max(mx, i);
            if (mx == bound || bound == 0) {
                std::vector<Rational> params;
                for (unsigned i : idx) params.push_back(shear_param(i));
                if (value_at(params) != 0) {
                    LinearChange L = LinearChange::shear(f.nvars(), var, params);
                    return {L, L.apply(f)};
                }
            }
            // advance mixed-radix counter over indices 0..bound
            std::size_t p = 0;
            while (p < nparams) {
                if (++idx[p] <= bound) break;
                idx[p++] = 0;
            }
            if (p == nparams) break;
            if (nparams == 0) break;
        }
        if (nparams == 0 && bound > 0)
            fail(Errc::not_regular, "univariate series cannot be regularized further");
        if (bound > 4 * (unsigned)o.value + 8)
            fail(Errc::internal, "regularizing shear search did not terminate");
    }
}

DivisionResult divide(const Series& f, const Series& g, std::size_t var) {
    if (!f.same_vars(g)) fail(Errc::variable_mismatch, "operands live in different rings");
    OrderResult ro = regular_order(g, var);
    if (!ro.known) fail(Errc::not_regular, "divisor not regular in the distinguished variable");
    unsigned d = (unsigned)ro.value;

    int tr = std::min(f.trunc(), g.trunc());
    if (tr == Series::kInfTrunc) tr = std::max({2, f.max_stored_degree() + 2, g.max_stored_degree() + 2});
    int out_tr = std::max(1, tr - (int)d);
    Series D, E;
    split_at_var_degree(g.truncated(tr), var, d, D, E); // g = D + var^d * E, E a unit
    Series Einv = E.invert_unit_at(out_tr);
    Series Q = Series::zero(f.vars(), out_tr);
    Series fcut = f.truncated(tr);
    for (int it = 0; it <= tr + 2; ++it) {
        Series num = fcut - D * Q;
        Series lo, hi;
        split_at_var_degree(num, var, d, lo, hi);
        Series Qn = (Einv * hi).truncated(out_tr);
        if (Qn.equal_below_common_trunc(Q)) {
            Q = Qn;
            break;
        }
        Q = Qn;
    }
    Series R = fcut - g.truncated(tr) * Q;
    // everything at var-degree >= d must be below the residual precision
    Series lo, hi;
    split_at_var_degree(R, var, d, lo, hi);
    if (!hi.is_zero() && hi.order().known && hi.order().value + (int)d < std::min(R.trunc(), out_tr))
        fail(Errc::internal, "weierstrass division did not converge");
    return {Q, lo.truncated(std::max(1, std::min(R.trunc(), out_tr + (int)d)))};
}

WeierstrassFactorization prepare(const Series& f, std::size_t var) {
    OrderResult ro = regular_order(f, var);
    if (!ro.known) fail(Errc::not_regular, "series not regular in the distinguished variable");
    if (!f.order().known) fail(Errc::order_unknown, "series vanishes below truncation");
    unsigned d = (unsigned)ro.value;

    int tr = f.trunc();
    if (tr == Series::kInfTrunc) tr = std::max(2, f.max_stored_degree() + 2);
    Series xd = Series::zero(f.vars(), tr + (int)d);
    xd.insert_term(Monomial::unit(f.nvars(), var, d), Rational(1));

    DivisionResult dr = divide(xd, f, var);
    WeierstrassFactorization W;
    W.var = var;
    W.degree = d;
    W.vars = f.vars();
    Series P = xd - dr.remainder;
    for (unsigned j = 0; j < d; ++j) W.coeffs.push_back(coeff_in_var(P, var, j));
    W.unit = dr.quotient.invert_unit();
    return W;
}

Series WeierstrassFactorization::polynomial(int trunc) const {
    Series P = Series::zero(vars, trunc);
    P.insert_term(Monomial::unit(vars.size(), var, degree), Rational(1));
    for (unsigned j = 0; j < degree; ++j) {
        Series a = lift_coeff(coeffs[j], vars, var, trunc);
        P = P + a.mul_monomial(Monomial::unit(vars.size(), var, j), Rational(1));
    }
    return P;
}

Series WeierstrassFactorization::reconstruct() const {
    int tr = unit.trunc();
    return polynomial(tr) * unit;
}

std::pair<Series, WeierstrassFactorization> tschirnhaus(const WeierstrassFactorization& W) {
    if (W.degree < 1) fail(Errc::inconsistent_input, "tschirnhaus needs degree >= 1");
    int tr = W.unit.trunc();
    if (tr == Series::kInfTrunc) tr = 16;
    for (const auto& a : W.coeffs) tr = std::min(tr, a.trunc() + (int)W.degree);
    Series P = W.polynomial(tr);
    Series shift_red = W.coeffs[W.degree - 1].scalar_mul(Rational(-1, (long)W.degree));
    Series shift_full = lift_coeff(shift_red, W.vars, W.var, tr);

    // substitute var -> var + shift into P
    std::vector<Series> images;
    for (std::size_t i = 0; i < W.vars.size(); ++i) {
        Series im = Series::variable(W.vars, i, tr);
        if (i == W.var) im = im + shift_full;
        images.push_back(im);
    }
    Series P2 = P.substitute(images);

    WeierstrassFactorization R;
    R.var = W.var;
    R.degree = W.degree;
    R.vars = W.vars;
    for (unsigned j = 0; j < W.degree; ++j) R.coeffs.push_back(coeff_in_var(P2, W.var, j));
    R.unit = W.unit;
    if (W.degree >= 2 && !R.coeffs[W.degree - 1].is_zero())
        fail(Errc::internal, "tschirnhaus failed to kill the subleading coefficient");
    return {shift_red, R}; // shift over the remaining variables
}

StabilityReport stability_probe(const Series& f, std::size_t var, int r, std::uint64_t seed) {
    int tr = f.trunc();
    if (tr == Series::kInfTrunc) tr = f.max_stored_degree() + 4;
    Series base = f.truncated(tr);

    // deterministic small perturbation h in m^r
    std::uint64_t state = seed * 6364136223846793005ULL + 1442695040888963407ULL;
    auto next = [&]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    Series h = Series::zero(f.vars(), tr);
    for (int d = r; d < std::min(tr, r + 3); ++d) {
        for (const auto& m : monomials_of_degree(f.nvars(), (unsigned)d)) {
            long c = (long)(next() % 7) - 3;
            if (c != 0 && next() % 3 == 0) h.insert_term(m, Rational(c));
        }
    }

    WeierstrassFactorization Wf = prepare(base, var);
    WeierstrassFactorization Wg = prepare(base + h, var);
    if (Wf.degree != Wg.degree) fail(Errc::internal, "perturbation changed the regular order");

    int cap = tr - (int)Wf.degree;
    int agree = cap;
    Series dU = Wf.unit - Wg.unit;
    OrderResult o = dU.order();
    if (o.known) agree = std::min(agree, o.value);
    for (unsigned j = 0; j < Wf.degree; ++j) {
        Series dA = Wf.coeffs[j] - Wg.coeffs[j];
        OrderResult oa = dA.order();
        if (oa.known) agree = std::min(agree, oa.value + (int)j); // coefficient of var^j
    }
    return {r, agree, cap, h};
}

} // namespace sumsq
