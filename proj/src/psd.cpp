#include "sumsq/psd.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "sumsq/polyfactor.hpp"

namespace sumsq {

// ------------------------------------------------------------ four squares

namespace {

mpz_class isqrt(const mpz_class& n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

std::array<mpz_class, 4> four_square_int(const mpz_class& n) {
    // deterministic smallest-first search over a <= b <= c <= d
    for (mpz_class a = 0; a * a * 4 <= n; ++a) {
        mpz_class ra = n - a * a;
        for (mpz_class b = a; b * b * 3 <= ra; ++b) {
            mpz_class rb = ra - b * b;
            for (mpz_class c = b; c * c * 2 <= rb; ++c) {
                mpz_class rc = rb - c * c;
                mpz_class d = isqrt(rc);
                if (d * d == rc && d >= c) return {a, b, c, d};
            }
        }
    }
    fail(Errc::internal, "four-square search failed"); // unreachable (Lagrange)
}

std::mutex g_cache_mutex;
std::map<Rational, FourSquares> g_cache;

} // namespace

FourSquares four_square_decomposition(const Rational& q) {
    if (q < 0) fail(Errc::inconsistent_input, "negative rational is not a sum of squares");
    {
        std::lock_guard<std::mutex> lk(g_cache_mutex);
        auto it = g_cache.find(q);
        if (it != g_cache.end()) return it->second;
    }
    // q = (num*den) / den^2
    mpz_class num = q.get_num(), den = q.get_den();
    auto parts = four_square_int(num * den);
    FourSquares fs;
    fs.value = q;
    for (int i = 0; i < 4; ++i) {
        fs.parts[(std::size_t)i] = Rational(parts[(std::size_t)i], den);
        fs.parts[(std::size_t)i].canonicalize();
    }
    Rational check = 0;
    for (const auto& p : fs.parts) check += p * p;
    if (check != q) fail(Errc::internal, "four-square recombination failed");
    std::lock_guard<std::mutex> lk(g_cache_mutex);
    g_cache.emplace(q, fs);
    return fs;
}

// -------------------------------------------------------------------- arcs

SignResult arc_sign(const Series& f, const Arc& arc) {
    if (f.nvars() != 2 && f.nvars() != 3)
        fail(Errc::variable_mismatch, "arc signs are defined for 2 or 3 variables");
    if (f.nvars() == 3 && !arc.zeta)
        fail(Errc::inconsistent_input, "3-variable input needs an arc z-component");
    if (!arc.positive_side && arc.ramification % 2 == 0)
        fail(Errc::inconsistent_input, "negative side needs odd ramification");
    std::vector<Series> images{arc.xi, arc.eta};
    if (f.nvars() == 3) images.push_back(*arc.zeta);
    for (const auto& im : images) {
        OrderResult o = im.order();
        if (o.known && o.value < 1) fail(Errc::inconsistent_input, "arc component with constant term");
    }
    Series comp = f.substitute(images);
    OrderResult o = comp.order();
    if (!o.known) return SignResult::ZeroBelow(comp.trunc());
    if (comp.trunc() <= 0) fail(Errc::precision_violation, "arc composition lost all precision");
    const auto& sl = comp.slice(o.value);
    Rational lead = sl.begin()->second;
    int sgn = lead > 0 ? 1 : -1;
    if (!arc.positive_side && o.value % 2 == 1) sgn = -sgn;
    return sgn > 0 ? SignResult::Positive() : SignResult::Negative();
}

const std::vector<Arc>& standard_arc_family() {
    static const std::vector<Arc> family = [] {
        std::vector<Arc> arcs;
        const std::vector<std::string> svar{"s"};
        const int tr = 40;
        auto mono = [&](const Rational& c, unsigned e) {
            Series g = Series::zero(svar, tr);
            if (c != 0) g.insert_term(Monomial::unit(1, 0, e), c);
            return g;
        };
        std::uint64_t state = 0x5eed5eed1234ULL;
        auto next = [&]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return state;
        };
        const Rational coeffs[] = {Rational(1),      Rational(-1),    Rational(2),
                                   Rational(-2),     Rational(1, 2),  Rational(-1, 2),
                                   Rational(3),      Rational(-3),    Rational(3, 2),
                                   Rational(-3, 2)};
        auto pick_coeff = [&]() { return coeffs[next() % 10]; };

        // axes and coordinate-plane arcs first
        arcs.push_back({1, mono(1, 1), mono(0, 1), mono(0, 1), true});
        arcs.push_back({1, mono(-1, 1), mono(0, 1), mono(0, 1), true});
        arcs.push_back({1, mono(0, 1), mono(1, 1), mono(0, 1), true});
        arcs.push_back({1, mono(0, 1), mono(-1, 1), mono(0, 1), true});
        arcs.push_back({1, mono(1, 1), mono(1, 1), mono(0, 1), true});
        arcs.push_back({1, mono(1, 1), mono(-1, 1), mono(0, 1), true});
        arcs.push_back({1, mono(-1, 1), mono(1, 1), mono(0, 1), true});
        arcs.push_back({1, mono(-1, 1), mono(-1, 1), mono(0, 1), true});

        while (arcs.size() < 200) {
            Arc a;
            a.ramification = (unsigned)(next() % 4 + 1);
            unsigned e1 = (unsigned)(next() % 6 + 1), e2 = (unsigned)(next() % 6 + 1);
            a.xi = mono(pick_coeff(), e1);
            if (next() % 2 == 0) a.xi = a.xi + mono(pick_coeff(), e1 + 1 + (unsigned)(next() % 3));
            a.eta = mono(pick_coeff(), e2);
            if (next() % 3 == 0) a.eta = a.eta + mono(pick_coeff(), e2 + 1 + (unsigned)(next() % 3));
            a.zeta = mono(pick_coeff(), (unsigned)(next() % 6 + 1));
            a.positive_side = a.ramification % 2 == 1 ? (next() % 2 == 0) : true;
            arcs.push_back(std::move(a));
        }
        return arcs;
    }();
    return family;
}

// ------------------------------------------------------------------ oracles

namespace {

// psd test for an exact quadratic form via coefficient signs of the
// characteristic polynomial of the Gram matrix
PsdAnswer quadratic_form_psd(const Series& f) {
    std::size_t n = f.nvars();
    std::vector<std::vector<Rational>> G(n, std::vector<Rational>(n, Rational(0)));
    f.for_each([&](const Monomial& m, const Rational& c) {
        std::vector<std::size_t> idx;
        for (std::size_t v = 0; v < n; ++v)
            for (unsigned r = 0; r < m.e[v]; ++r) idx.push_back(v);
        if (idx.size() != 2) fail(Errc::internal, "not a quadratic form");
        if (idx[0] == idx[1]) G[idx[0]][idx[0]] = c;
        else {
            G[idx[0]][idx[1]] = c / 2;
            G[idx[1]][idx[0]] = c / 2;
        }
    });
    // psd iff every sum of principal k x k minors is >= 0
    std::vector<std::size_t> sel;
    for (std::size_t k = 1; k <= n; ++k) {
        Rational ek = 0;
        std::vector<std::size_t> comb(k);
        // enumerate k-subsets
        std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t start, std::size_t depth) {
            if (depth == k) {
                std::vector<std::vector<Rational>> M(k, std::vector<Rational>(k));
                for (std::size_t i = 0; i < k; ++i)
                    for (std::size_t j = 0; j < k; ++j) M[i][j] = G[comb[i]][comb[j]];
                // determinant by fraction GE
                Rational det = 1;
                for (std::size_t c2 = 0; c2 < k; ++c2) {
                    std::size_t p = c2;
                    while (p < k && M[p][c2] == 0) ++p;
                    if (p == k) {
                        det = 0;
                        break;
                    }
                    if (p != c2) {
                        std::swap(M[p], M[c2]);
                        det = -det;
                    }
                    det *= M[c2][c2];
                    for (std::size_t r = c2 + 1; r < k; ++r) {
                        if (M[r][c2] == 0) continue;
                        Rational t = M[r][c2] / M[c2][c2];
                        for (std::size_t cc = c2; cc < k; ++cc) M[r][cc] -= t * M[c2][cc];
                    }
                }
                ek += det;
                return;
            }
            for (std::size_t i = start; i < n; ++i) {
                comb[depth] = i;
                rec(i + 1, depth + 1);
            }
        };
        rec(0, 0);
        if (ek < 0) return PsdAnswer::No;
    }
    return PsdAnswer::Yes;
}

} // namespace

PsdAnswer base_psd_oracle(const Series& f) {
    if (f.is_zero()) return f.exact() ? PsdAnswer::Yes : PsdAnswer::Inconclusive;
    OrderResult o = f.order();
    if (o.known && o.value == 0 && f.exact() && f.term_count() == 1) {
        // constant
        return f.coeff_at_origin() > 0 ? PsdAnswer::Yes : PsdAnswer::No;
    }
    if (f.exact() && o.known && o.value == 2 && f.max_stored_degree() == 2)
        return quadratic_form_psd(f);
    // falsification by arc sampling
    for (const auto& arc : standard_arc_family()) {
        if (f.nvars() == 3 && !arc.zeta) continue;
        SignResult s = arc_sign(f, arc);
        if (s == SignResult::Negative()) return PsdAnswer::No;
    }
    return PsdAnswer::Inconclusive;
}

PsdAnswer quadratic_z_psd(const Series& a0, const Series& a1, const Series& a2,
                          const PsdOracle& oracle) {
    Series disc = a0 * a2;
    disc = disc.scalar_mul(Rational(4)) - a1 * a1;
    PsdAnswer r0 = oracle(a0), r2 = oracle(a2), rd = oracle(disc);
    if (r0 == PsdAnswer::No || r2 == PsdAnswer::No || rd == PsdAnswer::No) return PsdAnswer::No;
    if (r0 == PsdAnswer::Yes && r2 == PsdAnswer::Yes && rd == PsdAnswer::Yes) return PsdAnswer::Yes;
    return PsdAnswer::Inconclusive;
}

// ------------------------------------------------------------- certificates

void verify_certificate(const SosCertificate& cert) {
    if (cert.weights.size() != cert.summands.size())
        fail(Errc::inconsistent_input, "weight/summand count mismatch");
    if (cert.summands.empty() && !cert.modulus)
        fail(Errc::inconsistent_input, "empty certificate");
    const auto& vars = cert.target.vars();
    Series acc(vars, std::max(1, cert.verified_to), cert.target.exact());
    for (std::size_t i = 0; i < cert.summands.size(); ++i) {
        const auto& w = cert.weights[i].weight;
        Rational chk = 0;
        for (const auto& p : w.parts) chk += p * p;
        if (chk != w.value) fail(Errc::internal, "weight four-square witness broken");
        acc = acc + (cert.summands[i] * cert.summands[i]).scalar_mul(w.value);
    }
    if (cert.modulus) acc = acc + cert.modulus->second * cert.modulus->first;
    Series diff = acc - cert.target;
    OrderResult o = diff.order();
    if (o.known && o.value < cert.verified_to)
        fail(Errc::internal, "certificate residual of order " + std::to_string(o.value));
}

namespace {

SosWeight weight_of(const Rational& v) { return SosWeight{four_square_decomposition(v)}; }

} // namespace

SosCertificate lagrange_transfer(const std::vector<Series>& alpha, const std::vector<Series>& beta,
                                 const Series& a1, const Series& z_var) {
    if (alpha.size() != beta.size() || alpha.empty())
        fail(Errc::inconsistent_input, "alpha/beta length mismatch");
    const auto& vars = z_var.vars();
    auto lift = [&](const Series& s) { return s.extended(vars); };

    Series cross = Series::poly(vars, {});
    for (std::size_t i = 0; i < alpha.size(); ++i)
        cross = cross + lift(alpha[i]) * lift(beta[i]);
    Series a1l = lift(a1);
    int eps;
    if (a1l.equal_below_common_trunc(cross.scalar_mul(Rational(2)))) eps = 1;
    else if (a1l.equal_below_common_trunc(cross.scalar_mul(Rational(-2)))) eps = -1;
    else fail(Errc::inconsistent_input, "a1 matches neither sign of 2*sum(alpha_i beta_i)");

    SosCertificate cert;
    Series a0 = Series::poly(vars, {}), a2 = a0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        a0 = a0 + lift(alpha[i]) * lift(alpha[i]);
        a2 = a2 + lift(beta[i]) * lift(beta[i]);
        cert.summands.push_back(lift(alpha[i]) + lift(beta[i]).scalar_mul(Rational(eps)) * z_var);
        cert.weights.push_back(weight_of(Rational(1)));
    }
    cert.target = a0 + a1l * z_var + a2 * z_var * z_var;
    cert.verified_to = cert.target.exact() ? Series::kInfTrunc : cert.target.trunc();
    verify_certificate(cert);
    return cert;
}

SosCertificate erase_denominators(const DenomIdentity& in) {
    if (in.r < 0 || in.k < 1) fail(Errc::inconsistent_input, "bad r or k");
    const auto& vars = in.f.vars();
    std::size_t zi = in.z_index;
    if (zi >= vars.size()) fail(Errc::variable_mismatch, "z index out of range");
    for (const auto& s : {in.f, in.b, in.h, in.g})
        if (!s.exact()) fail(Errc::inconsistent_input, "erase_denominators needs exact polynomials");

    Series relation = Series::poly(vars, {{Monomial::unit(vars.size(), zi, in.k), Rational(1)}}) -
                      in.h * in.g;

    auto zcoeff = [&](const Series& s, unsigned j) {
        Series c = Series::poly(vars, {});
        s.for_each([&](const Monomial& m, const Rational& cc) {
            if (m.e[zi] != j) return;
            Monomial m2 = m;
            m2.e[zi] = 0;
            c.insert_term(m2, cc);
        });
        return c;
    };
    auto zdeg_ok = [&](const Series& s) {
        bool ok = true;
        s.for_each([&](const Monomial& m, const Rational&) {
            if (m.e[zi] >= in.k) ok = false;
        });
        return ok;
    };
    if (!zdeg_ok(in.f) || !zdeg_ok(in.b)) fail(Errc::inconsistent_input, "z-degree exceeds k-1");
    for (const auto& ai : in.a)
        if (!zdeg_ok(ai)) fail(Errc::inconsistent_input, "z-degree of a summand exceeds k-1");

    // verify the input identity h^{2r} f = sum a_i^2 - b (z^k - h g)
    Series hpow = Series::poly(vars, {{Monomial::one(vars.size()), Rational(1)}});
    for (int i = 0; i < 2 * in.r; ++i) hpow = hpow * in.h;
    Series lhs = hpow * in.f;
    Series rhs = Series::poly(vars, {});
    for (const auto& ai : in.a) rhs = rhs + ai * ai;
    rhs = rhs - in.b * relation;
    if (!(lhs - rhs).is_zero()) fail(Errc::inconsistent_input, "input identity does not hold");

    std::vector<Series> a = in.a;
    Series b = in.b;
    for (int round = 0; round < in.r; ++round) {
        // h | a_{i l} and h^2 | b_l, checked coefficientwise
        std::vector<Series> a_next;
        for (std::size_t i = 0; i < a.size(); ++i) {
            Series ai_next = Series::poly(vars, {});
            for (unsigned l = 0; l < in.k; ++l) {
                Series c = zcoeff(a[i], l);
                if (c.is_zero()) continue;
                auto q = poly_divide_exact(c, in.h);
                if (!q)
                    fail(Errc::division_failed,
                         "h does not divide a_{" + std::to_string(i) + "," + std::to_string(l) +
                             "} (coefficient equation " + std::to_string(l) + ")");
                ai_next = ai_next + q->mul_monomial(Monomial::unit(vars.size(), zi, l), Rational(1));
            }
            a_next.push_back(ai_next);
        }
        Series b_next = Series::poly(vars, {});
        for (unsigned l = 0; l < in.k; ++l) {
            Series c = zcoeff(b, l);
            if (c.is_zero()) continue;
            auto q1 = poly_divide_exact(c, in.h);
            if (!q1)
                fail(Errc::division_failed, "h does not divide b_" + std::to_string(l) +
                                                " (coefficient equation " + std::to_string(l) + ")");
            auto q2 = poly_divide_exact(*q1, in.h);
            if (!q2)
                fail(Errc::division_failed, "h^2 does not divide b_" + std::to_string(l) +
                                                " (coefficient equation " + std::to_string(in.k + l) +
                                                ")");
            b_next = b_next + q2->mul_monomial(Monomial::unit(vars.size(), zi, l), Rational(1));
        }
        a = std::move(a_next);
        b = std::move(b_next);
    }

    SosCertificate cert;
    cert.target = in.f;
    for (const auto& ai : a) {
        cert.summands.push_back(ai);
        cert.weights.push_back(weight_of(Rational(1)));
    }
    cert.modulus = std::make_pair(relation, -b);
    cert.verified_to = Series::kInfTrunc;
    verify_certificate(cert);
    return cert;
}

SosCertificate sos_descend_quadratic(const std::vector<std::pair<Series, Series>>& summands,
                                     const Rational& a,
                                     const std::optional<std::pair<Series, std::array<Series, 2>>>&
                                         modulus) {
    if (a <= 0) fail(Errc::inconsistent_input, "a must be a positive rational");
    if (summands.empty()) fail(Errc::inconsistent_input, "no summands");
    const auto& vars = summands[0].first.vars();

    SosCertificate cert;
    Series target(vars, summands[0].first.stated_trunc(), summands[0].first.exact());
    int tr = Series::kInfTrunc;
    for (const auto& [c, d] : summands) {
        target = target + c * c + (d * d).scalar_mul(a);
        tr = std::min({tr, c.trunc(), d.trunc()});
        cert.summands.push_back(c);
        cert.weights.push_back(weight_of(Rational(1)));
    }
    for (const auto& [c, d] : summands) {
        if (d.is_zero()) continue;
        cert.summands.push_back(d);
        cert.weights.push_back(weight_of(a));
    }
    if (modulus) {
        // conjugation averaging keeps only the rational part q1 of the cofactor
        target = target + modulus->second[0] * modulus->first;
        cert.modulus = std::make_pair(modulus->first, modulus->second[0]);
        tr = std::min({tr, modulus->first.trunc(), modulus->second[0].trunc()});
    }
    cert.target = target;
    cert.verified_to = tr;
    verify_certificate(cert);
    return cert;
}

SosCertificate cubic_trace_descend(const std::vector<std::array<Series, 3>>& summands,
                                   const Rational& a, const Rational& b,
                                   const std::optional<std::pair<Series, std::array<Series, 3>>>&
                                       modulus) {
    if (!(-a > 0)) fail(Errc::side_condition_violated, "-a must be positive");
    Rational disc = -4 * a * a * a - 27 * b * b;
    if (!(disc > 0)) fail(Errc::side_condition_violated, "-4a^3-27b^2 must be positive");
    if (summands.empty()) fail(Errc::inconsistent_input, "no summands");
    const auto& vars = summands[0][0].vars();

    // trace average: 3 psi = sum_i (3 a_i^2 - 2a b_i^2 + 2a^2 c_i^2
    //                               - 4a a_i c_i - 6b b_i c_i) + (3 d1 - 2a d3) rel
    Rational w1 = 1;
    Rational w2 = Rational(-2) * a / 3;
    Rational w3 = (-a) * disc / (18 * a * a);
    SosCertificate cert;
    Series target(vars, summands[0][0].stated_trunc(), summands[0][0].exact());
    int tr = Series::kInfTrunc;
    for (const auto& s : summands) {
        const Series &ai = s[0], &bi = s[1], &ci = s[2];
        tr = std::min({tr, ai.trunc(), bi.trunc(), ci.trunc()});
        Series s1 = ai + ci.scalar_mul(Rational(-2) * a / 3);
        Series s2 = bi + ci.scalar_mul(Rational(3) * b / (2 * a));
        cert.summands.push_back(s1);
        cert.weights.push_back(weight_of(w1));
        cert.summands.push_back(s2);
        cert.weights.push_back(weight_of(w2));
        cert.summands.push_back(ci);
        cert.weights.push_back(weight_of(w3));
        Series t = (ai * ai).scalar_mul(Rational(3)) + (bi * bi).scalar_mul(Rational(-2) * a) +
                   (ci * ci).scalar_mul(Rational(2) * a * a) +
                   (ai * ci).scalar_mul(Rational(-4) * a) + (bi * ci).scalar_mul(Rational(-6) * b);
        target = target + t.scalar_mul(Rational(1, 3));
    }
    if (modulus) {
        Series cof = (modulus->second[0].scalar_mul(Rational(3)) +
                      modulus->second[2].scalar_mul(Rational(-2) * a))
                         .scalar_mul(Rational(1, 3));
        target = target + cof * modulus->first;
        cert.modulus = std::make_pair(modulus->first, cof);
        tr = std::min(tr, modulus->first.trunc());
    }
    cert.target = target;
    cert.verified_to = tr;
    verify_certificate(cert);
    return cert;
}

// --------------------------------------------------------------- univariate

UniPoly uni_trim(UniPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

UniPoly uni_derive(const UniPoly& p) {
    UniPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational((long)i));
    return uni_trim(d);
}

UniPoly uni_neg_rem(const UniPoly& num, const UniPoly& den) {
    UniPoly r = uni_trim(num);
    UniPoly d = uni_trim(den);
    if (d.empty()) fail(Errc::inconsistent_input, "remainder by zero");
    while (!r.empty() && r.size() >= d.size()) {
        Rational c = r.back() / d.back();
        std::size_t shift = r.size() - d.size();
        for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= c * d[i];
        r = uni_trim(r);
    }
    for (auto& c : r) c = -c;
    return r;
}

Rational uni_eval(const UniPoly& p, const Rational& x) {
    Rational acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
    a = uni_trim(a);
    b = uni_trim(b);
    while (!b.empty()) {
        UniPoly r = uni_neg_rem(a, b);
        for (auto& c : r) c = -c;
        a = b;
        b = uni_trim(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

UniPoly uni_divexact(const UniPoly& num, const UniPoly& den) {
    UniPoly r = uni_trim(num), d = uni_trim(den), q;
    if (d.empty()) fail(Errc::inconsistent_input, "division by zero");
    q.assign(r.size() >= d.size() ? r.size() - d.size() + 1 : 0, Rational(0));
    while (!r.empty() && r.size() >= d.size()) {
        Rational c = r.back() / d.back();
        std::size_t shift = r.size() - d.size();
        q[shift] = c;
        for (std::size_t i = 0; i < d.size(); ++i) r[shift + i] -= c * d[i];
        r = uni_trim(r);
    }
    if (!r.empty()) fail(Errc::internal, "inexact univariate division");
    return uni_trim(q);
}

SturmSequence sturm(const UniPoly& p_in) {
    UniPoly p = uni_trim(p_in);
    if (p.empty()) fail(Errc::inconsistent_input, "Sturm sequence of zero");
    SturmSequence s;
    s.polys.push_back(p);
    if (p.size() == 1) return s;
    s.polys.push_back(uni_derive(p));
    while (s.polys.back().size() > 1 || s.polys.back().empty()) {
        if (s.polys.back().empty()) break;
        UniPoly nxt = uni_neg_rem(s.polys[s.polys.size() - 2], s.polys.back());
        if (nxt.empty()) break;
        s.polys.push_back(nxt);
    }
    return s;
}

namespace {

int sign_at(const UniPoly& p, const std::optional<Rational>& x, bool at_minus_inf) {
    if (p.empty()) return 0;
    if (!x) {
        Rational lead = p.back();
        int s = lead > 0 ? 1 : -1;
        if (at_minus_inf && (p.size() - 1) % 2 == 1) s = -s;
        return s;
    }
    Rational v = uni_eval(p, *x);
    return v == 0 ? 0 : (v > 0 ? 1 : -1);
}

unsigned variations(const std::vector<UniPoly>& chain, const std::optional<Rational>& x,
                    bool at_minus_inf) {
    unsigned count = 0;
    int prev = 0;
    for (const auto& p : chain) {
        int s = sign_at(p, x, at_minus_inf);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

} // namespace

unsigned count_real_roots(const UniPoly& p_in, const Interval& iv) {
    UniPoly p = uni_trim(p_in);
    if (p.empty()) fail(Errc::inconsistent_input, "root count of the zero polynomial");
    if (p.size() == 1) return 0;
    UniPoly g = uni_gcd(p, uni_derive(p));
    bool flagged = g.size() > 1;
    if (flagged) p = uni_divexact(p, g); // squarefree part, multiplicities dropped
    SturmSequence chain = sturm(p);
    unsigned vlo = variations(chain.polys, iv.lo, !iv.lo.has_value());
    unsigned vhi = variations(chain.polys, iv.hi, false);
    unsigned n = vlo >= vhi ? vlo - vhi : 0;
    // Sturm counts roots in (lo, hi]; a root exactly at lo must be added
    if (iv.lo && uni_eval(p, *iv.lo) == 0) ++n;
    return n;
}

// ------------------------------------------------------------- obstructions

namespace {

Arc make_arc(const Series& xi, const Series& eta, bool positive = true, unsigned q = 1) {
    Arc a;
    a.ramification = q;
    a.xi = xi;
    a.eta = eta;
    a.zeta = Series::zero(xi.vars(), xi.stated_trunc());
    a.positive_side = positive;
    return a;
}

} // namespace

Obstruction obstruction_arcs(const NormalForm& nf) {
    const std::vector<std::string> xy{"x", "y"};
    const std::vector<std::string> svar{"s"};
    const int tr = 40;
    auto smono = [&](const Rational& c, unsigned e) {
        Series g = Series::zero(svar, tr);
        if (c != 0) g.insert_term(Monomial::unit(1, 0, e), c);
        return g;
    };
    auto poly = [&](const std::vector<std::pair<Monomial, Rational>>& terms) {
        return Series::poly(xy, terms);
    };
    Monomial mx = Monomial::unit(2, 0), my = Monomial::unit(2, 1);

    Obstruction obs;
    switch (nf.kind) {
    case NormalForm::Case::X3Bare: {
        // phi = x + M^2 y^2 with M = 2(b^2+1)(c^2+1)
        Rational M = 2 * (nf.b * nf.b + 1) * (nf.c * nf.c + 1);
        obs.element = poly({{mx, Rational(1)}, {Monomial::unit(2, 1, 2), M * M}});
        obs.arcs.push_back(make_arc(smono(1, 1), smono(0, 1)));
        obs.arcs.push_back(make_arc(smono(-1, 1), smono(0, 1)));
        obs.arcs.push_back(make_arc(smono(-M * M, 2), smono(1, 1)));
        obs.arcs.push_back(make_arc(smono(-2 * M * M, 2), smono(1, 1)));
        obs.reason = "x + M^2 y^2 is nonnegative on {F>=0} but has odd order";
        break;
    }
    case NormalForm::Case::X3Y4: {
        if (nf.a > 0) fail(Errc::not_an_obstruction_case, "x^3 + a y^4 with a > 0 is affirmative");
        // x^3 = z^2 - a y^4 is a sum of squares, so x itself obstructs
        obs.element = poly({{mx, Rational(1)}});
        obs.arcs.push_back(make_arc(smono(1, 1), smono(0, 1)));
        obs.arcs.push_back(make_arc(smono(-1, 1), smono(0, 1)));
        obs.arcs.push_back(make_arc(smono(-1, 2), smono(1, 1)));
        obs.reason = "x is nonnegative on {F>=0} but has odd order";
        break;
    }
    case NormalForm::Case::X2YPlus: {
        if (nf.a > 0) fail(Errc::not_an_obstruction_case, "affirmative x^2 y case");
        obs.element = poly({{my, Rational(1)}});
        obs.arcs.push_back(make_arc(smono(1, 1), smono(1, 2)));
        obs.arcs.push_back(make_arc(smono(0, 1), smono(1, 1)));
        obs.arcs.push_back(make_arc(smono(1, 1), smono(-1, 1)));
        obs.reason = "y is nonnegative on {F>=0} but has odd order";
        break;
    }
    case NormalForm::Case::Order2: {
        if (nf.a > 0) fail(Errc::not_an_obstruction_case, "affirmative order-2 case");
        if (nf.tail == NormalForm::Order2Tail::OddPow) {
            obs.element = poly({{my, Rational(1)}});
            obs.arcs.push_back(make_arc(smono(0, 1), smono(1, 1)));
            obs.arcs.push_back(make_arc(smono(1, nf.k + 1), smono(1, 1)));
            obs.arcs.push_back(make_arc(smono(1, 1), smono(-1, 2)));
            obs.reason = "y is nonnegative on {F>=0} but has odd order";
            break;
        }
        if (nf.tail == NormalForm::Order2Tail::EvenPow && nf.b > 0 && nf.k >= 2) {
            // a = -sum a_i^2; phi = (b^2+1) y^k + a_1 x   (k even)
            //                 phi = (b^2+1) y^{k+1} + a_1 x y (k odd)
            FourSquares am = four_square_decomposition(-nf.a);
            Rational a1 = 0;
            for (const auto& part : am.parts)
                if (part != 0) {
                    a1 = part;
                    break;
                }
            Rational bb = nf.b * nf.b + 1;
            bool keven = nf.k % 2 == 0;
            unsigned ye = keven ? (unsigned)nf.k : (unsigned)nf.k + 1;
            std::vector<std::pair<Monomial, Rational>> terms{{Monomial::unit(2, 1, ye), bb}};
            Monomial xm = mx;
            if (!keven) xm = mx * my;
            terms.push_back({xm, a1});
            obs.element = poly(terms);
            // arcs inside {F >= 0}: x = c t^k, y = t with |a| c^2 < b
            Rational c = 1;
            while (nf.a * c * c + nf.b <= 0 || bb + a1 * c <= 0) c /= 2;
            obs.arcs.push_back(make_arc(smono(0, 1), smono(1, 1)));
            obs.arcs.push_back(make_arc(smono(c, (unsigned)nf.k), smono(1, 1)));
            obs.arcs.push_back(make_arc(smono(-c, (unsigned)nf.k), smono(1, 1)));
            obs.reason = "order-1-in-disguise element nonnegative on {F>=0} (Case 4)";
            break;
        }
        fail(Errc::not_an_obstruction_case, "order-2 case without a curve obstruction (non-real)");
    }
    default:
        fail(Errc::not_an_obstruction_case, nf.case_name());
    }
    return obs;
}

// --------------------------------------------------------------- dominating

DominatingConstant dominating_constant(const Series& f, unsigned s) {
    OrderResult o = f.order();
    if (o.known && o.value < (int)(2 * s))
        fail(Errc::order_too_low, "omega(f) < 2s");
    std::size_t n = f.nvars();

    // lex-first degree-2s divisor: load later variables as much as possible
    auto assign = [&](const Monomial& m) {
        Monomial nu = Monomial::one(n);
        unsigned left = 2 * s;
        for (std::size_t j = n; j-- > 0 && left > 0;) {
            unsigned take = std::min<unsigned>(m.e[j], left);
            nu.e[j] = take;
            left -= take;
        }
        return nu;
    };

    DominatingConstant out;
    std::map<Monomial, Rational> b0; // constant terms b_nu(0)
    f.for_each([&](const Monomial& m, const Rational& c) {
        Monomial nu = assign(m);
        out.assignment.emplace_back(m, nu);
        if (m == nu) b0[nu] += c; // the constant term of b_nu is the coefficient at nu itself
    });
    Rational M = 0;
    for (const auto& nu : monomials_of_degree(n, 2 * s)) {
        auto it = b0.find(nu);
        Rational c = it == b0.end() ? Rational(0) : it->second;
        M += c * c + 1;
    }
    out.M = M;
    return out;
}

} // namespace sumsq
