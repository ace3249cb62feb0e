#include "sumsq/flow.hpp"

#include <algorithm>
#include <map>

namespace sumsq {

namespace {

// t-layer decomposition: f = sum_k layer_k * t^k with t-free layers; the
// t^k layer of an input exact below T is exact below T-k
std::vector<Series> t_layers(const Series& f, std::size_t t_index, int count) {
    std::vector<Series> layers;
    for (int k = 0; k < count; ++k)
        layers.emplace_back(f.vars(), std::max(1, f.stated_trunc() - k), f.exact());
    f.for_each([&](const Monomial& m, const Rational& c) {
        if ((int)m.e[t_index] >= count) return;
        Monomial m2 = m;
        unsigned k = m2.e[t_index];
        m2.e[t_index] = 0;
        layers[k].insert_term(m2, c);
    });
    return layers;
}

} // namespace

Series solve_linear_ode(const Series& u, const Series& a, std::size_t t_index) {
    if (t_index >= u.nvars()) fail(Errc::variable_mismatch, "flow variable out of range");
    if (!a.same_vars(u)) fail(Errc::variable_mismatch, "initial value in a different ring");
    int tr = std::min(u.trunc(), a.trunc());
    if (tr == Series::kInfTrunc)
        tr = std::max({2, u.max_stored_degree() + 2, a.max_stored_degree() + 2});
    int layers_n = tr + 1;
    std::vector<Series> ul = t_layers(u.truncated(tr), t_index, layers_n);
    std::vector<Series> yl;
    yl.push_back(a.truncated(tr));
    // y_k = (1/k) sum_{j+l=k-1} u_j y_l
    for (int k = 1; k < layers_n; ++k) {
        Series acc = Series::zero(u.vars(), tr);
        for (int j = 0; j <= k - 1; ++j) acc = acc + ul[(std::size_t)j] * yl[(std::size_t)(k - 1 - j)];
        yl.push_back(acc.scalar_mul(Rational(1, k)));
    }
    Series y = Series::zero(u.vars(), tr);
    for (int k = 0; k < layers_n; ++k)
        y = y + yl[(std::size_t)k].mul_monomial(Monomial::unit(u.nvars(), t_index, (unsigned)k), Rational(1)).truncated(tr);
    return y;
}

std::vector<Series> solve_ode_system(const OdeSystem& sys, int t_order) {
    if (sys.rhs.empty()) return {};
    std::size_t n = sys.rhs.size();
    if (sys.initial.size() != n || sys.unknown_slots.size() != n)
        fail(Errc::invalid_ode_system, "component count mismatch");
    const auto& vars = sys.rhs[0].vars();
    for (const auto& b : sys.rhs) {
        if (!b.same_vars(sys.rhs[0])) fail(Errc::invalid_ode_system, "rhs rings differ");
        if (b.coeff_at_origin() != 0) fail(Errc::invalid_ode_system, "rhs has nonzero constant term");
    }
    for (const auto& a : sys.initial) {
        if (!a.same_vars(sys.rhs[0])) fail(Errc::invalid_ode_system, "initial value ring differs");
        if (a.coeff_at_origin() != 0) fail(Errc::invalid_ode_system, "initial value not in the maximal ideal");
    }

    int tr = t_order;
    for (const auto& b : sys.rhs) tr = std::min(tr, b.trunc());
    for (const auto& a : sys.initial) tr = std::min(tr, a.trunc());
    tr = std::max(2, tr);

    std::vector<Series> phi;
    for (std::size_t i = 0; i < n; ++i) phi.push_back(sys.initial[i].truncated(tr));

    // Picard: phi <- a0 + int_0^t b(phi, s) ds ; fixpoint below trunc after
    // at most tr iterations, consecutive iterates agree below t-degree m+1
    for (int it = 0; it <= tr + 1; ++it) {
        std::vector<Series> images;
        for (std::size_t v = 0; v < vars.size(); ++v) images.push_back(Series::variable(vars, v, tr));
        for (std::size_t i = 0; i < n; ++i) images[sys.unknown_slots[i]] = phi[i];
        std::vector<Series> next;
        bool stable = true;
        for (std::size_t i = 0; i < n; ++i) {
            Series comp = sys.rhs[i].truncated(tr).substitute(images);
            Series cand = sys.initial[i].truncated(tr) + comp.integrate(sys.t_index).truncated(tr);
            if (!cand.equal_below_common_trunc(phi[i])) stable = false;
            // stabilization: iterates it and it+1 agree below t-degree it+1
            Series diff = cand - phi[i];
            bool ok = true;
            diff.for_each([&](const Monomial& m, const Rational&) {
                if ((int)m.e[sys.t_index] <= it) ok = false;
            });
            if (!ok) fail(Errc::internal, "Picard iteration failed to stabilize layerwise");
            next.push_back(std::move(cand));
        }
        phi = std::move(next);
        if (stable) break;
    }

    // residual check: d phi_i/dt - b_i(phi, t) vanishes below truncation - 1
    std::vector<Series> images;
    for (std::size_t v = 0; v < vars.size(); ++v) images.push_back(Series::variable(vars, v, tr));
    for (std::size_t i = 0; i < n; ++i) images[sys.unknown_slots[i]] = phi[i];
    for (std::size_t i = 0; i < n; ++i) {
        Series lhs = phi[i].partial(sys.t_index);
        Series rhs = sys.rhs[i].truncated(tr).substitute(images);
        if (!lhs.equal_below_common_trunc(rhs.truncated(std::max(1, tr - 1))))
            fail(Errc::internal, "ODE residual nonzero below truncation");
    }
    return phi;
}

namespace {

std::vector<Monomial> all_monomials_below(std::size_t nvars, int N) {
    std::vector<Monomial> out;
    for (int d = 0; d < N; ++d)
        for (auto& m : monomials_of_degree(nvars, (unsigned)d)) out.push_back(m);
    return out;
}

// generic exact solve used by the public membership_decompose
std::optional<Decomposition> decompose_linear(const Series& F, std::size_t yj,
                                              const std::vector<std::size_t>& x_slots, int c, int N,
                                              bool with_f) {
    Series target = F.partial(yj).truncated(N);
    std::vector<Series> gens;
    for (std::size_t xs : x_slots) gens.push_back(F.partial(xs));

    std::map<Monomial, std::size_t> row_of;
    std::vector<Monomial> rows = all_monomials_below(F.nvars(), N);
    for (std::size_t i = 0; i < rows.size(); ++i) row_of.emplace(rows[i], i);

    struct Col {
        std::size_t gen; // gens.size() == F column
        Monomial mult;
    };
    std::vector<Col> cols;
    std::vector<std::vector<Rational>> colvecs;
    auto add_cols = [&](const Series& g, std::size_t gi, bool need_xc) {
        OrderResult og = g.order();
        int ord = og.known ? og.value : g.trunc();
        for (const auto& nu : all_monomials_below(F.nvars(), std::max(0, N - ord))) {
            if (need_xc) {
                int xdeg = 0;
                for (std::size_t xs : x_slots) xdeg += (int)nu.e[xs];
                if (xdeg < c) continue;
            }
            std::vector<Rational> col(rows.size(), Rational(0));
            bool nz = false;
            g.for_each([&](const Monomial& m, const Rational& cc) {
                Monomial prod = m * nu;
                if ((int)prod.degree() >= N) return;
                col[row_of.at(prod)] += cc;
                nz = true;
            });
            if (!nz) continue;
            cols.push_back({gi, nu});
            colvecs.push_back(std::move(col));
        }
    };
    for (std::size_t gi = 0; gi < gens.size(); ++gi) add_cols(gens[gi], gi, true);
    if (with_f) add_cols(F, gens.size(), false);
    if (cols.empty()) return std::nullopt;

    std::vector<std::vector<Rational>> A(rows.size(), std::vector<Rational>(cols.size(), Rational(0)));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows.size(); ++i) A[i][j] = colvecs[j][i];
    GaussSolver solver(std::move(A));

    std::vector<Rational> rhs(rows.size(), Rational(0));
    target.for_each([&](const Monomial& m, const Rational& cc) {
        if ((int)m.degree() < N) rhs[row_of.at(m)] = cc;
    });
    auto sol = solver.solve(rhs);
    if (!sol) return std::nullopt;

    Decomposition dec;
    dec.verified_to = N;
    dec.zeta = Series::zero(F.vars(), N);
    for (std::size_t i = 0; i < gens.size(); ++i) dec.xi.push_back(Series::zero(F.vars(), N));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if ((*sol)[j] == 0) continue;
        if (cols[j].gen < gens.size())
            dec.xi[cols[j].gen].insert_term(cols[j].mult, (*sol)[j]);
        else
            dec.zeta.insert_term(cols[j].mult, -(*sol)[j]); // dF/dy_j = -zeta F + ...
    }
    return dec;
}

} // namespace

std::optional<Decomposition> membership_decompose(const Series& F, std::size_t yj,
                                                  const std::vector<std::size_t>& x_slots, int c,
                                                  int N) {
    if (yj >= F.nvars()) fail(Errc::variable_mismatch, "no such variable");
    if (!F.exact() && F.trunc() < N)
        fail(Errc::precision_violation, "decomposition beyond input precision");
    Series target = F.partial(yj);
    if (target.is_zero()) {
        Decomposition dec;
        dec.verified_to = N;
        dec.zeta = Series::zero(F.vars(), N);
        for (std::size_t i = 0; i < x_slots.size(); ++i) dec.xi.push_back(Series::zero(F.vars(), N));
        return dec;
    }
    if (auto d = decompose_linear(F, yj, x_slots, c, N, false)) return d;
    return decompose_linear(F, yj, x_slots, c, N, true);
}

namespace {

// dst += c * shift * src, in place
void add_scaled_shifted(Series& dst, const Series& src, const Monomial& shift, const Rational& c) {
    if (c == 0) return;
    src.for_each([&](const Monomial& m, const Rational& cc) { dst.insert_term(m * shift, cc * c); });
}

// Composition specialized for flow right-hand sides: xi lives over
// (x_1..x_n, w) and is evaluated at x_p -> Phi_p, w -> w - t, where each
// Phi_p = x_p + Delta_p with high-order Delta_p.  Taylor expansion around
// (x, w - t) keeps the heavy multiplications down to the few Delta powers
// that survive the truncation.
Series compose_flow(const Series& xi, const std::vector<Series>& Phi, std::size_t wi,
                    std::size_t ti, int W) {
    const auto& tvars = Phi[0].vars();
    std::size_t n = Phi.size();

    std::vector<Series> delta;
    std::vector<int> dord;
    for (std::size_t p = 0; p < n; ++p) {
        Series d = Phi[p] - Series::variable(tvars, p, W);
        OrderResult o = d.order();
        delta.push_back(d);
        dord.push_back(o.known ? std::max(1, o.value) : W);
    }

    // substitute w -> w - t termwise (binomial reindex), keeping x intact
    auto base_sub = [&](const Series& g) {
        Series r(tvars, std::min(W, g.trunc()), false);
        g.for_each([&](const Monomial& m, const Rational& c) {
            unsigned b = m.e[n];
            Monomial m2 = Monomial::one(tvars.size());
            for (std::size_t v = 0; v < n; ++v) m2.e[v] = m.e[v];
            Rational binom = 1;
            for (unsigned j = 0; j <= b; ++j) {
                m2.e[wi] = b - j;
                m2.e[ti] = j;
                Rational cc = c * binom;
                if (j % 2 == 1) cc = -cc;
                r.insert_term(m2, cc);
                binom = binom * Rational((long)(b - j)) / Rational((long)(j + 1));
            }
        });
        return r;
    };

    // Delta power caches
    std::vector<std::vector<Series>> pows(n);
    auto dpow = [&](std::size_t p, unsigned e) -> const Series& {
        auto& v = pows[p];
        if (v.empty()) v.push_back(Series::constant(tvars, Rational(1), W));
        while (v.size() <= e) v.push_back(v.back() * delta[p]);
        return v[e];
    };

    Series acc = Series::zero(tvars, W);
    // alpha ranges over derivative multi-indices with alpha . dord < W
    std::vector<unsigned> alpha(n, 0);
    std::function<void(std::size_t, const Series&, long)> rec = [&](std::size_t p, const Series& dxi,
                                                                    long weight) {
        if (p == n) {
            Series term = base_sub(dxi);
            for (std::size_t q = 0; q < n; ++q)
                if (alpha[q] > 0) term = term * dpow(q, alpha[q]);
            acc = acc + term;
            return;
        }
        Series cur = dxi;
        for (unsigned a = 0;; ++a) {
            alpha[p] = a;
            long w2 = weight + (long)a * dord[p];
            if (w2 >= W) break;
            rec(p + 1, cur, w2);
            if (cur.is_zero()) break;
            // next derivative divided by (a+1) builds d^a xi / a!
            cur = cur.partial(p).scalar_mul(Rational(1, (long)a + 1));
        }
        alpha[p] = 0;
    };
    Series xiw_ring = xi.truncated(std::min(W, xi.trunc()));
    rec(0, xiw_ring, 0);
    return acc;
}

// One-step base certificate data for every degree-k monomial in the base
// variables: nu = sum_p q_p * d(base)/dx_p + rho * base - R, with R in m^{k+1}.
struct BaseCertRow {
    std::vector<Series> q; // over base vars, multipliers in m
    Series rho;
    Series R; // exact remainder below work truncation
};

struct StageBudget {
    int work; // internal truncation
};

// lift a base-ring series into the (base + w) ring
Series lift_to_aux(const Series& f, const std::vector<std::string>& full_vars) {
    return f.extended(full_vars);
}

// lex-smallest x-divisor of degree k: greedy from the last base variable
Monomial lex_first_divisor(const Monomial& m, std::size_t nbase, unsigned k) {
    Monomial nu = Monomial::one(m.nvars());
    unsigned left = k;
    for (std::size_t j = nbase; j-- > 0 && left > 0;) {
        unsigned take = std::min<unsigned>(m.e[j], left);
        nu.e[j] = take;
        left -= take;
    }
    if (left != 0) fail(Errc::internal, "pending term lost the depth-k x-structure");
    return nu;
}

struct StageResult {
    std::vector<Series> sub; // base-ring substitution sigma
    Series unit_inv;         // v with prev = v * next(sigma)
    bool unit_one = true;
};

// Eliminate one auxiliary variable: base_prev + (x_i + w) * h  ~>  flow in w.
StageResult eliminate_stage(const Series& base_prev, const Series& h, std::size_t xi_index,
                            const std::map<Monomial, BaseCertRow>& cert, bool determined,
                            const StageBudget& budget, int k) {
    const auto& bvars = base_prev.vars();
    std::size_t n = bvars.size();
    std::vector<std::string> wvars = bvars;
    wvars.push_back("w@");
    std::vector<std::string> tvars = wvars;
    tvars.push_back("t@");
    std::size_t wi = n, ti = n + 1;
    int W = budget.work;

    Series hb = h.truncated(W);
    Series base = base_prev.truncated(W);
    Series h_w = lift_to_aux(hb, wvars);
    Series base_w = lift_to_aux(base, wvars);
    Series xiw = Series::variable(wvars, xi_index, W) + Series::variable(wvars, wi, W);
    Series F = base_w + xiw * h_w;

    // precompute Delta_nu for the certificate rows that occur
    std::vector<Series> dh; // partials of h, lifted
    for (std::size_t p = 0; p < n; ++p) dh.push_back(lift_to_aux(hb.partial(p), wvars));
    struct LiftedRow {
        std::vector<Series> q;
        Series rho;
        Series delta;
    };
    std::map<Monomial, LiftedRow> lifted; // keyed by the base monomial

    auto row_for = [&](const Monomial& nu_base) -> const LiftedRow& {
        auto it = lifted.find(nu_base);
        if (it != lifted.end()) return it->second;
        auto rit = cert.find(nu_base);
        if (rit == cert.end()) fail(Errc::decomposition_failed, "certificate row missing");
        const BaseCertRow& r = rit->second;
        LiftedRow row;
        row.delta = Series::zero(wvars, W);
        for (std::size_t p = 0; p < n; ++p) {
            row.q.push_back(lift_to_aux(r.q[p].truncated(W), wvars));
            Series t = dh[p] * xiw;
            if (p == xi_index) t = t + h_w;
            row.delta = row.delta + row.q.back() * t;
        }
        row.rho = lift_to_aux(r.rho.truncated(W), wvars);
        if (!row.rho.is_zero()) row.delta = row.delta + row.rho * xiw * h_w;
        row.delta = row.delta + lift_to_aux(r.R.truncated(W), wvars);
        return lifted.emplace(nu_base, std::move(row)).first->second;
    };

    // rewrite pending = dF/dw = h into sum xi_p dF/dx_p + fmult * F + O(m^W)
    Series pending = h_w;
    std::vector<Series> xs(n, Series::zero(wvars, W));
    Series fmult = Series::zero(wvars, W);
    for (int guard = 0; guard <= 2 * W + 4; ++guard) {
        OrderResult o = pending.order();
        if (!o.known || o.value >= W) break;
        int d0 = o.value;
        auto slice = pending.slice(d0); // copy; pending mutates below
        std::vector<std::pair<Monomial, Rational>> terms(slice.begin(), slice.end());
        for (const auto& [mu, cmu] : terms) {
            Monomial nu_full = lex_first_divisor(mu, n, (unsigned)k);
            Monomial rest = mu / nu_full;
            Monomial nu_base(std::vector<unsigned>(nu_full.e.begin(), nu_full.e.begin() + n));
            const LiftedRow& r = row_for(nu_base);
            for (std::size_t p = 0; p < n; ++p) add_scaled_shifted(xs[p], r.q[p], rest, cmu);
            add_scaled_shifted(fmult, r.rho, rest, cmu);
            // sum q_p dF/dx_p + rho F = nu + Delta, so the pending series
            // loses c*mu and picks up -c*rest*Delta
            add_scaled_shifted(pending, r.delta, rest, -cmu);
            pending.insert_term(mu, -cmu);
        }
    }
    {
        OrderResult o = pending.order();
        if (o.known && o.value < W) fail(Errc::internal, "structured decomposition did not terminate");
    }

    // soundness of the decomposition below W
    {
        Series resid = h_w - fmult * F;
        for (std::size_t p = 0; p < n; ++p) resid = resid - xs[p] * F.partial(p);
        OrderResult o = resid.truncated(W).order();
        if (o.known && o.value < W) fail(Errc::internal, "decomposition residual below work precision");
    }
    if (determined && !fmult.is_zero()) fail(Errc::internal, "determined certificate produced a unit");

    // flow: dPhi_p/dt = xi_p(Phi, w - t), Phi(t=0) = x_p, solved by Picard
    // iteration on top of the Taylor composition
    std::vector<Series> Phi;
    for (std::size_t p = 0; p < n; ++p) Phi.push_back(Series::variable(tvars, p, W));
    for (int it = 0;; ++it) {
        bool stable = true;
        std::vector<Series> next;
        for (std::size_t p = 0; p < n; ++p) {
            Series comp = compose_flow(xs[p], Phi, wi, ti, W);
            Series cand = Series::variable(tvars, p, W) + comp.integrate(ti).truncated(W);
            if (!cand.equal_below_common_trunc(Phi[p])) stable = false;
            next.push_back(std::move(cand));
        }
        Phi = std::move(next);
        if (stable) break;
        if (it > W + 1) fail(Errc::internal, "flow Picard iteration did not stabilize");
    }
    // residual: dPhi/dt - xi(Phi, w - t) vanishes below W - 1
    for (std::size_t p = 0; p < n; ++p) {
        Series resid = Phi[p].partial(ti) - compose_flow(xs[p], Phi, wi, ti, W).truncated(std::max(1, W - 1));
        OrderResult o = resid.order();
        if (o.known && o.value < std::min(W - 1, resid.trunc()))
            fail(Errc::internal, "flow ODE residual nonzero below truncation");
    }

    Series U = Series::constant(tvars, Rational(1), W);
    if (!fmult.is_zero()) {
        Series zeta_comp = compose_flow(-fmult, Phi, wi, ti, W);
        U = solve_linear_ode(zeta_comp, Series::constant(tvars, Rational(1), W), ti);
    }

    // specialize t := w, then w := -x_i
    std::vector<Series> spec_tw;
    for (std::size_t v = 0; v < n; ++v) spec_tw.push_back(Series::variable(wvars, v, W));
    spec_tw.push_back(Series::variable(wvars, wi, W));
    spec_tw.push_back(Series::variable(wvars, wi, W)); // t -> w
    std::vector<Series> spec_w;
    for (std::size_t v = 0; v < n; ++v) spec_w.push_back(Series::variable(bvars, v, W));
    spec_w.push_back(-Series::variable(bvars, xi_index, W)); // w -> -x_i

    StageResult out;
    for (std::size_t p = 0; p < n; ++p) {
        Series phi_w = Phi[p].substitute(spec_tw);
        out.sub.push_back(phi_w.substitute(spec_w));
    }
    Series u_w = U.substitute(spec_tw).substitute(spec_w);
    out.unit_one = fmult.is_zero();
    out.unit_inv = out.unit_one ? Series::constant(bvars, Rational(1), W) : u_w.invert_unit_at(W);
    return out;
}

} // namespace

Series witness_residual(const Series& f, const Series& g, const EquivalenceWitness& w) {
    Series comp = g.truncated(std::min(g.trunc(), w.unit.trunc())).substitute(w.substitutions);
    return f.truncated(comp.trunc()) - w.unit * comp;
}

EquivalenceWitness right_equivalence_witness(const Series& f, const Series& g, int k, int N) {
    if (!f.same_vars(g)) fail(Errc::variable_mismatch, "operands live in different rings");
    if (k < 1) fail(Errc::inconsistent_input, "k must be >= 1");
    if (N <= 0) N = 2 * k + 2;
    std::size_t n = f.nvars();
    const auto& vars = f.vars();

    Series diff = g - f;
    OrderResult od = diff.order();
    if (od.known && od.value <= k)
        fail(Errc::not_within_determinacy_ball, "f - g not in m^{k+1}");

    int avail = std::min(f.trunc(), g.trunc());
    if (avail < N) fail(Errc::precision_violation, "N exceeds the available truncation");
    int W = std::min(avail, N);

    EquivalenceWitness wit;
    for (std::size_t i = 0; i < n; ++i) wit.substitutions.push_back(Series::variable(vars, i, W));
    wit.unit = Series::constant(vars, Rational(1), W);
    wit.unit_is_one = true;

    if (!od.known || diff.truncated(W).is_zero()) {
        wit.verified_to = W;
        return wit;
    }

    // certify the Thm-2.4 inclusion at k for f
    std::vector<Series> gens = jacobian_generators(f);
    bool determined = true;
    auto cert_opt = graded_membership(k, gens, MultiplierIdeal::MaximalIdeal, nullptr);
    if (!cert_opt) {
        determined = false;
        cert_opt = graded_membership(k, gens, MultiplierIdeal::MaximalIdeal, &f);
    }
    if (!cert_opt)
        fail(Errc::decomposition_failed, "no determinacy certificate at the requested k");

    // split the perturbation: h = sum x_i h_i with h_i in m^k
    std::vector<Series> hs(n, Series::zero(vars, W));
    diff.truncated(W).for_each([&](const Monomial& m, const Rational& c) {
        for (std::size_t i = 0; i < n; ++i) {
            if (m.e[i] == 0) continue;
            Monomial m2 = m;
            m2.e[i] -= 1;
            hs[i].insert_term(m2, c);
            return;
        }
        fail(Errc::internal, "perturbation has a constant term");
    });

    // stage chain: g_0 = f, g_i = g_{i-1} + x_i h_i, g_n = g
    Series cur = f.truncated(W);
    std::vector<StageResult> stages;
    for (std::size_t i = 0; i < n; ++i) {
        if (hs[i].is_zero()) {
            cur = cur + Series::variable(vars, i, W) * hs[i];
            continue;
        }
        // the degree-<=k membership matrix is insensitive to m^{k+1} moves,
        // so the certificate of f works verbatim for every stage base; the
        // exact remainders are recomputed against the current base
        std::map<Monomial, BaseCertRow> rows;
        std::vector<Series> cgens = jacobian_generators(cur);
        for (const auto& [mu, terms] : cert_opt->rows) {
            BaseCertRow row;
            row.q.assign(n, Series::zero(vars, W));
            row.rho = Series::zero(vars, W);
            for (const auto& t : terms) {
                if (t.gen_index < n)
                    row.q[t.gen_index] = t.multiplier.extended(vars).truncated(W);
                else
                    row.rho = t.multiplier.extended(vars).truncated(W);
            }
            Series rec = Series::zero(vars, W);
            for (std::size_t p = 0; p < n; ++p) rec = rec + row.q[p] * cgens[p].truncated(W);
            if (!row.rho.is_zero()) rec = rec + row.rho * cur;
            row.R = rec - Series::make(vars, W, {{mu, Rational(1)}});
            OrderResult orr = row.R.order();
            if (orr.known && orr.value <= k) fail(Errc::internal, "certificate remainder too low");
            rows.emplace(mu, std::move(row));
        }
        StageBudget budget{W};
        StageResult st = eliminate_stage(cur, hs[i], i, rows, determined, budget, k);
        Series nxt = cur + Series::variable(vars, i, W) * hs[i];
        // soundness of the stage: cur = v * nxt(sigma)
        Series check = nxt.substitute(st.sub) * st.unit_inv - cur;
        OrderResult oc = check.order();
        if (oc.known && oc.value < std::min(W, check.trunc()))
            fail(Errc::internal, "stage witness residual too low");
        stages.push_back(st);
        cur = nxt;
        if (!st.unit_one) wit.unit_is_one = false;
    }

    // compose stages: f = v1 * (v2 o s1) * ... * g(s_m o ... o s1)
    std::vector<Series> phi;
    for (std::size_t i = 0; i < n; ++i) phi.push_back(Series::variable(vars, i, W));
    Series unit = Series::constant(vars, Rational(1), W);
    std::vector<Series> prev_comp = phi;
    for (const auto& st : stages) {
        // accumulated substitution: sigma composed after the existing chain
        unit = unit * st.unit_inv.substitute(prev_comp).truncated(W);
        std::vector<Series> comp;
        for (std::size_t p = 0; p < n; ++p) comp.push_back(st.sub[p].substitute(prev_comp).truncated(W));
        prev_comp = comp;
    }
    wit.substitutions = prev_comp;
    wit.unit = unit;

    // final residual
    Series resid = witness_residual(f, g, wit);
    OrderResult orr = resid.order();
    int vt = orr.known ? orr.value : resid.trunc();
    if (vt < N) fail(Errc::internal, "witness verifies only to m^" + std::to_string(vt));
    wit.verified_to = std::min(vt, W);

    // linear part of phi must be the identity
    for (std::size_t p = 0; p < n; ++p) {
        Series lin = wit.substitutions[p].homogeneous_part(1) - Series::variable(vars, p, W);
        if (!lin.is_zero()) fail(Errc::internal, "witness substitution not tangent to identity");
    }
    return wit;
}

} // namespace sumsq
