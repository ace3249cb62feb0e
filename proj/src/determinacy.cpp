#include "sumsq/determinacy.hpp"

#include <algorithm>
#include <map>

namespace sumsq {

std::vector<Series> jacobian_generators(const Series& f) {
    std::vector<Series> gens;
    for (std::size_t v = 0; v < f.nvars(); ++v) gens.push_back(f.partial(v));
    return gens;
}

GaussSolver::GaussSolver(std::vector<std::vector<Rational>> matrix) : red_(std::move(matrix)) {
    rows_ = red_.size();
    cols_ = rows_ ? red_[0].size() : 0;
    ops_.assign(rows_, std::vector<Rational>(rows_, Rational(0)));
    for (std::size_t i = 0; i < rows_; ++i) ops_[i][i] = 1;

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
        std::size_t p = r;
        while (p < rows_ && red_[p][c] == 0) ++p;
        if (p == rows_) continue;
        std::swap(red_[p], red_[r]);
        std::swap(ops_[p], ops_[r]);
        Rational piv = red_[r][c];
        for (std::size_t k = 0; k < cols_; ++k) red_[r][k] /= piv;
        for (std::size_t k = 0; k < rows_; ++k) ops_[r][k] /= piv;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == r || red_[i][c] == 0) continue;
            Rational t = red_[i][c];
            for (std::size_t k = c; k < cols_; ++k) red_[i][k] -= t * red_[r][k];
            for (std::size_t k = 0; k < rows_; ++k) ops_[i][k] -= t * ops_[r][k];
        }
        pivots_.push_back(c);
        ++r;
    }
}

std::optional<std::vector<Rational>> GaussSolver::solve(const std::vector<Rational>& rhs) const {
    if (rhs.size() != rows_) fail(Errc::internal, "rhs size mismatch");
    std::vector<Rational> c(rows_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < rows_; ++k)
            if (ops_[i][k] != 0 && rhs[k] != 0) c[i] += ops_[i][k] * rhs[k];
    // consistency: rows beyond the rank must vanish
    for (std::size_t i = pivots_.size(); i < rows_; ++i)
        if (c[i] != 0) return std::nullopt;
    std::vector<Rational> x(cols_, Rational(0));
    for (std::size_t i = 0; i < pivots_.size(); ++i) x[pivots_[i]] = c[i];
    return x;
}

namespace {

struct Column {
    std::size_t gen_index;
    Monomial multiplier;
};

std::vector<Monomial> monomials_up_to(std::size_t nvars, int maxdeg) {
    std::vector<Monomial> all;
    for (int d = 0; d <= maxdeg; ++d)
        for (auto& m : monomials_of_degree(nvars, (unsigned)d)) all.push_back(m);
    return all;
}

} // namespace

std::optional<MembershipCertificate> graded_membership(int k, const std::vector<Series>& gens,
                                                       MultiplierIdeal mult, const Series* include_f) {
    if (k < 1) fail(Errc::inconsistent_input, "membership degree must be >= 1");
    if (gens.empty() && !include_f) return std::nullopt;
    std::size_t nvars = gens.empty() ? include_f->nvars() : gens[0].nvars();
    for (const auto& g : gens)
        if (g.trunc() < k + 1)
            fail(Errc::precision_violation, "generator truncation below k+1");
    if (include_f && include_f->trunc() < k + 1)
        fail(Errc::precision_violation, "f truncation below k+1");

    // row indexing: all monomials of degree <= k, grouped by degree
    std::map<Monomial, std::size_t> row_of;
    std::vector<Monomial> row_mons;
    for (int d = 0; d <= k; ++d)
        for (auto& m : monomials_of_degree(nvars, (unsigned)d)) {
            row_of.emplace(m, row_mons.size());
            row_mons.push_back(m);
        }

    auto col_entries = [&](const Series& g, const Monomial& nu, std::vector<Rational>& col) {
        g.for_each([&](const Monomial& m, const Rational& c) {
            Monomial prod = m * nu;
            if ((int)prod.degree() > k) return;
            col[row_of.at(prod)] += c;
        });
    };

    // deterministic column ordering: generators first (multipliers by degree
    // then lex), then the f columns
    std::vector<Column> cols;
    std::vector<std::vector<Rational>> colvecs;
    auto add_columns = [&](const Series& g, std::size_t gi, int min_mult_deg) {
        OrderResult og = g.order();
        int ord = og.known ? og.value : g.trunc();
        if (ord > k) return;
        for (const auto& nu : monomials_up_to(nvars, k - ord)) {
            if ((int)nu.degree() < min_mult_deg) continue;
            std::vector<Rational> col(row_mons.size(), Rational(0));
            col_entries(g, nu, col);
            bool nonzero = std::any_of(col.begin(), col.end(), [](const Rational& q) { return q != 0; });
            if (!nonzero) continue;
            cols.push_back({gi, nu});
            colvecs.push_back(std::move(col));
        }
    };
    for (std::size_t gi = 0; gi < gens.size(); ++gi)
        add_columns(gens[gi], gi, mult == MultiplierIdeal::MaximalIdeal ? 1 : 0);
    if (include_f) add_columns(*include_f, gens.size(), 0);
    if (cols.empty()) return std::nullopt;

    // rows x cols matrix
    std::vector<std::vector<Rational>> A(row_mons.size(), std::vector<Rational>(cols.size(), Rational(0)));
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < row_mons.size(); ++i) A[i][j] = colvecs[j][i];
    GaussSolver solver(std::move(A));

    MembershipCertificate cert;
    cert.k = k;
    cert.includes_f = include_f != nullptr;
    for (const auto& mu : monomials_of_degree(nvars, (unsigned)k)) {
        std::vector<Rational> rhs(row_mons.size(), Rational(0));
        rhs[row_of.at(mu)] = 1;
        auto sol = solver.solve(rhs);
        if (!sol) return std::nullopt;
        // gather multipliers per generator
        std::map<std::size_t, std::vector<std::pair<Monomial, Rational>>> mults;
        for (std::size_t j = 0; j < cols.size(); ++j)
            if ((*sol)[j] != 0) mults[cols[j].gen_index].emplace_back(cols[j].multiplier, (*sol)[j]);
        std::vector<MembershipTerm> terms;
        std::vector<std::string> vars = gens.empty() ? include_f->vars() : gens[0].vars();
        for (auto& [gi, tms] : mults) {
            const Series& g = gi < gens.size() ? gens[gi] : *include_f;
            OrderResult og = g.order();
            int ord = og.known ? og.value : g.trunc();
            int mtr = std::max(1, k + 1 - ord);
            terms.push_back({gi, Series::make(vars, mtr, tms)});
        }
        cert.rows.emplace_back(mu, std::move(terms));
    }
    return cert;
}

void verify_certificate(const MembershipCertificate& cert, const std::vector<Series>& gens,
                        const Series* include_f) {
    for (const auto& [mu, terms] : cert.rows) {
        std::size_t nvars = mu.nvars();
        std::vector<std::string> vars = gens.empty() ? include_f->vars() : gens[0].vars();
        Series acc = Series::zero(vars, cert.k + 1);
        for (const auto& t : terms) {
            const Series& g = t.gen_index < gens.size() ? gens[t.gen_index] : *include_f;
            acc = acc + t.multiplier * g.truncated(std::min(g.trunc(), cert.k + 1));
        }
        Series mu_s = Series::make(vars, cert.k + 1, {{mu, Rational(1)}});
        if (!acc.truncated(cert.k + 1).equal_below_common_trunc(mu_s))
            fail(Errc::internal, "membership certificate fails to recombine");
        (void)nvars;
    }
}

DeterminacyReport determinacy_bound(const Series& f, int max_k) {
    if (!f.exact() && f.trunc() <= max_k + 1)
        fail(Errc::precision_violation, "determinacy_bound needs trunc > max_k+1 (or an exact polynomial)");
    DeterminacyReport rep;
    rep.kind = DeterminacyReport::Kind::NotCertified;
    rep.k = max_k;

    std::vector<Series> gens = jacobian_generators(f);
    bool all_zero = std::all_of(gens.begin(), gens.end(), [](const Series& g) { return g.is_zero(); });

    if (!all_zero) {
        for (int k = 1; k <= max_k; ++k) {
            auto cert = graded_membership(k, gens, MultiplierIdeal::MaximalIdeal, nullptr);
            if (cert) {
                verify_certificate(*cert, gens, nullptr);
                rep.determined_k = k;
                rep.certificate = std::move(cert);
                break;
            }
        }
    }
    int quasi_cap = rep.determined_k ? *rep.determined_k : max_k;
    for (int k = 1; k <= quasi_cap; ++k) {
        auto cert = graded_membership(k, gens, MultiplierIdeal::MaximalIdeal, &f);
        if (cert) {
            verify_certificate(*cert, gens, &f);
            rep.quasidetermined_k = k;
            if (!rep.determined_k) rep.certificate = std::move(cert);
            break;
        }
    }

    if (rep.determined_k) {
        rep.kind = DeterminacyReport::Kind::Determined;
        rep.k = *rep.determined_k;
    } else if (rep.quasidetermined_k) {
        rep.kind = DeterminacyReport::Kind::Quasidetermined;
        rep.k = *rep.quasidetermined_k;
    }
    return rep;
}

} // namespace sumsq
