#include "sumsq/series.hpp"

#include <algorithm>
#include <sstream>

namespace sumsq {

const char* errc_name(Errc c) {
    switch (c) {
    case Errc::precision_violation: return "PrecisionViolation";
    case Errc::variable_mismatch: return "VariableMismatch";
    case Errc::order_too_low: return "OrderTooLow";
    case Errc::not_a_unit: return "NotAUnit";
    case Errc::constant_term_not_one: return "ConstantTermNotOne";
    case Errc::not_divisible: return "NotDivisible";
    case Errc::zero_up_to_truncation: return "ZeroUpToTruncation";
    case Errc::not_regular: return "NotRegular";
    case Errc::order_unknown: return "OrderUnknown";
    case Errc::invalid_ode_system: return "InvalidOdeSystem";
    case Errc::not_within_determinacy_ball: return "NotWithinDeterminacyBall";
    case Errc::decomposition_failed: return "DecompositionFailed";
    case Errc::parse_error: return "ParseError";
    case Errc::not_an_obstruction_case: return "NotAnObstructionCase";
    case Errc::side_condition_violated: return "SideConditionViolated";
    case Errc::inconsistent_input: return "InconsistentInput";
    case Errc::division_failed: return "DivisionFailed";
    case Errc::order_out_of_range: return "OrderOutOfRange";
    case Errc::internal: return "InternalError";
    }
    return "UnknownError";
}

Rational rat_of(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string rat_str(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

ExpVec::ExpVec(std::initializer_list<unsigned> init) {
    if (init.size() > kMaxVars) fail(Errc::variable_mismatch, "too many variables (max 8)");
    n = (std::uint8_t)init.size();
    std::size_t i = 0;
    for (unsigned x : init) {
        if (x > 0xffff) fail(Errc::precision_violation, "exponent too large");
        v[i++] = (std::uint16_t)x;
    }
}

ExpVec::ExpVec(const std::vector<unsigned>& init) {
    if (init.size() > kMaxVars) fail(Errc::variable_mismatch, "too many variables (max 8)");
    n = (std::uint8_t)init.size();
    for (std::size_t i = 0; i < init.size(); ++i) {
        if (init[i] > 0xffff) fail(Errc::precision_violation, "exponent too large");
        v[i] = (std::uint16_t)init[i];
    }
}

bool ExpVec::operator==(const ExpVec& o) const {
    if (n != o.n) return false;
    for (std::size_t i = 0; i < n; ++i)
        if (v[i] != o.v[i]) return false;
    return true;
}

Monomial Monomial::unit(std::size_t nvars, std::size_t var, unsigned exp) {
    Monomial m = Monomial::one(nvars);
    if (var >= nvars) fail(Errc::variable_mismatch, "variable index out of range");
    if (exp > 0xffff) fail(Errc::precision_violation, "exponent too large");
    m.e[var] = (std::uint16_t)exp;
    return m;
}

Monomial Monomial::one(std::size_t nvars) {
    if (nvars > ExpVec::kMaxVars) fail(Errc::variable_mismatch, "too many variables (max 8)");
    Monomial m;
    m.e.n = (std::uint8_t)nvars;
    return m;
}

unsigned Monomial::degree() const {
    unsigned d = 0;
    for (unsigned x : e) d += x;
    return d;
}

bool Monomial::divides(const Monomial& m) const {
    if (e.size() != m.e.size()) return false;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > m.e[i]) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& m) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < e.size(); ++i) r.e[i] += m.e[i];
    return r;
}

Monomial Monomial::operator/(const Monomial& m) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (m.e[i] > r.e[i]) fail(Errc::not_divisible, "monomial quotient undefined");
        r.e[i] -= m.e[i];
    }
    return r;
}

std::strong_ordering Monomial::operator<=>(const Monomial& m) const {
    for (std::size_t i = 0; i < e.size() && i < m.e.size(); ++i)
        if (e.v[i] != m.e.v[i]) return e.v[i] <=> m.e.v[i];
    return e.size() <=> m.e.size();
}

Series::Series(std::vector<std::string> vars, int trunc, bool exact)
    : vars_(std::move(vars)), trunc_(trunc), exact_(exact) {
    if (trunc_ < 1) fail(Errc::precision_violation, "truncation must be >= 1");
}

Series Series::make(std::vector<std::string> vars, int trunc,
                    const std::vector<std::pair<Monomial, Rational>>& terms) {
    Series f(std::move(vars), trunc, false);
    for (const auto& [m, c] : terms) {
        if (m.nvars() != f.nvars())
            fail(Errc::variable_mismatch, "exponent vector length != variable count");
        if ((int)m.degree() >= trunc)
            fail(Errc::precision_violation,
                 "monomial degree " + std::to_string(m.degree()) + " >= trunc " + std::to_string(trunc));
        f.insert_term(m, c);
    }
    return f;
}

Series Series::poly(std::vector<std::string> vars,
                    const std::vector<std::pair<Monomial, Rational>>& terms) {
    Series f(std::move(vars), 1, true);
    for (const auto& [m, c] : terms) {
        if (m.nvars() != f.nvars())
            fail(Errc::variable_mismatch, "exponent vector length != variable count");
        f.insert_term(m, c);
    }
    f.trunc_ = std::max(1, f.max_stored_degree() + 1);
    return f;
}

Series Series::zero(std::vector<std::string> vars, int trunc) {
    return Series(std::move(vars), trunc, false);
}

Series Series::constant(std::vector<std::string> vars, const Rational& c, int trunc, bool exact) {
    Series f(std::move(vars), trunc, exact);
    f.insert_term(Monomial::one(f.nvars()), c);
    return f;
}

Series Series::variable(std::vector<std::string> vars, std::size_t idx, int trunc, bool exact) {
    Series f(std::move(vars), trunc, exact);
    if (idx >= f.nvars()) fail(Errc::variable_mismatch, "variable index out of range");
    f.insert_term(Monomial::unit(f.nvars(), idx), Rational(1));
    return f;
}

bool Series::is_zero() const {
    for (const auto& b : buckets_)
        if (!b.empty()) return false;
    return true;
}

Series Series::truncated(int new_trunc) const {
    Series r(vars_, new_trunc, false);
    for (int d = 0; d < (int)buckets_.size() && d < new_trunc; ++d)
        for (const auto& [m, c] : buckets_[d]) r.insert_term(m, c);
    return r;
}

Series Series::extended(const std::vector<std::string>& new_vars) const {
    if (new_vars.size() < vars_.size())
        fail(Errc::variable_mismatch, "extended() needs at least the current variables");
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (new_vars[i] != vars_[i]) fail(Errc::variable_mismatch, "extended() must keep old names");
    Series r(new_vars, trunc_, exact_);
    for_each([&](const Monomial& m, const Rational& c) {
        Monomial m2 = Monomial::one(new_vars.size());
        std::copy(m.e.begin(), m.e.end(), m2.e.begin());
        r.insert_term(m2, c);
    });
    return r;
}

Series Series::restricted(const std::vector<std::string>& new_vars) const {
    if (new_vars.size() > vars_.size())
        fail(Errc::variable_mismatch, "restricted() must shrink the variable list");
    for (std::size_t i = 0; i < new_vars.size(); ++i)
        if (new_vars[i] != vars_[i]) fail(Errc::variable_mismatch, "restricted() must keep old names");
    Series r(new_vars, trunc_, exact_);
    for_each([&](const Monomial& m, const Rational& c) {
        for (std::size_t i = new_vars.size(); i < m.e.size(); ++i)
            if (m.e[i] != 0) fail(Errc::variable_mismatch, "dropped variable still occurs");
        Monomial m2(std::vector<unsigned>(m.e.begin(), m.e.begin() + new_vars.size()));
        r.insert_term(m2, c);
    });
    return r;
}

Rational Series::coeff(const Monomial& m) const {
    unsigned d = m.degree();
    if (d >= buckets_.size()) return Rational(0);
    auto it = buckets_[d].find(m);
    return it == buckets_[d].end() ? Rational(0) : it->second;
}

Rational Series::coeff_at_origin() const { return coeff(Monomial::one(nvars())); }

int Series::max_stored_degree() const {
    for (int d = (int)buckets_.size() - 1; d >= 0; --d)
        if (!buckets_[d].empty()) return d;
    return -1;
}

std::size_t Series::term_count() const {
    std::size_t n = 0;
    for (const auto& b : buckets_) n += b.size();
    return n;
}

const std::map<Monomial, Rational>& Series::slice(int degree) const {
    static const std::map<Monomial, Rational> empty;
    if (degree < 0 || degree >= (int)buckets_.size()) return empty;
    return buckets_[degree];
}

void Series::for_each(const std::function<void(const Monomial&, const Rational&)>& f) const {
    for (const auto& b : buckets_)
        for (const auto& [m, c] : b) f(m, c);
}

std::vector<std::pair<Monomial, Rational>> Series::terms() const {
    std::vector<std::pair<Monomial, Rational>> r;
    for_each([&](const Monomial& m, const Rational& c) { r.emplace_back(m, c); });
    return r;
}

void Series::insert_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    unsigned d = m.degree();
    if (!exact_ && (int)d >= trunc_) return;
    if (d >= buckets_.size()) buckets_.resize(d + 1);
    auto [it, fresh] = buckets_[d].emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) buckets_[d].erase(it);
    }
}

void Series::check_vars(const Series& g) const {
    if (!same_vars(g)) fail(Errc::variable_mismatch, "operands live in different rings");
}

Series Series::operator+(const Series& g) const {
    check_vars(g);
    bool ex = exact_ && g.exact_;
    int tr = std::min(trunc(), g.trunc());
    Series r(vars_, ex ? std::max({1, max_stored_degree() + 1, g.max_stored_degree() + 1}) : tr, ex);
    for_each([&](const Monomial& m, const Rational& c) { r.insert_term(m, c); });
    g.for_each([&](const Monomial& m, const Rational& c) { r.insert_term(m, c); });
    return r;
}

Series Series::operator-(const Series& g) const { return *this + g.scalar_mul(Rational(-1)); }

Series Series::operator-() const { return scalar_mul(Rational(-1)); }

Series Series::scalar_mul(const Rational& c) const {
    Series r(vars_, trunc_, exact_);
    if (c == 0) return r;
    for_each([&](const Monomial& m, const Rational& a) { r.insert_term(m, a * c); });
    return r;
}

Series Series::operator*(const Series& g) const {
    check_vars(g);
    bool ex = exact_ && g.exact_;
    // products are exact below min(trunc_f + ord_g, trunc_g + ord_f): a term
    // of degree d mixes f-parts of degree <= d - ord_g with g-parts of
    // degree <= d - ord_f
    OrderResult of = order(), og = g.order();
    long bound = std::min((long)trunc() + (og.known ? og.value : g.trunc()),
                          (long)g.trunc() + (of.known ? of.value : trunc()));
    int tr = (int)std::min((long)kInfTrunc, bound);
    Series r(vars_, ex ? 1 : std::max(1, tr), ex);
    int cap = ex ? kInfTrunc : tr;
    for (int d1 = 0; d1 < (int)buckets_.size(); ++d1) {
        if (buckets_[d1].empty()) continue;
        for (int d2 = 0; d2 < (int)g.buckets_.size(); ++d2) {
            if (d1 + d2 >= cap) break;
            if (g.buckets_[d2].empty()) continue;
            for (const auto& [m1, c1] : buckets_[d1])
                for (const auto& [m2, c2] : g.buckets_[d2]) r.insert_term(m1 * m2, c1 * c2);
        }
    }
    if (ex) r.trunc_ = std::max(1, r.max_stored_degree() + 1);
    return r;
}

bool Series::equal_below_common_trunc(const Series& g) const {
    check_vars(g);
    int tr = std::min(trunc(), g.trunc());
    Series d = *this - g;
    for (int k = 0; k < (int)d.buckets_.size() && k < tr; ++k)
        if (!d.buckets_[k].empty()) return false;
    return true;
}

OrderResult Series::order() const {
    for (int d = 0; d < (int)buckets_.size(); ++d)
        if (!buckets_[d].empty()) return OrderResult::Known(d);
    return OrderResult::AtLeast(trunc());
}

Series Series::initial_form() const {
    OrderResult o = order();
    if (!o.known)
        fail(Errc::zero_up_to_truncation, "initial form of a series that vanishes below truncation");
    Series r(vars_, trunc_, exact_);
    for (const auto& [m, c] : buckets_[o.value]) r.insert_term(m, c);
    return r;
}

Series Series::homogeneous_part(int d) const {
    Series r(vars_, trunc_, exact_);
    for (const auto& [m, c] : slice(d)) r.insert_term(m, c);
    return r;
}

Series Series::partial(std::size_t var) const {
    if (var >= nvars()) fail(Errc::variable_mismatch, "no such variable");
    Series r(vars_, exact_ ? trunc_ : std::max(1, trunc_ - 1), exact_);
    for_each([&](const Monomial& m, const Rational& c) {
        if (m.e[var] == 0) return;
        Monomial m2 = m;
        m2.e[var] -= 1;
        r.insert_term(m2, c * Rational((long)m.e[var]));
    });
    return r;
}

Series Series::integrate(std::size_t var) const {
    if (var >= nvars()) fail(Errc::variable_mismatch, "no such variable");
    // antiderivative in `var`; a degree-d term is exact iff d < trunc, so the
    // result is exact below trunc+1
    Series r(vars_, exact_ ? trunc_ : trunc_ + 1, exact_);
    for_each([&](const Monomial& m, const Rational& c) {
        Monomial m2 = m;
        m2.e[var] += 1;
        r.insert_term(m2, c / Rational((long)m2.e[var]));
    });
    if (exact_) r.trunc_ = std::max(1, r.max_stored_degree() + 1);
    return r;
}

namespace {

// Recursive Horner evaluation of a term list at the given images.  The most
// expensive image is pulled outermost so it is multiplied in only
// (max exponent) times; cheap images (identities, binomials) end up in the
// inner loops.
Series compose_horner(const std::vector<std::pair<Monomial, Rational>>& terms,
                      const std::vector<Series>& images,
                      const std::vector<std::size_t>& var_order, std::size_t level,
                      const Series& zero_acc) {
    if (terms.empty()) return zero_acc;
    if (level == var_order.size()) {
        Series r = zero_acc;
        for (const auto& [m, c] : terms) r.insert_term(Monomial::one(zero_acc.nvars()), c);
        return r;
    }
    std::size_t v = var_order[level];
    // bucket the terms by the exponent of v
    std::map<unsigned, std::vector<std::pair<Monomial, Rational>>> by_exp;
    for (const auto& [m, c] : terms) by_exp[m.e[v]].emplace_back(m, c);
    // Horner from the highest exponent down
    Series acc = zero_acc;
    unsigned prev = 0;
    bool started = false;
    for (auto it = by_exp.rbegin(); it != by_exp.rend(); ++it) {
        unsigned e = it->first;
        if (started)
            for (unsigned t = e; t < prev; ++t) acc = acc * images[v];
        Series part = compose_horner(it->second, images, var_order, level + 1, zero_acc);
        acc = started ? acc + part : part;
        started = true;
        prev = e;
    }
    for (unsigned t = 0; t < prev; ++t) acc = acc * images[v];
    return acc;
}

} // namespace

Series Series::substitute(const std::vector<Series>& images) const {
    if (images.size() != nvars())
        fail(Errc::variable_mismatch, "one image per variable required");
    for (std::size_t i = 1; i < images.size(); ++i)
        if (!images[0].same_vars(images[i]))
            fail(Errc::variable_mismatch, "images live in different rings");

    // Exactness / truncation bookkeeping.  With images of order >= 1 a source
    // term of degree d only contributes at degree >= d, so the composition is
    // exact below min(own trunc, image truncs).  A constant term in an image
    // is only allowed when *this is an exact polynomial.
    bool all_exact = exact_;
    int tr = trunc();
    int min_img_order = kInfTrunc;
    for (const auto& im : images) {
        all_exact = all_exact && im.exact();
        tr = std::min(tr, im.trunc());
        OrderResult o = im.order();
        int ord = o.known ? o.value : im.trunc();
        min_img_order = std::min(min_img_order, ord);
        if (o.known && o.value == 0 && !exact_)
            fail(Errc::order_too_low, "image has nonzero constant term and source is not polynomial");
    }
    if (min_img_order >= 1 && !exact_) {
        // a degree-d source term is known exactly for d < trunc_, and lands in
        // degree >= d; unknown source terms start at degree >= trunc_
        tr = std::min(tr, trunc_);
    }

    const auto& tvars = images.empty() ? vars_ : images[0].vars();
    Series zero_acc(tvars, all_exact ? 1 : std::max(1, tr), all_exact);

    // expensive images outermost
    std::vector<std::size_t> var_order(nvars());
    for (std::size_t i = 0; i < nvars(); ++i) var_order[i] = i;
    std::vector<std::size_t> cost(nvars());
    for (std::size_t i = 0; i < nvars(); ++i) cost[i] = images[i].term_count();
    std::stable_sort(var_order.begin(), var_order.end(),
                     [&](std::size_t a, std::size_t b) { return cost[a] > cost[b]; });

    Series acc = compose_horner(terms(), images, var_order, 0, zero_acc);
    if (all_exact) acc.trunc_ = std::max(1, acc.max_stored_degree() + 1);
    return acc;
}

Series Series::invert_unit() const {
    return invert_unit_at(exact_ ? std::max(trunc_, max_stored_degree() + 1) : trunc_);
}

Series Series::invert_unit_at(int out_trunc) const {
    Rational c0 = coeff_at_origin();
    if (c0 == 0) fail(Errc::not_a_unit, "constant term vanishes");
    if (!exact_ && out_trunc > trunc_)
        fail(Errc::precision_violation, "requested inverse beyond input precision");
    int tr = out_trunc;
    Series g(vars_, tr, false);
    g.insert_term(Monomial::one(nvars()), 1 / c0);
    // degreewise: g_d = -(sum_{j<d} g_j * f_{d-j}) / f_0
    for (int d = 1; d < tr; ++d) {
        std::map<Monomial, Rational> conv;
        for (int j = 0; j < d; ++j) {
            const auto& gj = g.slice(j);
            const auto& fk = slice(d - j);
            if (gj.empty() || fk.empty()) continue;
            for (const auto& [m1, c1] : gj)
                for (const auto& [m2, c2] : fk) {
                    auto [it, fresh] = conv.emplace(m1 * m2, c1 * c2);
                    if (!fresh) it->second += c1 * c2;
                }
        }
        for (const auto& [m, c] : conv)
            if (c != 0) g.insert_term(m, -c / c0);
    }
    return g;
}

Series Series::nth_root_unit(unsigned n) const {
    return nth_root_unit_at(n, exact_ ? std::max(trunc_, max_stored_degree() + 1) : trunc_);
}

Series Series::nth_root_unit_at(unsigned n, int out_trunc) const {
    if (n == 0) fail(Errc::inconsistent_input, "0th root");
    if (coeff_at_origin() != 1) fail(Errc::constant_term_not_one, "series must have constant term 1");
    if (!exact_ && out_trunc > trunc_)
        fail(Errc::precision_violation, "requested root beyond input precision");
    int tr = out_trunc;
    Series g = Series::constant(vars_, Rational(1), tr, false);
    if (n == 1) return truncated(tr);
    // iterate degreewise: n * g_d = f_d - [g^{(<d)}^n]_d
    for (int d = 1; d < tr; ++d) {
        Series p = Series::constant(vars_, Rational(1), d + 1, false);
        Series gcut = g.truncated(d + 1);
        for (unsigned i = 0; i < n; ++i) p = p * gcut;
        Series diff = truncated(d + 1) - p;
        for (const auto& [m, c] : diff.slice(d)) g.insert_term(m, c / Rational((long)n));
    }
    return g;
}

Series Series::monomial_divide(const Monomial& m) const {
    if (m.nvars() != nvars()) fail(Errc::variable_mismatch, "divisor in wrong ring");
    unsigned dm = m.degree();
    Series r(vars_, exact_ ? trunc_ : std::max(1, trunc_ - (int)dm), exact_);
    for (const auto& b : buckets_)
        for (const auto& [mm, c] : b) {
            if (!m.divides(mm))
                fail(Errc::not_divisible, "term " + Series::poly(vars_, {{mm, c}}).str() + " not divisible");
            r.insert_term(mm / m, c);
        }
    if (exact_) r.trunc_ = std::max(1, r.max_stored_degree() + 1);
    return r;
}

Series Series::mul_monomial(const Monomial& m, const Rational& c) const {
    if (m.nvars() != nvars()) fail(Errc::variable_mismatch, "monomial in wrong ring");
    Series r(vars_, exact_ ? trunc_ : std::min((long)kInfTrunc, (long)trunc_ + m.degree()), exact_);
    if (c == 0) return r;
    for_each([&](const Monomial& mm, const Rational& cc) { r.insert_term(mm * m, cc * c); });
    if (exact_) r.trunc_ = std::max(1, r.max_stored_degree() + 1);
    return r;
}

std::string Series::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& b : buckets_) {
        // within a degree: lex descending, so x^3 prints before x*y^2 before y^3
        for (auto it = b.rbegin(); it != b.rend(); ++it) {
            const auto& [m, c] = *it;
            Rational a = c;
            if (first) {
                if (a < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a < 0 ? " - " : " + ");
                if (a < 0) a = -a;
            }
            first = false;
            bool has_vars = m.degree() > 0;
            if (!has_vars || a != 1) {
                os << a;
                if (has_vars) os << "*";
            }
            bool first_var = true;
            for (std::size_t v = 0; v < m.e.size(); ++v) {
                if (m.e[v] == 0) continue;
                if (!first_var) os << "*";
                first_var = false;
                os << vars_[v];
                if (m.e[v] > 1) os << "^" << m.e[v];
            }
        }
    }
    return os.str();
}

Series add(const Series& f, const Series& g) { return f + g; }
Series sub(const Series& f, const Series& g) { return f - g; }
Series mul(const Series& f, const Series& g) { return f * g; }
Series scalar_mul(const Rational& c, const Series& f) { return f.scalar_mul(c); }
OrderResult order(const Series& f) { return f.order(); }
Series initial_form(const Series& f) { return f.initial_form(); }
Series partial(const Series& f, std::size_t var) { return f.partial(var); }
Series substitute(const Series& f, const std::vector<Series>& images) { return f.substitute(images); }
Series invert_unit(const Series& f) { return f.invert_unit(); }
Series nth_root_unit(const Series& f, unsigned n) { return f.nth_root_unit(n); }
Series monomial_divide(const Series& f, const Monomial& m) { return f.monomial_divide(m); }

static void monomials_rec(std::size_t nvars, unsigned degree, std::size_t pos, Monomial& cur,
                          std::vector<Monomial>& out) {
    if (pos + 1 == nvars) {
        cur.e[pos] = degree;
        out.push_back(cur);
        cur.e[pos] = 0;
        return;
    }
    for (unsigned k = degree;; --k) {
        cur.e[pos] = k;
        monomials_rec(nvars, degree - k, pos + 1, cur, out);
        cur.e[pos] = 0;
        if (k == 0) break;
    }
}

std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned degree) {
    std::vector<Monomial> out;
    if (nvars == 0) return out;
    Monomial cur = Monomial::one(nvars);
    monomials_rec(nvars, degree, 0, cur, out);
    return out;
}

} // namespace sumsq
