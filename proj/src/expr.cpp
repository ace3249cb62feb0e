#include "sumsq/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace sumsq {

namespace {

const std::string kVarLetters = "xyztuvs";

bool is_var_letter(char c) { return kVarLetters.find(c) != std::string::npos; }

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    [[noreturn]] void err(const std::string& expected) { throw ParseFail(pos, expected); }

    mpz_class natural() {
        skip_ws();
        if (pos >= s.size() || !std::isdigit((unsigned char)s[pos])) err("natural number");
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) ++pos;
        return mpz_class(s.substr(start, pos - start));
    }

    Rational rational() {
        mpz_class num = natural();
        skip_ws();
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            mpz_class den = natural();
            if (den == 0) err("nonzero denominator");
            Rational q(num, den);
            q.canonicalize();
            return q;
        }
        return Rational(num);
    }

    // factor := rat | var ['^' nat]; multiplies into (coeff, mono)
    void factor(Rational& coeff, std::map<std::string, unsigned>& mono) {
        char c = peek();
        if (std::isdigit((unsigned char)c)) {
            coeff *= rational();
            return;
        }
        if (is_var_letter(c)) {
            std::string name(1, c);
            ++pos;
            unsigned exp = 1;
            skip_ws();
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                mpz_class n = natural();
                if (n > 1000000) err("exponent too large");
                exp = (unsigned)n.get_ui();
            }
            mono[name] += exp;
            return;
        }
        err("rational or variable in {x,y,z,t,u,v,s}");
    }

    ExprTerm term() {
        ExprTerm t;
        t.coeff = 1;
        factor(t.coeff, t.mono);
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos;
                factor(t.coeff, t.mono);
            } else if (std::isdigit((unsigned char)c) || is_var_letter(c)) {
                factor(t.coeff, t.mono); // juxtaposition, '*' optional
            } else {
                break;
            }
        }
        for (auto it = t.mono.begin(); it != t.mono.end();)
            it = it->second == 0 ? t.mono.erase(it) : std::next(it);
        return t;
    }

    ExprAst expr() {
        ExprAst ast;
        int sign = 1;
        char c = peek();
        if (c == '-') {
            sign = -1;
            ++pos;
        } else if (c == '+') {
            ++pos;
        }
        for (;;) {
            ExprTerm t = term();
            if (sign < 0) t.coeff = -t.coeff;
            ast.terms.push_back(std::move(t));
            char op = peek();
            if (op == '+') {
                sign = 1;
                ++pos;
            } else if (op == '-') {
                sign = -1;
                ++pos;
            } else if (op == '\0') {
                break;
            } else {
                err("'+', '-' or end of input");
            }
        }
        return ast;
    }
};

// order used by Series::str(): degree ascending, lex descending inside a degree
bool term_before(const ExprTerm& a, const ExprTerm& b) {
    unsigned da = 0, db = 0;
    for (const auto& [v, e] : a.mono) da += e;
    for (const auto& [v, e] : b.mono) db += e;
    if (da != db) return da < db;
    // compare along the fixed alphabet
    for (char c : kVarLetters) {
        std::string name(1, c);
        auto ia = a.mono.find(name), ib = b.mono.find(name);
        unsigned ea = ia == a.mono.end() ? 0 : ia->second;
        unsigned eb = ib == b.mono.end() ? 0 : ib->second;
        if (ea != eb) return ea > eb;
    }
    return false;
}

ExprAst canonicalize(const ExprAst& raw) {
    std::map<std::map<std::string, unsigned>, Rational> acc;
    for (const auto& t : raw.terms) acc[t.mono] += t.coeff;
    ExprAst ast;
    for (auto& [m, c] : acc)
        if (c != 0) ast.terms.push_back(ExprTerm{c, m});
    std::sort(ast.terms.begin(), ast.terms.end(), term_before);
    return ast;
}

} // namespace

std::set<std::string> ExprAst::variables() const {
    std::set<std::string> vs;
    for (const auto& t : terms)
        for (const auto& [v, e] : t.mono) vs.insert(v);
    return vs;
}

unsigned ExprAst::degree() const {
    unsigned d = 0;
    for (const auto& t : terms) {
        unsigned td = 0;
        for (const auto& [v, e] : t.mono) td += e;
        d = std::max(d, td);
    }
    return d;
}

ExprAst parse_expr(const std::string& text) {
    Parser p{text};
    ExprAst ast = p.expr();
    return canonicalize(ast);
}

std::string print_expr(const ExprAst& ast_in) {
    ExprAst ast = canonicalize(ast_in);
    if (ast.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : ast.terms) {
        Rational a = t.coeff;
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
        bool has_vars = !t.mono.empty();
        if (!has_vars || a != 1) {
            os << a;
            if (has_vars) os << "*";
        }
        bool first_var = true;
        for (char c : kVarLetters) {
            std::string name(1, c);
            auto it = t.mono.find(name);
            if (it == t.mono.end()) continue;
            if (!first_var) os << "*";
            first_var = false;
            os << name;
            if (it->second > 1) os << "^" << it->second;
        }
    }
    return os.str();
}

Series ast_to_poly(const ExprAst& ast, const std::vector<std::string>& vars) {
    std::vector<std::pair<Monomial, Rational>> terms;
    for (const auto& t : ast.terms) {
        Monomial m = Monomial::one(vars.size());
        for (const auto& [v, e] : t.mono) {
            auto it = std::find(vars.begin(), vars.end(), v);
            if (it == vars.end())
                fail(Errc::variable_mismatch, "variable " + v + " not in ambient ring");
            m.e[(std::size_t)(it - vars.begin())] += e;
        }
        terms.emplace_back(m, t.coeff);
    }
    return Series::poly(vars, terms);
}

Series parse_poly(const std::string& text, std::vector<std::string> vars) {
    ExprAst ast = parse_expr(text);
    if (vars.empty()) {
        // fixed alphabet order keeps the ambient ring deterministic
        for (char c : kVarLetters) {
            std::string name(1, c);
            if (ast.variables().count(name)) vars.push_back(name);
        }
        if (vars.empty()) vars = {"x"};
    }
    return ast_to_poly(ast, vars);
}

} // namespace sumsq
