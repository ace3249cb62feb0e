/*
 * expr.hpp
 * --------
 * Front-end grammar for polynomials / series:
 *
 *   expr := term (('+'|'-') term)*
 *   term := factor ('*'? factor)*
 *   factor := rat | var ['^' nat]
 *   rat  := nat ['/' nat]
 *   var  in {x,y,z,t,u,v,s}
 *
 * Whitespace-insensitive.  parse / print round-trip exactly on the
 * canonical form (terms merged, degree-ascending, lex within a degree).
 */
#ifndef SUMSQ_EXPR_HPP
#define SUMSQ_EXPR_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "sumsq/series.hpp"

namespace sumsq {

struct ExprTerm {
    Rational coeff;
    std::map<std::string, unsigned> mono; // var -> exponent, no zero exponents
};

struct ExprAst {
    std::vector<ExprTerm> terms; // canonical order, no zero coefficients
    std::set<std::string> variables() const;
    unsigned degree() const;
};

class ParseFail : public Error {
public:
    ParseFail(std::size_t offset, const std::string& expected)
        : Error(Errc::parse_error,
                "offset " + std::to_string(offset) + ", expected " + expected),
          offset_(offset), expected_(expected) {}
    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

ExprAst parse_expr(const std::string& text);
std::string print_expr(const ExprAst& ast);

// Realize an AST as an exact polynomial over the given ambient variables.
// Variables of the AST must all occur in `vars`.
Series ast_to_poly(const ExprAst& ast, const std::vector<std::string>& vars);
// Convenience: parse text into an exact polynomial, inferring the ambient
// variable list (or using `vars` when nonempty).
Series parse_poly(const std::string& text, std::vector<std::string> vars = {});

} // namespace sumsq

#endif
