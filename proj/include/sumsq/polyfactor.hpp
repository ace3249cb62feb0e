/*
 * polyfactor.hpp
 * --------------
 * Exact polynomial helpers on top of Series values that carry the `exact`
 * flag: single-divisor exact division, gcd in Q[y][x] via subresultant-free
 * fraction management, and Yun's squarefree decomposition.  Used by the
 * classification pipeline to certify "the Weierstrass remainder is exactly
 * zero" style facts that truncated arithmetic alone cannot decide.
 */
#ifndef SUMSQ_POLYFACTOR_HPP
#define SUMSQ_POLYFACTOR_HPP

#include <optional>
#include <vector>

#include "sumsq/series.hpp"

namespace sumsq {

// leading term in graded-lex order
std::pair<Monomial, Rational> lead_term(const Series& f);

// exact quotient f / h in the polynomial ring; nullopt if h does not divide f
std::optional<Series> poly_divide_exact(const Series& f, const Series& h);

// gcd of exact bivariate polynomials (monic-normalized primitive result)
Series poly_gcd(const Series& f, const Series& g);

// Yun squarefree decomposition: f = unit * prod factors[i].first^(factors[i].second)
struct SquarefreeDecomposition {
    Rational unit;
    std::vector<std::pair<Series, int>> factors;
};
SquarefreeDecomposition squarefree_decomposition(const Series& f);

} // namespace sumsq

#endif
