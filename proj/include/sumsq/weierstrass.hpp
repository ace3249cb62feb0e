/*
 * weierstrass.hpp
 * ---------------
 * Constructive Weierstrass division / preparation plus the elementary
 * normal-form moves (deterministic regularizing shears, Tschirnhaus shift).
 *
 * Division uses the classical fixed-point iteration in the filtration by
 * order in the non-distinguished variables; N iterations are exact below
 * truncation N.
 */
#ifndef SUMSQ_WEIERSTRASS_HPP
#define SUMSQ_WEIERSTRASS_HPP

#include <cstdint>
#include <vector>

#include "sumsq/series.hpp"

namespace sumsq {

// Invertible linear substitution: variable i maps to sum_j matrix[i][j] * x_j.
struct LinearChange {
    std::vector<std::vector<Rational>> matrix;

    static LinearChange identity(std::size_t n);
    // var stays fixed, every other variable v_j picks up params[j] * var
    static LinearChange shear(std::size_t n, std::size_t var, const std::vector<Rational>& params);
    Rational det() const;
    Series apply(const Series& f) const;
    LinearChange inverse() const;
};

struct WeierstrassFactorization {
    std::size_t var = 0;        // distinguished variable (index in vars)
    unsigned degree = 0;        // d
    std::vector<std::string> vars;
    std::vector<Series> coeffs; // a_0 .. a_{d-1} over the remaining variables
    Series unit;                // U, with f = P * U and U(0) != 0

    Series polynomial(int trunc) const; // P as a series over `vars`
    Series reconstruct() const;         // P * U
};

struct DivisionResult {
    Series quotient;
    Series remainder; // deg_var <= d-1
};

struct StabilityReport {
    int r = 0;              // perturbation order requested
    int agreement = 0;      // largest m' with P-Q, U-V in m^{m'} (capped)
    int cap = 0;            // truncation cap on the comparison
    Series perturbation;    // the sampled h
};

OrderResult regular_order(const Series& f, std::size_t var);

// Deterministic shear making f regular in `var` of order omega(f).
// Integer parameters are tried in the order 0, 1, -1, 2, -2, ...
std::pair<LinearChange, Series> make_regular(const Series& f, std::size_t var);

// f = g*Q + R with deg_var(R) <= d-1; g must be regular in var.
DivisionResult divide(const Series& f, const Series& g, std::size_t var);

WeierstrassFactorization prepare(const Series& f, std::size_t var);

// Kills the subleading coefficient: returns the shift s (var maps to var + s,
// with s = -a_{d-1}/d) and the shifted factorization data.
std::pair<Series, WeierstrassFactorization> tschirnhaus(const WeierstrassFactorization& P);

StabilityReport stability_probe(const Series& f, std::size_t var, int r, std::uint64_t seed = 1);

} // namespace sumsq

#endif
