/*
 * psd.hpp
 * -------
 * Positivity and sum-of-squares machinery: rational arc sign oracles, the
 * quadratic-in-z psd criterion, Lagrange-identity SOS transfer, erasure of
 * denominators, Galois SOS descent (quadratic and cubic), Sturm sequences
 * and the constructive dominating constant.
 *
 * Everything here is falsification-sound: a Yes answer is always backed by
 * an exact certificate, a No answer by an exact negative witness; callers
 * must treat Inconclusive as first-class.
 */
#ifndef SUMSQ_PSD_HPP
#define SUMSQ_PSD_HPP

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "sumsq/normalform.hpp"
#include "sumsq/series.hpp"

namespace sumsq {

// ---------------------------------------------------------------- rationals

// value = parts[0]^2 + ... + parts[3]^2, deterministic smallest-first search
struct FourSquares {
    Rational value;
    std::array<Rational, 4> parts;
};
FourSquares four_square_decomposition(const Rational& q); // q >= 0

// ---------------------------------------------------------------------- arcs

// (x, y[, z]) = (xi(s), eta(s)[, zeta(s)]) with s = t^{1/q}; on the negative
// side q must be odd and the sign of an order-d leading term flips by (-1)^d.
struct Arc {
    unsigned ramification = 1;
    Series xi, eta;             // over a 1-variable ring
    std::optional<Series> zeta; // for 3-variable inputs
    bool positive_side = true;
};

struct SignResult {
    int sign = 0;       // +1, -1, or 0 == ZeroBelow(zero_below)
    int zero_below = 0;
    static SignResult Positive() { return {1, 0}; }
    static SignResult Negative() { return {-1, 0}; }
    static SignResult ZeroBelow(int n) { return {0, n}; }
    bool operator==(const SignResult&) const = default;
};

SignResult arc_sign(const Series& f, const Arc& arc);

// the fixed 200-arc sampling family (ramification <= 4, order <= 6)
const std::vector<Arc>& standard_arc_family();

enum class PsdAnswer { Yes, No, Inconclusive };

// Exact for quadratic forms (rational symmetric-matrix inertia); otherwise
// arc sampling over the standard family: No on a negative arc, else
// Inconclusive.  Zero input answers Yes.
PsdAnswer base_psd_oracle(const Series& f);

using PsdOracle = std::function<PsdAnswer(const Series&)>;

// Lemma-style criterion for a0 + a1 z + a2 z^2 over kappa[[x,y]].
PsdAnswer quadratic_z_psd(const Series& a0, const Series& a1, const Series& a2,
                          const PsdOracle& oracle = base_psd_oracle);

// ---------------------------------------------------------------- certificates

struct SosWeight {
    FourSquares weight; // positive rational with its 4-square witness
};

struct SosCertificate {
    Series target;
    std::vector<SosWeight> weights; // one per summand
    std::vector<Series> summands;
    // target == sum w_i s_i^2 + cofactor * relation (mod m^verified_to)
    std::optional<std::pair<Series, Series>> modulus; // (relation, cofactor)
    int verified_to = 0;
};

// exact re-expansion; throws on mismatch
void verify_certificate(const SosCertificate& cert);

// Lagrange transfer: given alpha_i, beta_i with sum alpha^2 = a0,
// sum beta^2 = a2 and the antisymmetric squares matching 4 a0 a2 - a1^2,
// produce the p-square certificate sum (alpha_i + eps beta_i z)^2.
SosCertificate lagrange_transfer(const std::vector<Series>& alpha, const std::vector<Series>& beta,
                                 const Series& a1, const Series& z_var);

// identity h^{2r} f = sum a_i^2 - b (z^k - h g), everything of z-degree <= k-1
struct DenomIdentity {
    Series f;
    std::vector<Series> a;
    Series b;
    Series h, g; // z-free
    int r = 0;
    unsigned k = 1;
    std::size_t z_index = 2;
};

// Erasure of denominators: divides the identity by h^2, r times; the output
// certifies f itself with the same square count.
SosCertificate erase_denominators(const DenomIdentity& in);

// Quadratic Galois descent: summands c_i + sqrt(a) d_i over Q(sqrt a) with
// a > 0 average to sum c_i^2 + a sum d_i^2 (+ q1 * relation).
SosCertificate sos_descend_quadratic(const std::vector<std::pair<Series, Series>>& summands,
                                     const Rational& a,
                                     const std::optional<std::pair<Series, std::array<Series, 2>>>&
                                         modulus = std::nullopt);

// Cubic trace descent over Q(zeta), zeta^3 + a zeta + b = 0, requiring
// -a > 0 and -4a^3 - 27 b^2 > 0; summands a_i + zeta b_i + zeta^2 c_i,
// modulus cofactor d1 + zeta d2 + zeta^2 d3 against `relation`.
SosCertificate cubic_trace_descend(const std::vector<std::array<Series, 3>>& summands,
                                   const Rational& a, const Rational& b,
                                   const std::optional<std::pair<Series, std::array<Series, 3>>>&
                                       modulus = std::nullopt);

// ---------------------------------------------------------------- univariate

// dense univariate rational polynomials, low degree first
using UniPoly = std::vector<Rational>;

UniPoly uni_trim(UniPoly p);
UniPoly uni_derive(const UniPoly& p);
UniPoly uni_neg_rem(const UniPoly& num, const UniPoly& den); // -rem(num, den)
Rational uni_eval(const UniPoly& p, const Rational& x);
UniPoly uni_gcd(UniPoly a, UniPoly b);
UniPoly uni_divexact(const UniPoly& num, const UniPoly& den);

struct SturmSequence {
    std::vector<UniPoly> polys;
    bool squarefree_part_taken = false;
};

SturmSequence sturm(const UniPoly& p);

struct Interval {
    std::optional<Rational> lo, hi; // nullopt == unbounded
};

unsigned count_real_roots(const UniPoly& p, const Interval& iv = {});

// ------------------------------------------------------------- obstructions

struct Obstruction {
    Series element; // in P({F >= 0}) \ Sigma A^2 for the No-case normal form
    std::vector<Arc> arcs;
    std::string reason;
};

Obstruction obstruction_arcs(const NormalForm& nf);

// ---------------------------------------------------------------- dominating

struct DominatingConstant {
    Rational M;
    // assignment: monomial of f -> its lex-first degree-2s divisor
    std::vector<std::pair<Monomial, Monomial>> assignment;
};

// Lemma-style constant with M = sum_{|nu|=2s} (b_nu(0)^2 + 1) under the
// deterministic lex-first-divisor decomposition; requires omega(f) >= 2s.
DominatingConstant dominating_constant(const Series& f, unsigned s);

} // namespace sumsq

#endif
