/*
 * normalform.hpp
 * --------------
 * Tagged classification outcome for F in Q[[x,y]] (the surface is
 * z^2 = F).  Parameters are exact rationals; which fields are meaningful
 * depends on the case:
 *
 *   Smooth           omega(F) <= 1 (includes units)
 *   Order2           F ~ a x^2 [+ tail]; tail None / y^{2k+1} / b y^{2k}
 *   X2Y              F ~ x^2 y
 *   X2YPlus          F ~ x^2 y + (-1)^k a y^k          (k >= 3)
 *   IrreducibleCubic F ~ x^3 + a x y^2 + b y^3, irreducible over Q
 *   X3Y4             F ~ x^3 + a y^4
 *   X3XY3            F ~ x^3 + x y^3
 *   X3Y5             F ~ x^3 + y^5
 *   X3Bare           initial form x^3, not equivalent to any candidate;
 *                    carries the residual (b, c, k, l) of the prepared shape
 *                    x^3 + b x y^{k+3} + c y^{l+4} W for the obstruction arcs;
 *                    exact_cube marks F ~ x^3 exactly
 *   HighOrder        omega(F) >= 4 (k stores the order)
 *   NotReduced       F = 0
 */
#ifndef SUMSQ_NORMALFORM_HPP
#define SUMSQ_NORMALFORM_HPP

#include <string>

#include "sumsq/series.hpp"

namespace sumsq {

struct NormalForm {
    enum class Case {
        Smooth,
        Order2,
        X2Y,
        X2YPlus,
        IrreducibleCubic,
        X3Y4,
        X3XY3,
        X3Y5,
        X3Bare,
        HighOrder,
        NotReduced,
    };
    enum class Order2Tail { None, OddPow, EvenPow };

    Case kind = Case::NotReduced;
    Order2Tail tail = Order2Tail::None;
    Rational a = 0, b = 0, c = 0;
    int k = 0;
    int l = 0;
    bool exact_cube = false;

    // the polynomial the tag stands for, over {x, y}
    Series representative() const;
    std::string case_name() const;
    bool operator==(const NormalForm&) const = default;
};

enum class Verdict { Yes, No, Unknown };

} // namespace sumsq

#endif
