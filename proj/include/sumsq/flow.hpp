/*
 * flow.hpp
 * --------
 * Constructive right-equivalence witnesses through formal flows: formal ODE
 * solving (Picard iteration), ideal-membership decomposition of dF/dy_j with
 * witness multipliers, and auxiliary-variable elimination.
 *
 * The witness builder introduces one auxiliary variable per base variable,
 * eliminates them one at a time (each elimination integrates a formal flow
 * in the auxiliary direction), and finally specializes the auxiliaries to
 * minus the base variables.  When the determinacy certificate avoids the
 * (f) column throughout, the produced unit is identically 1.
 */
#ifndef SUMSQ_FLOW_HPP
#define SUMSQ_FLOW_HPP

#include <optional>
#include <vector>

#include "sumsq/determinacy.hpp"
#include "sumsq/series.hpp"

namespace sumsq {

struct OdeSystem {
    // rhs b_i and initial values a_{i0} all live over the same ambient ring;
    // unknown_slots[i] is the variable replaced by the i-th unknown, t_index
    // is the flow variable.  Hypotheses: b_i(0) = 0 and a_{i0}(0) = 0.
    std::vector<Series> rhs;
    std::vector<Series> initial; // t-free
    std::vector<std::size_t> unknown_slots;
    std::size_t t_index = 0;
};

// dy/dt = u*y with y(0) = a; coefficients follow y_k = (1/k) sum u_j y_{k-1-j}.
Series solve_linear_ode(const Series& u, const Series& a, std::size_t t_index);

std::vector<Series> solve_ode_system(const OdeSystem& sys, int t_order);

struct Decomposition {
    Series zeta;            // dF/dy_j = -zeta*F + sum_i xi_i * dF/dx_i
    std::vector<Series> xi; // xi_i in (x)^c
    int verified_to = 0;
};

// Degree-by-degree exact linear solve for the decomposition above; x_slots
// name the variables spanning the ideal (x), yj is the variable eliminated.
// Returns nullopt when no solution exists below degree N.  A zeta = 0
// solution is preferred (the F column is only added on failure).
std::optional<Decomposition> membership_decompose(const Series& F, std::size_t yj,
                                                  const std::vector<std::size_t>& x_slots, int c,
                                                  int N);

struct EquivalenceWitness {
    std::vector<Series> substitutions; // phi_i, tangent to the identity
    Series unit;                       // u with f = u * g(phi) mod m^{verified_to}
    int verified_to = 0;
    bool unit_is_one = false;
};

// Requires f - g in m^{k+1} and the Thm-2.4 inclusion at k (determined or
// quasidetermined).  N <= available truncation; defaults to 2k+2 when N <= 0.
EquivalenceWitness right_equivalence_witness(const Series& f, const Series& g, int k, int N = 0);

// residual f - u * g(phi), for soundness checks
Series witness_residual(const Series& f, const Series& g, const EquivalenceWitness& w);

} // namespace sumsq

#endif
