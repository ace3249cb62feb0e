/*
 * determinacy.hpp
 * ---------------
 * Certified k-determinacy / k-quasideterminacy bounds via graded
 * ideal-membership linear algebra over Q.
 *
 * The inclusion m^k in m*J(f) (+ (f)) is decided exactly: by the Nakayama
 * reduction (m^k is finitely generated and m^k in I + m^{k+1} forces
 * m^k in I) it suffices to solve, for every degree-k monomial, the finite
 * linear system matching all coefficients of total degree <= k.  One
 * elimination of the column matrix is shared by all right-hand sides.
 */
#ifndef SUMSQ_DETERMINACY_HPP
#define SUMSQ_DETERMINACY_HPP

#include <optional>
#include <vector>

#include "sumsq/series.hpp"

namespace sumsq {

enum class MultiplierIdeal { MaximalIdeal, Full };

struct MembershipTerm {
    std::size_t gen_index;  // index into the generator list (gens.size() == the f column)
    Series multiplier;      // truncated at degree k+1-omega(gen)
};

struct MembershipCertificate {
    int k = 0;
    bool includes_f = false;
    // one entry per degree-k monomial, in lex order
    std::vector<std::pair<Monomial, std::vector<MembershipTerm>>> rows;
};

struct DeterminacyReport {
    enum class Kind { Determined, Quasidetermined, NotCertified } kind = Kind::NotCertified;
    int k = 0; // certified bound, or max_k when NotCertified
    // smallest certified bounds of each kind, when any exist below max_k;
    // `kind` prefers Determined per the m J(f) scan, but both scans run so
    // quasideterminacy bounds stay observable even when f is also determined
    std::optional<int> determined_k;
    std::optional<int> quasidetermined_k;
    std::optional<MembershipCertificate> certificate;
};

std::vector<Series> jacobian_generators(const Series& f);

// Decides m^k in (multiplier ideal)*(gens) [+ (f)]; nullopt on failure.
std::optional<MembershipCertificate> graded_membership(int k, const std::vector<Series>& gens,
                                                       MultiplierIdeal mult,
                                                       const Series* include_f = nullptr);

// Recombination check: every certificate row reproduces its monomial mod m^{k+1}.
void verify_certificate(const MembershipCertificate& cert, const std::vector<Series>& gens,
                        const Series* include_f);

DeterminacyReport determinacy_bound(const Series& f, int max_k);

// Exact dense RREF solver over Q, shared elimination for many right sides.
class GaussSolver {
public:
    explicit GaussSolver(std::vector<std::vector<Rational>> matrix);
    // least solution with free variables zero; nullopt if inconsistent
    std::optional<std::vector<Rational>> solve(const std::vector<Rational>& rhs) const;
    std::size_t rank() const { return pivots_.size(); }

private:
    std::vector<std::vector<Rational>> red_;  // RREF of A
    std::vector<std::vector<Rational>> ops_;  // E with red_ = E * A
    std::vector<std::size_t> pivots_;         // pivot column per reduced row
    std::size_t rows_, cols_;
};

} // namespace sumsq

#endif
