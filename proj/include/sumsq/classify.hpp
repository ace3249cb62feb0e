/*
 * classify.hpp
 * ------------
 * End-to-end classification of A = Q[[x,y,z]]/(z^2 - F) for exact
 * polynomials F in Q[x,y]: reduction to a normal form with a verified
 * coordinate-change witness chain, and the decision whether every positive
 * semidefinite element of A is a sum of squares.
 *
 * Chain convention: each step maps the current series F_i to
 * F_{i+1} = unit_i * (F_i o sub_i); all units are squares of units, so the
 * chain realizes a ring isomorphism onto the normal-form surface.
 */
#ifndef SUMSQ_CLASSIFY_HPP
#define SUMSQ_CLASSIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "sumsq/determinacy.hpp"
#include "sumsq/flow.hpp"
#include "sumsq/normalform.hpp"
#include "sumsq/psd.hpp"
#include "sumsq/series.hpp"

namespace sumsq {

struct ChainStep {
    std::vector<Series> sub;
    Series unit;
    std::string note;
};

struct ReductionResult {
    NormalForm nf;
    std::vector<ChainStep> chain;
    bool uncertified = false; // absorption cap exhausted etc.
    std::string precision_note;
};

struct ClassificationReport {
    std::string input;
    int trunc = 0;
    bool order_infinite = false;
    int order = 0;
    NormalForm normal_form;
    Verdict verdict = Verdict::Unknown;
    std::string reason;
    std::vector<ChainStep> witness;
    Series unit;     // composed unit of the whole chain
    int verified_to = 0;
    std::optional<DeterminacyReport> determinacy;
    std::vector<std::string> notes;
    std::optional<SosCertificate> minus_f_sos; // non-real No-cases
    std::optional<Obstruction> obstruction;    // curve-obstruction No-cases
    std::optional<DominatingConstant> dominating; // high-order No-cases
};

struct ClassifyOptions {
    int trunc = 0;        // 0 == default max(2 deg + 4, 12)
    bool witnesses = true; // build flow witnesses for determinacy tails
    bool determinacy = true;
    int max_k = 0;        // 0 == derived from trunc
};

ClassificationReport classify(const Series& F, const ClassifyOptions& opts = {});

ReductionResult order2_reduce(const Series& F, int N);
ReductionResult order3_reduce(const Series& F, int N, bool witnesses);

Verdict decide(const NormalForm& nf);

// Saturation of the principal preordering PO(F) for omega(F) in {2,3}.
Verdict preordering_saturated(const Series& F);

// Compose the chain and check NF == unit * (F o Phi) below the working
// truncation; returns (composed substitution, composed unit, verified order).
struct ChainCheck {
    std::vector<Series> sub;
    Series unit;
    int verified_to = 0;
};
ChainCheck verify_chain(const Series& F, const std::vector<ChainStep>& chain, const Series& target,
                        int work_trunc);

// Formal inverse of a map tangent to an invertible linear part.
std::vector<Series> invert_map(const std::vector<Series>& images, int trunc);

} // namespace sumsq

#endif
