/*
 * report.hpp
 * ----------
 * Stable JSON serialization of classification reports, determinacy reports
 * and SOS certificates (fixed key order, byte-stable for identical inputs).
 */
#ifndef SUMSQ_REPORT_HPP
#define SUMSQ_REPORT_HPP

#include <json.hpp>

#include "sumsq/classify.hpp"
#include "sumsq/determinacy.hpp"
#include "sumsq/flow.hpp"
#include "sumsq/psd.hpp"

namespace sumsq {

using Json = nlohmann::ordered_json;

Json to_json(const NormalForm& nf);
Json to_json(const DeterminacyReport& rep);
Json to_json(const ClassificationReport& rep);
Json to_json(const SosCertificate& cert);
Json to_json(const EquivalenceWitness& wit);
Json to_json(const SturmSequence& chain);

// certificate files for the erase-denominators subcommand
DenomIdentity denom_identity_from_json(const Json& j);

} // namespace sumsq

#endif
