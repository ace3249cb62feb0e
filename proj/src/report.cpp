#include "sumsq/report.hpp"

#include "sumsq/expr.hpp"

namespace sumsq {

namespace {

Json params_json(const NormalForm& nf) {
    Json p = Json::object();
    switch (nf.kind) {
    case NormalForm::Case::Order2:
        p["a"] = rat_str(nf.a);
        if (nf.tail == NormalForm::Order2Tail::OddPow) p["k"] = nf.k;
        if (nf.tail == NormalForm::Order2Tail::EvenPow) {
            p["b"] = rat_str(nf.b);
            p["k"] = nf.k;
        }
        break;
    case NormalForm::Case::X2YPlus:
        p["k"] = nf.k;
        p["a"] = rat_str(nf.a);
        break;
    case NormalForm::Case::IrreducibleCubic:
        p["a"] = rat_str(nf.a);
        p["b"] = rat_str(nf.b);
        break;
    case NormalForm::Case::X3Y4: p["a"] = rat_str(nf.a); break;
    case NormalForm::Case::X3Bare:
        p["exact_cube"] = nf.exact_cube;
        if (!nf.exact_cube) {
            p["b"] = rat_str(nf.b);
            p["c"] = rat_str(nf.c);
            p["k"] = nf.k;
            p["l"] = nf.l;
        }
        break;
    case NormalForm::Case::HighOrder: p["order"] = nf.k; break;
    default: break;
    }
    return p;
}

const char* verdict_str(Verdict v) {
    switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

} // namespace

Json to_json(const NormalForm& nf) {
    Json j = Json::object();
    j["case"] = nf.case_name();
    j["params"] = params_json(nf);
    j["representative"] = nf.representative().str();
    return j;
}

Json to_json(const DeterminacyReport& rep) {
    Json j = Json::object();
    switch (rep.kind) {
    case DeterminacyReport::Kind::Determined: j["kind"] = "determined"; break;
    case DeterminacyReport::Kind::Quasidetermined: j["kind"] = "quasidetermined"; break;
    case DeterminacyReport::Kind::NotCertified: j["kind"] = "not_certified_up_to"; break;
    }
    j["k"] = rep.k;
    if (rep.determined_k) j["determined_k"] = *rep.determined_k;
    if (rep.quasidetermined_k) j["quasidetermined_k"] = *rep.quasidetermined_k;
    j["label"] = "sufficient bound";
    return j;
}

Json to_json(const ClassificationReport& rep) {
    Json j = Json::object();
    j["input"] = rep.input;
    j["trunc"] = rep.trunc;
    if (rep.order_infinite) j["order"] = "infinity";
    else j["order"] = rep.order;
    j["normal_form"] = to_json(rep.normal_form);
    j["verdict"] = verdict_str(rep.verdict);
    j["reason"] = rep.reason;
    Json w = Json::array();
    for (const auto& step : rep.witness) {
        Json s = Json::object();
        Json sub = Json::object();
        const auto& vars = step.sub.empty() ? std::vector<std::string>{} : step.sub[0].vars();
        for (std::size_t i = 0; i < step.sub.size(); ++i) sub[vars[i]] = step.sub[i].str();
        s["sub"] = sub;
        s["unit"] = step.unit.str();
        s["note"] = step.note;
        w.push_back(s);
    }
    j["witness"] = w;
    j["unit"] = rep.unit.str();
    j["verified_to"] = rep.verified_to;
    if (rep.determinacy) j["determinacy"] = to_json(*rep.determinacy);
    else j["determinacy"] = Json::object();
    Json notes = Json::array();
    for (const auto& n : rep.notes) notes.push_back(n);
    if (rep.verdict == Verdict::Yes)
        notes.push_back("p(A) <= 16 when the verdict is yes (4 tau(Q), tau(Q) = 4)");
    j["notes"] = notes;
    if (rep.minus_f_sos) j["minus_f_sos"] = to_json(*rep.minus_f_sos);
    if (rep.obstruction) {
        Json o = Json::object();
        o["element"] = rep.obstruction->element.str();
        o["reason"] = rep.obstruction->reason;
        Json arcs = Json::array();
        for (const auto& a : rep.obstruction->arcs) {
            Json aj = Json::object();
            aj["q"] = a.ramification;
            aj["x"] = a.xi.str();
            aj["y"] = a.eta.str();
            aj["side"] = a.positive_side ? "t->0+" : "t->0-";
            arcs.push_back(aj);
        }
        o["arcs"] = arcs;
        j["obstruction"] = o;
    }
    if (rep.dominating) j["dominating_constant"] = rat_str(rep.dominating->M);
    return j;
}

Json to_json(const SosCertificate& cert) {
    Json j = Json::object();
    j["target"] = cert.target.str();
    Json ws = Json::array();
    for (const auto& w : cert.weights) {
        Json wj = Json::object();
        wj["value"] = rat_str(w.weight.value);
        Json parts = Json::array();
        for (const auto& p : w.weight.parts) parts.push_back(rat_str(p));
        wj["four_squares"] = parts;
        ws.push_back(wj);
    }
    j["weights"] = ws;
    Json ss = Json::array();
    for (const auto& s : cert.summands) ss.push_back(s.str());
    j["summands"] = ss;
    if (cert.modulus) {
        Json m = Json::object();
        m["relation"] = cert.modulus->first.str();
        m["cofactor"] = cert.modulus->second.str();
        j["modulus"] = m;
    } else {
        j["modulus"] = nullptr;
    }
    j["verified_to"] = cert.verified_to >= Series::kInfTrunc ? Json("exact") : Json(cert.verified_to);
    return j;
}

Json to_json(const EquivalenceWitness& wit) {
    Json j = Json::object();
    Json sub = Json::object();
    const auto& vars = wit.substitutions.empty() ? std::vector<std::string>{}
                                                 : wit.substitutions[0].vars();
    for (std::size_t i = 0; i < wit.substitutions.size(); ++i)
        sub[vars[i]] = wit.substitutions[i].str();
    j["sub"] = sub;
    j["unit"] = wit.unit.str();
    j["unit_is_one"] = wit.unit_is_one;
    j["verified_to"] = wit.verified_to;
    return j;
}

Json to_json(const SturmSequence& chain) {
    Json j = Json::object();
    Json polys = Json::array();
    for (const auto& p : chain.polys) {
        Json cs = Json::array();
        for (const auto& c : p) cs.push_back(rat_str(c));
        polys.push_back(cs);
    }
    j["chain"] = polys;
    j["squarefree_part_taken"] = chain.squarefree_part_taken;
    return j;
}

DenomIdentity denom_identity_from_json(const Json& j) {
    DenomIdentity d;
    std::vector<std::string> vars{"x", "y", "z"};
    d.f = parse_poly(j.at("f").get<std::string>(), vars);
    for (const auto& a : j.at("a")) d.a.push_back(parse_poly(a.get<std::string>(), vars));
    d.b = parse_poly(j.at("b").get<std::string>(), vars);
    d.h = parse_poly(j.at("h").get<std::string>(), vars);
    d.g = parse_poly(j.at("g").get<std::string>(), vars);
    d.r = j.at("r").get<int>();
    d.k = j.at("k").get<unsigned>();
    d.z_index = 2;
    return d;
}

} // namespace sumsq
