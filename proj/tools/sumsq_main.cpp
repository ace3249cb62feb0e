/*
 * sumsq — classification of the surfaces z^2 = F(x,y) over Q and
 * sums-of-squares certificates.
 *
 * Exit codes: 0 verdict produced (including "no"/"unknown"), 2 input error,
 * 3 precision violation.  JSON goes to stdout with --json, diagnostics to
 * stderr.
 */
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sumsq/classify.hpp"
#include "sumsq/expr.hpp"
#include "sumsq/report.hpp"
#include "sumsq/weierstrass.hpp"

using namespace sumsq;

namespace {

int default_trunc_env() {
    const char* env = std::getenv("SUMSQ_TRUNC");
    if (!env) return 0;
    int v = std::atoi(env);
    return v > 0 ? v : 0;
}

UniPoly parse_unipoly(const std::string& text) {
    ExprAst ast = parse_expr(text);
    auto vars = ast.variables();
    if (vars.size() > 1) fail(Errc::parse_error, "univariate polynomial expected");
    UniPoly p;
    for (const auto& t : ast.terms) {
        unsigned deg = 0;
        for (const auto& [v, e] : t.mono) deg += e;
        if (p.size() <= deg) p.resize(deg + 1, Rational(0));
        p[deg] += t.coeff;
    }
    return uni_trim(p);
}

std::string human_classification(const ClassificationReport& rep) {
    std::ostringstream os;
    os << "input: " << rep.input << "\n";
    os << "order: " << (rep.order_infinite ? std::string("infinity") : std::to_string(rep.order))
       << "\n";
    os << "normal form: " << rep.normal_form.case_name() << " ("
       << rep.normal_form.representative().str() << ")\n";
    os << "verdict: " << (rep.verdict == Verdict::Yes ? "yes" : rep.verdict == Verdict::No ? "no" : "unknown")
       << "  [" << rep.reason << "]\n";
    if (!rep.witness.empty()) {
        os << "witness chain (F_{i+1} = unit * (F_i o sub)):\n";
        for (const auto& step : rep.witness) {
            os << "  ";
            const auto& vars = step.sub[0].vars();
            for (std::size_t i = 0; i < step.sub.size(); ++i) {
                if (i) os << ", ";
                os << vars[i] << " -> " << step.sub[i].str();
            }
            os << "   [" << step.note << "]\n";
        }
        os << "unit: " << rep.unit.str() << "\n";
        os << "verified to m^" << rep.verified_to << "\n";
    }
    for (const auto& n : rep.notes) os << "note: " << n << "\n";
    return os.str();
}

int run_classify(const std::string& expr, int trunc, bool json, bool witnesses) {
    Series F = parse_poly(expr, {"x", "y"});
    ClassifyOptions opts;
    opts.trunc = trunc;
    opts.witnesses = witnesses;
    ClassificationReport rep = classify(F, opts);
    if (json) std::cout << to_json(rep).dump(2) << "\n";
    else std::cout << human_classification(rep);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact classification of z^2 = F(x,y) over Q and SOS certificates"};
    app.require_subcommand(1);
    bool json = false;
    app.add_flag("--json", json, "machine-readable JSON output");

    std::string expr, expr2, var = "x", cert_file, batch_file, batch_cmd = "classify";
    int trunc = default_trunc_env();
    int max_k = 8, kpar = 0, Npar = 0;
    bool no_witness = false;
    std::string lo, hi;

    auto* c_classify = app.add_subcommand("classify", "classify z^2 = F(x,y)");
    c_classify->add_option("F", expr, "polynomial in x, y")->required();
    c_classify->add_option("--trunc", trunc, "working truncation");
    c_classify->add_flag("--no-witness", no_witness, "skip flow witnesses");

    auto* c_det = app.add_subcommand("determinacy", "Thm-2.4 determinacy bound");
    c_det->add_option("f", expr, "polynomial")->required();
    c_det->add_option("--max-k", max_k, "largest k tried");

    auto* c_wit = app.add_subcommand("witness", "right-equivalence witness f = u * g(phi)");
    c_wit->add_option("f", expr, "target polynomial")->required();
    c_wit->add_option("g", expr2, "perturbed polynomial")->required();
    c_wit->add_option("--k", kpar, "determinacy order")->required();
    c_wit->add_option("--N", Npar, "verification order (default 2k+2)");

    auto* c_wp = app.add_subcommand("weierstrass", "Weierstrass preparation");
    c_wp->add_option("f", expr, "series / polynomial")->required();
    c_wp->add_option("--var", var, "distinguished variable");
    c_wp->add_option("--trunc", trunc, "working truncation");

    auto* c_psd = app.add_subcommand("psd-check", "Lemma-style psd test for a0 + a1 z + a2 z^2");
    std::string a0s, a1s, a2s;
    c_psd->add_option("a0", a0s)->required();
    c_psd->add_option("a1", a1s)->required();
    c_psd->add_option("a2", a2s)->required();

    auto* c_sturm = app.add_subcommand("sturm", "Sturm chain and real-root count");
    c_sturm->add_option("p", expr, "univariate polynomial")->required();
    c_sturm->add_option("--lo", lo, "lower endpoint");
    c_sturm->add_option("--hi", hi, "upper endpoint");

    auto* c_erase = app.add_subcommand("erase-denominators", "Lemma 'erasure of denominators'");
    c_erase->add_option("--cert-file", cert_file, "JSON certificate file")->required();

    auto* c_batch = app.add_subcommand("batch", "one expression per line, # comments");
    c_batch->add_option("--file", batch_file, "input file")->required();
    c_batch->add_option("--command", batch_cmd, "classify (default)");
    c_batch->add_option("--trunc", trunc, "working truncation");
    c_batch->add_flag("--no-witness", no_witness, "skip flow witnesses");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_classify->parsed()) return run_classify(expr, trunc, json, !no_witness);

        if (c_det->parsed()) {
            Series f = parse_poly(expr, {"x", "y"});
            DeterminacyReport rep = determinacy_bound(f, max_k);
            if (json) std::cout << to_json(rep).dump(2) << "\n";
            else {
                const char* kind = rep.kind == DeterminacyReport::Kind::Determined ? "determined"
                                   : rep.kind == DeterminacyReport::Kind::Quasidetermined
                                       ? "quasidetermined"
                                       : "not certified up to";
                std::cout << kind << " k = " << rep.k << "\n";
                if (rep.quasidetermined_k)
                    std::cout << "smallest quasidetermined bound: " << *rep.quasidetermined_k << "\n";
            }
            return 0;
        }

        if (c_wit->parsed()) {
            Series f = parse_poly(expr, {"x", "y"});
            Series g = parse_poly(expr2, {"x", "y"});
            EquivalenceWitness wit = right_equivalence_witness(f, g, kpar, Npar);
            if (json) std::cout << to_json(wit).dump(2) << "\n";
            else {
                for (std::size_t i = 0; i < wit.substitutions.size(); ++i)
                    std::cout << wit.substitutions[i].vars()[i] << " -> "
                              << wit.substitutions[i].str() << "\n";
                std::cout << "unit: " << wit.unit.str() << "\n";
                std::cout << "verified to m^" << wit.verified_to << "\n";
            }
            return 0;
        }

        if (c_wp->parsed()) {
            Series f = parse_poly(expr);
            if (trunc > 0) f = f.truncated(trunc);
            std::size_t vi = 0;
            while (vi < f.nvars() && f.vars()[vi] != var) ++vi;
            if (vi == f.nvars()) fail(Errc::variable_mismatch, "no such variable: " + var);
            WeierstrassFactorization W = prepare(f, vi);
            Json j;
            j["degree"] = W.degree;
            Json cs = Json::array();
            for (const auto& c : W.coeffs) cs.push_back(c.str());
            j["coefficients"] = cs;
            j["unit"] = W.unit.str();
            if (json) std::cout << j.dump(2) << "\n";
            else {
                std::cout << "P = " << W.polynomial(W.unit.trunc()).str() << "\n";
                std::cout << "U = " << W.unit.str() << "\n";
            }
            return 0;
        }

        if (c_psd->parsed()) {
            Series a0 = parse_poly(a0s, {"x", "y"});
            Series a1 = parse_poly(a1s, {"x", "y"});
            Series a2 = parse_poly(a2s, {"x", "y"});
            PsdAnswer ans = quadratic_z_psd(a0, a1, a2);
            const char* s = ans == PsdAnswer::Yes ? "yes" : ans == PsdAnswer::No ? "no" : "inconclusive";
            if (json) {
                Json j;
                j["answer"] = s;
                std::cout << j.dump(2) << "\n";
            } else std::cout << s << "\n";
            return 0;
        }

        if (c_sturm->parsed()) {
            UniPoly p = parse_unipoly(expr);
            SturmSequence chain = sturm(p);
            Interval iv;
            if (!lo.empty()) iv.lo = Rational(lo);
            if (!hi.empty()) iv.hi = Rational(hi);
            unsigned roots = count_real_roots(p, iv);
            Json j = to_json(chain);
            j["real_roots"] = roots;
            if (json) std::cout << j.dump(2) << "\n";
            else std::cout << "real roots: " << roots << "\n";
            return 0;
        }

        if (c_erase->parsed()) {
            std::ifstream in(cert_file);
            if (!in) fail(Errc::inconsistent_input, "cannot open " + cert_file);
            Json j = Json::parse(in);
            DenomIdentity d = denom_identity_from_json(j);
            SosCertificate cert = erase_denominators(d);
            std::cout << to_json(cert).dump(2) << "\n";
            return 0;
        }

        if (c_batch->parsed()) {
            if (batch_cmd != "classify") fail(Errc::inconsistent_input, "unsupported batch command");
            std::ifstream in(batch_file);
            if (!in) fail(Errc::inconsistent_input, "cannot open " + batch_file);
            std::string line;
            Json results = Json::array();
            while (std::getline(in, line)) {
                auto h = line.find('#');
                if (h != std::string::npos) line = line.substr(0, h);
                while (!line.empty() && std::isspace((unsigned char)line.back())) line.pop_back();
                std::size_t i = 0;
                while (i < line.size() && std::isspace((unsigned char)line[i])) ++i;
                line = line.substr(i);
                if (line.empty()) continue;
                Series F = parse_poly(line, {"x", "y"});
                ClassifyOptions opts;
                opts.trunc = trunc;
                opts.witnesses = !no_witness;
                ClassificationReport rep = classify(F, opts);
                if (json) results.push_back(to_json(rep));
                else
                    std::cout << line << " -> "
                              << (rep.verdict == Verdict::Yes   ? "yes"
                                  : rep.verdict == Verdict::No ? "no"
                                                               : "unknown")
                              << " (" << rep.normal_form.case_name() << ")\n";
            }
            if (json) std::cout << results.dump(2) << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == Errc::precision_violation ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
