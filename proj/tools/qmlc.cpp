// qmlc: command-line front end for the qml toolkit.
// Exit status: 0 decisive, 2 unknown, 1 error or failed expectation.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qml/alcu.hpp"
#include "qml/bisim.hpp"
#include "qml/charform.hpp"
#include "qml/decide.hpp"
#include "qml/gallery.hpp"
#include "qml/mosaics.hpp"
#include "qml/translate.hpp"

using json = nlohmann::json;
using namespace qml;

namespace {

struct Options {
    std::string bounds;
    std::string sigma;
    std::string props;
    std::string logic = "q1s5";
    bool json_out = false;
    unsigned seed = 0;
    int depth = 2;
    int branch = 2;
    bool serial = false;
    std::string witness_dir;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A file path when one exists, otherwise inline text.
std::string text_or_file(const std::string& s)
{
    std::error_code ec;
    if (!s.empty() && std::filesystem::is_regular_file(s, ec)) return slurp(s);
    return s;
}

Formula formula_arg(const std::string& s) { return parse_formula(text_or_file(s)); }
Concept concept_arg(const std::string& s) { return parse_concept(text_or_file(s)); }

Inclusion inclusion_arg(const std::string& s)
{
    Ontology o = parse_ontology(text_or_file(s));
    if (o.size() != 1) throw std::invalid_argument("expected one inclusion C <= D");
    return o[0];
}

SearchBounds make_bounds(const Options& o)
{
    SearchBounds b;
    if (!o.bounds.empty()) {
        std::vector<int> xs;
        std::stringstream ss(o.bounds);
        std::string tok;
        while (std::getline(ss, tok, ',')) xs.push_back(std::stoi(tok));
        if (xs.size() != 2 && xs.size() != 4) throw std::invalid_argument("--bounds takes W1,D1 or W1,D1,W2,D2");
        b.w1 = xs[0], b.d1 = xs[1];
        b.w2 = xs.size() == 4 ? xs[2] : xs[0];
        b.d2 = xs.size() == 4 ? xs[3] : xs[1];
        for (int x : xs)
            if (x < 1) throw std::invalid_argument("bounds must be at least 1");
    }
    b.depth = o.depth;
    b.branch = o.branch;
    b.props = parse_signature(o.props);
    b.parallel = !o.serial;
    return b;
}

int exit_code(const Verdict& v) { return v.outcome == Outcome::Unknown ? 2 : 0; }

// Writes model<i>.json and relation.json; returns the paths written.
std::vector<std::string> write_witness(const Verdict& v, const std::string& dir)
{
    std::vector<std::string> paths;
    if (dir.empty() || v.models.empty()) return paths;
    std::filesystem::create_directories(dir);
    auto put = [&](const std::string& name, const json& j) {
        std::string path = (std::filesystem::path(dir) / name).string();
        std::ofstream(path) << j.dump(2) << "\n";
        paths.push_back(path);
    };
    for (std::size_t i = 0; i < v.models.size(); ++i) put("model" + std::to_string(i + 1) + ".json", save_model(v.models[i]));
    if (!v.relation.is_null()) put("relation.json", v.relation);
    return paths;
}

int emit_verdict(const Verdict& v, const Options& o)
{
    std::vector<std::string> paths = write_witness(v, o.witness_dir);
    if (o.json_out) {
        json j = v.to_json();
        if (!paths.empty()) j["witness_paths"] = paths;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "outcome      " << to_string(v.outcome) << "\n";
        if (!v.note.empty()) std::cout << "note         " << v.note << "\n";
        if (!v.candidate.empty()) std::cout << "candidate    " << v.candidate << "\n";
        if (!v.completeness.empty()) std::cout << "completeness " << v.completeness << "\n";
        for (std::size_t i = 0; i < v.models.size(); ++i) {
            const KripkeModel& m = v.models[i];
            std::cout << "model " << i + 1 << "      " << m.nw() << " worlds x " << m.nd() << " elements";
            if (i < v.points.size())
                std::cout << ", point (" << m.worlds[static_cast<std::size_t>(v.points[i].w)] << ","
                          << m.domain[static_cast<std::size_t>(v.points[i].d)] << ")";
            std::cout << "\n";
        }
        if (!paths.empty())
            for (const auto& p : paths) std::cout << "witness      " << p << "\n";
        else if (!v.models.empty())
            std::cout << "witness      " << v.to_json()["witness"].dump() << "\n";
    }
    return exit_code(v);
}

Point point_arg(const KripkeModel& m, const std::string& w, const std::string& d)
{
    return {w.empty() ? 0 : m.world_index(w), d.empty() ? 0 : m.element_index(d)};
}

int emit_report(const json& j, bool pass, const Options& o)
{
    if (o.json_out) std::cout << j.dump(2) << "\n";
    else std::cout << (pass ? "pass" : "FAIL") << "\n" << j.dump(2) << "\n";
    return pass ? 0 : 1;
}

void export_gallery(const std::string& dir)
{
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(std::filesystem::path(dir) / name);
        out << text;
        if (text.empty() || text.back() != '\n') out << "\n";
    };
    for (const auto& name : gallery_names()) {
        GalleryItem it = gallery_build(name);
        for (const auto& [k, f] : it.formulas) write(name + "." + k + ".phi", print_formula(f, true));
        for (const auto& [k, c] : it.concepts)
            if (k != "K") write(name + "." + k + ".concept", print_concept(c, true));
        for (const auto& [k, t] : it.texts) write(name + "." + k + (k == "standpoints" ? ".sp" : ".onto"), t);
        for (const auto& [k, m] : it.models) write(name + "." + k + ".json", save_model(m).dump(2));
    }
    write("marx.phi", fixtures::kMarxPhi);
    write("marx.psi", fixtures::kMarxPsi);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"qmlc: interpolant and definition existence for one-variable modal logics"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* s) {
        s->add_option("--bounds", o.bounds, "W1,D1,W2,D2 search bounds");
        s->add_option("--sigma", o.sigma, "signature p,q,...");
        s->add_option("--props", o.props, "world-constant symbols p,q,...");
        s->add_option("--logic", o.logic, "q1s5, q1k or alc");
        s->add_flag("--json", o.json_out, "machine-readable output");
        s->add_option("--witness-dir", o.witness_dir, "write witness models and relation here");
        s->add_option("--seed", o.seed, "seed for randomized suites");
        s->add_option("--depth", o.depth, "q1k tree depth");
        s->add_option("--branch", o.branch, "q1k tree branching");
        s->add_flag("--serial", o.serial, "disable OpenMP kernels");
    };

    std::string text, file, left, right, target, model, lmodel, rmodel, world, element, chi, bisim_kind, route, cand_kind, to, ontology,
        inclusion, problem, payload;
    bool pretty = false, normalize_flag = false, concept_mode = false, list = false;
    int k = 1, r = 3;
    std::string run, show, export_dir;

    auto* parse = app.add_subcommand("parse", "parse and print a formula or concept");
    common(parse);
    parse->add_option("--text", text, "formula text");
    parse->add_option("--file", file, "formula file");
    parse->add_flag("--pretty", pretty, "minimal parentheses");
    parse->add_flag("--normalize", normalize_flag, "rewrite into the core connectives");
    parse->add_flag("--concept", concept_mode, "parse a concept instead");

    auto* check = app.add_subcommand("check", "model-check a formula");
    common(check);
    check->add_option("--model", model, "model file")->required();
    check->add_option("--formula", text, "formula or file")->required();
    check->add_option("--world", world, "world id");
    check->add_option("--element", element, "element id");

    auto* sat = app.add_subcommand("sat", "bounded satisfiability");
    common(sat);
    sat->add_option("--formula", text, "formula or file")->required();
    auto* valid = app.add_subcommand("valid", "bounded validity");
    common(valid);
    valid->add_option("--formula", text, "formula or file")->required();

    auto* bisim = app.add_subcommand("bisim", "maximal sigma-bisimulation between two models");
    common(bisim);
    bisim->add_option("--left-model", lmodel)->required();
    bisim->add_option("--right-model", rmodel)->required();
    bisim->add_option("--kind", bisim_kind, "general, s5 or alcu")->default_val("s5");

    auto* kbisim = app.add_subcommand("kbisim", "maximal sigma-k-bisimulation");
    common(kbisim);
    kbisim->add_option("--left-model", lmodel)->required();
    kbisim->add_option("--right-model", rmodel)->required();
    kbisim->add_option("-k,--k", k, "depth")->default_val(1);

    auto* iep = app.add_subcommand("iep", "interpolant existence");
    common(iep);
    iep->add_option("--left", left, "phi or file")->required();
    iep->add_option("--right", right, "psi or file")->required();
    iep->add_option("--route", route, "direct or edep")->default_val("direct");

    auto* edep = app.add_subcommand("edep", "explicit definition existence");
    common(edep);
    edep->add_option("--kb", left, "phi or file")->required();
    edep->add_option("--target", target, "psi or file")->required();
    edep->add_option("--route", route, "direct or iep")->default_val("direct");

    auto* kiep = app.add_subcommand("kiep", "interpolant existence in q1k");
    common(kiep);
    kiep->add_option("--left", left, "phi or file")->required();
    kiep->add_option("--right", right, "psi or file")->required();

    auto* filtrate = app.add_subcommand("filtrate", "type filtration of one model or a bisimilar pair");
    common(filtrate);
    filtrate->add_option("--left-model", lmodel)->required();
    filtrate->add_option("--right-model", rmodel);
    filtrate->add_option("--left", left, "phi or file")->required();
    filtrate->add_option("--right", right, "psi or file");
    filtrate->add_option("--world", world, "left world id");
    filtrate->add_option("--element", element, "left element id");

    auto* charf = app.add_subcommand("char", "characteristic formula tau^k");
    common(charf);
    charf->add_option("--model", model)->required();
    charf->add_option("--world", world);
    charf->add_option("--element", element);
    charf->add_option("-k,--k", k)->default_val(1);

    auto* translate = app.add_subcommand("translate", "first-order translations");
    common(translate);
    translate->add_option("--formula", text)->required();
    translate->add_option("--to", to, "dagger, standard or tptp")->default_val("dagger");

    auto* dlcheck = app.add_subcommand("dl-check", "model-check a concept");
    common(dlcheck);
    dlcheck->add_option("--model", model)->required();
    dlcheck->add_option("--concept", text)->required();
    dlcheck->add_option("--world", world);
    dlcheck->add_option("--element", element);

    auto* dlentails = app.add_subcommand("dl-entails", "bounded ontology entailment");
    common(dlentails);
    dlentails->add_option("--ontology", ontology)->required();
    dlentails->add_option("--inclusion", inclusion, "C <= D")->required();

    auto* dliep = app.add_subcommand("dl-iep", "concept interpolant existence");
    common(dliep);
    dliep->add_option("--left", left)->required();
    dliep->add_option("--right", right)->required();

    auto* dlreduce = app.add_subcommand("dl-reduce", "reduce an ontology problem to concept IEP");
    common(dlreduce);
    dlreduce->add_option("--problem", problem, "iep_modulo, oiep or edep_modulo")->required();
    dlreduce->add_option("--ontology", ontology)->required();
    dlreduce->add_option("--payload", payload, "C <= D, or a concept name")->required();
    dlreduce->add_flag("--decide", normalize_flag, "also decide the reduced instance");

    auto* spenc = app.add_subcommand("standpoint-encode", "encode a standpoint ontology");
    common(spenc);
    spenc->add_option("--file", file)->required();

    auto* gallery = app.add_subcommand("gallery", "worked-example fixtures");
    common(gallery);
    gallery->add_flag("--list", list);
    gallery->add_option("--show", show, "item name");
    gallery->add_option("--run", run, "item name or all");
    gallery->add_option("-r,--r", r, "size for ex6_chain and ex6_model")->default_val(3);
    gallery->add_option("--export", export_dir, "write fixture files into a directory");

    auto* verify = app.add_subcommand("verify", "verify a candidate interpolant or definition");
    common(verify);
    verify->add_option("--kind", cand_kind, "interpolant or definition")->default_val("interpolant");
    verify->add_option("--chi", chi)->required();
    verify->add_option("--left", left, "phi or file")->required();
    verify->add_option("--right", right, "psi or file")->required();
    verify->add_flag("--concept", concept_mode, "concepts in S5_ALC^u");

    CLI11_PARSE(app, argc, argv);

    try {
        SearchBounds b = make_bounds(o);
        Logic logic = parse_logic(o.logic);
        Signature sigma = parse_signature(o.sigma);

        if (*parse) {
            std::string src = !file.empty() ? slurp(file) : text;
            if (concept_mode) {
                Concept c = parse_concept(src);
                std::string out = print_concept(c, pretty);
                if (o.json_out) std::cout << json{{"concept", out}, {"signature", concept_signature(c)}}.dump(2) << "\n";
                else std::cout << out << "\n";
                return 0;
            }
            Formula f = parse_formula(src);
            if (normalize_flag) f = normalize(f);
            std::string out = print_formula(f, pretty);
            if (o.json_out)
                std::cout << json{{"formula", out}, {"signature", signature_of(f)}, {"depth", modal_depth(f)}}.dump(2)
                          << "\n";
            else std::cout << out << "\n";
            return 0;
        }
        if (*check) {
            KripkeModel m = load_model_file(model);
            Formula f = formula_arg(text);
            if (!world.empty() || !element.empty()) {
                bool v = model_check(m, point_arg(m, world, element), f);
                std::cout << (o.json_out ? json{{"holds", v}}.dump() : (v ? "true" : "false")) << "\n";
                return 0;
            }
            json rows = json::array();
            for (int w = 0; w < m.nw(); ++w)
                for (int d = 0; d < m.nd(); ++d) {
                    bool v = model_check(m, {w, d}, f);
                    rows.push_back({m.worlds[static_cast<std::size_t>(w)], m.domain[static_cast<std::size_t>(d)], v});
                    if (!o.json_out)
                        std::cout << std::left << std::setw(10) << m.worlds[static_cast<std::size_t>(w)]
                                  << std::setw(10) << m.domain[static_cast<std::size_t>(d)] << (v ? "true" : "false")
                                  << "\n";
                }
            if (o.json_out) std::cout << rows.dump(2) << "\n";
            return 0;
        }
        if (*sat) return emit_verdict(check_sat_bounded(formula_arg(text), logic, b), o);
        if (*valid) return emit_verdict(check_valid_bounded(formula_arg(text), logic, b), o);
        if (*bisim) {
            KripkeModel m1 = load_model_file(lmodel), m2 = load_model_file(rmodel);
            json j;
            bool pass = true;
            if (bisim_kind == "general") {
                GeneralBisim g = max_bisim_general(m1, m2, sigma);
                j = dump(g, m1, m2);
                pass = verify_bisimulation(g, m1, m2, sigma).empty();
            } else if (bisim_kind == "s5") {
                S5Bisim s = max_bisim_s5(m1, m2, sigma);
                j = dump(s, m1, m2);
                pass = verify_bisimulation(s, m1, m2, sigma).empty();
            } else if (bisim_kind == "alcu") {
                TripleBisim t = max_bisim_alcu(m1, m2, sigma);
                j = dump(t, m1, m2);
                pass = verify_bisimulation(t, m1, m2, sigma).empty();
            } else {
                throw std::invalid_argument("unknown bisimulation kind: " + bisim_kind);
            }
            std::cout << j.dump(o.json_out ? 2 : -1) << "\n";
            return pass ? 0 : 1;
        }
        if (*kbisim) {
            KripkeModel m1 = load_model_file(lmodel), m2 = load_model_file(rmodel);
            KBisim kb = max_k_bisim(m1, m2, sigma, k);
            std::cout << dump(kb, m1, m2).dump(o.json_out ? 2 : -1) << "\n";
            return verify_bisimulation(kb, m1, m2, sigma).empty() ? 0 : 1;
        }
        if (*iep) {
            Formula phi = formula_arg(left), psi = formula_arg(right);
            if (logic == Logic::Q1K) return emit_verdict(decide_iep_k(phi, psi, b), o);
            if (logic == Logic::ALC)
                return emit_verdict(decide_iep_alcu(concept_from_formula(phi), concept_from_formula(psi), b), o);
            if (route == "edep") return emit_verdict(decide_iep_via_edep(phi, psi, b), o);
            return emit_verdict(decide_iep_s5(phi, psi, b), o);
        }
        if (*edep) {
            Formula phi = formula_arg(left), psi = formula_arg(target);
            if (route == "iep") return emit_verdict(decide_edep_via_iep(phi, psi, sigma, b), o);
            return emit_verdict(decide_edep_s5(phi, psi, sigma, b), o);
        }
        if (*kiep) return emit_verdict(decide_iep_k(formula_arg(left), formula_arg(right), b), o);
        if (*filtrate) {
            KripkeModel m1 = load_model_file(lmodel);
            Point p1 = point_arg(m1, world, element);
            if (rmodel.empty()) {
                Filtration f = filtrate_sat(m1, p1, formula_arg(left));
                FiltrationReport rep = verify_filtration(f, b.parallel);
                json j = filtration_json(f);
                j["report"] = rep.to_json();
                return emit_report(j, rep.passed(), o);
            }
            if (right.empty()) throw std::invalid_argument("--right is required with --right-model");
            KripkeModel m2 = load_model_file(rmodel);
            Filtration f = filtrate_pair(m1, p1, m2, {0, 0}, formula_arg(left), formula_arg(right));
            FiltrationReport rep = verify_filtration(f, b.parallel);
            json j = filtration_json(f);
            j["report"] = rep.to_json();
            return emit_report(j, rep.passed(), o);
        }
        if (*charf) {
            KripkeModel m = load_model_file(model);
            Formula tau = char_formula(m, point_arg(m, world, element), sigma, k);
            std::cout << (o.json_out ? json{{"formula", print_formula(tau)}, {"depth", modal_depth(tau)}}.dump(2)
                                     : print_formula(tau, true))
                      << "\n";
            return 0;
        }
        if (*translate) {
            Formula f = formula_arg(text);
            FOFormula t;
            if (to == "dagger" || to == "tptp") t = dagger_translation(f);
            else if (to == "standard") t = standard_translation(f);
            else throw std::invalid_argument("unknown translation: " + to);
            std::string out = to == "tptp" ? print_tptp(t) : print_fo(t);
            std::cout << (o.json_out ? json{{"fo", out}}.dump(2) : out) << "\n";
            return 0;
        }
        if (*dlcheck) {
            KripkeModel m = load_model_file(model);
            bool v = dl_model_check(m, point_arg(m, world, element), concept_arg(text));
            std::cout << (o.json_out ? json{{"holds", v}}.dump() : (v ? "true" : "false")) << "\n";
            return 0;
        }
        if (*dlentails) {
            Ontology onto = parse_ontology(text_or_file(ontology));
            return emit_verdict(entails_bounded(onto, inclusion_arg(inclusion), b), o);
        }
        if (*dliep) return emit_verdict(decide_iep_alcu(concept_arg(left), concept_arg(right), b), o);
        if (*dlreduce) {
            OntologyProblem kindp = parse_ontology_problem(problem);
            Ontology onto = parse_ontology(text_or_file(ontology));
            Inclusion pl = kindp == OntologyProblem::EdepModulo ? Inclusion{parse_concept(payload), c_top()}
                                                                : inclusion_arg(payload);
            ConceptInstance inst = reduce_ontology_problem(kindp, onto, sigma, pl);
            json j{{"left", print_concept(inst.left, true)},
                   {"right", print_concept(inst.right, true)},
                   {"sigma", inst.sigma}};
            if (!normalize_flag) {
                std::cout << (o.json_out ? j.dump(2) : j["left"].get<std::string>() + "\n" +
                                                          j["right"].get<std::string>())
                          << "\n";
                return 0;
            }
            Verdict v = decide_iep_alcu_sigma(inst.left, inst.right, inst.sigma, b);
            if (!o.json_out) std::cout << "left         " << j["left"].get<std::string>() << "\nright        "
                                       << j["right"].get<std::string>() << "\n";
            return emit_verdict(v, o);
        }
        if (*spenc) {
            StandpointOntology so = parse_standpoint_ontology(slurp(file));
            Ontology enc = encode_standpoint(so);
            std::cout << print_ontology(enc);
            return 0;
        }
        if (*gallery) {
            if (!export_dir.empty()) {
                export_gallery(export_dir);
                return 0;
            }
            if (list) {
                for (const auto& n : gallery_names()) std::cout << n << "\n";
                return 0;
            }
            if (!show.empty()) {
                std::cout << gallery_build(show, r).to_json().dump(2) << "\n";
                return 0;
            }
            if (run.empty()) throw std::invalid_argument("gallery needs --list, --show, --run or --export");
            std::vector<std::string> names = run == "all" ? gallery_names() : std::vector<std::string>{run};
            std::vector<FactResult> all;
            for (const auto& n : names) {
                auto rs = run_facts(gallery_build(n, r));
                for (const auto& x : rs) {
                    if (!o.json_out)
                        std::cout << (x.passed ? "pass  " : "FAIL  ") << std::left << std::setw(12) << x.item
                                  << std::setw(24) << x.operation << x.fact << "  [" << std::fixed
                                  << std::setprecision(2) << x.seconds << "s]"
                                  << (x.passed || x.detail.empty() ? "" : "  " + x.detail) << "\n";
                    all.push_back(x);
                }
            }
            bool ok = std::all_of(all.begin(), all.end(), [](const FactResult& x) { return x.passed; });
            if (o.json_out) std::cout << fact_results_json(all).dump(2) << "\n";
            else std::cout << (ok ? "all facts pass" : "some facts failed") << "\n";
            return ok ? 0 : 1;
        }
        if (*verify) {
            CandidateKind ck = cand_kind == "definition" ? CandidateKind::Definition : CandidateKind::Interpolant;
            if (cand_kind != "definition" && cand_kind != "interpolant") throw std::invalid_argument("unknown kind: " + cand_kind);
            if (concept_mode) {
                Concept c = concept_arg(left), d = concept_arg(right), x = concept_arg(chi);
                Signature s = o.sigma.empty() ? sig_intersection(concept_signature(c), concept_signature(d)) : sigma;
                return emit_verdict(verify_concept_candidate(ck, x, c, d, s, b), o);
            }
            Formula phi = formula_arg(left), psi = formula_arg(right), x = formula_arg(chi);
            Signature s = o.sigma.empty() ? sig_intersection(signature_of(phi), signature_of(psi)) : sigma;
            return emit_verdict(verify_candidate(ck, x, phi, psi, s, logic, b), o);
        }
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error at " << e.line << ":" << e.column << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
