#include "qml/gallery.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <stdexcept>
#include <utility>

#include "qml/bisim.hpp"
#include "qml/charform.hpp"
#include "qml/mosaics.hpp"
#include "qml/translate.hpp"

namespace qml {

using json = nlohmann::json;

namespace {

FactOutcome verdict(bool pass, const std::string& detail = {}) { return {pass, detail}; }

std::string describe(const Verdict& v)
{
    std::string s = to_string(v.outcome);
    if (!v.note.empty()) s += ": " + v.note;
    return s;
}

KripkeModel named_model(std::vector<std::string> worlds, std::vector<std::string> domain, bool s5)
{
    KripkeModel m = make_model(static_cast<int>(worlds.size()), static_cast<int>(domain.size()), s5);
    m.worlds = std::move(worlds);
    m.domain = std::move(domain);
    return m;
}

void put(KripkeModel& m, const std::string& p, std::initializer_list<std::pair<int, int>> pts)
{
    for (auto [w, d] : pts) m.set(p, w, d);
}

bool world_constant(const KripkeModel& m, const std::string& p)
{
    for (int w = 0; w < m.nw(); ++w)
        for (int d = 1; d < m.nd(); ++d)
            if (m.holds(p, w, d) != m.holds(p, w, 0)) return false;
    return true;
}

// Re-checks an S5 pair witness: targets at the points and σ-bisimilarity of the points.
FactOutcome check_s5_witness(const Verdict& v, const Formula& left, const Formula& right, const Signature& sigma)
{
    if (v.outcome != Outcome::No) return verdict(false, "expected no, got " + describe(v));
    if (v.models.size() != 2 || v.points.size() != 2) return verdict(false, "witness incomplete");
    const KripkeModel &m1 = v.models[0], &m2 = v.models[1];
    if (!model_check(m1, v.points[0], left)) return verdict(false, "left target fails at the witness point");
    if (!model_check(m2, v.points[1], right)) return verdict(false, "right target fails at the witness point");
    S5Bisim b = max_bisim_s5(m1, m2, sigma);
    if (!verify_bisimulation(b, m1, m2, sigma).empty()) return verdict(false, "maximal bisimulation rejected");
    if (!s5_bisimilar(m1, v.points[0], m2, v.points[1], sigma)) return verdict(false, "points not bisimilar");
    return verdict(true, "witness " + std::to_string(m1.nw()) + "x" + std::to_string(m1.nd()) + " / " +
                             std::to_string(m2.nw()) + "x" + std::to_string(m2.nd()) + " re-verified");
}

std::string sanitize(const std::string& s)
{
    std::string out;
    for (char ch : s) out += std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
    return out;
}

// Body of □∀U.X, or null.
Concept boxed_universal_body(const Concept& c)
{
    if (c->op == COp::Box && c->a->op == COp::All && c->a->name == kUniversalRole) return c->a->a;
    return nullptr;
}

bool equivalent_by_saturation(const Concept& x, const Concept& y)
{
    Dag dag;
    int ix = add_concept(dag, x), iy = add_concept(dag, y);
    return provable_by_saturation(dag, dag.iff(ix, iy), Logic::ALC);
}

// Two CIs ⊤ ⊑ □∀U.X and ⊤ ⊑ □∀U.Y agree when X ↔ Y is propositionally valid.
bool same_axiom(const Inclusion& a, const Inclusion& b)
{
    if (a.lhs->op != COp::Top || b.lhs->op != COp::Top) return false;
    if (equivalent_by_saturation(a.rhs, b.rhs)) return true;
    Concept x = boxed_universal_body(a.rhs), y = boxed_universal_body(b.rhs);
    return x && y && equivalent_by_saturation(x, y);
}

Ontology standpoint_axioms_only(const StandpointOntology& so)
{
    Ontology o = encode_standpoint(so);
    return Ontology(o.begin() + static_cast<long>(so.standpoints.size()), o.end());
}

// ---------------------------------------------------------------- items

GalleryItem build_fine()
{
    GalleryItem it;
    it.name = "fine";
    Formula ax1 = parse_formula(fixtures::kFineAxiom1);
    Formula ax2 = parse_formula(fixtures::kFineAxiom2);
    Formula phi = mk_and(ax1, ax2);
    Formula rep = mk_atom("rep");
    it.formulas = {{"axiom1", ax1}, {"axiom2", ax2}, {"phi", phi}, {"psi", rep}};
    it.sigma = {"inPower"};
    it.props = {"rep"};
    it.models = {{"M", fine_model()}, {"M'", fine_model_prime()}};
    it.points = {{"M", {0, 0}}, {"M'", {0, 0}}};
    KripkeModel m = it.models["M"], mp = it.models["M'"];
    Signature sigma = it.sigma, props = it.props;

    it.facts.push_back({"axiom 1 parses with implication at the root", "formula_io", [ax1] {
                            return verdict(ax1->op == Op::Implies, print_formula(ax1));
                        }});
    it.facts.push_back({"M,w0,d0 satisfies phi and rep", "model_check", [m, phi, rep] {
                            return verdict(model_check(m, {0, 0}, mk_and(phi, rep)));
                        }});
    it.facts.push_back({"M',w0,d0 satisfies phi and not rep", "model_check", [mp, phi, rep] {
                            return verdict(model_check(mp, {0, 0}, mk_and(phi, mk_not(rep))));
                        }});
    it.facts.push_back({"rep is world-constant in both models", "model_check", [m, mp] {
                            return verdict(world_constant(m, "rep") && world_constant(mp, "rep"));
                        }});
    it.facts.push_back({"distinguished points are inPower-bisimilar", "max_bisim_s5", [m, mp, sigma] {
                            S5Bisim b = max_bisim_s5(m, mp, sigma);
                            bool ok = verify_bisimulation(b, m, mp, sigma).empty() &&
                                      s5_bisimilar(m, {0, 0}, mp, {0, 0}, sigma);
                            return verdict(ok);
                        }});
    it.facts.push_back({"renaming outside inPower primes rep", "rename_outside", [phi, sigma] {
                            Signature s = signature_of(rename_outside(phi, sigma));
                            return verdict(s == Signature{"inPower", "rep'"}, print_signature(s));
                        }});
    it.facts.push_back({"edep_to_iep yields (phi & rep, phi' -> rep')", "reduce_between", [phi, rep, sigma] {
                            ReducedInstance ri = edep_to_iep(phi, rep, sigma);
                            Formula r = rename_outside(phi, sigma);
                            bool ok = equal(ri.left, mk_and(phi, rep)) &&
                                      equal(ri.right, mk_implies(r, mk_atom("rep'"))) && ri.sigma == sigma;
                            return verdict(ok, print_formula(ri.left, true) + "  /  " + print_formula(ri.right, true));
                        }});
    it.facts.push_back({"phi is satisfiable at bounds (2,2)", "check_sat_bounded", [phi, props] {
                            SearchBounds b;
                            b.w1 = 2, b.d1 = 2, b.props = props;
                            Verdict v = check_sat_bounded(phi, Logic::Q1S5, b);
                            return verdict(v.outcome == Outcome::Yes, describe(v));
                        }});
    it.facts.push_back({"filtration of M at the phi point verifies", "filtrate_sat", [m, phi] {
                            Filtration f = filtrate_sat(m, {0, 0}, phi);
                            FiltrationReport r = verify_filtration(f);
                            return verdict(r.passed(), r.to_json().dump());
                        }});
    it.facts.push_back({"no explicit definition of rep via inPower at (2,2,3,3)", "decide_edep_s5", [phi, rep, sigma, props] {
                            SearchBounds b;
                            b.w1 = 2, b.d1 = 2, b.w2 = 3, b.d2 = 3, b.props = props;
                            Verdict v = decide_edep_s5(phi, rep, sigma, b);
                            return check_s5_witness(v, mk_and(phi, rep), mk_and(phi, mk_not(rep)), sigma);
                        }});
    return it;
}

GalleryItem build_marx()
{
    GalleryItem it;
    it.name = "marx_areces";
    Formula phi = parse_formula(fixtures::kMarxPhi);
    Formula psi = parse_formula(fixtures::kMarxPsi);
    it.formulas = {{"phi", phi}, {"psi", psi}};
    it.sigma = {"e"};
    it.models = {{"M1", marx_model1()}, {"M2", marx_model2()}};
    it.points = {{"M1", {0, 0}}, {"M2", {0, 0}}};
    KripkeModel m1 = it.models["M1"], m2 = it.models["M2"];
    Signature sigma = it.sigma;

    it.facts.push_back({"signatures and their intersection", "signature_of", [phi, psi] {
                            Signature a = signature_of(phi), b = signature_of(psi);
                            bool ok = a == Signature{"e", "p0", "p1", "p2"} && b == Signature{"b0", "b1", "e"} &&
                                      sig_intersection(a, b) == Signature{"e"};
                            return verdict(ok, print_signature(a) + " / " + print_signature(b));
                        }});
    it.facts.push_back({"M1,u0,d0 satisfies phi", "model_check", [m1, phi] {
                            return verdict(model_check(m1, {0, 0}, phi));
                        }});
    it.facts.push_back({"M2,v0,c0 satisfies not psi", "model_check", [m2, psi] {
                            return verdict(model_check(m2, {0, 0}, mk_not(psi)));
                        }});
    it.facts.push_back({"maximal {e}-bisimulation relates e-points to e-points", "max_bisim_general", [m1, m2, sigma] {
                            GeneralBisim g = max_bisim_general(m1, m2, sigma);
                            Relation expect(m1.npoints(), m2.npoints());
                            for (int w = 0; w < m1.nw(); ++w)
                                for (int d = 0; d < m1.nd(); ++d)
                                    for (int v = 0; v < m2.nw(); ++v)
                                        for (int c = 0; c < m2.nd(); ++c)
                                            expect.set(m1.point(w, d), m2.point(v, c),
                                                       m1.holds("e", w, d) == m2.holds("e", v, c));
                            bool ok = g.beta == expect && g.beta.has(0, 0) &&
                                      verify_bisimulation(GeneralBisim{expect}, m1, m2, sigma).empty();
                            return verdict(ok, std::to_string(g.beta.count()) + " pairs");
                        }});
    it.facts.push_back({"S5 bisimulation is total on worlds and elements", "max_bisim_s5", [m1, m2, sigma] {
                            S5Bisim b = max_bisim_s5(m1, m2, sigma);
                            bool ok = b.beta1 == Relation(m1.nw(), m2.nw(), true) &&
                                      b.beta2 == Relation(m1.nd(), m2.nd(), true);
                            return verdict(ok);
                        }});
    it.facts.push_back({"one world mosaic, one domain mosaic, 3 and 2 world points", "compute_types",
                        [m1, m2, phi, psi, sigma] {
                            TypeTable t = compute_types(m1, m2, phi, psi, sigma);
                            bool ok = t.world_mosaics.size() == 1 && t.domain_mosaics.size() == 1 &&
                                      t.count_world_points(0) == 3 && t.count_world_points(1) == 2 &&
                                      t.count_domain_points(0) == 3 && t.count_domain_points(1) == 2;
                            return verdict(ok, t.to_json().dump());
                        }});
    it.facts.push_back({"pair filtration passes both checks", "filtrate_pair", [m1, m2, phi, psi] {
                            Filtration f = filtrate_pair(m1, {0, 0}, m2, {0, 0}, phi, psi);
                            FiltrationReport r = verify_filtration(f);
                            bool ok = r.passed() && f.pi_count <= f.n * f.n;
                            return verdict(ok, "n=" + std::to_string(f.n) + " |Pi|=" + std::to_string(f.pi_count));
                        }});
    it.facts.push_back({"completeness bound exceeds 2^20", "completeness_bound", [phi, psi] {
                            SizeBound sb = completeness_bound(phi, psi, BoundProblem::IepS5);
                            return verdict(sb.log2_w > 20 && sb.log2_d > 20, sb.text());
                        }});
    it.facts.push_back({"square bridge agrees on phi at (u0,d0)", "square_bridge", [m1, phi] {
                            FOStructure s = square_to_fo(m1);
                            bool fo = fo_eval(s, dagger_translation(phi), FOEnv{0, 0, 0});
                            return verdict(fo == model_check(m1, {0, 0}, phi) && fo);
                        }});
    it.facts.push_back({"no countermodel to phi -> psi up to (3,3)", "check_valid_bounded", [phi, psi] {
                            SearchBounds b;
                            b.w1 = 3, b.d1 = 3;
                            Verdict v = check_valid_bounded(mk_implies(phi, psi), Logic::Q1S5, b);
                            return verdict(v.outcome != Outcome::No, describe(v));
                        }});
    it.facts.push_back({"no interpolant at bounds (3,3,2,2)", "decide_iep_s5", [phi, psi, sigma] {
                            SearchBounds b;
                            b.w1 = 3, b.d1 = 3, b.w2 = 2, b.d2 = 2;
                            Verdict v = decide_iep_s5(phi, psi, b);
                            return check_s5_witness(v, phi, mk_not(psi), sigma);
                        }});
    it.facts.push_back({"role-free concepts have no interpolant either", "decide_iep_alcu", [phi, psi] {
                            SearchBounds b;
                            b.w1 = 3, b.d1 = 3, b.w2 = 2, b.d2 = 2;
                            Verdict v = decide_iep_alcu(concept_from_formula(phi), concept_from_formula(psi), b);
                            return verdict(v.outcome == Outcome::No, describe(v));
                        }});
    return it;
}

GalleryItem build_kr_kb()
{
    GalleryItem it;
    it.name = "kr_kb";
    it.texts = {{"standpoints", fixtures::kStandpointKB}, {"direct", fixtures::kDirectKB}};
    StandpointOntology so = parse_standpoint_ontology(fixtures::kStandpointKB);
    Ontology encoded = encode_standpoint(so);
    Ontology direct = parse_ontology(fixtures::kDirectKB);
    Concept def = parse_concept(fixtures::kKRDefinition);
    Concept kr = c_name("KR");
    it.concepts = {{"definition", def}, {"K", ontology_to_concept(encoded)}, {"KR", kr}};
    it.sigma = parse_signature(fixtures::kKRSigma);
    Signature sigma = it.sigma;

    it.facts.push_back({"six standpoint axioms over two standpoints", "encode_standpoint", [so] {
                            return verdict(so.standpoints.size() == 2 && so.axioms.size() == 8,
                                           std::to_string(so.axioms.size()) + " inclusions after == expansion");
                        }});
    it.facts.push_back({"encoding reproduces the direct K axiom by axiom", "encode_standpoint", [so, direct] {
                            Ontology enc = standpoint_axioms_only(so);
                            if (enc.size() != direct.size()) return verdict(false, "size mismatch");
                            std::vector<bool> used(direct.size(), false);
                            for (const auto& a : enc) {
                                bool hit = false;
                                for (std::size_t j = 0; j < direct.size() && !hit; ++j)
                                    if (!used[j] && same_axiom(a, direct[j])) used[j] = hit = true;
                                if (!hit) return verdict(false, "unmatched: " + print_concept(a.rhs, true));
                            }
                            return verdict(true, std::to_string(enc.size()) + " axioms matched");
                        }});
    it.facts.push_back({"the proposition axioms come first", "encode_standpoint", [encoded] {
                            Concept s1 = c_name("S1");
                            Concept want = c_box(c_all(kUniversalRole, c_iff(c_some(kUniversalRole, s1),
                                                                             c_all(kUniversalRole, s1))));
                            return verdict(equal(encoded.at(0).rhs, want), print_concept(encoded.at(0).rhs, true));
                        }});
    it.facts.push_back({"definition round-trips through the printer", "concept_io", [def] {
                            std::string t = print_concept(def);
                            return verdict(equal(parse_concept(t), def), t);
                        }});
    it.facts.push_back({"definition accepted against the encoded K", "verify_candidate", [encoded, def, kr, sigma] {
                            SearchBounds b;
                            b.w1 = 2, b.d1 = 4;
                            Verdict v = verify_concept_candidate(CandidateKind::Definition, def,
                                                                 ontology_to_concept(encoded), kr, sigma, b);
                            return verdict(v.outcome != Outcome::No, describe(v));
                        }});
    it.facts.push_back({"no countermodel to the definition up to |W|<=2, |D|<=4", "entails_bounded", [encoded, def, kr] {
                            SearchBounds b;
                            b.w1 = 2, b.d1 = 4;
                            Dag dag;
                            int o = add_concept(dag, ontology_to_concept(encoded));
                            int leg = dag.implies(o, dag.iff(add_concept(dag, kr), add_concept(dag, def)));
                            Verdict v = check_sat_bounded(dag, dag.neg(leg), Logic::ALC, b);
                            return verdict(v.outcome != Outcome::Yes, describe(v));
                        }});
    it.facts.push_back({"dropping the covering axiom admits a countermodel", "entails_bounded", [so, def, kr, sigma] {
                            StandpointOntology cut = so;
                            cut.axioms.erase(cut.axioms.begin());
                            SearchBounds b;
                            b.w1 = 2, b.d1 = 4;
                            Verdict v = verify_concept_candidate(CandidateKind::Definition, def,
                                                                 ontology_to_concept(encode_standpoint(cut)), kr,
                                                                 sigma, b);
                            return verdict(v.outcome == Outcome::No && !v.models.empty(), describe(v));
                        }});
    it.facts.push_back({"Q1S5 projection: definition verified", "verify_candidate", [encoded, def, kr] {
                            Formula k = project_roles(ontology_to_concept(encoded));
                            Formula chi = project_roles(def);
                            Formula psi = project_roles(kr);
                            Signature sig = signature_of(chi);
                            SearchBounds b;
                            b.w1 = 2, b.d1 = 2;
                            Verdict v = verify_candidate(CandidateKind::Definition, chi, k, psi, sig, Logic::Q1S5, b);
                            return verdict(v.outcome == Outcome::Yes, describe(v));
                        }});
    it.facts.push_back({"edep modulo K reduces with primed copies of the non-sigma names", "reduce_ontology_problem",
                        [encoded, sigma] {
                            Ontology o;
                            for (const auto& ci : encoded) o.push_back(ci);
                            ConceptInstance ci = reduce_ontology_problem(OntologyProblem::EdepModulo, o, sigma,
                                                                         {c_name("KR"), c_top()});
                            Signature l = concept_signature(ci.left), r = concept_signature(ci.right);
                            bool ok = ci.sigma == sigma && r.count("KR'") && l.count("KR") && l.count("S1'") &&
                                      ci.ontology.size() == 2 * o.size();
                            return verdict(ok, print_signature(r));
                        }});
    return it;
}

GalleryItem build_example9()
{
    GalleryItem it;
    it.name = "example9";
    Formula phi = parse_formula("rep & <> A (inPower -> [](rep -> ~inPower))");
    Formula psi = parse_formula("[] A (<> inPower & <> ~inPower & E inPower & E ~inPower)");
    Formula psi2 = mk_and(psi, parse_formula("p | ~p"));
    Formula chi = parse_formula("~(p & [] E (inPower & [](p -> inPower)))");
    it.formulas = {{"phi", phi}, {"psi", psi}, {"psi'", psi2}, {"chi", chi}};
    it.sigma = {"inPower"};
    it.props = {"p", "rep"};
    it.models = {{"M", fine_model()}};
    it.points = {{"M", {0, 0}}};
    KripkeModel m = it.models["M"];

    it.facts.push_back({"formulas print and reparse", "formula_io", [phi, psi2, chi] {
                            bool ok = true;
                            for (const auto& f : {phi, psi2, chi}) ok = ok && equal(parse_formula(print_formula(f)), f);
                            return verdict(ok);
                        }});
    it.facts.push_back({"Fine's M satisfies phi and psi at w0", "model_check", [m, phi, psi] {
                            bool ok = true;
                            for (int d = 0; d < m.nd(); ++d) ok = ok && model_check(m, {0, d}, mk_and(phi, psi));
                            return verdict(ok);
                        }});
    it.facts.push_back({"psi' does not imply chi", "check_valid_bounded", [psi2, chi] {
                            SearchBounds b;
                            b.w1 = 3, b.d1 = 3, b.props = {"p"};
                            Verdict v = check_valid_bounded(mk_implies(psi2, chi), Logic::Q1S5, b);
                            bool ok = v.outcome == Outcome::No &&
                                      model_check(v.models.at(0), v.points.at(0), mk_and(psi2, mk_not(chi)));
                            return verdict(ok, describe(v));
                        }});
    it.facts.push_back({"phi and psi' imply chi: no countermodel up to (2,2)", "check_valid_bounded", [phi, psi2, chi] {
                            SearchBounds b;
                            b.w1 = 2, b.d1 = 2, b.props = {"p", "rep"};
                            Verdict v = check_valid_bounded(mk_implies(mk_and(phi, psi2), chi), Logic::Q1S5, b);
                            return verdict(v.outcome != Outcome::No, describe(v));
                        }});
    return it;
}

Formula ladder_diamond(int r) { return mk_diamond(ex6_chain(r)); }

FactOutcome ladder_fact(int r)
{
    KripkeModel m = ex6_model(r);
    for (int rp = 1; rp < r; ++rp)
        if (!model_check(m, {0, 0}, ladder_diamond(rp)))
            return verdict(false, "fails <>chi_" + std::to_string(rp));
    if (model_check(m, {0, 0}, ladder_diamond(r))) return verdict(false, "satisfies <>chi_" + std::to_string(r));
    return verdict(true);
}

GalleryItem build_ex6()
{
    GalleryItem it;
    it.name = "ex6";
    Formula phi0 = parse_formula("[] A (a -> <> (p1 & b)) & [] A (p1 & b -> E (p2 & b)) & [] A (p2 & b -> <> (p1 & b))");
    Formula phi = mk_and(mk_atom("a"), phi0);
    it.formulas = {{"phi0", phi0}, {"phi", phi}, {"chi1", ex6_chain(1)}, {"chi2", ex6_chain(2)}};
    it.sigma = {"a", "p1", "p2"};
    it.models = {{"M3", ex6_model(3)}};
    it.points = {{"M3", {0, 0}}};

    it.facts.push_back({"chi_1 = p1 & E (p2 & <> true)", "gallery_build", [] {
                            std::string t = print_formula(ex6_chain(1), true);
                            return verdict(equal(ex6_chain(1), parse_formula("p1 & E (p2 & <> true)")), t);
                        }});
    for (int r = 2; r <= 5; ++r)
        it.facts.push_back({"ladder M_" + std::to_string(r) + ": <>chi_r' for r' < r, not <>chi_r", "model_check",
                            [r] { return ladder_fact(r); }});
    it.facts.push_back({"a & phi0 -> <>chi_r has no countermodel up to (2,2) for r = 1,2", "check_valid_bounded", [phi] {
                            SearchBounds b;
                            b.w1 = 2, b.d1 = 2;
                            std::string detail;
                            for (int r = 1; r <= 2; ++r) {
                                Verdict v = check_valid_bounded(mk_implies(phi, ladder_diamond(r)), Logic::Q1S5, b);
                                if (v.outcome == Outcome::No) return verdict(false, "countermodel for r=" + std::to_string(r));
                                detail = describe(v);
                            }
                            return verdict(true, detail);
                        }});
    return it;
}

GalleryItem build_ex6_chain(int r)
{
    GalleryItem it;
    it.name = "ex6_chain";
    Formula chi = ex6_chain(r);
    it.formulas = {{"chi", chi}};
    it.sigma = {"p1", "p2"};
    it.facts.push_back({"modal depth equals r", "modal_depth", [chi, r] {
                            return verdict(modal_depth(chi) == r, std::to_string(modal_depth(chi)));
                        }});
    it.facts.push_back({"signature is {p1,p2}", "signature_of", [chi] {
                            return verdict(signature_of(chi) == Signature{"p1", "p2"});
                        }});
    return it;
}

GalleryItem build_ex6_model(int r)
{
    GalleryItem it;
    it.name = "ex6_model";
    KripkeModel m = ex6_model(r);
    it.models = {{"M", m}};
    it.points = {{"M", {0, 0}}};
    it.facts.push_back({"ladder valuation", "gallery_build", [m, r] {
                            bool ok = m.holds("a", 0, 0);
                            int count = 0;
                            for (int w = 0; w < r; ++w)
                                for (int d = 0; d < r; ++d) {
                                    bool p1 = w > 0 && d == w - 1, p2 = w > 0 && d == w;
                                    ok = ok && m.holds("p1", w, d) == p1 && m.holds("p2", w, d) == p2;
                                    count += m.holds("a", w, d);
                                }
                            return verdict(ok && count == 1);
                        }});
    if (r >= 2) it.facts.push_back({"<>chi_r' for r' < r, not <>chi_r", "model_check", [r] { return ladder_fact(r); }});
    return it;
}

GalleryItem build_exk()
{
    GalleryItem it;
    it.name = "exK";
    Formula phi = parse_formula("A ((a <-> b) & (b <-> h) & (h <-> [] h) & ([] h <-> <> h)) & <> A (b <-> h)");
    Formula psi = parse_formula("A ((a <-> [][] a) & ([][] a <-> <><> a)) & [] <> true -> <> A (b <-> <> a)");
    it.formulas = {{"phi", phi}, {"psi", psi}};
    it.sigma = {"a", "b"};
    it.models = {{"M", exk_model()}, {"M'", exk_model_prime()}};
    Point p{0, 1}, pp{0, 2};
    it.points = {{"M", p}, {"M'", pp}};
    KripkeModel m = it.models["M"], mp = it.models["M'"];
    Signature sigma = it.sigma;

    it.facts.push_back({"modal depth of psi is 2", "modal_depth", [psi] {
                            return verdict(modal_depth(psi) == 2);
                        }});
    it.facts.push_back({"M,w,d satisfies phi", "model_check", [m, phi, p] {
                            return verdict(model_check(m, p, phi));
                        }});
    it.facts.push_back({"M',w',d' refutes psi", "model_check", [mp, psi, pp] {
                            return verdict(!model_check(mp, pp, psi));
                        }});
    it.facts.push_back({"1-bisimilar but not 2-bisimilar", "max_k_bisim", [m, mp, p, pp, sigma] {
                            KBisim b = max_k_bisim(m, mp, sigma, 2);
                            bool one = max_k_bisim(m, mp, sigma, 1).levels[1].has(m.point(p.w, p.d), mp.point(pp.w, pp.d));
                            bool two = b.levels[2].has(m.point(p.w, p.d), mp.point(pp.w, pp.d));
                            bool ok = one && !two && verify_bisimulation(b, m, mp, sigma).empty();
                            return verdict(ok);
                        }});
    it.facts.push_back({"M',w',d' satisfies tau^1 of M,w,d", "char_formula", [m, mp, p, pp, sigma] {
                            Formula tau = char_formula(m, p, sigma, 1);
                            return verdict(model_check(mp, pp, tau) && modal_depth(tau) == 1);
                        }});
    it.facts.push_back({"no q1k countermodel to phi -> psi (depth 2, branch 2, |D|<=3)", "check_valid_bounded",
                        [phi, psi] {
                            SearchBounds b;
                            b.depth = 2, b.branch = 2, b.d1 = 3;
                            Verdict v = check_valid_bounded(mk_implies(phi, psi), Logic::Q1K, b);
                            return verdict(v.outcome != Outcome::No, describe(v));
                        }});
    it.facts.push_back({"decide_iep_k does not answer no from the 1-bisimilar pair", "decide_iep_k", [phi, psi] {
                            SearchBounds b;
                            b.depth = 2, b.branch = 2, b.d1 = 2, b.d2 = 2;
                            Verdict v = decide_iep_k(phi, psi, b);
                            return verdict(v.outcome != Outcome::No, describe(v));
                        }});
    return it;
}

GalleryItem build_ex8b()
{
    GalleryItem it;
    it.name = "ex8b";
    Formula phi = parse_formula("<> a & <> ~a");
    Formula psi = parse_formula("[] (a | p)");
    Formula probe = parse_formula("<> (a & E ~a)");
    it.formulas = {{"phi", phi}, {"psi", psi}, {"probe", probe}};
    it.sigma = {"a"};
    KripkeModel m1 = named_model({"w0", "w1", "w2"}, {"d", "d'"}, true);
    put(m1, "a", {{0, 0}, {1, 0}, {1, 1}});
    KripkeModel m2 = named_model({"v0", "v1", "v2"}, {"e", "e'"}, true);
    put(m2, "a", {{0, 0}, {1, 0}, {1, 1}});
    put(m2, "p", {{0, 1}, {2, 1}, {2, 0}});
    it.models = {{"M1", m1}, {"M2", m2}};
    it.points = {{"M1", {0, 0}}, {"M2", {0, 0}}};
    Signature sigma = it.sigma;

    it.facts.push_back({"<>(a & E ~a) separates d from d' and e from e'", "model_check", [m1, m2, probe] {
                            bool ok = model_check(m1, {0, 0}, probe) && !model_check(m1, {0, 1}, probe) &&
                                      model_check(m2, {0, 0}, probe) && !model_check(m2, {0, 1}, probe);
                            return verdict(ok);
                        }});
    it.facts.push_back({"d ~ e and d' ~ e' but not d ~ d'", "max_bisim_s5", [m1, m2, sigma] {
                            S5Bisim b = max_bisim_s5(m1, m2, sigma);
                            S5Bisim self = max_bisim_s5(m1, m1, sigma);
                            bool ok = b.beta2.has(0, 0) && b.beta2.has(1, 1) && !self.beta2.has(0, 1);
                            return verdict(ok);
                        }});
    it.facts.push_back({"d and d' give the same domain point", "compute_types", [m1, m2, phi, psi, sigma] {
                            TypeTable t = compute_types(m1, m2, phi, psi, sigma);
                            bool ok = t.side[0].dp[0] == t.side[0].dp[1] && t.side[1].dp[0] == t.side[1].dp[1] &&
                                      t.side[0].dt[0] == t.side[0].dt[1];
                            return verdict(ok, t.to_json().dump());
                        }});
    return it;
}

}  // namespace

KripkeModel fine_model()
{
    KripkeModel m = make_model(2, 2, true);
    put(m, "inPower", {{0, 0}, {1, 1}});
    put(m, "rep", {{0, 0}, {0, 1}});
    return m;
}

KripkeModel fine_model_prime()
{
    KripkeModel m = make_model(3, 3, true);
    put(m, "inPower", {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {0, 2}, {2, 2}});
    for (int w = 1; w <= 2; ++w)
        for (int d = 0; d < 3; ++d) m.set("rep", w, d);
    return m;
}

KripkeModel marx_model1()
{
    KripkeModel m = named_model({"u0", "u1", "u2"}, {"d0", "d1", "d2"}, true);
    for (int i = 0; i < 3; ++i) {
        m.set("e", i, i);
        m.set("p" + std::to_string(i), i, i);
    }
    return m;
}

KripkeModel marx_model2()
{
    KripkeModel m = named_model({"v0", "v1"}, {"c0", "c1"}, true);
    for (int i = 0; i < 2; ++i) {
        m.set("e", i, i);
        m.set("b" + std::to_string(i), i, i);
    }
    return m;
}

KripkeModel exk_model()
{
    KripkeModel m = named_model({"w", "u", "v"}, {"e", "d"}, false);
    m.succ = {{1, 2}, {}, {}};
    put(m, "a", {{0, 1}});
    put(m, "b", {{0, 1}, {1, 0}, {2, 1}});
    put(m, "h", {{0, 1}, {1, 1}, {2, 1}});
    return m;
}

KripkeModel exk_model_prime()
{
    KripkeModel m = named_model({"w'", "u'", "v'", "x'", "y'"}, {"e1", "e2", "d'"}, false);
    m.succ = {{1, 2}, {3}, {4}, {}, {}};
    put(m, "a", {{0, 2}, {3, 2}, {4, 2}});
    put(m, "b", {{0, 2}, {1, 1}, {2, 0}, {2, 2}});
    return m;
}

Formula ex6_chain(int r)
{
    if (r < 0) throw std::invalid_argument("chain index must be non-negative");
    Formula chi = mk_top();
    for (int i = 0; i < r; ++i) chi = mk_and(mk_atom("p1"), mk_exists(mk_and(mk_atom("p2"), mk_diamond(chi))));
    return chi;
}

KripkeModel ex6_model(int r)
{
    if (r < 1) throw std::invalid_argument("ladder size must be at least 1");
    KripkeModel m = make_model(r, r, true);
    m.set("a", 0, 0);
    for (int k = 1; k < r; ++k) {
        m.set("p1", k, k - 1);
        m.set("p2", k, k);
    }
    return m;
}

Formula project_roles(const Concept& c)
{
    switch (c->op) {
    case COp::Top: return mk_top();
    case COp::Bottom: return mk_bottom();
    case COp::Name: return mk_atom(c->name);
    case COp::Not: return mk_not(project_roles(c->a));
    case COp::And: return mk_and(project_roles(c->a), project_roles(c->b));
    case COp::Or: return mk_or(project_roles(c->a), project_roles(c->b));
    case COp::Diamond: return mk_diamond(project_roles(c->a));
    case COp::Box: return mk_box(project_roles(c->a));
    case COp::Some:
        if (c->name == kUniversalRole) return mk_exists(project_roles(c->a));
        return mk_atom(c->name + "_" + sanitize(print_concept(c->a, true)));
    case COp::All:
        if (c->name == kUniversalRole) return mk_forall(project_roles(c->a));
        return mk_not(mk_atom(c->name + "_" + sanitize(print_concept(c_not(c->a), true))));
    }
    throw std::logic_error("unhandled concept");
}

std::vector<std::string> gallery_names()
{
    return {"fine", "marx_areces", "kr_kb", "example9", "ex6", "exK", "ex6_chain", "ex6_model", "ex8b"};
}

GalleryItem gallery_build(const std::string& name, int r)
{
    if ((name == "ex6_chain" || name == "ex6_model") && r < 1) throw std::invalid_argument("r must be at least 1");
    if (name == "fine") return build_fine();
    if (name == "marx_areces") return build_marx();
    if (name == "kr_kb") return build_kr_kb();
    if (name == "example9") return build_example9();
    if (name == "ex6") return build_ex6();
    if (name == "exK") return build_exk();
    if (name == "ex6_chain") return build_ex6_chain(r);
    if (name == "ex6_model") return build_ex6_model(r);
    if (name == "ex8b") return build_ex8b();
    throw std::invalid_argument("unknown gallery item: " + name);
}

json GalleryItem::to_json() const
{
    json j;
    j["name"] = name;
    json fs = json::object();
    for (const auto& [k, f] : formulas) fs[k] = print_formula(f, true);
    j["formulas"] = fs;
    json cs = json::object();
    for (const auto& [k, c] : concepts) cs[k] = print_concept(c, true);
    j["concepts"] = cs;
    j["texts"] = texts;
    json ms = json::object();
    for (const auto& [k, m] : models) {
        ms[k] = save_model(m);
        auto it = points.find(k);
        if (it != points.end())
            ms[k]["point"] = {m.worlds[static_cast<std::size_t>(it->second.w)],
                              m.domain[static_cast<std::size_t>(it->second.d)]};
    }
    j["models"] = ms;
    j["sigma"] = std::vector<std::string>(sigma.begin(), sigma.end());
    j["props"] = std::vector<std::string>(props.begin(), props.end());
    json facts_j = json::array();
    for (const auto& f : facts) facts_j.push_back({{"fact", f.name}, {"operation", f.operation}});
    j["facts"] = facts_j;
    return j;
}

std::vector<FactResult> run_facts(const GalleryItem& item)
{
    std::vector<FactResult> out;
    for (const auto& f : item.facts) {
        FactResult r{item.name, f.name, f.operation, false, {}, 0};
        auto t0 = std::chrono::steady_clock::now();
        try {
            FactOutcome o = f.check();
            r.passed = o.passed;
            r.detail = o.detail;
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

json fact_results_json(const std::vector<FactResult>& rs)
{
    json a = json::array();
    for (const auto& r : rs)
        a.push_back({{"item", r.item},
                     {"fact", r.fact},
                     {"operation", r.operation},
                     {"pass", r.passed},
                     {"detail", r.detail},
                     {"seconds", r.seconds}});
    return a;
}

}  // namespace qml
