// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>

#include "qml/alcu.hpp"
#include "qml/bisim.hpp"
#include "qml/charform.hpp"
#include "qml/decide.hpp"
#include "qml/gallery.hpp"
#include "qml/mosaics.hpp"
#include "qml/translate.hpp"
#include "support.hpp"

using namespace qml;

namespace {

struct Outcome_ {
    bool pass = false;
    std::string detail;
};

SearchBounds bounds(int w1, int d1, int w2, int d2)
{
    SearchBounds b;
    b.w1 = w1, b.d1 = d1, b.w2 = w2, b.d2 = d2;
    return b;
}

Point point_of(const KripkeModel& m, int x) { return {x / m.nd(), x % m.nd()}; }

int index_of(const std::vector<std::string>& names, const std::string& n)
{
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == n) return static_cast<int>(i);
    return -1;
}

// Rebuilds (β₁,β₂) from the emitted relation by world and element names.
std::optional<S5Bisim> s5_from_json(const nlohmann::json& j, const KripkeModel& m1, const KripkeModel& m2)
{
    if (!j.contains("beta1") || !j.contains("beta2")) return std::nullopt;
    S5Bisim b{Relation(m1.nw(), m2.nw()), Relation(m1.nd(), m2.nd())};
    for (const auto& p : j["beta1"]) {
        int x = index_of(m1.worlds, p[0]), y = index_of(m2.worlds, p[1]);
        if (x < 0 || y < 0) return std::nullopt;
        b.beta1.set(x, y);
    }
    for (const auto& p : j["beta2"]) {
        int x = index_of(m1.domain, p[0]), y = index_of(m2.domain, p[1]);
        if (x < 0 || y < 0) return std::nullopt;
        b.beta2.set(x, y);
    }
    return b;
}

// Witness pair: targets at the points, emitted relation is an S5-bisimulation linking them.
std::string check_s5_witness(const Verdict& v, const Formula& left, const Formula& right, const Signature& sigma)
{
    if (v.models.size() != 2 || v.points.size() != 2) return "no witness pair";
    const KripkeModel &m1 = v.models[0], &m2 = v.models[1];
    if (!model_check(m1, v.points[0], left)) return "left target fails";
    if (!model_check(m2, v.points[1], right)) return "right target fails";
    auto b = s5_from_json(v.relation, m1, m2);
    if (!b) return "relation unreadable";
    Report r = verify_bisimulation(*b, m1, m2, sigma);
    if (!r.empty()) return "relation rejected: " + r.front().condition;
    if (!b->beta1.has(v.points[0].w, v.points[1].w) || !b->beta2.has(v.points[0].d, v.points[1].d))
        return "points not related";
    return "";
}

std::string size_text(const KripkeModel& m) { return std::to_string(m.nw()) + "x" + std::to_string(m.nd()); }

Formula replace_first_atom(const Formula& f, const std::string& to, bool& done)
{
    if (done) return f;
    switch (f->op) {
    case Op::Top:
    case Op::Bottom: return f;
    case Op::Atom: done = true; return mk_atom(to);
    case Op::Not: return mk_not(replace_first_atom(f->a, to, done));
    case Op::Diamond: return mk_diamond(replace_first_atom(f->a, to, done));
    case Op::Box: return mk_box(replace_first_atom(f->a, to, done));
    case Op::Exists: return mk_exists(replace_first_atom(f->a, to, done));
    case Op::Forall: return mk_forall(replace_first_atom(f->a, to, done));
    default: break;
    }
    Formula a = replace_first_atom(f->a, to, done), b = replace_first_atom(f->b, to, done);
    switch (f->op) {
    case Op::And: return mk_and(a, b);
    case Op::Or: return mk_or(a, b);
    case Op::Implies: return mk_implies(a, b);
    default: return mk_iff(a, b);
    }
}

// ---------------------------------------------------------------- criteria

Outcome_ marx_areces()
{
    GalleryItem it = gallery_build("marx_areces");
    Formula phi = it.formulas.at("phi"), psi = it.formulas.at("psi");
    Signature sigma = sig_intersection(signature_of(phi), signature_of(psi));
    Verdict v = decide_iep_s5(phi, psi, bounds(3, 3, 2, 2));
    if (v.outcome != Outcome::No) return {false, "iep " + to_string(v.outcome)};
    std::string bad = check_s5_witness(v, phi, mk_not(psi), sigma);
    if (!bad.empty()) return {false, bad};
    Verdict valid = check_valid_bounded(mk_implies(phi, psi), Logic::Q1S5, bounds(3, 3, 3, 3));
    if (valid.outcome == Outcome::No) return {false, "countermodel to phi -> psi"};
    return {true, "iep no, witness " + size_text(v.models[0]) + " / " + size_text(v.models[1]) +
                      " verified; valid up to (3,3): " + to_string(valid.outcome)};
}

Outcome_ fine_definability()
{
    GalleryItem it = gallery_build("fine");
    Formula phi = it.formulas.at("phi"), rep = mk_atom("rep");
    SearchBounds b = bounds(2, 2, 3, 3);
    b.props = {"rep"};
    Verdict v = decide_edep_s5(phi, rep, {"inPower"}, b);
    if (v.outcome != Outcome::No) return {false, "edep " + to_string(v.outcome)};
    std::string bad = check_s5_witness(v, mk_and(phi, rep), mk_and(phi, mk_not(rep)), {"inPower"});
    if (!bad.empty()) return {false, bad};
    KripkeModel m = fine_model(), mp = fine_model_prime();
    if (!s5_bisimilar(m, {0, 0}, mp, {0, 0}, {"inPower"}) || !model_check(m, {0, 0}, mk_and(phi, rep)) ||
        !model_check(mp, {0, 0}, mk_and(phi, mk_not(rep))))
        return {false, "fixture pair fails"};
    return {true, "edep no, witness " + size_text(v.models[0]) + " / " + size_text(v.models[1]) +
                      " verified; fixture pair 2x2 / 3x3 verified"};
}

Outcome_ s5_equivalence()
{
    std::mt19937 rng(1001);
    std::vector<std::string> atoms = {"p", "q", "r"};
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        KripkeModel a = qtest::random_s5(rng, qtest::pick(rng, 1, 3), qtest::pick(rng, 1, 3), atoms);
        KripkeModel b = qtest::random_s5(rng, qtest::pick(rng, 1, 3), qtest::pick(rng, 1, 3), atoms);
        Signature sigma;
        int size = qtest::pick(rng, 0, 2);
        while (static_cast<int>(sigma.size()) < size) sigma.insert(atoms[static_cast<std::size_t>(qtest::pick(rng, 0, 2))]);
        Relation s5 = s5_point_relation(max_bisim_s5(a, b, sigma), a, b, sigma);
        if (!(s5 == max_bisim_general(a, b, sigma).beta)) ++mismatches;
    }
    return {mismatches == 0, "200 pairs, " + std::to_string(mismatches) + " mismatches (tolerance 0)"};
}

Outcome_ filtration()
{
    int failed = 0, pi_bad = 0, max_pi = 0, max_n = 0;
    for (const auto& c : qtest::bisim_consistent_pairs(1002, 50, 10)) {
        Filtration f = filtrate_pair(c.m1, c.p1, c.m2, c.p2, c.phi, c.psi);
        FiltrationReport r = verify_filtration(f);
        if (!r.types.empty() || !r.targets.empty() || !r.bisimulation.empty()) ++failed;
        if (f.pi_count > f.n * f.n || !r.pi.empty()) ++pi_bad;
        max_pi = std::max(max_pi, f.pi_count);
        max_n = std::max(max_n, f.n);
    }
    return {failed == 0 && pi_bad == 0, "50 pairs, " + std::to_string(failed) + " report failures, " +
                                            std::to_string(pi_bad) + " with |Pi| > n^2 (max |Pi| " +
                                            std::to_string(max_pi) + ", max n " + std::to_string(max_n) + ")"};
}

Outcome_ k_triangle()
{
    std::mt19937 rng(1003);
    Signature sigma = {"p", "q"};
    int mismatches = 0, checked = 0;
    for (int i = 0; i < 100; ++i) {
        KripkeModel a = qtest::random_k(rng, qtest::pick(rng, 1, 2), qtest::pick(rng, 1, 2), {"p", "q"});
        KripkeModel b = qtest::random_k(rng, qtest::pick(rng, 1, 2), qtest::pick(rng, 1, 2), {"p", "q"});
        int k = qtest::pick(rng, 0, 2);
        KBisim kb = max_k_bisim(a, b, sigma, k);
        for (int x = 0; x < a.npoints(); ++x) {
            Formula t = char_formula(a, point_of(a, x), sigma, k);
            for (int y = 0; y < b.npoints(); ++y) {
                ++checked;
                if (model_check(b, point_of(b, y), t) != kb.levels[static_cast<std::size_t>(k)].has(x, y)) ++mismatches;
            }
        }
    }
    return {mismatches == 0, "100 pairs, " + std::to_string(checked) + " point pairs, " +
                                 std::to_string(mismatches) + " mismatches (tolerance 0)"};
}

Outcome_ reduction_coherence()
{
    std::mt19937 rng(1004);
    SearchBounds b = bounds(2, 2, 2, 2);
    int edep_n = 0, iep_n = 0, disagree = 0, attempts = 0;
    while ((edep_n < 30 || iep_n < 30) && attempts < 2000) {
        ++attempts;
        if (edep_n < 30) {
            Formula phi = qtest::random_formula(rng, {"p", "q", "r"}, 6), psi = qtest::random_formula(rng, {"p", "q"}, 4);
            Signature sigma = {"p"};
            if (signature_of(psi).count("q")) {
                Verdict direct = decide_edep_s5(phi, psi, sigma, b), routed = decide_edep_via_iep(phi, psi, sigma, b);
                if (direct.outcome != Outcome::Unknown && routed.outcome != Outcome::Unknown) {
                    ++edep_n;
                    if (direct.outcome != routed.outcome) ++disagree;
                }
            }
        }
        if (iep_n < 30) {
            Formula phi = qtest::random_formula(rng, {"p", "q"}, 6), psi = qtest::random_formula(rng, {"q", "r"}, 6);
            Verdict direct = decide_iep_s5(phi, psi, b), routed = decide_iep_via_edep(phi, psi, b);
            if (direct.outcome != Outcome::Unknown && routed.outcome != Outcome::Unknown) {
                ++iep_n;
                if (direct.outcome != routed.outcome) ++disagree;
            }
        }
    }
    return {edep_n == 30 && iep_n == 30 && disagree == 0,
            std::to_string(edep_n) + " edep and " + std::to_string(iep_n) + " iep decisive instances, " +
                std::to_string(disagree) + " disagreements"};
}

Outcome_ ladder()
{
    int wrong = 0;
    for (int r = 2; r <= 5; ++r) {
        KripkeModel m = ex6_model(r);
        for (int s = 1; s < r; ++s)
            if (!model_check(m, {0, 0}, mk_diamond(ex6_chain(s)))) ++wrong;
        if (model_check(m, {0, 0}, mk_diamond(ex6_chain(r)))) ++wrong;
    }
    return {wrong == 0, "r = 2..5, " + std::to_string(wrong) + " wrong"};
}

Outcome_ example_k()
{
    GalleryItem it = gallery_build("exK");
    Formula phi = it.formulas.at("phi"), psi = it.formulas.at("psi");
    KripkeModel a = exk_model(), b = exk_model_prime();
    KBisim kb = max_k_bisim(a, b, {"a", "b"}, 2);
    int x = a.point(0, 1), y = b.point(0, 2);
    if (!kb.levels[1].has(x, y) || kb.levels[2].has(x, y)) return {false, "levels wrong"};
    if (!model_check(a, {0, 1}, phi) || model_check(b, {0, 2}, psi)) return {false, "model checks wrong"};
    SearchBounds vb;
    vb.depth = 2, vb.branch = 2, vb.d1 = 3;
    Verdict v = check_valid_bounded(mk_implies(phi, psi), Logic::Q1K, vb);
    if (v.outcome == Outcome::No) return {false, "countermodel to phi -> psi"};
    return {true, "beta1 yes, beta2 no; valid at depth 2, branch 2, |D| <= 3: " + to_string(v.outcome)};
}

Outcome_ standpoints()
{
    GalleryItem it = gallery_build("kr_kb");
    bool encoded = false;
    for (const auto& r : run_facts(it))
        if (r.fact == "encoding reproduces the direct K axiom by axiom") encoded = r.passed;
    if (!encoded) return {false, "encoding differs from the direct knowledge base"};
    StandpointOntology so = parse_standpoint_ontology(fixtures::kStandpointKB);
    Concept kc = ontology_to_concept(encode_standpoint(so));
    Concept def = parse_concept(fixtures::kKRDefinition);
    Signature sigma = parse_signature(fixtures::kKRSigma);
    SearchBounds b = bounds(2, 4, 2, 4);
    Verdict v = verify_concept_candidate(CandidateKind::Definition, def, kc, c_name("KR"), sigma, b);
    if (v.outcome == Outcome::No) return {false, "definition refuted"};
    so.axioms.erase(so.axioms.begin());
    Concept weak = ontology_to_concept(encode_standpoint(so));
    Verdict w = verify_concept_candidate(CandidateKind::Definition, def, weak, c_name("KR"), sigma, b);
    if (w.outcome != Outcome::No || w.models.size() != 1) return {false, "no countermodel without axiom 1"};
    if (!dl_model_check(w.models[0], w.points[0], c_and(weak, c_not(c_iff(c_name("KR"), def)))))
        return {false, "countermodel fails re-check"};
    std::string leg = v.outcome == Outcome::Yes ? "proved (" + v.note + ")"
                                                : "no countermodel up to |W| <= 2, |D| <= 4";
    return {true, "encoding matches; definition " + leg + "; without axiom 1 countermodel " + size_text(w.models[0])};
}

Outcome_ square_bridge()
{
    std::mt19937 rng(1005);
    int mismatches = 0, impure = 0;
    for (int i = 0; i < 100; ++i) {
        int n = qtest::pick(rng, 1, 3);
        KripkeModel m = qtest::random_s5(rng, n, n, {"p", "q"});
        Formula f = qtest::random_formula(rng, {"p", "q"}, 10);
        std::vector<int> bij(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) bij[static_cast<std::size_t>(k)] = k;
        std::shuffle(bij.begin(), bij.end(), rng);
        FOStructure s = square_to_fo(m, bij);
        FOFormula t = dagger_translation(f);
        if (!substitution_free(t)) ++impure;
        for (int a = 0; a < n; ++a)
            for (int e = 0; e < n; ++e)
                if (fo_eval(s, t, {e, a, 0}) != model_check(m, {bij[static_cast<std::size_t>(a)], e}, f)) ++mismatches;
        KripkeModel back = fo_to_square(s);
        for (int a = 0; a < n; ++a)
            for (int e = 0; e < n; ++e)
                if (model_check(back, {a, e}, f) != fo_eval(s, t, {e, a, 0})) ++mismatches;
    }
    return {mismatches == 0 && impure == 0, "100 pairs, " + std::to_string(mismatches) + " mismatches, " +
                                                std::to_string(impure) + " dagger images with other atoms"};
}

Outcome_ mutations()
{
    std::mt19937 rng(1006);
    int bisim_hit = 0, bisim_n = 0;
    while (bisim_n < 50) {
        KripkeModel a = qtest::random_s5(rng, qtest::pick(rng, 1, 3), qtest::pick(rng, 1, 3), {"p", "q"});
        KripkeModel b = qtest::random_s5(rng, qtest::pick(rng, 1, 3), qtest::pick(rng, 1, 3), {"p", "q"});
        GeneralBisim g = max_bisim_general(a, b, {"p"});
        if (!verify_bisimulation(g, a, b, {"p"}).empty()) continue;
        std::vector<std::size_t> holes;
        for (std::size_t j = 0; j < g.beta.bits.size(); ++j)
            if (!g.beta.bits[j]) holes.push_back(j);
        if (holes.empty()) continue;
        g.beta.bits[holes[static_cast<std::size_t>(qtest::pick(rng, 0, static_cast<int>(holes.size()) - 1))]] = 1;
        ++bisim_n;
        if (!verify_bisimulation(g, a, b, {"p"}).empty()) ++bisim_hit;
    }

    int filt_hit = 0, filt_n = 0;
    for (const auto& c : qtest::bisim_consistent_pairs(1007, 80, 10)) {
        if (filt_n == 50) break;
        Filtration f = filtrate_pair(c.m1, c.p1, c.m2, c.p2, c.phi, c.psi);
        Signature atoms = sig_union(signature_of(c.phi), signature_of(c.psi));
        if (atoms.empty() || !verify_filtration(f).passed()) continue;
        auto at = atoms.begin();
        std::advance(at, qtest::pick(rng, 0, static_cast<int>(atoms.size()) - 1));
        KripkeModel& m = f.parts[static_cast<std::size_t>(qtest::pick(rng, 0, 1))].model;
        int w = qtest::pick(rng, 0, m.nw() - 1), d = qtest::pick(rng, 0, m.nd() - 1);
        m.set(*at, w, d, !m.holds(*at, w, d));
        ++filt_n;
        if (!verify_filtration(f).passed()) ++filt_hit;
    }

    // χ₀ interpolates χ₀ ∧ a and χ₀ ∨ b; negating χ or renaming an atom of χ to a must be refuted.
    int cand_hit = 0, cand_n = 0;
    SearchBounds b = bounds(2, 2, 2, 2);
    while (cand_n < 50) {
        Formula chi = qtest::random_formula(rng, {"p", "q"}, 5);
        if (signature_of(chi).empty()) continue;
        if (check_sat_bounded(chi, Logic::Q1S5, b).outcome != Outcome::Yes) continue;
        Formula phi = mk_and(chi, mk_atom("a")), psi = mk_or(chi, mk_atom("b"));
        Signature sigma = sig_intersection(signature_of(phi), signature_of(psi));
        if (verify_candidate(CandidateKind::Interpolant, chi, phi, psi, sigma, Logic::Q1S5, b).outcome != Outcome::Yes)
            continue;
        bool done = false;
        Formula bad = cand_n % 2 == 0 ? mk_not(chi) : replace_first_atom(chi, "a", done);
        ++cand_n;
        if (verify_candidate(CandidateKind::Interpolant, bad, phi, psi, sigma, Logic::Q1S5, b).outcome == Outcome::No)
            ++cand_hit;
    }
    return {bisim_hit == 50 && filt_n == 50 && filt_hit == 50 && cand_hit == 50,
            "rejected: bisimulation " + std::to_string(bisim_hit) + "/" + std::to_string(bisim_n) + ", filtration " +
                std::to_string(filt_hit) + "/" + std::to_string(filt_n) + ", candidate " + std::to_string(cand_hit) +
                "/" + std::to_string(cand_n)};
}

}  // namespace

int main()
{
    struct Criterion {
        const char* name;
        double limit;
        std::function<Outcome_()> run;
    };
    std::vector<Criterion> cs = {
        {"marx-areces interpolant existence", 60, marx_areces},
        {"fine definability failure", 60, fine_definability},
        {"s5 bisimulation equals general bisimulation", 120, s5_equivalence},
        {"pair filtration", 120, filtration},
        {"characteristic formulas and k-bisimulation", 120, k_triangle},
        {"reduction coherence", 120, reduction_coherence},
        {"ladder chain", 120, ladder},
        {"k example pair", 120, example_k},
        {"standpoint knowledge base", 120, standpoints},
        {"square model bridge", 120, square_bridge},
        {"mutation sensitivity", 120, mutations},
    };
    int failed = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome_ o;
        try {
            o = cs[i].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass && secs <= cs[i].limit;
        if (!pass) ++failed;
        std::printf("%s %2zu %s: %s [%.2fs, limit %.0fs]\n", pass ? "PASS" : "FAIL", i + 1, cs[i].name,
                    o.detail.c_str(), secs, cs[i].limit);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria pass\n", static_cast<int>(cs.size()) - failed, cs.size());
    return failed == 0 ? 0 : 1;
}
