#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qml/alcu.hpp"
#include "qml/gallery.hpp"
#include "support.hpp"

using namespace qml;

namespace {

Concept random_concept(std::mt19937& rng, int size)
{
    static const std::vector<std::string> names = {"A", "B"};
    if (size <= 1 || qtest::coin(rng, 0.15)) {
        int k = qtest::pick(rng, 0, 2);
        return k == 2 ? c_top() : c_name(names[static_cast<std::size_t>(k)]);
    }
    switch (qtest::pick(rng, 0, 8)) {
    case 0: return c_not(random_concept(rng, size - 1));
    case 1: return c_and(random_concept(rng, size / 2), random_concept(rng, size / 2));
    case 2: return c_or(random_concept(rng, size / 2), random_concept(rng, size / 2));
    case 3: return c_some("r", random_concept(rng, size - 1));
    case 4: return c_all("r", random_concept(rng, size - 1));
    case 5: return c_some(kUniversalRole, random_concept(rng, size - 1));
    case 6: return c_all(kUniversalRole, random_concept(rng, size - 1));
    case 7: return c_diamond(random_concept(rng, size - 1));
    default: return c_box(random_concept(rng, size - 1));
    }
}

KripkeModel random_dl(std::mt19937& rng, int nw, int nd)
{
    KripkeModel m = qtest::random_s5(rng, nw, nd, {"A", "B"});
    for (int w = 0; w < nw; ++w)
        for (int d = 0; d < nd; ++d)
            for (int e = 0; e < nd; ++e)
                if (qtest::coin(rng, 0.35)) m.set_edge("r", w, d, e);
    return m;
}

// Truth clauses read directly off the concept tree.
bool naive_dl(const KripkeModel& m, int w, int d, const Concept& c)
{
    switch (c->op) {
    case COp::Top: return true;
    case COp::Bottom: return false;
    case COp::Name: return m.holds(c->name, w, d);
    case COp::Not: return !naive_dl(m, w, d, c->a);
    case COp::And: return naive_dl(m, w, d, c->a) && naive_dl(m, w, d, c->b);
    case COp::Or: return naive_dl(m, w, d, c->a) || naive_dl(m, w, d, c->b);
    case COp::Some:
    case COp::All: {
        bool some = c->op == COp::Some;
        for (int e = 0; e < m.nd(); ++e) {
            bool edge = c->name == kUniversalRole || m.edge(c->name, w, d, e);
            if (edge && naive_dl(m, w, e, c->a) == some) return some;
        }
        return !some;
    }
    case COp::Diamond:
    case COp::Box: {
        bool dia = c->op == COp::Diamond;
        for (int v = 0; v < m.nw(); ++v)
            if (naive_dl(m, v, d, c->a) == dia) return dia;
        return !dia;
    }
    }
    return false;
}

SearchBounds bounds(int w, int d)
{
    SearchBounds b;
    b.w1 = b.w2 = w;
    b.d1 = b.d2 = d;
    return b;
}

}  // namespace

TEST_CASE("concept syntax")
{
    Concept c = parse_concept("some uses . Logic");
    CHECK(c->op == COp::Some);
    CHECK(c->name == "uses");
    CHECK(c->a->op == COp::Name);
    Concept def = parse_concept(fixtures::kKRDefinition);
    CHECK(equal(parse_concept(print_concept(def)), def));
    std::mt19937 rng(71);
    for (int i = 0; i < 500; ++i) {
        Concept x = random_concept(rng, 10);
        CHECK(equal(parse_concept(print_concept(x)), x));
        CHECK(equal(parse_concept(print_concept(x, true)), x));
    }
    CHECK_THROWS(parse_concept("some . A"));
    CHECK_THROWS(parse_concept("box[s] A"));
}

TEST_CASE("model checking follows the truth clauses")
{
    std::mt19937 rng(72);
    for (int i = 0; i < 200; ++i) {
        KripkeModel m = random_dl(rng, qtest::pick(rng, 1, 2), qtest::pick(rng, 1, 3));
        Concept c = random_concept(rng, 10);
        for (int w = 0; w < m.nw(); ++w)
            for (int d = 0; d < m.nd(); ++d) {
                CHECK(dl_model_check(m, {w, d}, c) == naive_dl(m, w, d, c));
                CHECK(dl_model_check(m, {w, d}, c_top()));
            }
    }
}

TEST_CASE("ontology concepts")
{
    CHECK(equal(ontology_to_concept({}), c_top()));
    Ontology o = parse_ontology("A <= B");
    CHECK(equal(ontology_to_concept(o), c_all(kUniversalRole, c_or(c_not(c_name("A")), c_name("B")))));
    std::mt19937 rng(73);
    for (int i = 0; i < 100; ++i) {
        Ontology r = {{random_concept(rng, 4), random_concept(rng, 4)}, {random_concept(rng, 4), random_concept(rng, 4)}};
        KripkeModel m = random_dl(rng, 2, 2);
        Concept oc = ontology_to_concept(r);
        for (int w = 0; w < 2; ++w) {
            bool all = true;
            for (const auto& ci : r)
                for (int d = 0; d < 2; ++d) all = all && (!naive_dl(m, w, d, ci.lhs) || naive_dl(m, w, d, ci.rhs));
            for (int d = 0; d < 2; ++d) CHECK(naive_dl(m, w, d, oc) == all);
        }
    }
}

TEST_CASE("bounded entailment")
{
    SearchBounds b = bounds(2, 2);
    CHECK(entails_bounded({}, {c_top(), c_top()}, b).outcome == Outcome::Yes);
    Verdict v = entails_bounded(parse_ontology("A <= B"), {c_name("B"), c_name("A")}, b);
    REQUIRE(v.outcome == Outcome::No);
    const KripkeModel& m = v.models[0];
    CHECK(naive_dl(m, v.points[0].w, v.points[0].d, c_and(c_name("B"), c_not(c_name("A")))));
    CHECK(entails_bounded(parse_ontology("A <= B\nB <= C"), {c_name("A"), c_name("C")}, b).outcome != Outcome::No);
}

TEST_CASE("triple bisimulations")
{
    std::mt19937 rng(74);
    for (int i = 0; i < 60; ++i) {
        KripkeModel a = random_dl(rng, qtest::pick(rng, 1, 2), qtest::pick(rng, 1, 3));
        KripkeModel b = random_dl(rng, qtest::pick(rng, 1, 2), qtest::pick(rng, 1, 3));
        Signature sigma = {"A", "r"};
        TripleBisim t = max_bisim_alcu(a, b, sigma);
        CHECK(verify_bisimulation(t, a, b, sigma).empty());
        Concept c = random_concept(rng, 8);
        if (concept_names(c).count("B")) continue;
        for (int x = 0; x < a.npoints(); ++x)
            for (int y = 0; y < b.npoints(); ++y)
                if (t.beta.has(x, y)) CHECK(naive_dl(a, x / a.nd(), x % a.nd(), c) == naive_dl(b, y / b.nd(), y % b.nd(), c));
        TripleBisim id = identity_triple(a);
        CHECK(verify_bisimulation(id, a, a, {"A", "B", "r"}).empty());
    }
}

TEST_CASE("role-free models reduce to S5 bisimulation")
{
    std::mt19937 rng(75);
    for (int i = 0; i < 60; ++i) {
        KripkeModel a = qtest::random_s5(rng, qtest::pick(rng, 1, 3), qtest::pick(rng, 1, 3), {"A", "B"});
        KripkeModel b = qtest::random_s5(rng, qtest::pick(rng, 1, 3), qtest::pick(rng, 1, 3), {"A", "B"});
        TripleBisim t = max_bisim_alcu(a, b, {"A"});
        S5Bisim s = max_bisim_s5(a, b, {"A"});
        CHECK(t.beta == s5_point_relation(s, a, b, {"A"}));
    }
}

TEST_CASE("removing a role edge shrinks the relation")
{
    KripkeModel a = make_model(1, 2, true), b = make_model(1, 2, true);
    a.set("A", 0, 1);
    b.set("A", 0, 1);
    a.set_edge("r", 0, 0, 1);
    b.set_edge("r", 0, 0, 1);
    CHECK(max_bisim_alcu(a, b, {"A", "r"}).beta.has(0, 0));
    b.set_edge("r", 0, 0, 1, false);
    CHECK_FALSE(max_bisim_alcu(a, b, {"A", "r"}).beta.has(0, 0));
}

TEST_CASE("concept interpolation")
{
    SearchBounds b = bounds(2, 2);
    Concept c = parse_concept("A & some r.B");
    CHECK(decide_iep_alcu(c, c, b).outcome == Outcome::Yes);
    Verdict bot = decide_iep_alcu(parse_concept("A & ~A"), parse_concept("B"), b);
    CHECK(bot.outcome == Outcome::Yes);
    CHECK(bot.candidate == "Bottom");
    Verdict no = decide_iep_alcu(parse_concept("A"), parse_concept("B"), b);
    REQUIRE(no.outcome == Outcome::No);
    CHECK(naive_dl(no.models[0], no.points[0].w, no.points[0].d, c_name("A")));
    CHECK_FALSE(naive_dl(no.models[1], no.points[1].w, no.points[1].d, c_name("B")));

    GalleryItem it = gallery_build("marx_areces");
    Concept mc = concept_from_formula(it.formulas.at("phi")), md = concept_from_formula(it.formulas.at("psi"));
    SearchBounds mb;
    mb.w1 = 3, mb.d1 = 3, mb.w2 = 2, mb.d2 = 2;
    Verdict mv = decide_iep_alcu(mc, md, mb);
    REQUIRE(mv.outcome == Outcome::No);
    CHECK(naive_dl(mv.models[0], 0, 0, mc));
    CHECK_FALSE(naive_dl(mv.models[1], 0, 0, md));
}

TEST_CASE("role-free instances agree with the modal decider")
{
    std::mt19937 rng(76);
    for (int i = 0; i < 25; ++i) {
        Formula phi = qtest::random_formula(rng, {"p", "q"}, 5), psi = qtest::random_formula(rng, {"q", "r"}, 5);
        SearchBounds b = bounds(2, 2);
        Verdict s = decide_iep_s5(phi, psi, b);
        Verdict a = decide_iep_alcu(concept_from_formula(phi), concept_from_formula(psi), b);
        if (s.outcome != Outcome::Unknown && a.outcome != Outcome::Unknown) CHECK(s.outcome == a.outcome);
    }
}

TEST_CASE("reductions modulo an ontology")
{
    ConceptInstance e = reduce_ontology_problem(OntologyProblem::IepModulo, {}, {"A"}, {c_name("A"), c_name("B")});
    CHECK(equal(e.left, c_name("A")));
    CHECK(equal(e.right, c_name("B")));
    Ontology o = parse_ontology("A <= B");
    ConceptInstance m = reduce_ontology_problem(OntologyProblem::IepModulo, o, {"A", "B"}, {c_name("A"), c_name("B")});
    CHECK(equal(m.left, c_and(ontology_to_concept(o), c_name("A"))));
    CHECK(equal(m.right, c_or(c_not(ontology_to_concept(o)), c_name("B"))));
    ConceptInstance oi = reduce_ontology_problem(OntologyProblem::Oiep, o, {"A"}, {c_name("A"), c_name("B")});
    CHECK(equal(oi.left, ontology_to_concept(o)));
    CHECK(equal(oi.right, c_or(c_not(c_name("A")), c_name("B"))));
    CHECK(parse_ontology_problem("edep_modulo") == OntologyProblem::EdepModulo);
}

TEST_CASE("standpoint encoding")
{
    StandpointOntology so = parse_standpoint_ontology("standpoints s\nbox[*] A <= B\n");
    Ontology enc = encode_standpoint(so);
    REQUIRE(enc.size() == 2);
    Inclusion ax = encode_standpoint_inclusion(so, so.axioms[0]);
    CHECK(equal(ax.lhs, c_top()));
    CHECK(equal(ax.rhs, c_box(c_all(kUniversalRole, c_or(c_not(c_name("A")), c_name("B"))))));
    CHECK(standpoint_concept("s1") == "S1");
    CHECK_THROWS(parse_standpoint_ontology("standpoints s\nbox[t] A <= B\n"));
}

TEST_CASE("explicit definition of KR modulo the encoded knowledge base")
{
    StandpointOntology so = parse_standpoint_ontology(fixtures::kStandpointKB);
    Concept kc = ontology_to_concept(encode_standpoint(so));
    SearchBounds b = bounds(2, 4);
    Concept def = parse_concept(fixtures::kKRDefinition);
    Verdict v = verify_concept_candidate(CandidateKind::Definition, def, kc, c_name("KR"), parse_signature(fixtures::kKRSigma), b);
    CHECK(v.outcome != Outcome::No);
    so.axioms.erase(so.axioms.begin());
    Concept weak = ontology_to_concept(encode_standpoint(so));
    Verdict w = verify_concept_candidate(CandidateKind::Definition, def, weak, c_name("KR"), parse_signature(fixtures::kKRSigma), b);
    REQUIRE(w.outcome == Outcome::No);
    REQUIRE(w.models.size() == 1);
    CHECK(naive_dl(w.models[0], w.points[0].w, w.points[0].d, c_and(weak, c_not(c_iff(c_name("KR"), def)))));
}

TEST_CASE("full-mosaic filtration on a one-role pair")
{
    SearchBounds b = bounds(2, 2);
    Concept c = parse_concept("A & some r.B"), d = parse_concept("some r.(B & C)");
    Verdict v = decide_iep_alcu(c, d, b);
    REQUIRE(v.outcome == Outcome::No);
    AlcFiltration f = filtrate_pair_alcu(v.models[0], v.points[0], v.models[1], v.points[1], c, d);
    AlcFiltrationReport r = verify_filtration(f);
    CHECK(r.passed());
    CHECK(f.pi_count <= f.n * f.n);
    KripkeModel one = make_model(1, 1, true);
    one.set("A", 0, 0);
    AlcFiltration g = filtrate_pair_alcu(one, {0, 0}, one, {0, 0}, c_name("A"), c_not(c_name("A")));
    CHECK(verify_filtration(g).passed());
}
