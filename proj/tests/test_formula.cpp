#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qml/dag.hpp"
#include "qml/formula.hpp"
#include "qml/gallery.hpp"
#include "support.hpp"

using namespace qml;

TEST_CASE("parse builds the expected tree")
{
    Formula f = parse_formula("E []p");
    REQUIRE(f->op == Op::Exists);
    REQUIRE(f->a->op == Op::Box);
    CHECK(f->a->a->op == Op::Atom);
    CHECK(f->a->a->name == "p");
    CHECK(print_formula(f) == "E []p");
}

TEST_CASE("fine axiom has implication at the root")
{
    Formula f = parse_formula(fixtures::kFineAxiom1);
    CHECK(f->op == Op::Implies);
    CHECK(f->a->op == Op::Atom);
    CHECK(f->b->op == Op::Diamond);
    CHECK(f->b->a->op == Op::Forall);
}

TEST_CASE("precedence and associativity")
{
    CHECK(equal(parse_formula("p & q | r"), mk_or(mk_and(mk_atom("p"), mk_atom("q")), mk_atom("r"))));
    CHECK(equal(parse_formula("p -> q -> r"), mk_implies(mk_atom("p"), mk_implies(mk_atom("q"), mk_atom("r")))));
    CHECK(equal(parse_formula("~<>p"), mk_not(mk_diamond(mk_atom("p")))));
    CHECK(equal(parse_formula("true & false"), mk_and(mk_top(), mk_bottom())));
}

TEST_CASE("syntax errors carry a position")
{
    CHECK_THROWS_AS(parse_formula("p &"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(p"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("p)"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("p $ q"), SyntaxError);
    try {
        parse_formula("p &\n  & q");
        FAIL("expected a syntax error");
    } catch (const SyntaxError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 3);
    }
}

TEST_CASE("printing round-trips on random formulas")
{
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        Formula f = qtest::random_formula(rng, {"p", "q", "r"}, 12);
        CHECK(equal(parse_formula(print_formula(f)), f));
        CHECK(equal(parse_formula(print_formula(f, true)), f));
    }
}

TEST_CASE("signatures")
{
    CHECK(signature_of(mk_top()).empty());
    Formula phi = parse_formula(fixtures::kMarxPhi), psi = parse_formula(fixtures::kMarxPsi);
    CHECK(signature_of(phi) == Signature{"e", "p0", "p1", "p2"});
    CHECK(signature_of(psi) == Signature{"b0", "b1", "e"});
    CHECK(sig_intersection(signature_of(phi), signature_of(psi)) == Signature{"e"});
    CHECK(parse_signature("q, p,q") == Signature{"p", "q"});
    CHECK(print_signature({"b", "a"}) == "a,b");
    CHECK_THROWS(parse_signature("p,1q"));
}

TEST_CASE("closures")
{
    Dag dag;
    int p = dag.add(parse_formula("p"));
    ClosureIndex c = closure(dag, {p, p});
    CHECK(c.size() == 2);
    CHECK(c.find(p) >= 0);
    CHECK(c.find(dag.neg(p)) >= 0);
    CHECK(c.exists_members.empty());
    CHECK(c.diamond_members.empty());

    int f = dag.add(parse_formula("E <>p"));
    int t = dag.top();
    ClosureIndex c2 = closure(dag, {f, t});
    int dia = dag.diamond(dag.atom("p"));
    auto has = [&](const std::vector<int>& xs, int id) {
        for (int i : xs)
            if (c2.members[static_cast<std::size_t>(i)] == id) return true;
        return false;
    };
    CHECK(has(c2.exists_members, f));
    CHECK(has(c2.exists_members, dag.neg(f)));
    CHECK(has(c2.diamond_members, dia));
    CHECK(has(c2.diamond_members, dag.neg(dia)));
    for (int i = 0; i < c2.size(); ++i)
        CHECK(c2.members[static_cast<std::size_t>(c2.negation[static_cast<std::size_t>(i)])] ==
              dag.neg(c2.members[static_cast<std::size_t>(i)]));
}

TEST_CASE("modal depth")
{
    CHECK(modal_depth(parse_formula("p")) == 0);
    CHECK(modal_depth(parse_formula("E <> [] p & <> q")) == 2);
    Formula psi = parse_formula("A ((a <-> [] [] a) & ([] [] a <-> <> <> a)) & [] <> true");
    CHECK(modal_depth(psi) == 2);
    Dag dag;
    CHECK(dag.modal_depth(dag.add(psi)) == 2);
}

TEST_CASE("renaming outside a signature")
{
    Formula f = rename_outside(parse_formula("p & q"), {"p"});
    CHECK(print_formula(f, true) == "p & q'");
    Formula fine = parse_formula(std::string("(") + fixtures::kFineAxiom1 + ") & (" + fixtures::kFineAxiom2 + ")");
    Formula r = rename_outside(fine, {"inPower"});
    CHECK(signature_of(r) == Signature{"inPower", "rep'"});
    Renaming ren = fresh_renaming({"p", "q"}, {"p"}, {"q'"});
    CHECK(ren.at("q") == "q''");
}

TEST_CASE("normalization is idempotent and preserves truth")
{
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        Formula f = qtest::random_formula(rng, {"p", "q"}, 10);
        Formula n = normalize(f);
        CHECK(is_core(n));
        CHECK(equal(normalize(n), n));
        KripkeModel m = qtest::random_s5(rng, 2, 2, {"p", "q"});
        for (int w = 0; w < 2; ++w)
            for (int d = 0; d < 2; ++d) CHECK(qtest::naive_eval(m, w, d, f) == qtest::naive_eval(m, w, d, n));
    }
    for (const auto& name : gallery_names()) {
        GalleryItem it = gallery_build(name);
        for (const auto& [k, f] : it.formulas)
            for (const auto& [mk, m] : it.models)
                for (int w = 0; w < m.nw(); ++w)
                    for (int d = 0; d < m.nd(); ++d)
                        CHECK(qtest::naive_eval(m, w, d, f) == qtest::naive_eval(m, w, d, normalize(f)));
    }
}

TEST_CASE("dag hash-consing")
{
    Dag dag;
    int a = dag.add(parse_formula("<>p & q"));
    int b = dag.add(parse_formula("<>p & q"));
    CHECK(a == b);
    CHECK(dag.neg(dag.neg(a)) == a);
    CHECK(equal(normalize(dag.to_formula(a)), normalize(parse_formula("<>p & q"))));
}
