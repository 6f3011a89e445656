#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "qml/gallery.hpp"
#include "qml/translate.hpp"
#include "support.hpp"

using namespace qml;

namespace {

// Square model plus a random bijection from elements to worlds.
std::vector<int> random_bijection(std::mt19937& rng, int n)
{
    std::vector<int> f(static_cast<std::size_t>(n));
    std::iota(f.begin(), f.end(), 0);
    std::shuffle(f.begin(), f.end(), rng);
    return f;
}

}  // namespace

TEST_CASE("dagger translation")
{
    CHECK(print_fo(dagger_translation(parse_formula("p"))) == "(p y x)");
    CHECK(print_fo(dagger_translation(parse_formula("<> E p"))) == "(exists y (exists x (p y x)))");
    CHECK(print_fo(dagger_translation(parse_formula("[] ~q"))) == "(forall y (not (q y x)))");
    std::mt19937 rng(81);
    for (int i = 0; i < 200; ++i) {
        FOFormula t = dagger_translation(qtest::random_formula(rng, {"p", "q"}, 12));
        CHECK(substitution_free(t));
        for (char v : free_vars(t)) CHECK((v == 'x' || v == 'y'));
    }
}

TEST_CASE("standard translation")
{
    CHECK(print_fo(standard_translation(parse_formula("p"))) == "(p z x)");
    CHECK(print_fo(standard_translation(parse_formula("<> p"))) == "(exists y (and (R z y) (p y x)))");
    CHECK(print_fo(standard_translation(parse_formula("<> <> p"))) ==
          "(exists y (and (R z y) (exists z (and (R y z) (p z x)))))");
    CHECK(predicates(standard_translation(parse_formula("<> p & E q"))) == std::set<std::string>{"R", "p", "q"});
    CHECK_FALSE(substitution_free(standard_translation(parse_formula("p"))));
}

TEST_CASE("tptp output")
{
    std::string s = print_tptp(dagger_translation(parse_formula("<> p'")), "ax");
    CHECK(s == "fof(ax, axiom, ! [X] : ? [Y] : p_prime(Y,X)).");
}

TEST_CASE("co-evaluation on square models")
{
    std::mt19937 rng(82);
    for (int i = 0; i < 100; ++i) {
        int n = qtest::pick(rng, 1, 3);
        KripkeModel m = qtest::random_s5(rng, n, n, {"p", "q"});
        Formula f = qtest::random_formula(rng, {"p", "q"}, 10);
        std::vector<int> bij = random_bijection(rng, n);
        FOStructure s = square_to_fo(m, bij);
        FOFormula t = dagger_translation(f);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                CHECK(fo_eval(s, t, {b, a, 0}) == qtest::naive_eval(m, bij[static_cast<std::size_t>(a)], b, f));
        KripkeModel back = fo_to_square(s);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                CHECK(qtest::naive_eval(back, a, b, f) == fo_eval(s, t, {b, a, 0}));
    }
}

TEST_CASE("standard translation agrees with Kripke semantics")
{
    std::mt19937 rng(83);
    for (int i = 0; i < 100; ++i) {
        int n = qtest::pick(rng, 1, 3);
        KripkeModel m = qtest::random_k(rng, n, n, {"p"});
        FOStructure s;
        s.size = n;
        for (const auto& [p, bits] : m.val) s.preds[p] = bits;
        Bits r(static_cast<std::size_t>(n * n), 0);
        for (int w = 0; w < n; ++w)
            for (int v : m.successors(w)) r[static_cast<std::size_t>(w * n + v)] = 1;
        s.preds[kAccessibility] = r;
        Formula f = qtest::random_formula(rng, {"p"}, 10);
        FOFormula t = standard_translation(f);
        for (int w = 0; w < n; ++w)
            for (int d = 0; d < n; ++d) CHECK(fo_eval(s, t, {d, 0, w}) == qtest::naive_eval(m, w, d, f));
    }
}

TEST_CASE("square bridge on the marx-areces formula")
{
    KripkeModel m = marx_model1();
    REQUIRE(m.nw() == m.nd());
    GalleryItem it = gallery_build("marx_areces");
    FOStructure s = square_to_fo(m);
    CHECK(fo_eval(s, dagger_translation(it.formulas.at("phi")), {0, 0, 0}));
}

TEST_CASE("bridge rejects bad inputs")
{
    KripkeModel m = make_model(2, 3, true);
    CHECK_THROWS_AS(square_to_fo(m), ModelError);
    KripkeModel sq = make_model(2, 2, true);
    CHECK_THROWS_AS(square_to_fo(sq, {0, 0}), ModelError);
    CHECK_THROWS_AS(square_to_fo(sq, {0}), ModelError);
}
