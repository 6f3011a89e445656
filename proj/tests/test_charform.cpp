#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qml/bisim.hpp"
#include "qml/charform.hpp"
#include "qml/gallery.hpp"
#include "support.hpp"

using namespace qml;

TEST_CASE("depth-zero characteristic formula of a single p-point")
{
    KripkeModel m = make_model(1, 1, false);
    m.set("p", 0, 0);
    Formula t = char_formula(m, {0, 0}, {"p"}, 0);
    CHECK(modal_depth(t) == 0);
    CHECK(signature_of(t) == Signature{"p"});
    Formula expect = parse_formula("p & E p & A p");
    std::mt19937 rng(61);
    for (int i = 0; i < 100; ++i) {
        KripkeModel n = qtest::random_k(rng, qtest::pick(rng, 1, 2), qtest::pick(rng, 1, 3), {"p"});
        for (int w = 0; w < n.nw(); ++w)
            for (int d = 0; d < n.nd(); ++d) CHECK(qtest::naive_eval(n, w, d, t) == qtest::naive_eval(n, w, d, expect));
    }
}

TEST_CASE("literal type formula")
{
    KripkeModel m = make_model(1, 1, false);
    m.set("p", 0, 0);
    Formula t = literal_type_formula(m, {0, 0}, {"p", "q"});
    CHECK(qtest::naive_eval(m, 0, 0, t));
    KripkeModel n = make_model(1, 1, false);
    n.set("p", 0, 0);
    n.set("q", 0, 0);
    CHECK_FALSE(qtest::naive_eval(n, 0, 0, t));
}

TEST_CASE("characteristic formulas define k-bisimilarity")
{
    std::mt19937 rng(62);
    Signature sigma = {"p", "q"};
    for (int i = 0; i < 100; ++i) {
        KripkeModel a = qtest::random_k(rng, qtest::pick(rng, 1, 2), qtest::pick(rng, 1, 2), {"p", "q"});
        KripkeModel b = qtest::random_k(rng, qtest::pick(rng, 1, 2), qtest::pick(rng, 1, 2), {"p", "q"});
        int k = qtest::pick(rng, 0, 2);
        std::vector<Relation> ref = qtest::naive_k_bisim(a, b, sigma, k);
        for (int x = 0; x < a.npoints(); ++x) {
            Formula t = char_formula(a, {x / a.nd(), x % a.nd()}, sigma, k);
            CHECK(modal_depth(t) <= k);
            CHECK(qtest::naive_eval(a, x / a.nd(), x % a.nd(), t));
            for (int y = 0; y < b.npoints(); ++y)
                CHECK(qtest::naive_eval(b, y / b.nd(), y % b.nd(), t) == ref[static_cast<std::size_t>(k)].has(x, y));
        }
    }
}

TEST_CASE("example pair: tau one of M holds at the point of M'")
{
    KripkeModel a = exk_model(), b = exk_model_prime();
    Formula t1 = char_formula(a, {0, 1}, {"a", "b"}, 1);
    Formula t2 = char_formula(a, {0, 1}, {"a", "b"}, 2);
    CHECK(model_check(b, {0, 2}, t1));
    CHECK_FALSE(model_check(b, {0, 2}, t2));
}
