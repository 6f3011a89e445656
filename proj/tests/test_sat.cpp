#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qml/decide.hpp"
#include "qml/gallery.hpp"
#include "qml/ground.hpp"
#include "qml/sat.hpp"
#include "support.hpp"

using namespace qml;

namespace {

using Cnf = std::vector<std::vector<sat::Lit>>;

bool brute_sat(int nvars, const Cnf& cnf)
{
    for (std::uint32_t a = 0; a < (1u << nvars); ++a) {
        bool all = true;
        for (const auto& c : cnf) {
            bool any = false;
            for (sat::Lit l : c) any = any || (((a >> sat::var_of(l)) & 1u) != 0) != sat::sign_of(l);
            all = all && any;
        }
        if (all) return true;
    }
    return false;
}

// Any model of φ at (0,0) with |W| ≤ mw, |D| ≤ md, by exhaustive enumeration.
bool brute_model(const Formula& f, int mw, int md, bool s5)
{
    ModelEnumerator en(signature_of(f), mw, md, s5);
    while (auto m = en.next())
        if (qtest::naive_eval(*m, 0, 0, f)) return true;
    return false;
}

}  // namespace

TEST_CASE("solver agrees with truth-table search on random 3-CNF")
{
    std::mt19937 rng(21);
    for (int i = 0; i < 400; ++i) {
        int n = qtest::pick(rng, 3, 12);
        int m = qtest::pick(rng, 1, 6 * n);
        Cnf cnf;
        sat::Solver s;
        for (int v = 0; v < n; ++v) s.new_var();
        bool ok = true;
        for (int c = 0; c < m; ++c) {
            std::vector<sat::Lit> cl;
            for (int k = 0; k < 3; ++k) cl.push_back(sat::mk_lit(qtest::pick(rng, 0, n - 1), qtest::coin(rng)));
            cnf.push_back(cl);
            ok = s.add_clause(cl) && ok;
        }
        bool expect = brute_sat(n, cnf);
        bool got = ok && s.solve();
        REQUIRE(got == expect);
        if (got)
            for (const auto& c : cnf) {
                bool any = false;
                for (sat::Lit l : c) any = any || s.lit_value(l);
                CHECK(any);
            }
    }
}

TEST_CASE("solver is incremental")
{
    sat::Solver s;
    int a = s.new_var(), b = s.new_var();
    s.add_clause({sat::mk_lit(a), sat::mk_lit(b)});
    CHECK(s.solve());
    s.add_clause({sat::mk_lit(a, true)});
    CHECK(s.solve());
    CHECK(s.value(b));
    s.add_clause({sat::mk_lit(b, true)});
    CHECK_FALSE(s.solve());
}

TEST_CASE("pigeonhole 6 into 5 is unsatisfiable")
{
    sat::Solver s;
    const int P = 6, H = 5;
    auto var = [&](int p, int h) { return p * H + h; };
    for (int i = 0; i < P * H; ++i) s.new_var();
    for (int p = 0; p < P; ++p) {
        std::vector<sat::Lit> c;
        for (int h = 0; h < H; ++h) c.push_back(sat::mk_lit(var(p, h)));
        s.add_clause(c);
    }
    for (int h = 0; h < H; ++h)
        for (int p = 0; p < P; ++p)
            for (int q = p + 1; q < P; ++q) s.add_clause({sat::mk_lit(var(p, h), true), sat::mk_lit(var(q, h), true)});
    CHECK_FALSE(s.solve());
    CHECK(s.conflicts() > 0);
}

TEST_CASE("grounded models satisfy their formula")
{
    std::mt19937 rng(2);
    for (int i = 0; i < 80; ++i) {
        Formula f = qtest::random_formula(rng, {"p", "q"}, 10);
        Dag dag;
        int root = dag.add(f);
        sat::Solver s;
        Grounder g(dag, s, Shape::s5_grid(2, 2));
        g.require(root, 0, 0);
        std::vector<int> atoms = dag.atoms_of({root});
        g.declare(atoms, {});
        if (s.solve()) {
            KripkeModel m = g.extract(atoms, {});
            CHECK(qtest::naive_eval(m, 0, 0, f));
        }
    }
}

TEST_CASE("bounded satisfiability matches exhaustive enumeration")
{
    std::mt19937 rng(17);
    for (int i = 0; i < 120; ++i) {
        bool s5 = qtest::coin(rng, 0.6);
        Formula f = qtest::random_formula(rng, {"p", "q"}, 9);
        SearchBounds b;
        b.w1 = 2, b.d1 = 2, b.depth = 1, b.branch = 2;
        Verdict v = check_sat_bounded(f, s5 ? Logic::Q1S5 : Logic::Q1K, b);
        if (v.outcome == Outcome::Yes) {
            REQUIRE(v.models.size() == 1);
            CHECK(qtest::naive_eval(v.models[0], v.points[0].w, v.points[0].d, f));
        }
        if (s5) {
            bool any = brute_model(f, 2, 2, true);
            CHECK((v.outcome == Outcome::Yes) == any);
            if (v.outcome == Outcome::No) CHECK_FALSE(any);
        }
    }
}

TEST_CASE("contradictions and tautologies")
{
    SearchBounds b;
    b.w1 = b.d1 = 2;
    Verdict v = check_sat_bounded(parse_formula("p & ~p"), Logic::Q1S5, b);
    CHECK(v.outcome != Outcome::Yes);
    Verdict t = check_valid_bounded(parse_formula("[]p -> []p"), Logic::Q1S5, b);
    CHECK(t.outcome == Outcome::Yes);
    Verdict k = check_valid_bounded(parse_formula("[]p -> p"), Logic::Q1K, b);
    CHECK(k.outcome == Outcome::No);
    REQUIRE(k.models.size() == 1);
    CHECK_FALSE(qtest::naive_eval(k.models[0], k.points[0].w, k.points[0].d, parse_formula("[]p -> p")));
    CHECK(check_valid_bounded(parse_formula("[]p -> p"), Logic::Q1S5, b).outcome != Outcome::No);
}

TEST_CASE("fine knowledge base is satisfiable in a 2x2 model")
{
    GalleryItem it = gallery_build("fine");
    SearchBounds b;
    b.w1 = b.d1 = 2;
    b.props = {"rep"};
    Verdict v = check_sat_bounded(it.formulas.at("phi"), Logic::Q1S5, b);
    REQUIRE(v.outcome == Outcome::Yes);
    const KripkeModel& m = v.models[0];
    CHECK(m.nw() <= 2);
    CHECK(m.nd() <= 2);
    CHECK(qtest::naive_eval(m, v.points[0].w, v.points[0].d, it.formulas.at("phi")));
    for (int w = 0; w < m.nw(); ++w)
        for (int d = 1; d < m.nd(); ++d) CHECK(m.holds("rep", w, d) == m.holds("rep", w, 0));
}

TEST_CASE("tree shapes")
{
    auto ts = tree_shapes(1, 2);
    CHECK(ts.size() == 3);
    CHECK(tree_shapes(0, 3).size() == 1);
    CHECK(tree_shapes(2, 2).size() == 10);
}
