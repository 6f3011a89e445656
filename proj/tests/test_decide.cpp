#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qml/bisim.hpp"
#include "qml/decide.hpp"
#include "qml/gallery.hpp"
#include "support.hpp"

using namespace qml;

namespace {

SearchBounds bounds(int w1, int d1, int w2, int d2)
{
    SearchBounds b;
    b.w1 = w1, b.d1 = d1, b.w2 = w2, b.d2 = d2;
    return b;
}

void check_pair_witness(const Verdict& v, const Formula& left, const Formula& right_negated, const Signature& sigma)
{
    REQUIRE(v.models.size() == 2);
    CHECK(qtest::naive_eval(v.models[0], v.points[0].w, v.points[0].d, left));
    CHECK(qtest::naive_eval(v.models[1], v.points[1].w, v.points[1].d, right_negated));
    GeneralBisim g{qtest::naive_bisim(v.models[0], v.models[1], sigma)};
    CHECK(g.beta.has(v.models[0].point(v.points[0].w, v.points[0].d), v.models[1].point(v.points[1].w, v.points[1].d)));
}

}  // namespace

TEST_CASE("completeness bounds")
{
    SizeBound s = completeness_bound_size(2, BoundProblem::Sat);
    CHECK(s.text_d() == "16");
    CHECK(s.text_w() == "64");
    CHECK(s.covered_by(64, 16));
    CHECK_FALSE(s.covered_by(63, 16));
    GalleryItem it = gallery_build("marx_areces");
    SizeBound m = completeness_bound(it.formulas.at("phi"), it.formulas.at("psi"), BoundProblem::IepS5);
    CHECK(m.log2_w > 20);
    CHECK(m.log2_d > 20);
}

TEST_CASE("unsatisfiable at the completeness bound")
{
    SearchBounds b = bounds(4096, 256, 1, 1);
    CHECK(check_sat_bounded(parse_formula("p & ~p"), Logic::Q1S5, b).outcome == Outcome::No);
    CHECK(check_sat_bounded(parse_formula("p & ~p"), Logic::Q1S5, bounds(2, 2, 1, 1)).outcome == Outcome::Unknown);
}

TEST_CASE("interpolation: trivial and fast-path answers")
{
    SearchBounds b = bounds(2, 2, 2, 2);
    Verdict same = decide_iep_s5(parse_formula("p"), parse_formula("p"), b);
    CHECK(same.outcome == Outcome::Yes);
    CHECK(same.candidate == "p");

    Formula phi = parse_formula("p & q"), psi = parse_formula("r");
    Verdict no = decide_iep_s5(phi, psi, b);
    REQUIRE(no.outcome == Outcome::No);
    check_pair_witness(no, phi, mk_not(psi), {});

    Verdict hinted = decide_iep_s5(parse_formula("p & q"), parse_formula("p | r"), b, {parse_formula("p")});
    CHECK(hinted.outcome == Outcome::Yes);
}

TEST_CASE("marx-areces has no interpolant within (3,3,2,2)")
{
    GalleryItem it = gallery_build("marx_areces");
    Formula phi = it.formulas.at("phi"), psi = it.formulas.at("psi");
    Verdict v = decide_iep_s5(phi, psi, bounds(3, 3, 2, 2));
    REQUIRE(v.outcome == Outcome::No);
    check_pair_witness(v, phi, mk_not(psi), {"e"});
    CHECK(check_valid_bounded(mk_implies(phi, psi), Logic::Q1S5, bounds(3, 3, 3, 3)).outcome != Outcome::No);
}

TEST_CASE("fine: rep is not explicitly definable from inPower")
{
    GalleryItem it = gallery_build("fine");
    Formula phi = it.formulas.at("phi"), rep = parse_formula("rep");
    SearchBounds b = bounds(2, 2, 3, 3);
    b.props = {"rep"};
    Verdict v = decide_edep_s5(phi, rep, {"inPower"}, b);
    REQUIRE(v.outcome == Outcome::No);
    check_pair_witness(v, mk_and(phi, rep), mk_and(phi, mk_not(rep)), {"inPower"});
}

TEST_CASE("definitions found from hints")
{
    Formula phi = parse_formula("A (q <-> p)");
    Verdict v = decide_edep_s5(phi, parse_formula("q"), {"p"}, bounds(2, 2, 2, 2), {parse_formula("p")});
    CHECK(v.outcome == Outcome::Yes);
    CHECK(v.candidate == "p");
}

TEST_CASE("candidate verification")
{
    SearchBounds b = bounds(2, 2, 2, 2);
    Formula p = parse_formula("p");
    CHECK(verify_candidate(CandidateKind::Interpolant, p, p, p, {}, Logic::Q1S5, b).outcome == Outcome::Yes);
    Verdict bad = verify_candidate(CandidateKind::Interpolant, parse_formula("q"), p, parse_formula("p | q"), {},
                                   Logic::Q1S5, b);
    CHECK(bad.outcome == Outcome::No);
    CHECK(bad.note.find("signature") != std::string::npos);
    Verdict wrong = verify_candidate(CandidateKind::Interpolant, parse_formula("<> p"), parse_formula("p & q"),
                                     parse_formula("p"), {}, Logic::Q1K, b);
    CHECK(wrong.outcome == Outcome::No);
    REQUIRE(wrong.models.size() == 1);
}

TEST_CASE("reductions between the two problems")
{
    GalleryItem it = gallery_build("fine");
    Formula phi = it.formulas.at("phi");
    ReducedInstance r = edep_to_iep(phi, parse_formula("rep"), {"inPower"});
    CHECK(equal(r.left, mk_and(phi, parse_formula("rep"))));
    CHECK(equal(r.right, mk_implies(rename_outside(phi, {"inPower"}), parse_formula("rep'"))));
    CHECK(r.sigma == Signature{"inPower"});

    ReducedInstance back = iep_to_edep(parse_formula("p"), parse_formula("p"));
    CHECK(print_formula(back.left, true) == "p -> p");
    CHECK(print_formula(back.right, true) == "p");
    CHECK(back.sigma == Signature{"p"});
    REQUIRE(back.side_validity.has_value());
}

TEST_CASE("both routes agree when decisive")
{
    std::mt19937 rng(41);
    int compared = 0;
    for (int i = 0; i < 40; ++i) {
        Formula phi = qtest::random_formula(rng, {"p", "q"}, 6), psi = qtest::random_formula(rng, {"q", "r"}, 6);
        SearchBounds b = bounds(2, 2, 2, 2);
        Verdict direct = decide_iep_s5(phi, psi, b), routed = decide_iep_via_edep(phi, psi, b);
        if (direct.outcome != Outcome::Unknown && routed.outcome != Outcome::Unknown) {
            CHECK(direct.outcome == routed.outcome);
            ++compared;
        }
    }
    CHECK(compared > 10);
}

TEST_CASE("a validity countermodel forces no")
{
    std::mt19937 rng(42);
    for (int i = 0; i < 40; ++i) {
        Formula phi = qtest::random_formula(rng, {"p", "q"}, 6), psi = qtest::random_formula(rng, {"q", "r"}, 6);
        SearchBounds b = bounds(2, 2, 2, 2);
        if (check_valid_bounded(mk_implies(phi, psi), Logic::Q1S5, b).outcome == Outcome::No)
            CHECK(decide_iep_s5(phi, psi, b).outcome == Outcome::No);
    }
}

TEST_CASE("enlarging bounds never flips a decisive answer")
{
    std::mt19937 rng(43);
    for (int i = 0; i < 30; ++i) {
        Formula phi = qtest::random_formula(rng, {"p", "q"}, 6), psi = qtest::random_formula(rng, {"q", "r"}, 6);
        Verdict small = decide_iep_s5(phi, psi, bounds(1, 2, 1, 2)), large = decide_iep_s5(phi, psi, bounds(2, 2, 2, 2));
        if (small.outcome != Outcome::Unknown) CHECK(large.outcome == small.outcome);
    }
}

TEST_CASE("serial and parallel pair searches agree")
{
    GalleryItem it = gallery_build("marx_areces");
    SearchBounds b = bounds(3, 3, 2, 2);
    b.parallel = false;
    Verdict s = decide_iep_s5(it.formulas.at("phi"), it.formulas.at("psi"), b);
    b.parallel = true;
    Verdict p = decide_iep_s5(it.formulas.at("phi"), it.formulas.at("psi"), b);
    CHECK(s.outcome == p.outcome);
    CHECK(s.to_json()["witness"] == p.to_json()["witness"]);
}

TEST_CASE("K interpolation")
{
    SearchBounds b = bounds(2, 2, 2, 2);
    b.depth = 2;
    Formula phi = parse_formula("<> p"), psi = parse_formula("<> q");
    Verdict v = decide_iep_k(phi, psi, b);
    REQUIRE(v.outcome == Outcome::No);
    CHECK(qtest::naive_eval(v.models[0], v.points[0].w, v.points[0].d, phi));
    CHECK_FALSE(qtest::naive_eval(v.models[1], v.points[1].w, v.points[1].d, psi));
    CHECK(decide_iep_k(parse_formula("[] p & [] q"), parse_formula("[] p | r"), b, {parse_formula("[] p")}).outcome ==
          Outcome::Yes);
    GalleryItem ek = gallery_build("exK");
    CHECK(decide_iep_k(ek.formulas.at("phi"), ek.formulas.at("psi"), b).outcome != Outcome::No);
}

TEST_CASE("search shapes are ordered by size")
{
    auto shapes = search_shapes(Logic::Q1S5, 2, 3, 0, 0);
    CHECK(shapes.size() == 6);
    for (std::size_t i = 1; i < shapes.size(); ++i)
        CHECK(shapes[i - 1].nw * shapes[i - 1].nd <= shapes[i].nw * shapes[i].nd);
}
