#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qml/alcu.hpp"
#include "qml/decide.hpp"
#include "qml/formula.hpp"
#include "qml/kripke.hpp"

namespace qml {

struct FactOutcome {
    bool passed = false;
    std::string detail;
};

// A machine-checkable assertion about an item, tagged with the operation it exercises.
struct Fact {
    std::string name;
    std::string operation;
    std::function<FactOutcome()> check;
};

struct GalleryItem {
    std::string name;
    std::map<std::string, Formula> formulas;
    std::map<std::string, Concept> concepts;
    std::map<std::string, std::string> texts;
    std::map<std::string, KripkeModel> models;
    std::map<std::string, Point> points;  // distinguished point per model name
    Signature sigma;
    Signature props;
    std::vector<Fact> facts;

    nlohmann::json to_json() const;
};

// fine, marx_areces, kr_kb, example9, ex6, exK, ex6_chain, ex6_model, ex8b.
std::vector<std::string> gallery_names();
// r parameterizes ex6_chain and ex6_model and must be at least 1.
GalleryItem gallery_build(const std::string& name, int r = 3);

// χ_0 = ⊤, χ_{r+1} = p1 ∧ ∃(p2 ∧ ◇χ_r).
Formula ex6_chain(int r);
// r×r ladder: a at (0,0), p1 at (k,k-1), p2 at (k,k) for 0 < k < r.
KripkeModel ex6_model(int r);

struct FactResult {
    std::string item;
    std::string fact;
    std::string operation;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

std::vector<FactResult> run_facts(const GalleryItem& item);
nlohmann::json fact_results_json(const std::vector<FactResult>& rs);

// Fixture texts shared with the command-line data directory.
namespace fixtures {
inline const char* const kFineAxiom1 = "rep -> <> A (inPower -> [](rep -> ~inPower))";
inline const char* const kFineAxiom2 = "~rep -> [] E (inPower & [](~rep -> inPower))";
inline const char* const kMarxPhi =
    "p0 & <> E (p1 & <> E p2) & [] A ((e <-> p0 | p1 | p2) & (p0 -> ~p1) & (p0 -> ~p2) & (p1 -> ~p2)"
    " & (p0 -> [](e -> p0) & A (e -> p0)) & (p1 -> [](e -> p1) & A (e -> p1))"
    " & (p2 -> [](e -> p2) & A (e -> p2)))";
inline const char* const kMarxPsi =
    "[] A (e <-> b0 | b1) -> <> E (b0 & <> (~e & E b0)) | <> E (b1 & <> (~e & E b1))";
inline const char* const kStandpointKB =
    "standpoints s1 s2\n"
    "box[~s1 & ~s2] Top <= Bottom\n"
    "box[*] KR | Databases | Verification == CS & some uses.Logic\n"
    "box[*] Databases | Verification <= ~some historicAreaOf.AI\n"
    "box[s1] KR == CS & some areaOf.AI & some uses.Logic\n"
    "box[s2] KR <= some historicAreaOf.AI\n"
    "box[s2] some areaOf.AI <= ~some uses.Logic\n";
inline const char* const kDirectKB =
    "Top <= [] all U.(S1 | S2)\n"
    "Top <= [] all U.(~(KR | Databases | Verification) | CS & some uses.Logic)\n"
    "Top <= [] all U.(~(CS & some uses.Logic) | KR | Databases | Verification)\n"
    "Top <= [] all U.(~(Databases | Verification) | ~some historicAreaOf.AI)\n"
    "Top <= [] all U.(~(S1 & KR) | CS & some areaOf.AI & some uses.Logic)\n"
    "Top <= [] all U.(~(S1 & CS & some areaOf.AI & some uses.Logic) | KR)\n"
    "Top <= [] all U.(~(S2 & KR) | some historicAreaOf.AI)\n"
    "Top <= [] all U.(~(S2 & some areaOf.AI) | ~some uses.Logic)\n";
inline const char* const kKRDefinition = "CS & some uses.Logic & (some areaOf.AI | some historicAreaOf.AI)";
inline const char* const kKRSigma = "AI,CS,Logic,areaOf,historicAreaOf,uses";
}  // namespace fixtures

// Fixture models.
KripkeModel fine_model();        // 2 worlds × 2 elements
KripkeModel fine_model_prime();  // 3 worlds × 3 elements
KripkeModel marx_model1();       // u0..u2 × d0..d2
KripkeModel marx_model2();       // v0,v1 × c0,c1
KripkeModel exk_model();         // worlds w,u,v; elements e,d
KripkeModel exk_model_prime();   // worlds w',u',v',x',y'; elements e1,e2,d'

// Q¹S5 projection of a concept: ∃R.A becomes the atom R_A, ∃U/∀U become E/A.
Formula project_roles(const Concept& c);

}  // namespace qml
