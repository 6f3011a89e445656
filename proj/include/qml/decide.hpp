#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "qml/dag.hpp"
#include "qml/formula.hpp"
#include "qml/ground.hpp"
#include "qml/kripke.hpp"

namespace qml {

enum class Logic { Q1S5, Q1K, ALC };
enum class Outcome { Yes, No, Unknown };

std::string to_string(Logic l);
std::string to_string(Outcome o);
Logic parse_logic(const std::string& s);

struct SearchBounds {
    int w1 = 2, d1 = 2, w2 = 2, d2 = 2;
    int depth = 2;
    int branch = 2;
    Signature props;          // world-constant symbols
    int max_reducts = 4096;   // per side and shape; exceeding it yields Unknown
    bool parallel = true;

    nlohmann::json to_json() const;
};

// Decimal when small, otherwise "2^E".
struct SizeBound {
    boost::multiprecision::cpp_int log2_w;
    boost::multiprecision::cpp_int log2_d;

    std::string text_w() const;
    std::string text_d() const;
    std::string text() const;
    bool covered_by(int w, int d) const;
};

enum class BoundProblem { Sat, IepS5, IepAlc };

SizeBound completeness_bound(const Formula& phi, const Formula& psi, BoundProblem problem);
SizeBound completeness_bound_size(int closure_size, BoundProblem problem);

struct Verdict {
    Outcome outcome = Outcome::Unknown;
    std::vector<KripkeModel> models;  // countermodel or model pair
    std::vector<Point> points;
    nlohmann::json relation;          // bisimulation for pair witnesses
    std::string candidate;            // χ when Yes comes from a candidate
    std::string note;
    nlohmann::json bounds;
    std::string completeness;

    nlohmann::json to_json() const;
};

// Propositional validity at one abstract point with modal subformulas opaque,
// plus the reflexivity instances valid in the logic. Sound, not complete.
bool provable_by_saturation(const Dag& dag, int root, Logic logic);

Verdict check_sat_bounded(Dag& dag, int root, Logic logic, const SearchBounds& b);
Verdict check_valid_bounded(Dag& dag, int root, Logic logic, const SearchBounds& b);
Verdict check_sat_bounded(const Formula& phi, Logic logic, const SearchBounds& b);
Verdict check_valid_bounded(const Formula& phi, Logic logic, const SearchBounds& b);

// Shapes explored by the searches, smallest first.
std::vector<Shape> search_shapes(Logic logic, int max_w, int max_d, int depth, int branch);

// Models of target at (0,0) of one shape, one per distinct σ-reduct.
struct ReductList {
    std::vector<KripkeModel> models;
    bool capped = false;
};
ReductList enumerate_reducts(const Dag& dag, int target, const Shape& shape, const std::vector<int>& sigma_atoms,
                             const std::vector<int>& sigma_roles, const std::vector<int>& atoms,
                             const std::vector<int>& roles, const std::set<int>& props, int cap);

// Relation dump when the roots (0,0) of both models are bisimilar.
using RootBisim = std::function<std::optional<nlohmann::json>(const KripkeModel&, const KripkeModel&)>;
// Bisimulation-invariant hash of the root; only pairs with equal keys are tested.
using RootKey = std::function<std::uint64_t(const KripkeModel&)>;

struct PairSearch {
    const Dag* dag = nullptr;
    int left = 0;
    int right = 0;
    Signature sigma;
    std::vector<Shape> left_shapes;
    std::vector<Shape> right_shapes;
    Signature props;
    int max_reducts = 4096;
    RootBisim bisimilar;
    RootKey key;  // optional
};

struct PairResult {
    bool found = false;
    bool capped = false;
    KripkeModel m1, m2;
    nlohmann::json relation;
    std::size_t pairs_checked = 0;
};

PairResult search_pairs(const PairSearch& s, bool parallel);

RootBisim s5_root_bisim(const Signature& sigma);
RootBisim k_root_bisim(const Signature& sigma, int k);

Verdict decide_iep_s5(const Formula& phi, const Formula& psi, const SearchBounds& b,
                      const std::vector<Formula>& hints = {});
Verdict decide_edep_s5(const Formula& phi, const Formula& psi, const Signature& sigma, const SearchBounds& b,
                       const std::vector<Formula>& hints = {});
Verdict decide_iep_k(const Formula& phi, const Formula& psi, const SearchBounds& b,
                     const std::vector<Formula>& hints = {});

enum class CandidateKind { Interpolant, Definition };
Verdict verify_candidate(CandidateKind kind, const Formula& chi, const Formula& phi, const Formula& psi,
                         const Signature& sigma, Logic logic, const SearchBounds& b);
// Validity of every leg; the weakest sub-verdict wins.
Verdict verify_legs(Dag& dag, const std::vector<int>& legs, Logic logic, const SearchBounds& b);

// Reduced instance: IEP (left, right) or EDEP (kb, target, sigma) with an optional
// validity side condition.
struct ReducedInstance {
    Formula left;
    Formula right;
    Signature sigma;
    std::optional<Formula> side_validity;
};
ReducedInstance edep_to_iep(const Formula& phi, const Formula& psi, const Signature& sigma);
ReducedInstance iep_to_edep(const Formula& phi, const Formula& psi);

// IEP decided through the EDEP route: validity of φ→ψ plus the EDEP verdict.
Verdict decide_iep_via_edep(const Formula& phi, const Formula& psi, const SearchBounds& b);
// EDEP decided through the IEP route.
Verdict decide_edep_via_iep(const Formula& phi, const Formula& psi, const Signature& sigma, const SearchBounds& b);

}  // namespace qml
