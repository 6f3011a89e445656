#pragma once

#include "qml/formula.hpp"
#include "qml/kripke.hpp"

namespace qml {

// τ^k_{M,σ}(w,d): the strongest σ-formula of modal depth k true at (w,d).
// Structurally equal conjuncts and disjuncts are emitted once.
Formula char_formula(const KripkeModel& m, Point p, const Signature& sigma, int k);

// t^0_{M,σ}(w,d): the literal σ-type as a conjunction.
Formula literal_type_formula(const KripkeModel& m, Point p, const Signature& sigma);

}  // namespace qml
