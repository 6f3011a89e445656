#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "qml/formula.hpp"
#include "qml/kripke.hpp"

namespace qml {

// First-order syntax over binary predicates and the variables x, y, z. No equality.
enum class FOp { Top, Bottom, Atom, Not, And, Or, Implies, Iff, Exists, Forall };

struct FNode;
using FOFormula = std::shared_ptr<const FNode>;

struct FNode {
    FOp op;
    std::string pred;  // Atom
    char arg1 = 0;     // Atom: first argument
    char arg2 = 0;     // Atom: second argument
    char var = 0;      // Exists/Forall
    FOFormula a, b;
};

inline const std::string kAccessibility = "R";

// p(x)† = p(y,x); ◇ binds y and ∃ binds x.
FOFormula dagger_translation(const Formula& f);
// p* = p(z,x); (◇φ)* = ∃y(R(z,y) ∧ φ*{y/z}) with the world variable alternating z/y.
FOFormula standard_translation(const Formula& f);

std::string print_fo(const FOFormula& f);  // prefix syntax
std::string print_tptp(const FOFormula& f, const std::string& name = "phi");

std::set<char> free_vars(const FOFormula& f);
std::set<std::string> predicates(const FOFormula& f);
// True iff every atom has the shape p(y,x).
bool substitution_free(const FOFormula& f);

// Finite FO structure; each predicate is a bit table over (a,b) at a*size+b.
struct FOStructure {
    int size = 0;
    std::map<std::string, Bits> preds;
    bool holds(const std::string& p, int a, int b) const;
};

// Assignment to x, y, z (indices into the domain).
struct FOEnv {
    int x = 0;
    int y = 0;
    int z = 0;
};

bool fo_eval(const FOStructure& s, const FOFormula& f, FOEnv env);

// 𝔐_𝔄: worlds and elements are the universe; b ∈ p^{I(a)} iff (a,b) ∈ p^𝔄.
KripkeModel fo_to_square(const FOStructure& s);
// 𝔄_{𝔐,f}: (a,b) ∈ p iff b ∈ p^{I(f(a))}. f maps elements to worlds; empty means index order.
FOStructure square_to_fo(const KripkeModel& m, std::vector<int> f = {});

}  // namespace qml
