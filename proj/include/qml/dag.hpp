#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "qml/formula.hpp"

namespace qml {

// Hash-consed core syntax shared by formulas and concepts.
// Exists is the element quantifier (also ∃U); Role is ∃R.C for an ordinary role R.
enum class Kind : std::uint8_t { Top, Atom, Not, And, Exists, Diamond, Role };

struct DagNode {
    Kind kind;
    int sym;  // atom or role symbol, -1 otherwise
    int a;
    int b;
};

class Dag {
public:
    int top();
    int atom(const std::string& name);
    int neg(int x);  // single negation: neg(neg(x)) == x
    int conj(int x, int y);
    int disj(int x, int y);
    int implies(int x, int y);
    int iff(int x, int y);
    int exists(int x);
    int forall(int x);
    int diamond(int x);
    int box(int x);
    int some(const std::string& role, int x);
    int only(const std::string& role, int x);
    int conj_all(const std::vector<int>& xs);
    int disj_all(const std::vector<int>& xs);

    // Adds a formula through normalization.
    int add(const Formula& f);
    Formula to_formula(int id) const;

    const DagNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(nodes_.size()); }

    int symbol(const std::string& name);
    int find_symbol(const std::string& name) const;
    const std::string& symbol_name(int s) const { return syms_[static_cast<std::size_t>(s)]; }
    int symbol_count() const { return static_cast<int>(syms_.size()); }

    // Ids reachable from roots, children before parents.
    std::vector<int> reachable(const std::vector<int>& roots) const;
    std::vector<int> atoms_of(const std::vector<int>& roots) const;  // symbol ids
    std::vector<int> roles_of(const std::vector<int>& roots) const;  // symbol ids
    int modal_depth(int id) const;

private:
    int mk(Kind k, int sym, int a, int b);

    std::vector<DagNode> nodes_;
    std::vector<std::string> syms_;
    std::unordered_map<std::string, int> sym_index_;
    std::map<std::tuple<int, int, int, int>, int> index_;
};

// sub(φ,ψ): subformulas closed under single negation, in a deterministic order.
struct ClosureIndex {
    std::vector<int> members;                 // dag ids
    std::vector<int> negation;                // member index of the single negation
    std::vector<int> exists_members;          // member indices of shape ∃ξ or ¬∃ξ
    std::vector<int> diamond_members;         // member indices of shape ◇ξ or ¬◇ξ
    std::unordered_map<int, int> index_of;    // dag id -> member index

    int size() const { return static_cast<int>(members.size()); }
    int find(int dag_id) const
    {
        auto it = index_of.find(dag_id);
        return it == index_of.end() ? -1 : it->second;
    }
};

ClosureIndex closure(Dag& dag, const std::vector<int>& roots);

}  // namespace qml
