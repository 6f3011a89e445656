#pragma once

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "qml/dag.hpp"
#include "qml/kripke.hpp"
#include "qml/sat.hpp"

namespace qml {

// Shape of the finite structure a formula is grounded over.
struct Shape {
    int nw = 1;
    int nd = 1;
    bool s5 = true;
    std::vector<std::vector<int>> succ;  // K only

    static Shape s5_grid(int nw, int nd);
    static Shape tree(const std::vector<std::vector<int>>& children, int nd);
};

// Rooted unordered trees of depth ≤ depth with at most branch children per node,
// as children lists with node 0 as root. Deterministic order, smallest first.
std::vector<std::vector<std::vector<int>>> tree_shapes(int depth, int branch);

// Lazy Tseitin grounding of dag nodes at points of a shape.
// Symbols in props are world-constant: one variable per (symbol, world).
class Grounder {
public:
    Grounder(const Dag& dag, sat::Solver& solver, Shape shape, std::set<int> props = {});

    sat::Lit ground(int id, int w, int d);
    void require(int id, int w, int d);
    sat::Lit atom_lit(int sym, int w, int d);
    sat::Lit role_lit(int sym, int w, int d, int e);
    sat::Lit true_lit() const { return true_; }

    // Creates every variable of the given symbols so that enumeration over them is complete.
    void declare(const std::vector<int>& atoms, const std::vector<int>& roles);
    std::vector<sat::Lit> vars_of(const std::vector<int>& atoms, const std::vector<int>& roles);

    // Model read off the last satisfying assignment; symbols never grounded are empty.
    KripkeModel extract(const std::vector<int>& atoms, const std::vector<int>& roles) const;
    const Shape& shape() const { return shape_; }

private:
    sat::Lit fresh();
    sat::Lit mk_and(const std::vector<sat::Lit>& xs);
    sat::Lit mk_or(const std::vector<sat::Lit>& xs);
    bool is_true(sat::Lit l) const { return l == true_; }
    bool is_false(sat::Lit l) const { return l == sat::negate(true_); }

    const Dag& dag_;
    sat::Solver& s_;
    Shape shape_;
    std::set<int> props_;
    sat::Lit true_;
    std::unordered_map<std::uint64_t, sat::Lit> memo_;
    std::unordered_map<std::uint64_t, sat::Lit> atoms_;
    std::unordered_map<std::uint64_t, sat::Lit> roles_;
};

}  // namespace qml
