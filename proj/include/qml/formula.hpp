#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qml {

enum class Op { Top, Bottom, Atom, Not, And, Or, Implies, Iff, Diamond, Box, Exists, Forall };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
    Op op;
    std::string name;  // atoms only
    Formula a, b;
};

Formula mk_top();
Formula mk_bottom();
Formula mk_atom(std::string name);
Formula mk_not(Formula a);
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_implies(Formula a, Formula b);
Formula mk_iff(Formula a, Formula b);
Formula mk_diamond(Formula a);
Formula mk_box(Formula a);
Formula mk_exists(Formula a);
Formula mk_forall(Formula a);
Formula mk_and_all(const std::vector<Formula>& xs);  // Top when empty
Formula mk_or_all(const std::vector<Formula>& xs);   // Bottom when empty

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(const std::string& msg, int line, int column);
    int line;
    int column;
};

bool is_identifier(std::string_view s);

Formula parse_formula(std::string_view text);

// Canonical output is fully parenthesized; pretty drops redundant parentheses.
std::string print_formula(const Formula& f, bool pretty = false);

bool equal(const Formula& x, const Formula& y);

// Rewrites into {Top, Atom, Not, And, Exists, Diamond}; double negations collapse.
Formula normalize(const Formula& f);
bool is_core(const Formula& f);

std::size_t node_count(const Formula& f);

using Signature = std::set<std::string>;

Signature signature_of(const Formula& f);
Signature sig_union(const Signature& a, const Signature& b);
Signature sig_intersection(const Signature& a, const Signature& b);
Signature parse_signature(std::string_view csv);
std::string print_signature(const Signature& s);

int modal_depth(const Formula& f);

using Renaming = std::map<std::string, std::string>;

// Maps every symbol outside keep to a primed name that is not in avoid and not reused.
Renaming fresh_renaming(const Signature& symbols, const Signature& keep, const Signature& avoid);
Formula rename_atoms(const Formula& f, const Renaming& r);
Formula rename_outside(const Formula& f, const Signature& sigma);

}  // namespace qml
