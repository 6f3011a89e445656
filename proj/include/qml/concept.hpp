#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qml/dag.hpp"
#include "qml/formula.hpp"

namespace qml {

// Role U is the universal role: some U.C and all U.C quantify over the whole domain.
enum class COp { Top, Bottom, Name, Not, And, Or, Some, All, Diamond, Box };

struct CNode;
using Concept = std::shared_ptr<const CNode>;

struct CNode {
    COp op;
    std::string name;  // concept name, or role name for Some/All
    Concept a, b;
};

inline const std::string kUniversalRole = "U";

// Constructors simplify Top/Bottom units so that trivial ontologies vanish.
Concept c_top();
Concept c_bottom();
Concept c_name(std::string name);
Concept c_not(Concept a);
Concept c_and(Concept a, Concept b);
Concept c_or(Concept a, Concept b);
Concept c_some(std::string role, Concept a);
Concept c_all(std::string role, Concept a);
Concept c_diamond(Concept a);
Concept c_box(Concept a);
Concept c_and_all(const std::vector<Concept>& xs);
Concept c_implies(Concept a, Concept b);  // ¬a ⊔ b
Concept c_iff(Concept a, Concept b);

Concept parse_concept(std::string_view text);
// Builds `box[e] F` in standpoint concepts from the expression text and F.
using StandpointBox = std::function<Concept(const std::string& expr, Concept body)>;
Concept parse_concept(std::string_view text, const StandpointBox& box);
std::string print_concept(const Concept& c, bool pretty = false);
bool equal(const Concept& x, const Concept& y);

// Concept and role names, U excluded.
Signature concept_signature(const Concept& c);
Signature concept_names(const Concept& c);
Signature role_names(const Concept& c);

int add_concept(Dag& dag, const Concept& c);

// Role-free embedding: atoms become concept names, ∃ becomes ∃U.
Concept concept_from_formula(const Formula& f);

Concept rename_concept(const Concept& c, const Renaming& r);

struct Inclusion {
    Concept lhs;
    Concept rhs;
};
using Ontology = std::vector<Inclusion>;

// One `C <= D` or `C == D` per line; `#` starts a comment.
Ontology parse_ontology(std::string_view text);
std::string print_ontology(const Ontology& o);
Signature ontology_signature(const Ontology& o);

}  // namespace qml
