#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qml/bisim.hpp"
#include "qml/concept.hpp"
#include "qml/decide.hpp"
#include "qml/kripke.hpp"
#include "qml/mosaics.hpp"

namespace qml {

// DL models are S5 KripkeModels with role edges; U is never stored.
bool dl_model_check(const KripkeModel& m, Point p, const Concept& c);

// ⊓ ∀U.(¬C ⊔ D) over the inclusions; ⊤ for the empty ontology.
Concept ontology_to_concept(const Ontology& o);

// Inverse of add_concept on the core connectives.
Concept concept_of_dag(const Dag& dag, int id);

// σ = concept names and role names. β is over points w*nd+d.
struct TripleBisim {
    Relation beta1;
    Relation beta2;
    Relation beta;
};

TripleBisim max_bisim_alcu(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma);
TripleBisim identity_triple(const KripkeModel& m);
Report verify_bisimulation(const TripleBisim& b, const KripkeModel& m1, const KripkeModel& m2,
                           const Signature& sigma);
nlohmann::json dump(const TripleBisim& b, const KripkeModel& m1, const KripkeModel& m2);
RootBisim alcu_root_bisim(const Signature& sigma);

// O ⊨ C ⊑ D. Yes only from propositional saturation; otherwise a countermodel or Unknown.
Verdict entails_bounded(const Ontology& o, const Inclusion& ci, const SearchBounds& b);
// ⊨ C ⊑ D.
Verdict subsumes_bounded(const Concept& c, const Concept& d, const SearchBounds& b);

Verdict decide_iep_alcu(const Concept& c, const Concept& d, const SearchBounds& b,
                        const std::vector<Concept>& hints = {});

// Interpolant: C ⊑ χ and χ ⊑ D. Definition: ⊨ C → (D ↔ χ), with C the ontology concept.
Verdict verify_concept_candidate(CandidateKind kind, const Concept& chi, const Concept& c, const Concept& d,
                                 const Signature& sigma, const SearchBounds& b);

enum class OntologyProblem { IepModulo, Oiep, EdepModulo };
OntologyProblem parse_ontology_problem(const std::string& s);

struct ConceptInstance {
    Concept left;
    Concept right;
    Signature sigma;
    Ontology ontology;  // O, or O ∪ O′ for EDEP modulo
};

// IepModulo/Oiep take payload C ⊑ D; EdepModulo takes the concept name A in payload.lhs.
ConceptInstance reduce_ontology_problem(OntologyProblem kind, const Ontology& o, const Signature& sigma,
                                        const Inclusion& payload);

// Decides a reduced instance with σ fixed by the caller rather than sig(C) ∩ sig(D).
Verdict decide_iep_alcu_sigma(const Concept& c, const Concept& d, const Signature& sigma, const SearchBounds& b,
                              const std::vector<Concept>& hints = {});

struct AlcFiltration {
    Dag dag;
    ClosureIndex cl;
    Signature sigma;
    TypeCatalog full_types;
    std::vector<Mosaic> full_mosaics;
    std::vector<std::pair<int, int>> full_points;  // (ft, fm)
    std::vector<FiltrationPart> parts;             // L holds full point ids
    int n = 0;
    int pi_count = 0;
    std::vector<int> world_mosaic_of_point;
    std::vector<int> domain_mosaic_of_point;
    TripleBisim beta;
    Report coherence;  // fm^wt = wm and fm^dt = dm
};

AlcFiltration filtrate_pair_alcu(const KripkeModel& m1, Point p1, const KripkeModel& m2, Point p2,
                                 const Concept& c, const Concept& d);

struct AlcFiltrationReport {
    Report coherence;
    Report types;
    Report targets;
    Report bisimulation;
    Report pi;
    bool passed() const
    {
        return coherence.empty() && types.empty() && targets.empty() && bisimulation.empty() && pi.empty();
    }
    nlohmann::json to_json() const;
};

AlcFiltrationReport verify_filtration(const AlcFiltration& f, bool parallel = true);
nlohmann::json filtration_json(const AlcFiltration& f);

// Standpoint inclusion box[e](C ⊑ D). Concepts may contain box[g] F.
struct StandpointInclusion {
    Concept standpoint;  // Boolean over primitive standpoint names, Top for *
    Concept lhs;
    Concept rhs;
};

struct StandpointOntology {
    std::vector<std::string> standpoints;  // primitive names, in declaration order
    std::vector<StandpointInclusion> axioms;
};

// `standpoints s1 s2 ...` then `box[e] C <= D` or `box[e] C == D` per line.
StandpointOntology parse_standpoint_ontology(std::string_view text);
// Concept name representing a primitive standpoint: first letter upper-cased.
std::string standpoint_concept(const std::string& s);

// α_i axioms first, then α† for every axiom.
Ontology encode_standpoint(const StandpointOntology& so);
Inclusion encode_standpoint_inclusion(const StandpointOntology& so, const StandpointInclusion& a);

}  // namespace qml
