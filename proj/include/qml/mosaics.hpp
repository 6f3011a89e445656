#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qml/bisim.hpp"
#include "qml/dag.hpp"
#include "qml/formula.hpp"
#include "qml/kripke.hpp"

namespace qml {

class FiltrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Interns bitsets over closure members into dense ids.
class TypeCatalog {
public:
    int intern(const Bits& b);
    const Bits& at(int id) const { return types_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(types_.size()); }

private:
    std::vector<Bits> types_;
    std::map<Bits, int> index_;
};

// (T₁,T₂) or (S₁,S₂): sorted type ids realized in the bisimilarity class within each model.
struct Mosaic {
    std::vector<int> first;
    std::vector<int> second;
    bool operator<(const Mosaic& o) const { return std::tie(first, second) < std::tie(o.first, o.second); }
    bool operator==(const Mosaic& o) const { return first == o.first && second == o.second; }
};

struct TypeSide {
    std::vector<int> ft;  // per point w*nd+d
    std::vector<int> wt;  // per world
    std::vector<int> dt;  // per element
    std::vector<int> wm;  // per world
    std::vector<int> dm;  // per element
    std::vector<int> wp;  // per world, index into world_points
    std::vector<int> dp;  // per element, index into domain_points
};

struct TypeTable {
    Dag dag;
    ClosureIndex cl;
    Signature sigma;
    std::vector<int> roots;
    TypeCatalog full_types, world_types, domain_types;
    std::vector<Mosaic> world_mosaics, domain_mosaics;
    std::vector<std::pair<int, int>> world_points;   // (wt, wm)
    std::vector<std::pair<int, int>> domain_points;  // (dt, dm)
    TypeSide side[2];

    int count_world_points(int i) const;
    int count_domain_points(int i) const;
    nlohmann::json to_json() const;
};

TypeTable compute_types(const KripkeModel& m1, const KripkeModel& m2, const Formula& phi, const Formula& psi,
                        const Signature& sigma);

struct FiltrationPart {
    KripkeModel model;
    std::vector<int> world_point;   // per world of model
    std::vector<int> world_copy;    // π index j
    std::vector<int> domain_point;  // per element
    std::vector<int> domain_copy;   // k
    std::map<std::pair<int, int>, std::vector<int>> L;  // (world point, domain point) -> full types
    Point distinguished{0, 0};
    int target = -1;  // dag id required at the distinguished point

    // Full type assigned to a point: π^j_{wp,dp}(k) = L[(j+k) mod |L|].
    int assigned(int w, int d) const;
};

struct Filtration {
    Dag dag;
    ClosureIndex cl;
    TypeCatalog full_types;
    Signature sigma;
    std::vector<FiltrationPart> parts;  // one for a single model, two for a pair
    int n = 0;         // copies per domain point
    int pi_count = 0;  // |Π|
    std::vector<int> world_mosaic_of_point;   // pair only, per world point
    std::vector<int> domain_mosaic_of_point;  // pair only, per domain point
    S5Bisim beta;                             // pair only
};

Filtration filtrate_sat(const KripkeModel& m, Point p, const Formula& phi);
Filtration filtrate_pair(const KripkeModel& m1, Point p1, const KripkeModel& m2, Point p2, const Formula& phi,
                         const Formula& psi);

struct FiltrationReport {
    Report types;         // closure member truth against the assigned full types
    Report targets;       // distinguished points satisfy their targets
    Report bisimulation;  // pair only
    Report pi;            // |Π| ≤ n² and surjectivity of every π
    bool passed() const { return types.empty() && targets.empty() && bisimulation.empty() && pi.empty(); }
    nlohmann::json to_json() const;
};

FiltrationReport verify_filtration(const Filtration& f, bool parallel = true);

nlohmann::json filtration_json(const Filtration& f);

}  // namespace qml
