#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qml/formula.hpp"
#include "qml/kripke.hpp"

namespace qml {

// Dense relation between index sets of sizes n1 and n2.
struct Relation {
    int n1 = 0;
    int n2 = 0;
    Bits bits;

    Relation() = default;
    Relation(int a, int b, bool fill = false)
        : n1(a), n2(b), bits(static_cast<std::size_t>(a) * static_cast<std::size_t>(b), fill ? 1 : 0)
    {
    }
    bool has(int i, int j) const { return bits[static_cast<std::size_t>(i) * n2 + j] != 0; }
    void set(int i, int j, bool v = true) { bits[static_cast<std::size_t>(i) * n2 + j] = v ? 1 : 0; }
    std::size_t count() const;
    bool operator==(const Relation& o) const { return n1 == o.n1 && n2 == o.n2 && bits == o.bits; }
};

// General bisimulation: relation over points (w*nd+d).
struct GeneralBisim {
    Relation beta;
};

struct S5Bisim {
    Relation beta1;  // worlds
    Relation beta2;  // elements
};

struct KBisim {
    std::vector<Relation> levels;  // β_0 .. β_k over points
};

// Literal σ-type ids of the points of both models, comparable across them.
struct LiteralTypes {
    std::vector<int> left;
    std::vector<int> right;
};
LiteralTypes literal_types(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma);

GeneralBisim max_bisim_general(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma);
// Round-based refinement with an OpenMP loop over pairs; same result as the worklist version.
GeneralBisim max_bisim_general_parallel(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma);

S5Bisim max_bisim_s5(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma);
Relation s5_point_relation(const S5Bisim& b, const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma);
bool s5_bisimilar(const KripkeModel& m1, Point p1, const KripkeModel& m2, Point p2, const Signature& sigma);

KBisim max_k_bisim(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma, int k);

// Colour-refinement invariants of the root (0,0). Bisimilar roots get equal keys; equal keys
// are only candidates. rounds must be at least the total number of worlds and elements of
// both models for the S5 key to separate every non-bisimilar pair.
std::uint64_t s5_root_key(const KripkeModel& m, const Signature& sigma, int rounds);
std::uint64_t k_root_key(const KripkeModel& m, const Signature& sigma, int k);
// Point colours over ∃U, ◇ and the σ-roles; rounds at least the total number of points.
std::uint64_t alcu_root_key(const KripkeModel& m, const Signature& sigma, int rounds);

struct Violation {
    std::string condition;
    std::string detail;
};
using Report = std::vector<Violation>;

Report verify_bisimulation(const GeneralBisim& b, const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma);
Report verify_bisimulation(const S5Bisim& b, const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma);
Report verify_bisimulation(const KBisim& b, const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma);

nlohmann::json report_json(const Report& r);
nlohmann::json dump_points(const Relation& r, const KripkeModel& m1, const KripkeModel& m2);
nlohmann::json dump(const GeneralBisim& b, const KripkeModel& m1, const KripkeModel& m2);
nlohmann::json dump(const S5Bisim& b, const KripkeModel& m1, const KripkeModel& m2);
nlohmann::json dump(const KBisim& b, const KripkeModel& m1, const KripkeModel& m2);

}  // namespace qml
