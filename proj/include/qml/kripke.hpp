#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qml/dag.hpp"
#include "qml/formula.hpp"

namespace qml {

using Bits = std::vector<std::uint8_t>;

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Constant-domain model. In S5 mode accessibility is W×W and succ is unused.
// Role edges (DL models) are stored per role as bits over (w, d, d').
struct KripkeModel {
    bool s5 = true;
    std::vector<std::string> worlds;
    std::vector<std::string> domain;
    std::vector<std::vector<int>> succ;
    std::map<std::string, Bits> val;
    std::map<std::string, Bits> roles;

    int nw() const { return static_cast<int>(worlds.size()); }
    int nd() const { return static_cast<int>(domain.size()); }
    int npoints() const { return nw() * nd(); }
    int point(int w, int d) const { return w * nd() + d; }

    bool holds(const std::string& p, int w, int d) const;
    void set(const std::string& p, int w, int d, bool v = true);
    bool edge(const std::string& r, int w, int d, int e) const;
    void set_edge(const std::string& r, int w, int d, int e, bool v = true);
    bool access(int w, int v) const;
    std::vector<int> successors(int w) const;
    std::vector<int> predecessors(int v) const;

    int world_index(const std::string& id) const;
    int element_index(const std::string& id) const;

    void validate() const;
};

KripkeModel make_model(int nw, int nd, bool s5);

struct Point {
    int w;
    int d;
};

KripkeModel load_model(const nlohmann::json& j);
KripkeModel load_model_file(const std::string& path);
nlohmann::json save_model(const KripkeModel& m);

// Truth tables over points for dag nodes. Tables are computed bottom-up for the
// nodes reachable from the requested roots.
class Evaluator {
public:
    Evaluator(const KripkeModel& m, const Dag& dag) : m_(m), dag_(dag) {}
    const Bits& table(int id);
    bool holds(int id, int w, int d) { return table(id)[static_cast<std::size_t>(m_.point(w, d))] != 0; }

private:
    void compute(int id);

    const KripkeModel& m_;
    const Dag& dag_;
    std::map<int, Bits> tables_;
};

// Same tables as Evaluator, indexed by dag id; an OpenMP loop over points when parallel is set.
std::vector<Bits> evaluate_all(const KripkeModel& m, const Dag& dag, const std::vector<int>& roots,
                               bool parallel);

bool model_check(const KripkeModel& m, Point p, const Formula& f);

// Models with |W| ≤ maxW, |D| ≤ maxD in size order, then accessibility, then valuation.
class ModelEnumerator {
public:
    ModelEnumerator(Signature sigma, int max_w, int max_d, bool s5, bool prune = false);
    std::optional<KripkeModel> next();

private:
    bool advance();
    bool canonical() const;
    KripkeModel build() const;

    std::vector<std::string> sigma_;
    int max_w_, max_d_;
    bool s5_, prune_;
    int w_ = 1, d_ = 1;
    std::uint64_t rel_ = 0, val_ = 0;
    bool started_ = false, done_ = false;
};

}  // namespace qml
