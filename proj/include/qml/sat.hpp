#pragma once

#include <cstdint>
#include <vector>

namespace qml::sat {

// Literal encoding: 2*var for the positive literal, 2*var+1 for the negative one.
using Lit = int;

inline Lit mk_lit(int var, bool negated = false) { return 2 * var + (negated ? 1 : 0); }
inline int var_of(Lit l) { return l >> 1; }
inline bool sign_of(Lit l) { return l & 1; }
inline Lit negate(Lit l) { return l ^ 1; }

// Conflict-driven clause learning with two watched literals, VSIDS, phase
// saving, Luby restarts and activity-based learnt clause reduction.
// Clauses may be added between calls to solve.
class Solver {
public:
    int new_var();
    int num_vars() const { return static_cast<int>(assign_.size()); }
    bool add_clause(std::vector<Lit> lits);
    bool solve();
    bool value(int var) const { return model_[static_cast<std::size_t>(var)] == 1; }
    bool lit_value(Lit l) const { return value(var_of(l)) != sign_of(l); }
    std::uint64_t conflicts() const { return conflicts_; }
    bool okay() const { return ok_; }

private:
    static constexpr std::int8_t kUndef = 2;

    struct Clause {
        std::vector<Lit> lits;
        bool learnt = false;
        bool deleted = false;
        double activity = 0;
    };
    struct Watch {
        int clause;
        Lit blocker;
    };

    std::int8_t lit_val(Lit l) const
    {
        std::int8_t v = assign_[static_cast<std::size_t>(var_of(l))];
        if (v == kUndef) return kUndef;
        return static_cast<std::int8_t>(v ^ static_cast<std::int8_t>(sign_of(l)));
    }
    int level() const { return static_cast<int>(trail_lim_.size()); }
    void enqueue(Lit l, int reason);
    int propagate();
    void analyze(int confl, std::vector<Lit>& learnt, int& back_level);
    bool redundant(Lit l, std::uint32_t abstract);
    void backtrack(int lvl);
    int pick_branch();
    void attach(int ci);
    void bump_var(int v);
    void bump_clause(int ci);
    void reduce_db();
    bool locked(int ci) const;

    void heap_insert(int v);
    void heap_up(int i);
    void heap_down(int i);
    int heap_pop();
    bool heap_less(int a, int b) const { return activity_[static_cast<std::size_t>(a)] > activity_[static_cast<std::size_t>(b)]; }

    bool ok_ = true;
    std::vector<Clause> clauses_;
    std::vector<std::vector<Watch>> watches_;
    std::vector<std::int8_t> assign_;
    std::vector<std::int8_t> model_;
    std::vector<std::int8_t> phase_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<double> activity_;
    std::vector<char> seen_;
    std::vector<Lit> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<int> heap_;
    std::vector<int> heap_pos_;
    double var_inc_ = 1.0;
    double cla_inc_ = 1.0;
    std::uint64_t conflicts_ = 0;
    std::size_t num_learnts_ = 0;
    std::vector<Lit> analyze_stack_;
    std::vector<int> analyze_clear_;
};

}  // namespace qml::sat
