#include "qml/sat.hpp"

#include <algorithm>

namespace qml::sat {

namespace {

double luby(double y, int x)
{
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    double r = 1;
    for (int i = 0; i < seq; ++i) r *= y;
    return r;
}

}  // namespace

int Solver::new_var()
{
    int v = num_vars();
    assign_.push_back(kUndef);
    model_.push_back(0);
    phase_.push_back(0);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_pos_.push_back(-1);
    heap_insert(v);
    return v;
}

void Solver::heap_insert(int v)
{
    if (heap_pos_[static_cast<std::size_t>(v)] >= 0) return;
    heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(static_cast<int>(heap_.size()) - 1);
}

void Solver::heap_up(int i)
{
    int v = heap_[static_cast<std::size_t>(i)];
    while (i > 0) {
        int parent = (i - 1) / 2;
        int pv = heap_[static_cast<std::size_t>(parent)];
        if (!heap_less(v, pv)) break;
        heap_[static_cast<std::size_t>(i)] = pv;
        heap_pos_[static_cast<std::size_t>(pv)] = i;
        i = parent;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    heap_pos_[static_cast<std::size_t>(v)] = i;
}

void Solver::heap_down(int i)
{
    int n = static_cast<int>(heap_.size());
    int v = heap_[static_cast<std::size_t>(i)];
    while (true) {
        int child = 2 * i + 1;
        if (child >= n) break;
        if (child + 1 < n && heap_less(heap_[static_cast<std::size_t>(child + 1)], heap_[static_cast<std::size_t>(child)]))
            ++child;
        int cv = heap_[static_cast<std::size_t>(child)];
        if (!heap_less(cv, v)) break;
        heap_[static_cast<std::size_t>(i)] = cv;
        heap_pos_[static_cast<std::size_t>(cv)] = i;
        i = child;
    }
    heap_[static_cast<std::size_t>(i)] = v;
    heap_pos_[static_cast<std::size_t>(v)] = i;
}

int Solver::heap_pop()
{
    int v = heap_[0];
    heap_pos_[static_cast<std::size_t>(v)] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[static_cast<std::size_t>(last)] = 0;
        heap_down(0);
    }
    return v;
}

void Solver::attach(int ci)
{
    const auto& lits = clauses_[static_cast<std::size_t>(ci)].lits;
    watches_[static_cast<std::size_t>(lits[0])].push_back({ci, lits[1]});
    watches_[static_cast<std::size_t>(lits[1])].push_back({ci, lits[0]});
}

bool Solver::add_clause(std::vector<Lit> lits)
{
    if (!ok_) return false;
    backtrack(0);
    std::sort(lits.begin(), lits.end());
    std::vector<Lit> out;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        Lit l = lits[i];
        if (i > 0 && l == lits[i - 1]) continue;
        if (i > 0 && l == negate(lits[i - 1])) return true;
        std::int8_t v = lit_val(l);
        if (v == 1) return true;
        if (v == 0) continue;
        out.push_back(l);
    }
    if (out.empty()) {
        ok_ = false;
        return false;
    }
    if (out.size() == 1) {
        enqueue(out[0], -1);
        if (propagate() != -1) ok_ = false;
        return ok_;
    }
    clauses_.push_back({std::move(out), false, false, 0});
    attach(static_cast<int>(clauses_.size()) - 1);
    return true;
}

void Solver::enqueue(Lit l, int reason)
{
    int v = var_of(l);
    assign_[static_cast<std::size_t>(v)] = sign_of(l) ? 0 : 1;
    level_[static_cast<std::size_t>(v)] = level();
    reason_[static_cast<std::size_t>(v)] = reason;
    trail_.push_back(l);
}

int Solver::propagate()
{
    while (qhead_ < trail_.size()) {
        Lit p = trail_[qhead_++];
        Lit fl = negate(p);
        auto& ws = watches_[static_cast<std::size_t>(fl)];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            Watch w = ws[i++];
            Clause& c = clauses_[static_cast<std::size_t>(w.clause)];
            if (c.deleted) continue;
            if (lit_val(w.blocker) == 1) {
                ws[j++] = w;
                continue;
            }
            if (c.lits[0] == fl) std::swap(c.lits[0], c.lits[1]);
            Lit first = c.lits[0];
            if (first != w.blocker && lit_val(first) == 1) {
                ws[j++] = {w.clause, first};
                continue;
            }
            bool found = false;
            for (std::size_t k = 2; k < c.lits.size(); ++k) {
                if (lit_val(c.lits[k]) != 0) {
                    std::swap(c.lits[1], c.lits[k]);
                    watches_[static_cast<std::size_t>(c.lits[1])].push_back({w.clause, first});
                    found = true;
                    break;
                }
            }
            if (found) continue;
            ws[j++] = {w.clause, first};
            if (lit_val(first) == 0) {
                while (i < ws.size()) ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return w.clause;
            }
            enqueue(first, w.clause);
        }
        ws.resize(j);
    }
    return -1;
}

void Solver::bump_var(int v)
{
    double& a = activity_[static_cast<std::size_t>(v)];
    a += var_inc_;
    if (a > 1e100) {
        for (auto& x : activity_) x *= 1e-100;
        var_inc_ *= 1e-100;
    }
    int pos = heap_pos_[static_cast<std::size_t>(v)];
    if (pos >= 0) heap_up(pos);
}

void Solver::bump_clause(int ci)
{
    double& a = clauses_[static_cast<std::size_t>(ci)].activity;
    a += cla_inc_;
    if (a > 1e20) {
        for (auto& c : clauses_)
            if (c.learnt) c.activity *= 1e-20;
        cla_inc_ *= 1e-20;
    }
}

bool Solver::redundant(Lit l, std::uint32_t)
{
    int r = reason_[static_cast<std::size_t>(var_of(l))];
    if (r < 0) return false;
    const auto& lits = clauses_[static_cast<std::size_t>(r)].lits;
    for (std::size_t k = 1; k < lits.size(); ++k) {
        int v = var_of(lits[k]);
        if (!seen_[static_cast<std::size_t>(v)] && level_[static_cast<std::size_t>(v)] > 0) return false;
    }
    return true;
}

void Solver::analyze(int confl, std::vector<Lit>& learnt, int& back_level)
{
    learnt.clear();
    learnt.push_back(-1);
    int path = 0;
    Lit p = -1;
    int index = static_cast<int>(trail_.size()) - 1;
    int ci = confl;
    do {
        Clause& c = clauses_[static_cast<std::size_t>(ci)];
        if (c.learnt) bump_clause(ci);
        for (std::size_t k = (p == -1 ? 0 : 1); k < c.lits.size(); ++k) {
            Lit q = c.lits[k];
            int v = var_of(q);
            if (!seen_[static_cast<std::size_t>(v)] && level_[static_cast<std::size_t>(v)] > 0) {
                bump_var(v);
                seen_[static_cast<std::size_t>(v)] = 1;
                if (level_[static_cast<std::size_t>(v)] >= level()) ++path;
                else learnt.push_back(q);
            }
        }
        while (!seen_[static_cast<std::size_t>(var_of(trail_[static_cast<std::size_t>(index)]))]) --index;
        p = trail_[static_cast<std::size_t>(index)];
        --index;
        ci = reason_[static_cast<std::size_t>(var_of(p))];
        seen_[static_cast<std::size_t>(var_of(p))] = 0;
        --path;
    } while (path > 0);
    learnt[0] = negate(p);

    analyze_clear_.clear();
    for (std::size_t k = 1; k < learnt.size(); ++k) analyze_clear_.push_back(var_of(learnt[k]));
    std::size_t j = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k)
        if (!redundant(learnt[k], 0)) learnt[j++] = learnt[k];
    learnt.resize(j);
    for (int v : analyze_clear_) seen_[static_cast<std::size_t>(v)] = 0;

    back_level = 0;
    if (learnt.size() > 1) {
        std::size_t best = 1;
        for (std::size_t k = 2; k < learnt.size(); ++k)
            if (level_[static_cast<std::size_t>(var_of(learnt[k]))] > level_[static_cast<std::size_t>(var_of(learnt[best]))])
                best = k;
        std::swap(learnt[1], learnt[best]);
        back_level = level_[static_cast<std::size_t>(var_of(learnt[1]))];
    }
}

void Solver::backtrack(int lvl)
{
    if (level() <= lvl) return;
    std::size_t stop = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(lvl)]);
    for (std::size_t k = trail_.size(); k > stop; --k) {
        int v = var_of(trail_[k - 1]);
        phase_[static_cast<std::size_t>(v)] = assign_[static_cast<std::size_t>(v)];
        assign_[static_cast<std::size_t>(v)] = kUndef;
        reason_[static_cast<std::size_t>(v)] = -1;
        heap_insert(v);
    }
    trail_.resize(stop);
    trail_lim_.resize(static_cast<std::size_t>(lvl));
    qhead_ = stop;
}

int Solver::pick_branch()
{
    while (!heap_.empty()) {
        int v = heap_pop();
        if (assign_[static_cast<std::size_t>(v)] == kUndef) return v;
    }
    return -1;
}

bool Solver::locked(int ci) const
{
    const auto& lits = clauses_[static_cast<std::size_t>(ci)].lits;
    int v = var_of(lits[0]);
    return reason_[static_cast<std::size_t>(v)] == ci && lit_val(lits[0]) == 1;
}

void Solver::reduce_db()
{
    std::vector<int> cand;
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        const Clause& c = clauses_[i];
        if (c.learnt && !c.deleted && c.lits.size() > 2 && !locked(static_cast<int>(i))) cand.push_back(static_cast<int>(i));
    }
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
        return clauses_[static_cast<std::size_t>(a)].activity < clauses_[static_cast<std::size_t>(b)].activity;
    });
    for (std::size_t k = 0; k < cand.size() / 2; ++k) {
        Clause& c = clauses_[static_cast<std::size_t>(cand[k])];
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
        --num_learnts_;
    }
    for (auto& ws : watches_)
        ws.erase(std::remove_if(ws.begin(), ws.end(),
                                [&](const Watch& w) { return clauses_[static_cast<std::size_t>(w.clause)].deleted; }),
                 ws.end());
}

bool Solver::solve()
{
    if (!ok_) return false;
    backtrack(0);
    if (propagate() != -1) {
        ok_ = false;
        return false;
    }
    std::vector<Lit> learnt;
    int restart = 0;
    std::uint64_t budget = static_cast<std::uint64_t>(100 * luby(2, restart));
    std::uint64_t since_restart = 0;
    double max_learnts = static_cast<double>(clauses_.size()) / 3 + 2000;
    while (true) {
        int confl = propagate();
        if (confl != -1) {
            ++conflicts_;
            ++since_restart;
            if (level() == 0) {
                ok_ = false;
                return false;
            }
            int back = 0;
            analyze(confl, learnt, back);
            backtrack(back);
            if (learnt.size() == 1) {
                enqueue(learnt[0], -1);
            } else {
                clauses_.push_back({learnt, true, false, 0});
                int ci = static_cast<int>(clauses_.size()) - 1;
                attach(ci);
                bump_clause(ci);
                enqueue(learnt[0], ci);
                ++num_learnts_;
            }
            var_inc_ /= 0.95;
            cla_inc_ /= 0.999;
            continue;
        }
        if (since_restart >= budget) {
            backtrack(0);
            since_restart = 0;
            budget = static_cast<std::uint64_t>(100 * luby(2, ++restart));
            continue;
        }
        if (static_cast<double>(num_learnts_) >= max_learnts) {
            reduce_db();
            max_learnts *= 1.1;
        }
        int v = pick_branch();
        if (v < 0) {
            model_ = assign_;
            backtrack(0);
            return true;
        }
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        enqueue(mk_lit(v, phase_[static_cast<std::size_t>(v)] != 1), -1);
    }
}

}  // namespace qml::sat
