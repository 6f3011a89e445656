#pragma once

// Shared generators and independent oracles for the test suites.

#include <random>
#include <string>
#include <vector>

#include "qml/bisim.hpp"
#include "qml/dag.hpp"
#include "qml/formula.hpp"
#include "qml/kripke.hpp"

namespace qtest {

using namespace qml;

inline int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline KripkeModel random_s5(std::mt19937& rng, int nw, int nd, const std::vector<std::string>& atoms, double density = 0.5)
{
    KripkeModel m = make_model(nw, nd, true);
    for (const auto& p : atoms)
        for (int w = 0; w < nw; ++w)
            for (int d = 0; d < nd; ++d)
                if (coin(rng, density)) m.set(p, w, d);
    return m;
}

inline KripkeModel random_k(std::mt19937& rng, int nw, int nd, const std::vector<std::string>& atoms, double density = 0.5)
{
    KripkeModel m = make_model(nw, nd, false);
    for (int w = 0; w < nw; ++w)
        for (int v = 0; v < nw; ++v)
            if (coin(rng, 0.4)) m.succ[static_cast<std::size_t>(w)].push_back(v);
    for (const auto& p : atoms)
        for (int w = 0; w < nw; ++w)
            for (int d = 0; d < nd; ++d)
                if (coin(rng, density)) m.set(p, w, d);
    return m;
}

inline Formula random_formula(std::mt19937& rng, const std::vector<std::string>& atoms, int size)
{
    if (size <= 1 || coin(rng, 0.15)) {
        int k = pick(rng, 0, static_cast<int>(atoms.size()) + 1);
        if (k == static_cast<int>(atoms.size())) return mk_top();
        if (k > static_cast<int>(atoms.size())) return mk_bottom();
        return mk_atom(atoms[static_cast<std::size_t>(k)]);
    }
    switch (pick(rng, 0, 9)) {
    case 0: return mk_not(random_formula(rng, atoms, size - 1));
    case 1: return mk_and(random_formula(rng, atoms, size / 2), random_formula(rng, atoms, size / 2));
    case 2: return mk_or(random_formula(rng, atoms, size / 2), random_formula(rng, atoms, size / 2));
    case 3: return mk_implies(random_formula(rng, atoms, size / 2), random_formula(rng, atoms, size / 2));
    case 4: return mk_iff(random_formula(rng, atoms, size / 2), random_formula(rng, atoms, size / 2));
    case 5: return mk_diamond(random_formula(rng, atoms, size - 1));
    case 6: return mk_box(random_formula(rng, atoms, size - 1));
    case 7: return mk_exists(random_formula(rng, atoms, size - 1));
    case 8: return mk_forall(random_formula(rng, atoms, size - 1));
    default: return mk_not(mk_atom(atoms[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(atoms.size()) - 1))]));
    }
}

// Direct recursive semantics over the AST.
inline bool naive_eval(const KripkeModel& m, int w, int d, const Formula& f)
{
    switch (f->op) {
    case Op::Top: return true;
    case Op::Bottom: return false;
    case Op::Atom: {
        auto it = m.val.find(f->name);
        return it != m.val.end() && it->second[static_cast<std::size_t>(w * m.nd() + d)];
    }
    case Op::Not: return !naive_eval(m, w, d, f->a);
    case Op::And: return naive_eval(m, w, d, f->a) && naive_eval(m, w, d, f->b);
    case Op::Or: return naive_eval(m, w, d, f->a) || naive_eval(m, w, d, f->b);
    case Op::Implies: return !naive_eval(m, w, d, f->a) || naive_eval(m, w, d, f->b);
    case Op::Iff: return naive_eval(m, w, d, f->a) == naive_eval(m, w, d, f->b);
    case Op::Diamond:
    case Op::Box: {
        bool dia = f->op == Op::Diamond;
        for (int v = 0; v < m.nw(); ++v) {
            bool acc = m.s5 || [&] {
                for (int x : m.succ[static_cast<std::size_t>(w)])
                    if (x == v) return true;
                return false;
            }();
            if (acc && naive_eval(m, v, d, f->a) == dia) return dia;
        }
        return !dia;
    }
    case Op::Exists:
    case Op::Forall: {
        bool ex = f->op == Op::Exists;
        for (int e = 0; e < m.nd(); ++e)
            if (naive_eval(m, w, e, f->a) == ex) return ex;
        return !ex;
    }
    }
    return false;
}

inline std::vector<int> naive_succ(const KripkeModel& m, int w)
{
    if (!m.s5) return m.succ[static_cast<std::size_t>(w)];
    std::vector<int> all;
    for (int v = 0; v < m.nw(); ++v) all.push_back(v);
    return all;
}

// Greatest fixpoint by repeated deletion over point pairs.
inline Relation naive_bisim(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    int n1 = m1.nd(), n2 = m2.nd();
    Relation r(m1.npoints(), m2.npoints());
    for (int w1 = 0; w1 < m1.nw(); ++w1)
        for (int d1 = 0; d1 < n1; ++d1)
            for (int w2 = 0; w2 < m2.nw(); ++w2)
                for (int d2 = 0; d2 < n2; ++d2) {
                    bool ok = true;
                    for (const auto& p : sigma) ok = ok && m1.holds(p, w1, d1) == m2.holds(p, w2, d2);
                    r.set(w1 * n1 + d1, w2 * n2 + d2, ok);
                }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int w1 = 0; w1 < m1.nw(); ++w1)
            for (int d1 = 0; d1 < n1; ++d1)
                for (int w2 = 0; w2 < m2.nw(); ++w2)
                    for (int d2 = 0; d2 < n2; ++d2) {
                        if (!r.has(w1 * n1 + d1, w2 * n2 + d2)) continue;
                        bool ok = true;
                        for (int v1 : naive_succ(m1, w1)) {
                            bool hit = false;
                            for (int v2 : naive_succ(m2, w2)) hit = hit || r.has(v1 * n1 + d1, v2 * n2 + d2);
                            ok = ok && hit;
                        }
                        for (int v2 : naive_succ(m2, w2)) {
                            bool hit = false;
                            for (int v1 : naive_succ(m1, w1)) hit = hit || r.has(v1 * n1 + d1, v2 * n2 + d2);
                            ok = ok && hit;
                        }
                        for (int e1 = 0; e1 < n1; ++e1) {
                            bool hit = false;
                            for (int e2 = 0; e2 < n2; ++e2) hit = hit || r.has(w1 * n1 + e1, w2 * n2 + e2);
                            ok = ok && hit;
                        }
                        for (int e2 = 0; e2 < n2; ++e2) {
                            bool hit = false;
                            for (int e1 = 0; e1 < n1; ++e1) hit = hit || r.has(w1 * n1 + e1, w2 * n2 + e2);
                            ok = ok && hit;
                        }
                        if (!ok) {
                            r.set(w1 * n1 + d1, w2 * n2 + d2, false);
                            changed = true;
                        }
                    }
    }
    return r;
}

// β_k by the level recurrence, computed without the library.
inline std::vector<Relation> naive_k_bisim(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma, int k)
{
    int n1 = m1.nd(), n2 = m2.nd();
    std::vector<Relation> levels;
    Relation r(m1.npoints(), m2.npoints());
    for (int w1 = 0; w1 < m1.nw(); ++w1)
        for (int w2 = 0; w2 < m2.nw(); ++w2) {
            // β_0: the literal types agree and every literal type at w1 is realized at w2 and back.
            auto lit = [&](const KripkeModel& m, int w, int d) {
                std::vector<bool> t;
                for (const auto& p : sigma) t.push_back(m.holds(p, w, d));
                return t;
            };
            bool worlds_ok = true;
            for (int e1 = 0; e1 < n1; ++e1) {
                bool hit = false;
                for (int e2 = 0; e2 < n2; ++e2) hit = hit || lit(m1, w1, e1) == lit(m2, w2, e2);
                worlds_ok = worlds_ok && hit;
            }
            for (int e2 = 0; e2 < n2; ++e2) {
                bool hit = false;
                for (int e1 = 0; e1 < n1; ++e1) hit = hit || lit(m1, w1, e1) == lit(m2, w2, e2);
                worlds_ok = worlds_ok && hit;
            }
            for (int d1 = 0; d1 < n1; ++d1)
                for (int d2 = 0; d2 < n2; ++d2) r.set(w1 * n1 + d1, w2 * n2 + d2, worlds_ok && lit(m1, w1, d1) == lit(m2, w2, d2));
        }
    levels.push_back(r);
    for (int i = 1; i <= k; ++i) {
        const Relation& prev = levels.back();
        Relation step(m1.npoints(), m2.npoints());
        for (int w1 = 0; w1 < m1.nw(); ++w1)
            for (int d1 = 0; d1 < n1; ++d1)
                for (int w2 = 0; w2 < m2.nw(); ++w2)
                    for (int d2 = 0; d2 < n2; ++d2) {
                        bool ok = levels[0].has(w1 * n1 + d1, w2 * n2 + d2);
                        for (int v1 : naive_succ(m1, w1)) {
                            bool hit = false;
                            for (int v2 : naive_succ(m2, w2)) hit = hit || prev.has(v1 * n1 + d1, v2 * n2 + d2);
                            ok = ok && hit;
                        }
                        for (int v2 : naive_succ(m2, w2)) {
                            bool hit = false;
                            for (int v1 : naive_succ(m1, w1)) hit = hit || prev.has(v1 * n1 + d1, v2 * n2 + d2);
                            ok = ok && hit;
                        }
                        step.set(w1 * n1 + d1, w2 * n2 + d2, ok);
                    }
        // Close under the element quantifier: every element at w1 needs a partner at w2 and back.
        for (int w1 = 0; w1 < m1.nw(); ++w1)
            for (int w2 = 0; w2 < m2.nw(); ++w2) {
                bool ok = true;
                for (int e1 = 0; e1 < n1; ++e1) {
                    bool hit = false;
                    for (int e2 = 0; e2 < n2; ++e2) hit = hit || step.has(w1 * n1 + e1, w2 * n2 + e2);
                    ok = ok && hit;
                }
                for (int e2 = 0; e2 < n2; ++e2) {
                    bool hit = false;
                    for (int e1 = 0; e1 < n1; ++e1) hit = hit || step.has(w1 * n1 + e1, w2 * n2 + e2);
                    ok = ok && hit;
                }
                if (!ok)
                    for (int d1 = 0; d1 < n1; ++d1)
                        for (int d2 = 0; d2 < n2; ++d2) step.set(w1 * n1 + d1, w2 * n2 + d2, false);
            }
        levels.push_back(step);
    }
    return levels;
}

struct PairCase {
    KripkeModel m1, m2;
    Point p1, p2;
    Formula phi, psi;
};

// Random inputs with φ at p1, ¬ψ at p2 and p1 ~σ p2; closure of (φ,ψ) kept at most max_closure.
inline std::vector<PairCase> bisim_consistent_pairs(unsigned seed, int count, int max_closure)
{
    std::mt19937 rng(seed);
    std::vector<PairCase> out;
    while (static_cast<int>(out.size()) < count) {
        Formula phi = random_formula(rng, {"p", "q"}, 3), psi = random_formula(rng, {"q", "r"}, 3);
        Dag dag;
        if (closure(dag, {dag.add(phi), dag.add(psi)}).size() > max_closure) continue;
        Signature sigma = sig_intersection(signature_of(phi), signature_of(psi));
        KripkeModel a = random_s5(rng, pick(rng, 1, 2), pick(rng, 1, 2), {"p", "q", "r"});
        KripkeModel b = random_s5(rng, pick(rng, 1, 2), pick(rng, 1, 2), {"p", "q", "r"});
        S5Bisim s = max_bisim_s5(a, b, sigma);
        Relation r = s5_point_relation(s, a, b, sigma);
        bool done = false;
        for (int x = 0; x < a.npoints() && !done; ++x)
            for (int y = 0; y < b.npoints() && !done; ++y) {
                Point p1{x / a.nd(), x % a.nd()}, p2{y / b.nd(), y % b.nd()};
                if (r.has(x, y) && naive_eval(a, p1.w, p1.d, phi) && !naive_eval(b, p2.w, p2.d, psi)) {
                    out.push_back({a, b, p1, p2, phi, psi});
                    done = true;
                }
            }
    }
    return out;
}

}  // namespace qtest
