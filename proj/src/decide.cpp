#include "qml/decide.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <stdexcept>

#include "qml/bisim.hpp"

namespace qml {

using nlohmann::json;
using boost::multiprecision::cpp_int;

std::string to_string(Logic l)
{
    switch (l) {
    case Logic::Q1S5: return "q1s5";
    case Logic::Q1K: return "q1k";
    case Logic::ALC: return "alc";
    }
    return "?";
}

std::string to_string(Outcome o)
{
    switch (o) {
    case Outcome::Yes: return "yes";
    case Outcome::No: return "no";
    case Outcome::Unknown: return "unknown";
    }
    return "?";
}

Logic parse_logic(const std::string& s)
{
    if (s == "q1s5") return Logic::Q1S5;
    if (s == "q1k") return Logic::Q1K;
    if (s == "alc") return Logic::ALC;
    throw std::invalid_argument("unknown logic: " + s);
}

json SearchBounds::to_json() const
{
    return {{"w1", w1}, {"d1", d1}, {"w2", w2}, {"d2", d2}, {"depth", depth}, {"branch", branch},
            {"max_reducts", max_reducts}};
}

namespace {

std::string pow2_text(const cpp_int& e)
{
    if (e <= 256) return (cpp_int(1) << static_cast<unsigned>(e)).str();
    return "2^" + e.str();
}

bool pow2_le(const cpp_int& e, int x)
{
    if (e >= 62) return false;
    return (std::int64_t{1} << static_cast<int>(e)) <= x;
}

}  // namespace

std::string SizeBound::text_w() const { return pow2_text(log2_w); }
std::string SizeBound::text_d() const { return pow2_text(log2_d); }
std::string SizeBound::text() const { return "|W|<=" + text_w() + ",|D|<=" + text_d(); }
bool SizeBound::covered_by(int w, int d) const { return pow2_le(log2_w, w) && pow2_le(log2_d, d); }

SizeBound completeness_bound_size(int s, BoundProblem problem)
{
    cpp_int n = cpp_int(1) << s;  // log2 of the abstract type count is s
    SizeBound b;
    switch (problem) {
    case BoundProblem::Sat:
        b.log2_w = 3 * s;
        b.log2_d = 2 * s;
        break;
    case BoundProblem::IepS5:
        b.log2_w = 3 * s + 2 * n;
        b.log2_d = 2 * s + 2 * n;
        break;
    case BoundProblem::IepAlc: {
        cpp_int f = s + 2 * n;
        b.log2_w = 3 * f;
        b.log2_d = 2 * f;
        break;
    }
    }
    return b;
}

SizeBound completeness_bound(const Formula& phi, const Formula& psi, BoundProblem problem)
{
    Dag dag;
    std::vector<int> roots{dag.add(phi)};
    if (psi && problem != BoundProblem::Sat) roots.push_back(dag.add(psi));
    return completeness_bound_size(closure(dag, roots).size(), problem);
}

json Verdict::to_json() const
{
    json j{{"outcome", qml::to_string(outcome)}, {"bounds", bounds}, {"completeness_bound", completeness}};
    if (!models.empty()) {
        json w;
        json ms = json::array();
        for (const auto& m : models) ms.push_back(save_model(m));
        w["models"] = ms;
        json ps = json::array();
        for (std::size_t i = 0; i < points.size() && i < models.size(); ++i)
            ps.push_back({models[i].worlds[static_cast<std::size_t>(points[i].w)],
                          models[i].domain[static_cast<std::size_t>(points[i].d)]});
        w["points"] = ps;
        if (!relation.is_null()) w["relation"] = relation;
        j["witness"] = w;
    }
    if (!candidate.empty()) j["candidate"] = candidate;
    if (!note.empty()) j["note"] = note;
    return j;
}

bool provable_by_saturation(const Dag& dag, int root, Logic logic)
{
    sat::Solver s;
    int t = s.new_var();
    s.add_clause({sat::mk_lit(t)});
    std::unordered_map<int, sat::Lit> lit;
    std::unordered_map<int, sat::Lit> atom;
    for (int id : dag.reachable({root})) {
        const DagNode& n = dag.node(id);
        sat::Lit l = sat::mk_lit(t);
        switch (n.kind) {
        case Kind::Top: break;
        case Kind::Atom: {
            auto it = atom.find(n.sym);
            if (it == atom.end()) it = atom.emplace(n.sym, sat::mk_lit(s.new_var())).first;
            l = it->second;
            break;
        }
        case Kind::Not: l = sat::negate(lit.at(n.a)); break;
        case Kind::And: {
            sat::Lit a = lit.at(n.a), b = lit.at(n.b);
            l = sat::mk_lit(s.new_var());
            s.add_clause({sat::negate(l), a});
            s.add_clause({sat::negate(l), b});
            s.add_clause({l, sat::negate(a), sat::negate(b)});
            break;
        }
        case Kind::Exists:
        case Kind::Diamond:
        case Kind::Role:
            l = sat::mk_lit(s.new_var());
            break;
        }
        lit[id] = l;
    }
    for (int id : dag.reachable({root})) {
        const DagNode& n = dag.node(id);
        bool reflexive = n.kind == Kind::Exists || (n.kind == Kind::Diamond && logic != Logic::Q1K);
        if (reflexive) s.add_clause({sat::negate(lit.at(n.a)), lit.at(id)});
    }
    s.add_clause({sat::negate(lit.at(root))});
    return !s.solve();
}

namespace {

std::set<int> prop_ids(const Dag& dag, const Signature& props)
{
    std::set<int> out;
    for (const auto& p : props) {
        int id = dag.find_symbol(p);
        if (id >= 0) out.insert(id);
    }
    return out;
}

bool props_constant(const KripkeModel& m, const Signature& props)
{
    for (const auto& p : props)
        for (int w = 0; w < m.nw(); ++w)
            for (int d = 1; d < m.nd(); ++d)
                if (m.holds(p, w, d) != m.holds(p, w, 0)) return false;
    return true;
}

std::optional<KripkeModel> solve_shape(const Dag& dag, int root, const Shape& shape, const std::set<int>& props)
{
    sat::Solver s;
    Grounder g(dag, s, shape, props);
    g.require(root, 0, 0);
    if (!s.solve()) return std::nullopt;
    return g.extract(dag.atoms_of({root}), dag.roles_of({root}));
}

void check_holds(const KripkeModel& m, const Dag& dag, int root, Point p, const char* what)
{
    Evaluator ev(m, dag);
    if (!ev.holds(root, p.w, p.d)) throw std::logic_error(std::string("witness re-check failed: ") + what);
}

}  // namespace

std::vector<Shape> search_shapes(Logic logic, int max_w, int max_d, int depth, int branch)
{
    std::vector<Shape> out;
    if (logic == Logic::Q1K) {
        auto trees = tree_shapes(depth, branch);
        for (int d = 1; d <= max_d; ++d)
            for (const auto& t : trees) out.push_back(Shape::tree(t, d));
    } else {
        for (int w = 1; w <= max_w; ++w)
            for (int d = 1; d <= max_d; ++d) out.push_back(Shape::s5_grid(w, d));
    }
    std::stable_sort(out.begin(), out.end(), [](const Shape& a, const Shape& b) {
        if (a.nw * a.nd != b.nw * b.nd) return a.nw * a.nd < b.nw * b.nd;
        return a.nw < b.nw;
    });
    return out;
}

Verdict check_sat_bounded(Dag& dag, int root, Logic logic, const SearchBounds& b)
{
    Verdict v;
    v.bounds = b.to_json();
    std::set<int> props = prop_ids(dag, b.props);
    auto found = [&](KripkeModel m) {
        check_holds(m, dag, root, {0, 0}, "satisfying model");
        v.outcome = Outcome::Yes;
        v.models = {std::move(m)};
        v.points = {{0, 0}};
        return v;
    };
    if (logic == Logic::Q1K) {
        v.completeness = "none implemented";
        for (const Shape& sh : search_shapes(logic, 0, b.d1, b.depth, b.branch))
            if (auto m = solve_shape(dag, root, sh, props)) return found(std::move(*m));
        v.note = "no model within bounds";
        return v;
    }
    int s = closure(dag, {root}).size();
    SizeBound cb = completeness_bound_size(s, BoundProblem::Sat);
    v.completeness = logic == Logic::ALC ? "none implemented" : cb.text();
    bool covered = logic == Logic::Q1S5 && cb.covered_by(b.w1, b.d1);
    int mw = b.w1, md = b.d1;
    if (covered) {
        mw = static_cast<int>(std::int64_t{1} << static_cast<int>(cb.log2_w));
        md = static_cast<int>(std::int64_t{1} << static_cast<int>(cb.log2_d));
        if (s > 4) {
            v.note = "bounds reach the completeness bound but the exhaustive proof is too large to run";
            covered = false;
            mw = std::min(mw, b.w1);
            md = std::min(md, b.d1);
        }
    }
    // Duplicating worlds or elements preserves truth, so the largest grid decides every smaller one.
    std::optional<KripkeModel> big = solve_shape(dag, root, Shape::s5_grid(mw, md), props);
    if (!big) {
        if (covered) {
            v.outcome = Outcome::No;
            v.note = "unsatisfiable: no model at the completeness bound";
        } else if (v.note.empty()) {
            v.note = "no model within bounds";
        }
        return v;
    }
    for (const Shape& sh : search_shapes(logic, std::min(mw, 3), std::min(md, 3), 0, 0))
        if (auto m = solve_shape(dag, root, sh, props)) return found(std::move(*m));
    return found(std::move(*big));
}

Verdict check_valid_bounded(Dag& dag, int root, Logic logic, const SearchBounds& b)
{
    Verdict v;
    v.bounds = b.to_json();
    if (provable_by_saturation(dag, root, logic)) {
        v.outcome = Outcome::Yes;
        v.note = "propositional tautology over modal atoms";
        v.completeness = "not needed";
        return v;
    }
    Verdict s = check_sat_bounded(dag, dag.neg(root), logic, b);
    v.completeness = s.completeness;
    switch (s.outcome) {
    case Outcome::Yes:
        v.outcome = Outcome::No;
        v.models = std::move(s.models);
        v.points = std::move(s.points);
        v.note = "countermodel";
        break;
    case Outcome::No:
        v.outcome = Outcome::Yes;
        v.note = "no countermodel at the completeness bound";
        break;
    case Outcome::Unknown:
        v.note = "no countermodel within bounds";
        if (!s.note.empty() && s.note != "no model within bounds") v.note += "; " + s.note;
        break;
    }
    return v;
}

Verdict check_sat_bounded(const Formula& phi, Logic logic, const SearchBounds& b)
{
    Dag dag;
    return check_sat_bounded(dag, dag.add(phi), logic, b);
}

Verdict check_valid_bounded(const Formula& phi, Logic logic, const SearchBounds& b)
{
    Dag dag;
    return check_valid_bounded(dag, dag.add(phi), logic, b);
}

ReductList enumerate_reducts(const Dag& dag, int target, const Shape& shape, const std::vector<int>& sigma_atoms,
                             const std::vector<int>& sigma_roles, const std::vector<int>& atoms,
                             const std::vector<int>& roles, const std::set<int>& props, int cap)
{
    ReductList out;
    sat::Solver s;
    Grounder g(dag, s, shape, props);
    g.declare(sigma_atoms, sigma_roles);
    g.require(target, 0, 0);
    std::vector<sat::Lit> vars = g.vars_of(sigma_atoms, sigma_roles);
    while (s.solve()) {
        if (static_cast<int>(out.models.size()) >= cap) {
            out.capped = true;
            break;
        }
        out.models.push_back(g.extract(atoms, roles));
        std::vector<sat::Lit> block;
        for (sat::Lit l : vars) block.push_back(s.lit_value(l) ? sat::negate(l) : l);
        if (block.empty() || !s.add_clause(block)) break;
    }
    return out;
}

PairResult search_pairs(const PairSearch& ps, bool parallel)
{
    const Dag& dag = *ps.dag;
    PairResult res;
    std::vector<int> atoms_l = dag.atoms_of({ps.left}), atoms_r = dag.atoms_of({ps.right});
    std::vector<int> roles_l = dag.roles_of({ps.left}), roles_r = dag.roles_of({ps.right});
    std::set<int> used_atoms(atoms_l.begin(), atoms_l.end()), used_roles(roles_l.begin(), roles_l.end());
    used_atoms.insert(atoms_r.begin(), atoms_r.end());
    used_roles.insert(roles_r.begin(), roles_r.end());
    std::vector<int> sig_atoms, sig_roles;
    for (const auto& name : ps.sigma) {
        int id = dag.find_symbol(name);
        if (id < 0) continue;
        if (used_roles.count(id)) sig_roles.push_back(id);
        if (used_atoms.count(id)) sig_atoms.push_back(id);
    }
    auto with_sigma = [&](std::vector<int> xs, const std::vector<int>& extra) {
        for (int x : extra)
            if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
        return xs;
    };
    atoms_l = with_sigma(atoms_l, sig_atoms);
    atoms_r = with_sigma(atoms_r, sig_atoms);
    roles_l = with_sigma(roles_l, sig_roles);
    roles_r = with_sigma(roles_r, sig_roles);
    std::set<int> props = prop_ids(dag, ps.props);

    std::size_t nl = ps.left_shapes.size(), nr = ps.right_shapes.size();
    std::vector<std::optional<ReductList>> left(nl), right(nr);
    auto get_left = [&](std::size_t a) -> const ReductList& {
        if (!left[a]) left[a] = enumerate_reducts(dag, ps.left, ps.left_shapes[a], sig_atoms, sig_roles, atoms_l,
                                                  roles_l, props, ps.max_reducts);
        return *left[a];
    };
    auto get_right = [&](std::size_t b) -> const ReductList& {
        if (!right[b]) right[b] = enumerate_reducts(dag, ps.right, ps.right_shapes[b], sig_atoms, sig_roles,
                                                    atoms_r, roles_r, props, ps.max_reducts);
        return *right[b];
    };

    std::vector<std::optional<std::vector<std::uint64_t>>> left_keys(nl), right_keys(nr);
    auto keys_of = [&](std::optional<std::vector<std::uint64_t>>& slot,
                       const ReductList& list) -> const std::vector<std::uint64_t>& {
        if (!slot) {
            std::vector<std::uint64_t> ks(list.models.size());
            const long n = static_cast<long>(ks.size());
#pragma omp parallel for schedule(static) if (parallel)
            for (long i = 0; i < n; ++i) ks[static_cast<std::size_t>(i)] = ps.key(list.models[static_cast<std::size_t>(i)]);
            slot = std::move(ks);
        }
        return *slot;
    };

    struct Task {
        const KripkeModel* m1;
        const KripkeModel* m2;
    };
    std::size_t rounds = std::max(nl, nr);
    for (std::size_t r = 0; r < rounds; ++r) {
        std::vector<Task> tasks;
        for (std::size_t a = 0; a < nl && a <= r; ++a)
            for (std::size_t b = 0; b < nr && b <= r; ++b) {
                if (std::max(a, b) != r) continue;
                const ReductList& L = get_left(a);
                const ReductList& R = get_right(b);
                res.capped = res.capped || L.capped || R.capped;
                if (!ps.key) {
                    for (const auto& m1 : L.models)
                        for (const auto& m2 : R.models) tasks.push_back({&m1, &m2});
                    continue;
                }
                const std::vector<std::uint64_t>& kl = keys_of(left_keys[a], L);
                const std::vector<std::uint64_t>& kr = keys_of(right_keys[b], R);
                std::unordered_map<std::uint64_t, std::vector<std::size_t>> bucket;
                for (std::size_t j = 0; j < kr.size(); ++j) bucket[kr[j]].push_back(j);
                for (std::size_t i = 0; i < kl.size(); ++i) {
                    auto it = bucket.find(kl[i]);
                    if (it == bucket.end()) continue;
                    for (std::size_t j : it->second) tasks.push_back({&L.models[i], &R.models[j]});
                }
            }
        const long n = static_cast<long>(tasks.size());
        std::atomic<long> best{std::numeric_limits<long>::max()};
        std::vector<std::optional<json>> rel(tasks.size());
        if (parallel) {
#pragma omp parallel for schedule(dynamic, 16)
            for (long i = 0; i < n; ++i) {
                if (i > best.load()) continue;
                auto d = ps.bisimilar(*tasks[static_cast<std::size_t>(i)].m1, *tasks[static_cast<std::size_t>(i)].m2);
                if (!d) continue;
                rel[static_cast<std::size_t>(i)] = std::move(d);
                long cur = best.load();
                while (i < cur && !best.compare_exchange_weak(cur, i)) {
                }
            }
        } else {
            for (long i = 0; i < n; ++i) {
                auto d = ps.bisimilar(*tasks[static_cast<std::size_t>(i)].m1, *tasks[static_cast<std::size_t>(i)].m2);
                if (d) {
                    rel[static_cast<std::size_t>(i)] = std::move(d);
                    best = i;
                    break;
                }
            }
        }
        long found = best.load();
        res.pairs_checked += static_cast<std::size_t>(found == std::numeric_limits<long>::max() ? n : found + 1);
        if (found != std::numeric_limits<long>::max()) {
            res.found = true;
            res.m1 = *tasks[static_cast<std::size_t>(found)].m1;
            res.m2 = *tasks[static_cast<std::size_t>(found)].m2;
            res.relation = *rel[static_cast<std::size_t>(found)];
            return res;
        }
    }
    return res;
}

RootBisim s5_root_bisim(const Signature& sigma)
{
    return [sigma](const KripkeModel& m1, const KripkeModel& m2) -> std::optional<json> {
        for (const auto& p : sigma)
            if (m1.holds(p, 0, 0) != m2.holds(p, 0, 0)) return std::nullopt;
        S5Bisim b = max_bisim_s5(m1, m2, sigma);
        if (!b.beta1.has(0, 0) || !b.beta2.has(0, 0)) return std::nullopt;
        return dump(b, m1, m2);
    };
}

RootBisim k_root_bisim(const Signature& sigma, int k)
{
    return [sigma, k](const KripkeModel& m1, const KripkeModel& m2) -> std::optional<json> {
        for (const auto& p : sigma)
            if (m1.holds(p, 0, 0) != m2.holds(p, 0, 0)) return std::nullopt;
        KBisim b = max_k_bisim(m1, m2, sigma, k);
        if (!b.levels[static_cast<std::size_t>(k)].has(0, 0)) return std::nullopt;
        return dump(b, m1, m2);
    };
}

namespace {

S5Bisim identity_s5(const KripkeModel& m)
{
    S5Bisim b{Relation(m.nw(), m.nw()), Relation(m.nd(), m.nd())};
    for (int w = 0; w < m.nw(); ++w) b.beta1.set(w, w);
    for (int d = 0; d < m.nd(); ++d) b.beta2.set(d, d);
    return b;
}

KBisim identity_k(const KripkeModel& m, int k)
{
    KBisim b;
    for (int i = 0; i <= k; ++i) {
        Relation r(m.npoints(), m.npoints());
        for (int p = 0; p < m.npoints(); ++p) r.set(p, p);
        b.levels.push_back(r);
    }
    return b;
}

// Countermodel to φ→ψ as a witness pair (M, M) related by the identity.
Verdict identity_witness(const Verdict& counter, Logic logic, const Signature& sigma, int k)
{
    Verdict v;
    v.outcome = Outcome::No;
    const KripkeModel& m = counter.models.at(0);
    v.models = {m, m};
    v.points = {counter.points.at(0), counter.points.at(0)};
    v.relation = logic == Logic::Q1K ? dump(identity_k(m, k), m, m) : dump(identity_s5(m), m, m);
    Report r = logic == Logic::Q1K ? verify_bisimulation(identity_k(m, k), m, m, sigma)
                                   : verify_bisimulation(identity_s5(m), m, m, sigma);
    if (!r.empty()) throw std::logic_error("identity witness failed verification");
    v.note = "countermodel to phi -> psi related to itself by the identity";
    return v;
}

void verify_pair(const PairResult& pr, const Dag& dag, int left, int right, const Signature& sigma, Logic logic,
                 int k, const Signature& props)
{
    check_holds(pr.m1, dag, left, {0, 0}, "left target");
    check_holds(pr.m2, dag, right, {0, 0}, "right target");
    if (!props_constant(pr.m1, props) || !props_constant(pr.m2, props))
        throw std::logic_error("witness violates world-constant propositions");
    if (logic == Logic::Q1K) {
        KBisim b = max_k_bisim(pr.m1, pr.m2, sigma, k);
        if (!verify_bisimulation(b, pr.m1, pr.m2, sigma).empty() || !b.levels[static_cast<std::size_t>(k)].has(0, 0))
            throw std::logic_error("k-bisimulation witness failed verification");
    } else {
        S5Bisim b = max_bisim_s5(pr.m1, pr.m2, sigma);
        Relation pts = s5_point_relation(b, pr.m1, pr.m2, sigma);
        if (!verify_bisimulation(b, pr.m1, pr.m2, sigma).empty() || !pts.has(0, 0))
            throw std::logic_error("bisimulation witness failed verification");
    }
}

bool sig_within(const Formula& f, const Signature& sigma)
{
    for (const auto& s : signature_of(f))
        if (!sigma.count(s)) return false;
    return true;
}

Signature sig_of_ids(const Dag& dag, const std::vector<int>& roots)
{
    Signature s;
    for (int a : dag.atoms_of(roots)) s.insert(dag.symbol_name(a));
    return s;
}

std::string note_for_pair_failure(const PairResult& pr)
{
    std::string note = "no bisimilar pair within bounds (" + std::to_string(pr.pairs_checked) + " pairs checked)";
    if (pr.capped) note += "; reduct enumeration capped";
    return note;
}

// Search for a bisimilar pair of models of left and right; the shared step of every IEP/EDEP decider.
Verdict pair_verdict(Dag& dag, int left, int right, const Signature& sigma, Logic logic, const SearchBounds& b, int k)
{
    Verdict v;
    v.bounds = b.to_json();
    PairSearch ps;
    ps.dag = &dag;
    ps.left = left;
    ps.right = right;
    ps.sigma = sigma;
    ps.props = b.props;
    ps.max_reducts = b.max_reducts;
    if (logic == Logic::Q1K) {
        int depth = std::min(k, b.depth);
        ps.left_shapes = search_shapes(logic, 0, b.d1, depth, b.branch);
        ps.right_shapes = search_shapes(logic, 0, b.d2, depth, b.branch);
        ps.bisimilar = k_root_bisim(sigma, k);
        ps.key = [sigma, k](const KripkeModel& m) { return k_root_key(m, sigma, k); };
    } else {
        ps.left_shapes = search_shapes(logic, b.w1, b.d1, 0, 0);
        ps.right_shapes = search_shapes(logic, b.w2, b.d2, 0, 0);
        ps.bisimilar = s5_root_bisim(sigma);
        int rounds = b.w1 + b.d1 + b.w2 + b.d2 + 1;
        ps.key = [sigma, rounds](const KripkeModel& m) { return s5_root_key(m, sigma, rounds); };
    }
    PairResult pr = search_pairs(ps, b.parallel);
    if (pr.found) {
        verify_pair(pr, dag, left, right, sigma, logic, k, b.props);
        v.outcome = Outcome::No;
        v.models = {pr.m1, pr.m2};
        v.points = {{0, 0}, {0, 0}};
        v.relation = pr.relation;
        v.note = "bisimilar models of both targets";
        return v;
    }
    v.note = note_for_pair_failure(pr);
    return v;
}

std::optional<std::string> try_candidates(Dag& dag, const std::vector<Formula>& candidates, const Signature& sigma,
                                          const std::function<std::vector<int>(int)>& legs, Logic logic)
{
    for (const auto& chi : candidates) {
        if (!sig_within(chi, sigma)) continue;
        int c = dag.add(chi);
        bool ok = true;
        for (int leg : legs(c)) ok = ok && provable_by_saturation(dag, leg, logic);
        if (ok) return print_formula(chi, true);
    }
    return std::nullopt;
}

// σ-literals, tried after the inputs themselves.
void add_literals(std::vector<Formula>& cands, const Signature& sigma)
{
    for (const auto& p : sigma) {
        cands.push_back(mk_atom(p));
        cands.push_back(mk_not(mk_atom(p)));
    }
}

}  // namespace

Verdict decide_iep_s5(const Formula& phi, const Formula& psi, const SearchBounds& b, const std::vector<Formula>& hints)
{
    Signature sigma = sig_intersection(signature_of(phi), signature_of(psi));
    std::string cb = completeness_bound(phi, psi, BoundProblem::IepS5).text();
    Verdict valid = check_valid_bounded(mk_implies(phi, psi), Logic::Q1S5, b);
    if (valid.outcome == Outcome::No) {
        Verdict v = identity_witness(valid, Logic::Q1S5, sigma, 0);
        v.bounds = b.to_json();
        v.completeness = cb;
        return v;
    }
    Dag dag;
    int l = dag.add(phi), r = dag.add(psi);
    std::vector<Formula> cands = hints;
    cands.insert(cands.end(), {phi, psi, mk_top(), mk_bottom()});
    add_literals(cands, sigma);
    auto legs = [&](int c) { return std::vector<int>{dag.implies(l, c), dag.implies(c, r)}; };
    if (auto chi = try_candidates(dag, cands, sigma, legs, Logic::Q1S5)) {
        Verdict v;
        v.outcome = Outcome::Yes;
        v.candidate = *chi;
        v.note = "interpolant verified by propositional reasoning";
        v.bounds = b.to_json();
        v.completeness = cb;
        return v;
    }
    Verdict v = pair_verdict(dag, l, dag.neg(r), sigma, Logic::Q1S5, b, 0);
    v.completeness = cb;
    if (v.outcome == Outcome::Unknown && v.note.find("capped") == std::string::npos) {
        SizeBound sb = completeness_bound(phi, psi, BoundProblem::IepS5);
        if (sb.covered_by(b.w1, b.d1) && sb.covered_by(b.w2, b.d2)) {
            v.outcome = Outcome::Yes;
            v.note = "no bisimilar pair up to the completeness bound";
        }
    }
    return v;
}

Verdict decide_edep_s5(const Formula& phi, const Formula& psi, const Signature& sigma, const SearchBounds& b,
                       const std::vector<Formula>& hints)
{
    std::string cb = completeness_bound(mk_and(phi, psi), mk_and(phi, mk_not(psi)), BoundProblem::IepS5).text();
    Dag dag;
    int f = dag.add(phi), t = dag.add(psi);
    std::vector<Formula> cands = hints;
    cands.insert(cands.end(), {psi, mk_top(), mk_bottom()});
    add_literals(cands, sigma);
    auto legs = [&](int c) { return std::vector<int>{dag.implies(f, dag.iff(t, c))}; };
    if (auto chi = try_candidates(dag, cands, sigma, legs, Logic::Q1S5)) {
        Verdict v;
        v.outcome = Outcome::Yes;
        v.candidate = *chi;
        v.note = "definition verified by propositional reasoning";
        v.bounds = b.to_json();
        v.completeness = cb;
        return v;
    }
    Signature used = sig_intersection(sigma, sig_of_ids(dag, {f, t}));
    Verdict v = pair_verdict(dag, dag.conj(f, t), dag.conj(f, dag.neg(t)), used, Logic::Q1S5, b, 0);
    v.completeness = cb;
    if (v.outcome == Outcome::Unknown && v.note.find("capped") == std::string::npos) {
        SizeBound sb = completeness_bound(mk_and(phi, psi), mk_and(phi, mk_not(psi)), BoundProblem::IepS5);
        if (sb.covered_by(b.w1, b.d1) && sb.covered_by(b.w2, b.d2)) {
            v.outcome = Outcome::Yes;
            v.note = "no bisimilar pair up to the completeness bound";
        }
    }
    return v;
}

Verdict decide_iep_k(const Formula& phi, const Formula& psi, const SearchBounds& b, const std::vector<Formula>& hints)
{
    Signature sigma = sig_intersection(signature_of(phi), signature_of(psi));
    int n = std::max(modal_depth(phi), modal_depth(psi));
    const std::string cb = "non-elementary; not enforced";
    Verdict valid = check_valid_bounded(mk_implies(phi, psi), Logic::Q1K, b);
    if (valid.outcome == Outcome::No) {
        Verdict v = identity_witness(valid, Logic::Q1K, sigma, n);
        v.bounds = b.to_json();
        v.completeness = cb;
        return v;
    }
    Dag dag;
    int l = dag.add(phi), r = dag.add(psi);
    std::vector<Formula> cands = hints;
    cands.insert(cands.end(), {phi, psi, mk_top(), mk_bottom()});
    add_literals(cands, sigma);
    auto legs = [&](int c) { return std::vector<int>{dag.implies(l, c), dag.implies(c, r)}; };
    if (auto chi = try_candidates(dag, cands, sigma, legs, Logic::Q1K)) {
        Verdict v;
        v.outcome = Outcome::Yes;
        v.candidate = *chi;
        v.note = "interpolant verified by propositional reasoning";
        v.bounds = b.to_json();
        v.completeness = cb;
        return v;
    }
    Verdict v = pair_verdict(dag, l, dag.neg(r), sigma, Logic::Q1K, b, n);
    v.completeness = cb;
    if (n > b.depth) v.note += "; trees truncated to depth " + std::to_string(b.depth);
    return v;
}

Verdict verify_legs(Dag& dag, const std::vector<int>& legs, Logic logic, const SearchBounds& b)
{
    Verdict out;
    out.outcome = Outcome::Yes;
    out.bounds = b.to_json();
    std::vector<std::string> notes;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        Verdict v = check_valid_bounded(dag, legs[i], logic, b);
        out.completeness = v.completeness;
        notes.push_back("leg " + std::to_string(i + 1) + ": " + to_string(v.outcome) + " (" + v.note + ")");
        if (v.outcome == Outcome::No) {
            out.outcome = Outcome::No;
            out.models = v.models;
            out.points = v.points;
            break;
        }
        if (v.outcome == Outcome::Unknown) out.outcome = Outcome::Unknown;
    }
    for (const auto& n : notes) out.note += (out.note.empty() ? "" : "; ") + n;
    return out;
}

Verdict verify_candidate(CandidateKind kind, const Formula& chi, const Formula& phi, const Formula& psi,
                         const Signature& sigma_in, Logic logic, const SearchBounds& b)
{
    Signature sigma = sigma_in;
    if (kind == CandidateKind::Interpolant && sigma.empty())
        sigma = sig_intersection(signature_of(phi), signature_of(psi));
    Signature outside;
    for (const auto& s : signature_of(chi))
        if (!sigma.count(s)) outside.insert(s);
    if (!outside.empty()) {
        Verdict v;
        v.outcome = Outcome::No;
        v.bounds = b.to_json();
        v.note = "signature condition violated by " + print_signature(outside);
        v.candidate = print_formula(chi, true);
        return v;
    }
    Dag dag;
    int c = dag.add(chi), f = dag.add(phi), t = dag.add(psi);
    std::vector<int> legs;
    if (kind == CandidateKind::Interpolant)
        legs = {dag.implies(f, c), dag.implies(c, t)};
    else
        legs = {dag.implies(f, dag.iff(t, c))};
    Verdict v = verify_legs(dag, legs, logic, b);
    v.candidate = print_formula(chi, true);
    return v;
}

ReducedInstance edep_to_iep(const Formula& phi, const Formula& psi, const Signature& sigma)
{
    Signature all = sig_union(signature_of(phi), signature_of(psi));
    Renaming r = fresh_renaming(all, sigma, all);
    ReducedInstance out;
    out.left = mk_and(phi, psi);
    out.right = mk_implies(rename_atoms(phi, r), rename_atoms(psi, r));
    out.sigma = sig_intersection(signature_of(out.left), signature_of(out.right));
    return out;
}

ReducedInstance iep_to_edep(const Formula& phi, const Formula& psi)
{
    ReducedInstance out;
    out.left = mk_implies(psi, phi);
    out.right = psi;
    out.sigma = sig_intersection(signature_of(phi), signature_of(psi));
    out.side_validity = mk_implies(phi, psi);
    return out;
}

Verdict decide_iep_via_edep(const Formula& phi, const Formula& psi, const SearchBounds& b)
{
    ReducedInstance inst = iep_to_edep(phi, psi);
    Signature sigma = inst.sigma;
    Verdict valid = check_valid_bounded(*inst.side_validity, Logic::Q1S5, b);
    if (valid.outcome == Outcome::No) {
        Verdict v = identity_witness(valid, Logic::Q1S5, sigma, 0);
        v.bounds = b.to_json();
        return v;
    }
    Verdict e = decide_edep_s5(inst.left, inst.right, inst.sigma, b);
    if (e.outcome == Outcome::No) {
        e.note = "via definability: " + e.note;
        return e;
    }
    if (e.outcome == Outcome::Yes && valid.outcome == Outcome::Yes) {
        e.note = "via definability: " + e.note;
        return e;
    }
    e.outcome = Outcome::Unknown;
    e.note = "via definability: validity " + to_string(valid.outcome) + ", definition " + e.note;
    return e;
}

Verdict decide_edep_via_iep(const Formula& phi, const Formula& psi, const Signature& sigma, const SearchBounds& b)
{
    Signature all = sig_union(signature_of(phi), signature_of(psi));
    Renaming r = fresh_renaming(all, sigma, all);
    ReducedInstance inst = edep_to_iep(phi, psi, sigma);
    Verdict v = decide_iep_s5(inst.left, inst.right, b);
    if (v.outcome == Outcome::No && v.models.size() == 2) {
        // The right model satisfies the primed copy; rename it back to read it as a model of φ∧¬ψ.
        KripkeModel& m2 = v.models[1];
        std::map<std::string, Bits> val;
        for (auto& [p, bits] : m2.val) {
            bool primed = false;
            for (const auto& [orig, fresh] : r)
                if (fresh == p) {
                    val[orig] = bits;
                    primed = true;
                }
            if (!primed && sigma.count(p)) val[p] = bits;
        }
        m2.val = val;
        Dag dag;
        int f = dag.add(phi), t = dag.add(psi);
        check_holds(v.models[0], dag, dag.conj(f, t), v.points[0], "reduced left target");
        check_holds(m2, dag, dag.conj(f, dag.neg(t)), v.points[1], "reduced right target");
    }
    v.note = "via interpolation: " + v.note;
    return v;
}

}  // namespace qml
