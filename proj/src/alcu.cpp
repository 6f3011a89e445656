#include "qml/alcu.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qml {

using nlohmann::json;

bool dl_model_check(const KripkeModel& m, Point p, const Concept& c)
{
    Dag dag;
    int id = add_concept(dag, c);
    Evaluator ev(m, dag);
    return ev.holds(id, p.w, p.d);
}

Concept ontology_to_concept(const Ontology& o)
{
    std::vector<Concept> parts;
    for (const auto& ci : o) parts.push_back(c_all(kUniversalRole, c_implies(ci.lhs, ci.rhs)));
    return c_and_all(parts);
}

Concept concept_of_dag(const Dag& dag, int id)
{
    const DagNode& n = dag.node(id);
    switch (n.kind) {
    case Kind::Top: return c_top();
    case Kind::Atom: return c_name(dag.symbol_name(n.sym));
    case Kind::Not: return c_not(concept_of_dag(dag, n.a));
    case Kind::And: return c_and(concept_of_dag(dag, n.a), concept_of_dag(dag, n.b));
    case Kind::Exists: return c_some(kUniversalRole, concept_of_dag(dag, n.a));
    case Kind::Diamond: return c_diamond(concept_of_dag(dag, n.a));
    case Kind::Role: return c_some(dag.symbol_name(n.sym), concept_of_dag(dag, n.a));
    }
    return c_top();
}

namespace {

std::vector<std::string> sigma_roles(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    std::vector<std::string> out;
    for (const auto& s : sigma)
        if (m1.roles.count(s) || m2.roles.count(s)) out.push_back(s);
    return out;
}

std::vector<std::string> sigma_names(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    std::vector<std::string> out;
    for (const auto& s : sigma)
        if (!m1.roles.count(s) && !m2.roles.count(s)) out.push_back(s);
    return out;
}

std::string pt(const KripkeModel& m, int w, int d)
{
    return "(" + m.worlds[static_cast<std::size_t>(w)] + "," + m.domain[static_cast<std::size_t>(d)] + ")";
}

// Condition (r) in one direction for a related point pair.
bool forth_roles(const KripkeModel& a, const KripkeModel& b, const Relation& beta, bool flip, int wa, int da,
                 int wb, int db, const std::vector<std::string>& roles, std::string* which)
{
    for (const auto& r : roles)
        for (int ea = 0; ea < a.nd(); ++ea) {
            if (!a.edge(r, wa, da, ea)) continue;
            bool ok = false;
            for (int eb = 0; eb < b.nd() && !ok; ++eb) {
                if (!b.edge(r, wb, db, eb)) continue;
                ok = flip ? beta.has(b.point(wb, eb), a.point(wa, ea)) : beta.has(a.point(wa, ea), b.point(wb, eb));
            }
            if (!ok) {
                if (which) *which = r + " edge " + pt(a, wa, da) + "->" + a.domain[static_cast<std::size_t>(ea)];
                return false;
            }
        }
    return true;
}

}  // namespace

TripleBisim max_bisim_alcu(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    std::vector<std::string> names = sigma_names(m1, m2, sigma), roles = sigma_roles(m1, m2, sigma);
    TripleBisim t{Relation(m1.nw(), m2.nw(), true), Relation(m1.nd(), m2.nd(), true),
                  Relation(m1.npoints(), m2.npoints())};
    for (int w1 = 0; w1 < m1.nw(); ++w1)
        for (int d1 = 0; d1 < m1.nd(); ++d1)
            for (int w2 = 0; w2 < m2.nw(); ++w2)
                for (int d2 = 0; d2 < m2.nd(); ++d2) {
                    bool same = true;
                    for (const auto& a : names) same = same && m1.holds(a, w1, d1) == m2.holds(a, w2, d2);
                    if (same) t.beta.set(m1.point(w1, d1), m2.point(w2, d2));
                }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int w1 = 0; w1 < m1.nw(); ++w1)
            for (int d1 = 0; d1 < m1.nd(); ++d1)
                for (int w2 = 0; w2 < m2.nw(); ++w2)
                    for (int d2 = 0; d2 < m2.nd(); ++d2) {
                        int p1 = m1.point(w1, d1), p2 = m2.point(w2, d2);
                        if (!t.beta.has(p1, p2)) continue;
                        bool keep = t.beta1.has(w1, w2) && t.beta2.has(d1, d2) &&
                                    forth_roles(m1, m2, t.beta, false, w1, d1, w2, d2, roles, nullptr) &&
                                    forth_roles(m2, m1, t.beta, true, w2, d2, w1, d1, roles, nullptr);
                        if (!keep) {
                            t.beta.set(p1, p2, false);
                            changed = true;
                        }
                    }
        for (int w1 = 0; w1 < m1.nw(); ++w1)
            for (int w2 = 0; w2 < m2.nw(); ++w2) {
                if (!t.beta1.has(w1, w2)) continue;
                bool ok = true;
                for (int d1 = 0; d1 < m1.nd() && ok; ++d1) {
                    bool hit = false;
                    for (int d2 = 0; d2 < m2.nd() && !hit; ++d2) hit = t.beta.has(m1.point(w1, d1), m2.point(w2, d2));
                    ok = hit;
                }
                for (int d2 = 0; d2 < m2.nd() && ok; ++d2) {
                    bool hit = false;
                    for (int d1 = 0; d1 < m1.nd() && !hit; ++d1) hit = t.beta.has(m1.point(w1, d1), m2.point(w2, d2));
                    ok = hit;
                }
                if (!ok) {
                    t.beta1.set(w1, w2, false);
                    changed = true;
                }
            }
        for (int d1 = 0; d1 < m1.nd(); ++d1)
            for (int d2 = 0; d2 < m2.nd(); ++d2) {
                if (!t.beta2.has(d1, d2)) continue;
                bool ok = true;
                for (int w1 = 0; w1 < m1.nw() && ok; ++w1) {
                    bool hit = false;
                    for (int w2 = 0; w2 < m2.nw() && !hit; ++w2) hit = t.beta.has(m1.point(w1, d1), m2.point(w2, d2));
                    ok = hit;
                }
                for (int w2 = 0; w2 < m2.nw() && ok; ++w2) {
                    bool hit = false;
                    for (int w1 = 0; w1 < m1.nw() && !hit; ++w1) hit = t.beta.has(m1.point(w1, d1), m2.point(w2, d2));
                    ok = hit;
                }
                if (!ok) {
                    t.beta2.set(d1, d2, false);
                    changed = true;
                }
            }
    }
    return t;
}

TripleBisim identity_triple(const KripkeModel& m)
{
    TripleBisim t{Relation(m.nw(), m.nw()), Relation(m.nd(), m.nd()), Relation(m.npoints(), m.npoints())};
    for (int w = 0; w < m.nw(); ++w) t.beta1.set(w, w);
    for (int d = 0; d < m.nd(); ++d) t.beta2.set(d, d);
    for (int p = 0; p < m.npoints(); ++p) t.beta.set(p, p);
    return t;
}

Report verify_bisimulation(const TripleBisim& b, const KripkeModel& m1, const KripkeModel& m2,
                           const Signature& sigma)
{
    Report rep;
    if (b.beta1.n1 != m1.nw() || b.beta1.n2 != m2.nw() || b.beta2.n1 != m1.nd() || b.beta2.n2 != m2.nd() ||
        b.beta.n1 != m1.npoints() || b.beta.n2 != m2.npoints()) {
        rep.push_back({"shape", "relation sizes do not match the models"});
        return rep;
    }
    std::vector<std::string> names = sigma_names(m1, m2, sigma), roles = sigma_roles(m1, m2, sigma);
    for (int w1 = 0; w1 < m1.nw(); ++w1)
        for (int w2 = 0; w2 < m2.nw(); ++w2) {
            if (!b.beta1.has(w1, w2)) continue;
            for (int d1 = 0; d1 < m1.nd(); ++d1) {
                bool hit = false;
                for (int d2 = 0; d2 < m2.nd() && !hit; ++d2) hit = b.beta.has(m1.point(w1, d1), m2.point(w2, d2));
                if (!hit) rep.push_back({"w", "world pair " + m1.worlds[static_cast<std::size_t>(w1)] + "," +
                                                  m2.worlds[static_cast<std::size_t>(w2)] + " lacks a partner for " +
                                                  m1.domain[static_cast<std::size_t>(d1)]});
            }
            for (int d2 = 0; d2 < m2.nd(); ++d2) {
                bool hit = false;
                for (int d1 = 0; d1 < m1.nd() && !hit; ++d1) hit = b.beta.has(m1.point(w1, d1), m2.point(w2, d2));
                if (!hit) rep.push_back({"w", "world pair " + m1.worlds[static_cast<std::size_t>(w1)] + "," +
                                                  m2.worlds[static_cast<std::size_t>(w2)] + " lacks a partner for " +
                                                  m2.domain[static_cast<std::size_t>(d2)]});
            }
        }
    for (int d1 = 0; d1 < m1.nd(); ++d1)
        for (int d2 = 0; d2 < m2.nd(); ++d2) {
            if (!b.beta2.has(d1, d2)) continue;
            for (int w1 = 0; w1 < m1.nw(); ++w1) {
                bool hit = false;
                for (int w2 = 0; w2 < m2.nw() && !hit; ++w2) hit = b.beta.has(m1.point(w1, d1), m2.point(w2, d2));
                if (!hit) rep.push_back({"d", "element pair " + m1.domain[static_cast<std::size_t>(d1)] + "," +
                                                  m2.domain[static_cast<std::size_t>(d2)] + " lacks a partner for " +
                                                  m1.worlds[static_cast<std::size_t>(w1)]});
            }
            for (int w2 = 0; w2 < m2.nw(); ++w2) {
                bool hit = false;
                for (int w1 = 0; w1 < m1.nw() && !hit; ++w1) hit = b.beta.has(m1.point(w1, d1), m2.point(w2, d2));
                if (!hit) rep.push_back({"d", "element pair " + m1.domain[static_cast<std::size_t>(d1)] + "," +
                                                  m2.domain[static_cast<std::size_t>(d2)] + " lacks a partner for " +
                                                  m2.worlds[static_cast<std::size_t>(w2)]});
            }
        }
    for (int w1 = 0; w1 < m1.nw(); ++w1)
        for (int d1 = 0; d1 < m1.nd(); ++d1)
            for (int w2 = 0; w2 < m2.nw(); ++w2)
                for (int d2 = 0; d2 < m2.nd(); ++d2) {
                    if (!b.beta.has(m1.point(w1, d1), m2.point(w2, d2))) continue;
                    std::string pair = pt(m1, w1, d1) + "~" + pt(m2, w2, d2);
                    if (!b.beta1.has(w1, w2) || !b.beta2.has(d1, d2)) rep.push_back({"c", pair});
                    for (const auto& a : names)
                        if (m1.holds(a, w1, d1) != m2.holds(a, w2, d2)) rep.push_back({"a", pair + " differ on " + a});
                    std::string which;
                    if (!forth_roles(m1, m2, b.beta, false, w1, d1, w2, d2, roles, &which))
                        rep.push_back({"r", pair + " forth " + which});
                    if (!forth_roles(m2, m1, b.beta, true, w2, d2, w1, d1, roles, &which))
                        rep.push_back({"r", pair + " back " + which});
                }
    return rep;
}

json dump(const TripleBisim& b, const KripkeModel& m1, const KripkeModel& m2)
{
    json w = json::array(), d = json::array();
    for (int i = 0; i < m1.nw(); ++i)
        for (int j = 0; j < m2.nw(); ++j)
            if (b.beta1.has(i, j)) w.push_back({m1.worlds[static_cast<std::size_t>(i)], m2.worlds[static_cast<std::size_t>(j)]});
    for (int i = 0; i < m1.nd(); ++i)
        for (int j = 0; j < m2.nd(); ++j)
            if (b.beta2.has(i, j)) d.push_back({m1.domain[static_cast<std::size_t>(i)], m2.domain[static_cast<std::size_t>(j)]});
    return {{"beta1", w}, {"beta2", d}, {"beta", dump_points(b.beta, m1, m2)}};
}

RootBisim alcu_root_bisim(const Signature& sigma)
{
    return [sigma](const KripkeModel& m1, const KripkeModel& m2) -> std::optional<json> {
        for (const auto& p : sigma)
            if (!m1.roles.count(p) && !m2.roles.count(p) && m1.holds(p, 0, 0) != m2.holds(p, 0, 0))
                return std::nullopt;
        TripleBisim t = max_bisim_alcu(m1, m2, sigma);
        if (!t.beta.has(0, 0)) return std::nullopt;
        return dump(t, m1, m2);
    };
}

namespace {

std::string bound_text(const SearchBounds& b)
{
    return "|W|<=" + std::to_string(b.w1) + ",|D|<=" + std::to_string(b.d1);
}

bool within(const Signature& s, const Signature& sigma, std::string* missing)
{
    for (const auto& x : s)
        if (!sigma.count(x)) {
            if (missing) *missing = x;
            return false;
        }
    return true;
}

std::string alc_bound(Dag& dag, const std::vector<int>& roots)
{
    return completeness_bound_size(closure(dag, roots).size(), BoundProblem::IepAlc).text() + " (not searched)";
}

}  // namespace

Verdict subsumes_bounded(const Concept& c, const Concept& d, const SearchBounds& b)
{
    Dag dag;
    int root = dag.implies(add_concept(dag, c), add_concept(dag, d));
    Verdict v = check_valid_bounded(dag, root, Logic::ALC, b);
    if (v.outcome == Outcome::Unknown) v.note = "no countermodel up to " + bound_text(b) + "; no completeness bound implemented";
    return v;
}

Verdict entails_bounded(const Ontology& o, const Inclusion& ci, const SearchBounds& b)
{
    return subsumes_bounded(c_and(ontology_to_concept(o), ci.lhs), ci.rhs, b);
}

Verdict decide_iep_alcu_sigma(const Concept& c, const Concept& d, const Signature& sigma, const SearchBounds& b,
                              const std::vector<Concept>& hints)
{
    Dag dag;
    int l = add_concept(dag, c), r = add_concept(dag, d);
    std::string cb = alc_bound(dag, {l, r});
    Verdict valid = check_valid_bounded(dag, dag.implies(l, r), Logic::ALC, b);
    if (valid.outcome == Outcome::No) {
        Verdict v;
        v.outcome = Outcome::No;
        const KripkeModel& m = valid.models.at(0);
        TripleBisim id = identity_triple(m);
        if (!verify_bisimulation(id, m, m, sigma).empty()) throw std::logic_error("identity triple failed verification");
        v.models = {m, m};
        v.points = {valid.points.at(0), valid.points.at(0)};
        v.relation = dump(id, m, m);
        v.note = "countermodel to C => D related to itself by the identity";
        v.bounds = b.to_json();
        v.completeness = cb;
        return v;
    }
    std::vector<Concept> cands = hints;
    cands.insert(cands.end(), {c, d, c_top(), c_bottom()});
    Signature names = sig_union(concept_names(c), concept_names(d));
    for (const auto& n : sigma)
        if (names.count(n)) cands.insert(cands.end(), {c_name(n), c_not(c_name(n))});
    for (const auto& chi : cands) {
        if (!within(concept_signature(chi), sigma, nullptr)) continue;
        int x = add_concept(dag, chi);
        if (provable_by_saturation(dag, dag.implies(l, x), Logic::ALC) &&
            provable_by_saturation(dag, dag.implies(x, r), Logic::ALC)) {
            Verdict v;
            v.outcome = Outcome::Yes;
            v.candidate = print_concept(chi, true);
            v.note = "interpolant verified by propositional reasoning";
            v.bounds = b.to_json();
            v.completeness = cb;
            return v;
        }
    }
    Signature used;
    for (int a : dag.atoms_of({l, r})) used.insert(dag.symbol_name(a));
    for (int a : dag.roles_of({l, r})) used.insert(dag.symbol_name(a));
    Signature eff = sig_intersection(sigma, used);
    PairSearch ps;
    ps.dag = &dag;
    ps.left = l;
    ps.right = dag.neg(r);
    ps.sigma = eff;
    ps.props = b.props;
    ps.max_reducts = b.max_reducts;
    ps.left_shapes = search_shapes(Logic::ALC, b.w1, b.d1, 0, 0);
    ps.right_shapes = search_shapes(Logic::ALC, b.w2, b.d2, 0, 0);
    ps.bisimilar = alcu_root_bisim(eff);
    int rounds = b.w1 * b.d1 + b.w2 * b.d2 + 1;
    ps.key = [eff, rounds](const KripkeModel& m) { return alcu_root_key(m, eff, rounds); };
    PairResult pr = search_pairs(ps, b.parallel);
    Verdict v;
    v.bounds = b.to_json();
    v.completeness = cb;
    if (pr.found) {
        Evaluator e1(pr.m1, dag), e2(pr.m2, dag);
        if (!e1.holds(l, 0, 0) || e2.holds(r, 0, 0)) throw std::logic_error("witness re-check failed: targets");
        TripleBisim t = max_bisim_alcu(pr.m1, pr.m2, eff);
        if (!verify_bisimulation(t, pr.m1, pr.m2, eff).empty() || !t.beta.has(0, 0))
            throw std::logic_error("triple bisimulation witness failed verification");
        v.outcome = Outcome::No;
        v.models = {pr.m1, pr.m2};
        v.points = {{0, 0}, {0, 0}};
        v.relation = pr.relation;
        v.note = "bisimilar models of C and ~D";
        return v;
    }
    v.note = "no bisimilar pair within bounds (" + std::to_string(pr.pairs_checked) + " pairs checked)";
    if (pr.capped) v.note += "; reduct enumeration capped";
    return v;
}

Verdict decide_iep_alcu(const Concept& c, const Concept& d, const SearchBounds& b, const std::vector<Concept>& hints)
{
    return decide_iep_alcu_sigma(c, d, sig_intersection(concept_signature(c), concept_signature(d)), b, hints);
}

Verdict verify_concept_candidate(CandidateKind kind, const Concept& chi, const Concept& c, const Concept& d,
                                 const Signature& sigma, const SearchBounds& b)
{
    std::string missing;
    if (!within(concept_signature(chi), sigma, &missing)) {
        Verdict v;
        v.outcome = Outcome::No;
        v.note = "signature violation: " + missing + " not in sigma";
        v.bounds = b.to_json();
        return v;
    }
    Dag dag;
    int x = add_concept(dag, chi), l = add_concept(dag, c), r = add_concept(dag, d);
    std::vector<int> legs = kind == CandidateKind::Interpolant ? std::vector<int>{dag.implies(l, x), dag.implies(x, r)}
                                                               : std::vector<int>{dag.implies(l, dag.iff(r, x))};
    Verdict v = verify_legs(dag, legs, Logic::ALC, b);
    v.candidate = print_concept(chi, true);
    if (v.outcome == Outcome::Unknown) v.note = "no countermodel to any leg up to " + bound_text(b);
    return v;
}

OntologyProblem parse_ontology_problem(const std::string& s)
{
    if (s == "iep_modulo" || s == "iep-modulo") return OntologyProblem::IepModulo;
    if (s == "oiep") return OntologyProblem::Oiep;
    if (s == "edep_modulo" || s == "edep-modulo") return OntologyProblem::EdepModulo;
    throw std::invalid_argument("unknown ontology problem: " + s);
}

ConceptInstance reduce_ontology_problem(OntologyProblem kind, const Ontology& o, const Signature& sigma,
                                        const Inclusion& payload)
{
    ConceptInstance inst;
    inst.sigma = sigma;
    inst.ontology = o;
    switch (kind) {
    case OntologyProblem::IepModulo: {
        Concept oc = ontology_to_concept(o);
        inst.left = c_and(oc, payload.lhs);
        inst.right = c_or(c_not(oc), payload.rhs);
        return inst;
    }
    case OntologyProblem::Oiep:
        inst.left = ontology_to_concept(o);
        inst.right = c_implies(payload.lhs, payload.rhs);
        return inst;
    case OntologyProblem::EdepModulo: {
        if (payload.lhs->op != COp::Name) throw std::invalid_argument("edep_modulo needs a concept name");
        Signature syms = ontology_signature(o);
        syms.insert(payload.lhs->name);
        Renaming ren = fresh_renaming(syms, sigma, syms);
        Ontology both = o;
        for (const auto& ci : o) both.push_back({rename_concept(ci.lhs, ren), rename_concept(ci.rhs, ren)});
        ConceptInstance out = reduce_ontology_problem(OntologyProblem::IepModulo, both, sigma,
                                                      {payload.lhs, rename_concept(payload.lhs, ren)});
        return out;
    }
    }
    return inst;
}

// ---- full-mosaic filtration ----

namespace {

Bits restrict_bits(const Bits& full, const std::vector<int>& members)
{
    Bits out;
    for (int i : members) out.push_back(full[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<int> sorted_unique(std::vector<int> xs)
{
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

template <class T>
int intern_in(std::vector<T>& all, const T& x)
{
    auto it = std::find(all.begin(), all.end(), x);
    if (it != all.end()) return static_cast<int>(it - all.begin());
    all.push_back(x);
    return static_cast<int>(all.size()) - 1;
}

TripleBisim transpose(const TripleBisim& t)
{
    auto tr = [](const Relation& r) {
        Relation o(r.n2, r.n1);
        for (int i = 0; i < r.n1; ++i)
            for (int j = 0; j < r.n2; ++j)
                if (r.has(i, j)) o.set(j, i);
        return o;
    };
    return {tr(t.beta1), tr(t.beta2), tr(t.beta)};
}

std::string fmt(const char* prefix, int a, int b) { return std::string(prefix) + std::to_string(a) + "^" + std::to_string(b); }

struct Side {
    std::vector<int> ft, wt, dt, wm, dm, fm, wp, dp, fp;
};

}  // namespace

AlcFiltration filtrate_pair_alcu(const KripkeModel& m1, Point p1, const KripkeModel& m2, Point p2, const Concept& c,
                                 const Concept& d)
{
    AlcFiltration f;
    f.sigma = sig_intersection(concept_signature(c), concept_signature(d));
    if (!dl_model_check(m1, p1, c)) throw FiltrationError("precondition: left point does not satisfy C");
    if (dl_model_check(m2, p2, d)) throw FiltrationError("precondition: right point satisfies D");
    TripleBisim t12 = max_bisim_alcu(m1, m2, f.sigma);
    if (!t12.beta.has(m1.point(p1.w, p1.d), m2.point(p2.w, p2.d)))
        throw FiltrationError("precondition: the distinguished points are not sigma-bisimilar");

    int roots[2] = {add_concept(f.dag, c), add_concept(f.dag, d)};
    f.cl = closure(f.dag, {roots[0], roots[1]});
    const KripkeModel* ms[2] = {&m1, &m2};
    TypeCatalog wts, dts;
    Side side[2];
    for (int i = 0; i < 2; ++i) {
        const KripkeModel& m = *ms[i];
        std::vector<Bits> tabs = evaluate_all(m, f.dag, f.cl.members, true);
        std::vector<Bits> pts(static_cast<std::size_t>(m.npoints()), Bits(static_cast<std::size_t>(f.cl.size()), 0));
        for (int k = 0; k < f.cl.size(); ++k)
            for (int p = 0; p < m.npoints(); ++p)
                pts[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)] =
                    tabs[static_cast<std::size_t>(f.cl.members[static_cast<std::size_t>(k)])][static_cast<std::size_t>(p)];
        for (const auto& bts : pts) side[i].ft.push_back(f.full_types.intern(bts));
        for (int w = 0; w < m.nw(); ++w)
            side[i].wt.push_back(wts.intern(restrict_bits(pts[static_cast<std::size_t>(m.point(w, 0))], f.cl.exists_members)));
        for (int e = 0; e < m.nd(); ++e)
            side[i].dt.push_back(dts.intern(restrict_bits(pts[static_cast<std::size_t>(m.point(0, e))], f.cl.diamond_members)));
    }
    TripleBisim t11 = max_bisim_alcu(m1, m1, f.sigma), t22 = max_bisim_alcu(m2, m2, f.sigma), t21 = transpose(t12);
    const TripleBisim* rel[2][2] = {{&t11, &t12}, {&t21, &t22}};
    std::vector<Mosaic> wms, dms;
    std::vector<std::pair<int, int>> wpts, dpts;
    for (int i = 0; i < 2; ++i) {
        const KripkeModel& m = *ms[i];
        Side& s = side[i];
        for (int w = 0; w < m.nw(); ++w) {
            Mosaic mo;
            for (int j = 0; j < 2; ++j) {
                auto& tgt = j == 0 ? mo.first : mo.second;
                for (int v = 0; v < ms[j]->nw(); ++v)
                    if (rel[i][j]->beta1.has(w, v)) tgt.push_back(side[j].wt[static_cast<std::size_t>(v)]);
                tgt = sorted_unique(tgt);
            }
            s.wm.push_back(intern_in(wms, mo));
        }
        for (int e = 0; e < m.nd(); ++e) {
            Mosaic mo;
            for (int j = 0; j < 2; ++j) {
                auto& tgt = j == 0 ? mo.first : mo.second;
                for (int x = 0; x < ms[j]->nd(); ++x)
                    if (rel[i][j]->beta2.has(e, x)) tgt.push_back(side[j].dt[static_cast<std::size_t>(x)]);
                tgt = sorted_unique(tgt);
            }
            s.dm.push_back(intern_in(dms, mo));
        }
        for (int p = 0; p < m.npoints(); ++p) {
            Mosaic mo;
            for (int j = 0; j < 2; ++j) {
                auto& tgt = j == 0 ? mo.first : mo.second;
                for (int q = 0; q < ms[j]->npoints(); ++q)
                    if (rel[i][j]->beta.has(p, q)) tgt.push_back(side[j].ft[static_cast<std::size_t>(q)]);
                tgt = sorted_unique(tgt);
            }
            s.fm.push_back(intern_in(f.full_mosaics, mo));
        }
        for (int w = 0; w < m.nw(); ++w)
            s.wp.push_back(intern_in(wpts, std::pair<int, int>{s.wt[static_cast<std::size_t>(w)], s.wm[static_cast<std::size_t>(w)]}));
        for (int e = 0; e < m.nd(); ++e)
            s.dp.push_back(intern_in(dpts, std::pair<int, int>{s.dt[static_cast<std::size_t>(e)], s.dm[static_cast<std::size_t>(e)]}));
        for (int p = 0; p < m.npoints(); ++p)
            s.fp.push_back(intern_in(f.full_points, std::pair<int, int>{s.ft[static_cast<std::size_t>(p)], s.fm[static_cast<std::size_t>(p)]}));
    }
    for (const auto& [wt, wm] : wpts) f.world_mosaic_of_point.push_back(wm);
    for (const auto& [dt, dm] : dpts) f.domain_mosaic_of_point.push_back(dm);

    // fm^wt = wm and fm^dt = dm
    std::vector<int> ft_wt, ft_dt;
    for (int k = 0; k < f.full_types.size(); ++k) {
        ft_wt.push_back(wts.intern(restrict_bits(f.full_types.at(k), f.cl.exists_members)));
        ft_dt.push_back(dts.intern(restrict_bits(f.full_types.at(k), f.cl.diamond_members)));
    }
    auto project = [](const Mosaic& mo, const std::vector<int>& map) {
        Mosaic out;
        for (int x : mo.first) out.first.push_back(map[static_cast<std::size_t>(x)]);
        for (int x : mo.second) out.second.push_back(map[static_cast<std::size_t>(x)]);
        out.first = sorted_unique(out.first);
        out.second = sorted_unique(out.second);
        return out;
    };
    for (int i = 0; i < 2; ++i)
        for (int w = 0; w < ms[i]->nw(); ++w)
            for (int e = 0; e < ms[i]->nd(); ++e) {
                const Mosaic& fm = f.full_mosaics[static_cast<std::size_t>(side[i].fm[static_cast<std::size_t>(ms[i]->point(w, e))])];
                if (!(project(fm, ft_wt) == wms[static_cast<std::size_t>(side[i].wm[static_cast<std::size_t>(w)])]))
                    f.coherence.push_back({"fm^wt", "model " + std::to_string(i + 1) + " point " + pt(*ms[i], w, e)});
                if (!(project(fm, ft_dt) == dms[static_cast<std::size_t>(side[i].dm[static_cast<std::size_t>(e)])]))
                    f.coherence.push_back({"fm^dt", "model " + std::to_string(i + 1) + " point " + pt(*ms[i], w, e)});
            }

    f.n = f.full_types.size() * static_cast<int>(f.full_mosaics.size());
    std::map<std::pair<int, int>, std::vector<int>> L[2];
    for (int i = 0; i < 2; ++i) {
        for (int w = 0; w < ms[i]->nw(); ++w)
            for (int e = 0; e < ms[i]->nd(); ++e)
                L[i][{side[i].wp[static_cast<std::size_t>(w)], side[i].dp[static_cast<std::size_t>(e)]}].push_back(
                    side[i].fp[static_cast<std::size_t>(ms[i]->point(w, e))]);
        for (auto& [k, l] : L[i]) {
            l = sorted_unique(l);
            f.pi_count = std::max(f.pi_count, static_cast<int>(l.size()));
        }
    }

    // R-coherence data: for each role, (member of ∃R.E, member of E)
    std::map<int, std::vector<std::pair<int, int>>> role_members;
    for (int k = 0; k < f.cl.size(); ++k) {
        const DagNode& nd = f.dag.node(f.cl.members[static_cast<std::size_t>(k)]);
        if (nd.kind == Kind::Role) role_members[nd.sym].push_back({k, f.cl.find(nd.a)});
    }
    auto witnessing = [&](int sym, int a, int b) {
        const Bits& x = f.full_types.at(a);
        const Bits& y = f.full_types.at(b);
        if (ft_wt[static_cast<std::size_t>(a)] != ft_wt[static_cast<std::size_t>(b)]) return false;
        for (const auto& [ex, e] : role_members[sym])
            if (y[static_cast<std::size_t>(e)] && !x[static_cast<std::size_t>(ex)]) return false;
        return true;
    };
    auto precedes = [&](int sym, int fa, int fb) {
        const Mosaic& a = f.full_mosaics[static_cast<std::size_t>(fa)];
        const Mosaic& b = f.full_mosaics[static_cast<std::size_t>(fb)];
        for (int j = 0; j < 2; ++j)
            for (int x : j == 0 ? a.first : a.second) {
                bool hit = false;
                for (int y : j == 0 ? b.first : b.second) hit = hit || witnessing(sym, x, y);
                if (!hit) return false;
            }
        return true;
    };

    std::vector<int> atom_idx;
    for (int k = 0; k < f.cl.size(); ++k)
        if (f.dag.node(f.cl.members[static_cast<std::size_t>(k)]).kind == Kind::Atom) atom_idx.push_back(k);
    std::vector<int> role_syms = f.dag.roles_of({roots[0], roots[1]});
    Point ps[2] = {p1, p2};
    int targets[2] = {roots[0], f.dag.neg(roots[1])};
    for (int i = 0; i < 2; ++i) {
        FiltrationPart part;
        part.target = targets[i];
        part.L = L[i];
        std::vector<int> uw = sorted_unique(side[i].wp), ud = sorted_unique(side[i].dp);
        KripkeModel& M = part.model;
        M.s5 = true;
        for (int wp : uw)
            for (int j = 0; j < f.pi_count; ++j) {
                M.worlds.push_back(fmt("wp", wp, j));
                part.world_point.push_back(wp);
                part.world_copy.push_back(j);
            }
        for (int dp : ud)
            for (int k = 0; k < f.n; ++k) {
                M.domain.push_back(fmt("dp", dp, k));
                part.domain_point.push_back(dp);
                part.domain_copy.push_back(k);
            }
        std::vector<int> ftp(static_cast<std::size_t>(M.npoints())), fmp(static_cast<std::size_t>(M.npoints()));
        for (int w = 0; w < M.nw(); ++w)
            for (int e = 0; e < M.nd(); ++e) {
                int fp = part.assigned(w, e);
                ftp[static_cast<std::size_t>(M.point(w, e))] = f.full_points[static_cast<std::size_t>(fp)].first;
                fmp[static_cast<std::size_t>(M.point(w, e))] = f.full_points[static_cast<std::size_t>(fp)].second;
            }
        for (int a : atom_idx) {
            Bits bits(static_cast<std::size_t>(M.npoints()), 0);
            for (int p = 0; p < M.npoints(); ++p)
                bits[static_cast<std::size_t>(p)] = f.full_types.at(ftp[static_cast<std::size_t>(p)])[static_cast<std::size_t>(a)];
            M.val[f.dag.symbol_name(f.dag.node(f.cl.members[static_cast<std::size_t>(a)]).sym)] = bits;
        }
        for (int sym : role_syms) {
            const std::string& name = f.dag.symbol_name(sym);
            bool in_sigma = f.sigma.count(name) > 0;
            M.roles[name] = Bits(static_cast<std::size_t>(M.nw()) * M.nd() * M.nd(), 0);
            for (int w = 0; w < M.nw(); ++w)
                for (int a = 0; a < M.nd(); ++a)
                    for (int b = 0; b < M.nd(); ++b) {
                        int pa = M.point(w, a), pb = M.point(w, b);
                        if (!witnessing(sym, ftp[static_cast<std::size_t>(pa)], ftp[static_cast<std::size_t>(pb)])) continue;
                        if (in_sigma && !precedes(sym, fmp[static_cast<std::size_t>(pa)], fmp[static_cast<std::size_t>(pb)])) continue;
                        M.set_edge(name, w, a, b);
                    }
        }
        const KripkeModel& src = *ms[i];
        int wp = side[i].wp[static_cast<std::size_t>(ps[i].w)], dp = side[i].dp[static_cast<std::size_t>(ps[i].d)];
        const auto& l = part.L.at({wp, dp});
        int fp = side[i].fp[static_cast<std::size_t>(src.point(ps[i].w, ps[i].d))];
        int jstar = static_cast<int>(std::find(l.begin(), l.end(), fp) - l.begin());
        int wi = static_cast<int>(std::find(uw.begin(), uw.end(), wp) - uw.begin()) * f.pi_count + jstar;
        int di = static_cast<int>(std::find(ud.begin(), ud.end(), dp) - ud.begin()) * f.n;
        part.distinguished = {wi, di};
        f.parts.push_back(std::move(part));
    }

    const FiltrationPart &a = f.parts[0], &b = f.parts[1];
    const KripkeModel &ma = a.model, &mb = b.model;
    f.beta = TripleBisim{Relation(ma.nw(), mb.nw()), Relation(ma.nd(), mb.nd()), Relation(ma.npoints(), mb.npoints())};
    for (int w = 0; w < ma.nw(); ++w)
        for (int v = 0; v < mb.nw(); ++v)
            if (f.world_mosaic_of_point[static_cast<std::size_t>(a.world_point[static_cast<std::size_t>(w)])] ==
                f.world_mosaic_of_point[static_cast<std::size_t>(b.world_point[static_cast<std::size_t>(v)])])
                f.beta.beta1.set(w, v);
    for (int x = 0; x < ma.nd(); ++x)
        for (int y = 0; y < mb.nd(); ++y)
            if (f.domain_mosaic_of_point[static_cast<std::size_t>(a.domain_point[static_cast<std::size_t>(x)])] ==
                f.domain_mosaic_of_point[static_cast<std::size_t>(b.domain_point[static_cast<std::size_t>(y)])])
                f.beta.beta2.set(x, y);
    for (int w = 0; w < ma.nw(); ++w)
        for (int x = 0; x < ma.nd(); ++x)
            for (int v = 0; v < mb.nw(); ++v)
                for (int y = 0; y < mb.nd(); ++y) {
                    if (!f.beta.beta1.has(w, v) || !f.beta.beta2.has(x, y)) continue;
                    int fa = f.full_points[static_cast<std::size_t>(a.assigned(w, x))].second;
                    int fb = f.full_points[static_cast<std::size_t>(b.assigned(v, y))].second;
                    if (fa == fb) f.beta.beta.set(ma.point(w, x), mb.point(v, y));
                }
    return f;
}

json AlcFiltrationReport::to_json() const
{
    auto one = [](const Report& r) { return json{{"pass", r.empty()}, {"violations", report_json(r)}}; };
    return {{"pass", passed()},         {"coherence", one(coherence)}, {"types", one(types)},
            {"targets", one(targets)}, {"bisimulation", one(bisimulation)}, {"pi", one(pi)}};
}

AlcFiltrationReport verify_filtration(const AlcFiltration& f, bool parallel)
{
    AlcFiltrationReport rep;
    rep.coherence = f.coherence;
    for (std::size_t i = 0; i < f.parts.size(); ++i) {
        const FiltrationPart& part = f.parts[i];
        const KripkeModel& M = part.model;
        std::vector<Bits> tabs = evaluate_all(M, f.dag, f.cl.members, parallel);
        for (int k = 0; k < f.cl.size(); ++k) {
            const Bits& t = tabs[static_cast<std::size_t>(f.cl.members[static_cast<std::size_t>(k)])];
            for (int w = 0; w < M.nw(); ++w)
                for (int d = 0; d < M.nd(); ++d) {
                    int ft = f.full_points[static_cast<std::size_t>(part.assigned(w, d))].first;
                    bool want = f.full_types.at(ft)[static_cast<std::size_t>(k)] != 0;
                    if ((t[static_cast<std::size_t>(M.point(w, d))] != 0) != want)
                        rep.types.push_back({"type", "model " + std::to_string(i + 1) + " point " + pt(M, w, d) + " member " +
                                                         print_concept(concept_of_dag(f.dag, f.cl.members[static_cast<std::size_t>(k)]), true)});
                }
        }
        Evaluator ev(M, f.dag);
        if (!ev.holds(part.target, part.distinguished.w, part.distinguished.d))
            rep.targets.push_back({"target", "model " + std::to_string(i + 1) + " distinguished point"});
        for (const auto& [key, l] : part.L)
            for (int fp : l)
                for (int k = 0; k < f.n; ++k) {
                    bool hit = false;
                    for (int j = 0; j < f.pi_count && !hit; ++j)
                        hit = l[static_cast<std::size_t>((j + k) % static_cast<int>(l.size()))] == fp;
                    if (!hit)
                        rep.pi.push_back({"surjectivity", "point pair (" + std::to_string(key.first) + "," +
                                                               std::to_string(key.second) + ") copy " + std::to_string(k)});
                }
    }
    if (static_cast<long>(f.pi_count) > static_cast<long>(f.n) * f.n)
        rep.pi.push_back({"pi-bound", std::to_string(f.pi_count) + " > n^2"});
    const KripkeModel &a = f.parts[0].model, &b = f.parts[1].model;
    rep.bisimulation = verify_bisimulation(f.beta, a, b, f.sigma);
    Point x = f.parts[0].distinguished, y = f.parts[1].distinguished;
    if (!f.beta.beta.has(a.point(x.w, x.d), b.point(y.w, y.d)))
        rep.bisimulation.push_back({"distinguished", "distinguished points not related"});
    return rep;
}

json filtration_json(const AlcFiltration& f)
{
    json j;
    j["n"] = f.n;
    j["pi"] = f.pi_count;
    j["closure_size"] = f.cl.size();
    j["full_types"] = f.full_types.size();
    j["full_mosaics"] = f.full_mosaics.size();
    j["full_points"] = f.full_points.size();
    json parts = json::array();
    for (const auto& p : f.parts)
        parts.push_back({{"model", save_model(p.model)},
                         {"distinguished", {p.model.worlds[static_cast<std::size_t>(p.distinguished.w)],
                                            p.model.domain[static_cast<std::size_t>(p.distinguished.d)]}}});
    j["models"] = parts;
    j["bisimulation"] = dump(f.beta, f.parts[0].model, f.parts[1].model);
    return j;
}

}  // namespace qml
