#include "qml/mosaics.hpp"

#include <algorithm>
#include <set>

namespace qml {

using nlohmann::json;

int TypeCatalog::intern(const Bits& b)
{
    auto it = index_.find(b);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(types_.size());
    types_.push_back(b);
    index_.emplace(b, id);
    return id;
}

namespace {

Bits restrict_bits(const Bits& full, const std::vector<int>& members)
{
    Bits out;
    out.reserve(members.size());
    for (int i : members) out.push_back(full[static_cast<std::size_t>(i)]);
    return out;
}

// Full types of every point: bits over closure member indices.
std::vector<Bits> point_types(const KripkeModel& m, const Dag& dag, const ClosureIndex& cl)
{
    std::vector<Bits> tabs = evaluate_all(m, dag, cl.members, true);
    std::vector<Bits> out(static_cast<std::size_t>(m.npoints()), Bits(static_cast<std::size_t>(cl.size()), 0));
    for (int i = 0; i < cl.size(); ++i) {
        const Bits& t = tabs[static_cast<std::size_t>(cl.members[static_cast<std::size_t>(i)])];
        for (int p = 0; p < m.npoints(); ++p) out[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] = t[static_cast<std::size_t>(p)];
    }
    return out;
}

std::vector<int> sorted_unique(std::vector<int> xs)
{
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

int intern_mosaic(std::vector<Mosaic>& all, const Mosaic& m)
{
    auto it = std::find(all.begin(), all.end(), m);
    if (it != all.end()) return static_cast<int>(it - all.begin());
    all.push_back(m);
    return static_cast<int>(all.size()) - 1;
}

int intern_pair(std::vector<std::pair<int, int>>& all, std::pair<int, int> p)
{
    auto it = std::find(all.begin(), all.end(), p);
    if (it != all.end()) return static_cast<int>(it - all.begin());
    all.push_back(p);
    return static_cast<int>(all.size()) - 1;
}

Relation transpose(const Relation& r)
{
    Relation t(r.n2, r.n1);
    for (int i = 0; i < r.n1; ++i)
        for (int j = 0; j < r.n2; ++j)
            if (r.has(i, j)) t.set(j, i);
    return t;
}

std::vector<int> atom_members(Dag& dag, const ClosureIndex& cl)
{
    std::vector<int> out;
    for (int i = 0; i < cl.size(); ++i)
        if (dag.node(cl.members[static_cast<std::size_t>(i)]).kind == Kind::Atom) out.push_back(i);
    return out;
}

std::string fmt(const char* prefix, int a, int b) { return std::string(prefix) + std::to_string(a) + "^" + std::to_string(b); }

}  // namespace

int TypeTable::count_world_points(int i) const { return static_cast<int>(sorted_unique(side[i].wp).size()); }
int TypeTable::count_domain_points(int i) const { return static_cast<int>(sorted_unique(side[i].dp).size()); }

json TypeTable::to_json() const
{
    json j;
    j["closure_size"] = cl.size();
    j["full_types"] = full_types.size();
    j["world_types"] = world_types.size();
    j["domain_types"] = domain_types.size();
    j["world_mosaics"] = world_mosaics.size();
    j["domain_mosaics"] = domain_mosaics.size();
    for (int i = 0; i < 2; ++i) {
        json s;
        s["world_points"] = count_world_points(i);
        s["domain_points"] = count_domain_points(i);
        s["wp"] = side[i].wp;
        s["dp"] = side[i].dp;
        s["wt"] = side[i].wt;
        s["dt"] = side[i].dt;
        s["wm"] = side[i].wm;
        s["dm"] = side[i].dm;
        j[i == 0 ? "left" : "right"] = s;
    }
    return j;
}

TypeTable compute_types(const KripkeModel& m1, const KripkeModel& m2, const Formula& phi, const Formula& psi,
                        const Signature& sigma)
{
    TypeTable t;
    t.sigma = sigma;
    t.roots = {t.dag.add(phi), t.dag.add(psi)};
    t.cl = closure(t.dag, t.roots);
    const KripkeModel* ms[2] = {&m1, &m2};
    for (int i = 0; i < 2; ++i) {
        const KripkeModel& m = *ms[i];
        std::vector<Bits> pts = point_types(m, t.dag, t.cl);
        TypeSide& s = t.side[i];
        for (const auto& b : pts) s.ft.push_back(t.full_types.intern(b));
        for (int w = 0; w < m.nw(); ++w)
            s.wt.push_back(t.world_types.intern(restrict_bits(pts[static_cast<std::size_t>(m.point(w, 0))], t.cl.exists_members)));
        for (int d = 0; d < m.nd(); ++d)
            s.dt.push_back(t.domain_types.intern(restrict_bits(pts[static_cast<std::size_t>(m.point(0, d))], t.cl.diamond_members)));
    }
    S5Bisim b11 = max_bisim_s5(m1, m1, sigma), b12 = max_bisim_s5(m1, m2, sigma), b22 = max_bisim_s5(m2, m2, sigma);
    S5Bisim b21{transpose(b12.beta1), transpose(b12.beta2)};
    const S5Bisim* rel[2][2] = {{&b11, &b12}, {&b21, &b22}};
    for (int i = 0; i < 2; ++i) {
        TypeSide& s = t.side[i];
        for (int w = 0; w < ms[i]->nw(); ++w) {
            Mosaic mo;
            for (int j = 0; j < 2; ++j) {
                std::vector<int>& target = j == 0 ? mo.first : mo.second;
                for (int v = 0; v < ms[j]->nw(); ++v)
                    if (rel[i][j]->beta1.has(w, v)) target.push_back(t.side[j].wt[static_cast<std::size_t>(v)]);
                target = sorted_unique(target);
            }
            s.wm.push_back(intern_mosaic(t.world_mosaics, mo));
        }
        for (int d = 0; d < ms[i]->nd(); ++d) {
            Mosaic mo;
            for (int j = 0; j < 2; ++j) {
                std::vector<int>& target = j == 0 ? mo.first : mo.second;
                for (int e = 0; e < ms[j]->nd(); ++e)
                    if (rel[i][j]->beta2.has(d, e)) target.push_back(t.side[j].dt[static_cast<std::size_t>(e)]);
                target = sorted_unique(target);
            }
            s.dm.push_back(intern_mosaic(t.domain_mosaics, mo));
        }
        for (int w = 0; w < ms[i]->nw(); ++w)
            s.wp.push_back(intern_pair(t.world_points, {s.wt[static_cast<std::size_t>(w)], s.wm[static_cast<std::size_t>(w)]}));
        for (int d = 0; d < ms[i]->nd(); ++d)
            s.dp.push_back(intern_pair(t.domain_points, {s.dt[static_cast<std::size_t>(d)], s.dm[static_cast<std::size_t>(d)]}));
    }
    return t;
}

int FiltrationPart::assigned(int w, int d) const
{
    const auto& l = L.at({world_point[static_cast<std::size_t>(w)], domain_point[static_cast<std::size_t>(d)]});
    int j = world_copy[static_cast<std::size_t>(w)], k = domain_copy[static_cast<std::size_t>(d)];
    return l[static_cast<std::size_t>((j + k) % static_cast<int>(l.size()))];
}

namespace {

// Builds the copy model of one side from per-world/per-element point ids and realized full types.
FiltrationPart build_part(const std::vector<int>& wpts, const std::vector<int>& dpts, const std::vector<int>& ft,
                          int nd_src, int n, int m, Point dist, int target, const TypeCatalog& types,
                          const std::vector<int>& atom_idx, const Dag& dag, const ClosureIndex& cl)
{
    FiltrationPart part;
    part.target = target;
    for (std::size_t w = 0; w < wpts.size(); ++w)
        for (std::size_t d = 0; d < dpts.size(); ++d)
            part.L[{wpts[w], dpts[d]}].push_back(ft[w * static_cast<std::size_t>(nd_src) + d]);
    for (auto& [key, l] : part.L) l = sorted_unique(l);
    std::vector<int> uw = sorted_unique(wpts), ud = sorted_unique(dpts);
    KripkeModel& M = part.model;
    M.s5 = true;
    for (int wp : uw)
        for (int j = 0; j < m; ++j) {
            M.worlds.push_back(fmt("wp", wp, j));
            part.world_point.push_back(wp);
            part.world_copy.push_back(j);
        }
    for (int dp : ud)
        for (int k = 0; k < n; ++k) {
            M.domain.push_back(fmt("dp", dp, k));
            part.domain_point.push_back(dp);
            part.domain_copy.push_back(k);
        }
    for (int a : atom_idx) {
        const std::string& name = dag.symbol_name(dag.node(cl.members[static_cast<std::size_t>(a)]).sym);
        Bits bits(static_cast<std::size_t>(M.npoints()), 0);
        for (int w = 0; w < M.nw(); ++w)
            for (int d = 0; d < M.nd(); ++d)
                bits[static_cast<std::size_t>(M.point(w, d))] = types.at(part.assigned(w, d))[static_cast<std::size_t>(a)];
        M.val[name] = bits;
    }
    int wp = wpts[static_cast<std::size_t>(dist.w)], dp = dpts[static_cast<std::size_t>(dist.d)];
    const auto& l = part.L.at({wp, dp});
    int f = ft[static_cast<std::size_t>(dist.w) * static_cast<std::size_t>(nd_src) + static_cast<std::size_t>(dist.d)];
    int jstar = static_cast<int>(std::find(l.begin(), l.end(), f) - l.begin());
    int wi = static_cast<int>(std::find(uw.begin(), uw.end(), wp) - uw.begin()) * m + jstar;
    int di = static_cast<int>(std::find(ud.begin(), ud.end(), dp) - ud.begin()) * n;
    part.distinguished = {wi, di};
    return part;
}

int max_l_of(const std::vector<int>& wpts, const std::vector<int>& dpts, const std::vector<int>& ft, int nd_src)
{
    std::map<std::pair<int, int>, std::set<int>> L;
    for (std::size_t w = 0; w < wpts.size(); ++w)
        for (std::size_t d = 0; d < dpts.size(); ++d)
            L[{wpts[w], dpts[d]}].insert(ft[w * static_cast<std::size_t>(nd_src) + d]);
    int m = 0;
    for (const auto& [k, l] : L) m = std::max(m, static_cast<int>(l.size()));
    return m;
}

}  // namespace

Filtration filtrate_sat(const KripkeModel& m, Point p, const Formula& phi)
{
    if (!m.s5) throw FiltrationError("filtration needs an S5 model");
    if (!model_check(m, p, phi)) throw FiltrationError("precondition: the point does not satisfy phi");
    Filtration f;
    int root = f.dag.add(phi);
    f.cl = closure(f.dag, {root});
    std::vector<Bits> pts = point_types(m, f.dag, f.cl);
    std::vector<int> ft, wt, dt;
    TypeCatalog wts, dts;
    for (const auto& b : pts) ft.push_back(f.full_types.intern(b));
    for (int w = 0; w < m.nw(); ++w) wt.push_back(wts.intern(restrict_bits(pts[static_cast<std::size_t>(m.point(w, 0))], f.cl.exists_members)));
    for (int d = 0; d < m.nd(); ++d) dt.push_back(dts.intern(restrict_bits(pts[static_cast<std::size_t>(m.point(0, d))], f.cl.diamond_members)));
    f.n = f.full_types.size();
    f.pi_count = max_l_of(wt, dt, ft, m.nd());
    f.parts.push_back(build_part(wt, dt, ft, m.nd(), f.n, f.pi_count, p, root, f.full_types, atom_members(f.dag, f.cl),
                                 f.dag, f.cl));
    return f;
}

Filtration filtrate_pair(const KripkeModel& m1, Point p1, const KripkeModel& m2, Point p2, const Formula& phi,
                         const Formula& psi)
{
    if (!m1.s5 || !m2.s5) throw FiltrationError("filtration needs S5 models");
    Signature sigma = sig_intersection(signature_of(phi), signature_of(psi));
    if (!model_check(m1, p1, phi)) throw FiltrationError("precondition: left point does not satisfy phi");
    if (model_check(m2, p2, psi)) throw FiltrationError("precondition: right point satisfies psi");
    S5Bisim b = max_bisim_s5(m1, m2, sigma);
    if (!s5_point_relation(b, m1, m2, sigma).has(m1.point(p1.w, p1.d), m2.point(p2.w, p2.d)))
        throw FiltrationError("precondition: the distinguished points are not sigma-bisimilar");

    TypeTable t = compute_types(m1, m2, phi, psi, sigma);
    Filtration f;
    f.dag = t.dag;
    f.cl = t.cl;
    f.full_types = t.full_types;
    f.sigma = sigma;
    f.n = f.full_types.size();
    f.pi_count = std::max(max_l_of(t.side[0].wp, t.side[0].dp, t.side[0].ft, m1.nd()),
                          max_l_of(t.side[1].wp, t.side[1].dp, t.side[1].ft, m2.nd()));
    std::vector<int> atoms = atom_members(f.dag, f.cl);
    int targets[2] = {t.roots[0], f.dag.neg(t.roots[1])};
    const KripkeModel* ms[2] = {&m1, &m2};
    Point ps[2] = {p1, p2};
    for (int i = 0; i < 2; ++i)
        f.parts.push_back(build_part(t.side[i].wp, t.side[i].dp, t.side[i].ft, ms[i]->nd(), f.n, f.pi_count, ps[i],
                                     targets[i], f.full_types, atoms, f.dag, f.cl));
    for (const auto& [wt, wm] : t.world_points) f.world_mosaic_of_point.push_back(wm);
    for (const auto& [dt, dm] : t.domain_points) f.domain_mosaic_of_point.push_back(dm);
    const FiltrationPart &a = f.parts[0], &c = f.parts[1];
    f.beta = S5Bisim{Relation(a.model.nw(), c.model.nw()), Relation(a.model.nd(), c.model.nd())};
    for (int w = 0; w < a.model.nw(); ++w)
        for (int v = 0; v < c.model.nw(); ++v)
            if (f.world_mosaic_of_point[static_cast<std::size_t>(a.world_point[static_cast<std::size_t>(w)])] ==
                f.world_mosaic_of_point[static_cast<std::size_t>(c.world_point[static_cast<std::size_t>(v)])])
                f.beta.beta1.set(w, v);
    for (int d = 0; d < a.model.nd(); ++d)
        for (int e = 0; e < c.model.nd(); ++e)
            if (f.domain_mosaic_of_point[static_cast<std::size_t>(a.domain_point[static_cast<std::size_t>(d)])] ==
                f.domain_mosaic_of_point[static_cast<std::size_t>(c.domain_point[static_cast<std::size_t>(e)])])
                f.beta.beta2.set(d, e);
    return f;
}

json FiltrationReport::to_json() const
{
    auto one = [](const Report& r) { return json{{"pass", r.empty()}, {"violations", report_json(r)}}; };
    return {{"pass", passed()},
            {"types", one(types)},
            {"targets", one(targets)},
            {"bisimulation", one(bisimulation)},
            {"pi", one(pi)}};
}

FiltrationReport verify_filtration(const Filtration& f, bool parallel)
{
    FiltrationReport rep;
    for (std::size_t pi = 0; pi < f.parts.size(); ++pi) {
        const FiltrationPart& part = f.parts[pi];
        const KripkeModel& M = part.model;
        std::vector<Bits> tabs = evaluate_all(M, f.dag, f.cl.members, parallel);
        for (int i = 0; i < f.cl.size(); ++i) {
            const Bits& t = tabs[static_cast<std::size_t>(f.cl.members[static_cast<std::size_t>(i)])];
            for (int w = 0; w < M.nw(); ++w)
                for (int d = 0; d < M.nd(); ++d) {
                    bool want = f.full_types.at(part.assigned(w, d))[static_cast<std::size_t>(i)] != 0;
                    if ((t[static_cast<std::size_t>(M.point(w, d))] != 0) != want)
                        rep.types.push_back({"type", "model " + std::to_string(pi + 1) + " point (" + M.worlds[static_cast<std::size_t>(w)] +
                                                         "," + M.domain[static_cast<std::size_t>(d)] + ") member " +
                                                         print_formula(f.dag.to_formula(f.cl.members[static_cast<std::size_t>(i)]))});
                }
        }
        Evaluator ev(M, f.dag);
        if (!ev.holds(part.target, part.distinguished.w, part.distinguished.d))
            rep.targets.push_back({"target", "model " + std::to_string(pi + 1) + " distinguished point"});
        // surjectivity: for every (wp,dp) with realized ft and every k, some copy j maps k to ft
        for (const auto& [key, l] : part.L)
            for (int ft : l)
                for (int k = 0; k < f.n; ++k) {
                    bool hit = false;
                    for (int j = 0; j < f.pi_count && !hit; ++j)
                        hit = l[static_cast<std::size_t>((j + k) % static_cast<int>(l.size()))] == ft;
                    if (!hit)
                        rep.pi.push_back({"surjectivity", "point pair (" + std::to_string(key.first) + "," +
                                                               std::to_string(key.second) + ") copy " + std::to_string(k)});
                }
    }
    if (static_cast<long>(f.pi_count) > static_cast<long>(f.n) * f.n)
        rep.pi.push_back({"pi-bound", std::to_string(f.pi_count) + " > n^2"});
    if (f.parts.size() == 2) {
        const KripkeModel &a = f.parts[0].model, &c = f.parts[1].model;
        rep.bisimulation = verify_bisimulation(f.beta, a, c, f.sigma);
        Relation pts = s5_point_relation(f.beta, a, c, f.sigma);
        Point x = f.parts[0].distinguished, y = f.parts[1].distinguished;
        if (!pts.has(a.point(x.w, x.d), c.point(y.w, y.d)))
            rep.bisimulation.push_back({"distinguished", "distinguished points not related"});
    }
    return rep;
}

json filtration_json(const Filtration& f)
{
    json j;
    j["n"] = f.n;
    j["pi"] = f.pi_count;
    j["closure_size"] = f.cl.size();
    j["full_types"] = f.full_types.size();
    json parts = json::array();
    for (const auto& p : f.parts) {
        json pj;
        pj["model"] = save_model(p.model);
        pj["distinguished"] = {p.model.worlds[static_cast<std::size_t>(p.distinguished.w)],
                               p.model.domain[static_cast<std::size_t>(p.distinguished.d)]};
        parts.push_back(pj);
    }
    j["models"] = parts;
    if (f.parts.size() == 2) j["bisimulation"] = dump(f.beta, f.parts[0].model, f.parts[1].model);
    return j;
}

}  // namespace qml
