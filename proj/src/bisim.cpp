#include "qml/bisim.hpp"

#include <algorithm>
#include <map>

namespace qml {

using nlohmann::json;

std::size_t Relation::count() const
{
    std::size_t n = 0;
    for (auto b : bits) n += b;
    return n;
}

LiteralTypes literal_types(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    std::map<std::vector<std::uint8_t>, int> ids;
    auto go = [&](const KripkeModel& m) {
        std::vector<int> out(static_cast<std::size_t>(m.npoints()));
        std::vector<const Bits*> cols;
        for (const auto& p : sigma) {
            auto it = m.val.find(p);
            cols.push_back(it == m.val.end() ? nullptr : &it->second);
        }
        for (int x = 0; x < m.npoints(); ++x) {
            std::vector<std::uint8_t> key;
            key.reserve(cols.size());
            for (const Bits* c : cols) key.push_back(c ? (*c)[static_cast<std::size_t>(x)] : 0);
            auto [it, fresh] = ids.emplace(key, static_cast<int>(ids.size()));
            out[static_cast<std::size_t>(x)] = it->second;
        }
        return out;
    };
    LiteralTypes lt;
    lt.left = go(m1);
    lt.right = go(m2);
    return lt;
}

namespace {

struct Frame {
    int nw, nd;
    std::vector<std::vector<int>> succ, pred;
};

Frame frame_of(const KripkeModel& m)
{
    Frame f{m.nw(), m.nd(), {}, {}};
    f.succ.resize(static_cast<std::size_t>(m.nw()));
    f.pred.resize(static_cast<std::size_t>(m.nw()));
    for (int w = 0; w < m.nw(); ++w) f.succ[static_cast<std::size_t>(w)] = m.successors(w);
    for (int w = 0; w < m.nw(); ++w)
        for (int v : f.succ[static_cast<std::size_t>(w)]) f.pred[static_cast<std::size_t>(v)].push_back(w);
    return f;
}

// (w) and (d) for a point pair against relation r.
struct PairCheck {
    const Frame& a;
    const Frame& b;

    bool world_forth(const Relation& r, int w, int d, int w2, int d2) const
    {
        for (int v : a.succ[static_cast<std::size_t>(w)]) {
            bool ok = false;
            for (int v2 : b.succ[static_cast<std::size_t>(w2)])
                if (r.has(v * a.nd + d, v2 * b.nd + d2)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    }
    bool world_back(const Relation& r, int w, int d, int w2, int d2) const
    {
        for (int v2 : b.succ[static_cast<std::size_t>(w2)]) {
            bool ok = false;
            for (int v : a.succ[static_cast<std::size_t>(w)])
                if (r.has(v * a.nd + d, v2 * b.nd + d2)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    }
    bool dom_forth(const Relation& r, int w, int w2) const
    {
        for (int e = 0; e < a.nd; ++e) {
            bool ok = false;
            for (int e2 = 0; e2 < b.nd; ++e2)
                if (r.has(w * a.nd + e, w2 * b.nd + e2)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    }
    bool dom_back(const Relation& r, int w, int w2) const
    {
        for (int e2 = 0; e2 < b.nd; ++e2) {
            bool ok = false;
            for (int e = 0; e < a.nd; ++e)
                if (r.has(w * a.nd + e, w2 * b.nd + e2)) {
                    ok = true;
                    break;
                }
            if (!ok) return false;
        }
        return true;
    }
    // prev == nullptr skips the world step (level 0 of a k-sequence).
    bool ok(const Relation& r, const Relation* prev, int p, int q) const
    {
        int w = p / a.nd, d = p % a.nd, w2 = q / b.nd, d2 = q % b.nd;
        if (!dom_forth(r, w, w2) || !dom_back(r, w, w2)) return false;
        if (prev && (!world_forth(*prev, w, d, w2, d2) || !world_back(*prev, w, d, w2, d2))) return false;
        return true;
    }
};

Relation seed(const LiteralTypes& lt)
{
    Relation r(static_cast<int>(lt.left.size()), static_cast<int>(lt.right.size()));
    for (int p = 0; p < r.n1; ++p)
        for (int q = 0; q < r.n2; ++q)
            if (lt.left[static_cast<std::size_t>(p)] == lt.right[static_cast<std::size_t>(q)]) r.set(p, q);
    return r;
}

// Greatest relation below r closed under (d) and, with prev, the world step into prev.
// prev == &r gives the ordinary world step of a full bisimulation.
void refine_rounds(Relation& r, const Frame& a, const Frame& b, const Relation* prev, bool self_world, bool parallel)
{
    PairCheck pc{a, b};
    Bits drop(r.bits.size(), 0);
    while (true) {
        const Relation* wrel = self_world ? &r : prev;
        int changed = 0;
#pragma omp parallel for schedule(dynamic, 4) reduction(+ : changed) if (parallel)
        for (int p = 0; p < r.n1; ++p) {
            for (int q = 0; q < r.n2; ++q) {
                std::size_t k = static_cast<std::size_t>(p) * r.n2 + q;
                drop[k] = 0;
                if (r.bits[k] && !pc.ok(r, wrel, p, q)) {
                    drop[k] = 1;
                    ++changed;
                }
            }
        }
        if (!changed) break;
        for (std::size_t k = 0; k < r.bits.size(); ++k)
            if (drop[k]) r.bits[k] = 0;
    }
}

}  // namespace

GeneralBisim max_bisim_general(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    LiteralTypes lt = literal_types(m1, m2, sigma);
    Frame a = frame_of(m1), b = frame_of(m2);
    Relation r = seed(lt);
    PairCheck pc{a, b};
    std::vector<std::pair<int, int>> work;
    Bits queued(r.bits.size(), 0);
    for (int p = 0; p < r.n1; ++p)
        for (int q = 0; q < r.n2; ++q)
            if (r.has(p, q)) {
                work.push_back({p, q});
                queued[static_cast<std::size_t>(p) * r.n2 + q] = 1;
            }
    auto push = [&](int p, int q) {
        std::size_t k = static_cast<std::size_t>(p) * r.n2 + q;
        if (r.bits[k] && !queued[k]) {
            queued[k] = 1;
            work.push_back({p, q});
        }
    };
    while (!work.empty()) {
        auto [p, q] = work.back();
        work.pop_back();
        queued[static_cast<std::size_t>(p) * r.n2 + q] = 0;
        if (!r.has(p, q) || pc.ok(r, &r, p, q)) continue;
        r.set(p, q, false);
        int v = p / a.nd, d = p % a.nd, v2 = q / b.nd, d2 = q % b.nd;
        for (int u : a.pred[static_cast<std::size_t>(v)])
            for (int u2 : b.pred[static_cast<std::size_t>(v2)]) push(u * a.nd + d, u2 * b.nd + d2);
        for (int e = 0; e < a.nd; ++e)
            for (int e2 = 0; e2 < b.nd; ++e2) push(v * a.nd + e, v2 * b.nd + e2);
    }
    return {r};
}

GeneralBisim max_bisim_general_parallel(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    LiteralTypes lt = literal_types(m1, m2, sigma);
    Frame a = frame_of(m1), b = frame_of(m2);
    Relation r = seed(lt);
    refine_rounds(r, a, b, nullptr, true, true);
    return {r};
}

S5Bisim max_bisim_s5(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    if (!m1.s5 || !m2.s5) throw std::invalid_argument("S5 bisimulation needs S5 models");
    LiteralTypes lt = literal_types(m1, m2, sigma);
    const int w1 = m1.nw(), d1 = m1.nd(), w2 = m2.nw(), d2 = m2.nd();
    auto lt1 = [&](int w, int d) { return lt.left[static_cast<std::size_t>(w * d1 + d)]; };
    auto lt2 = [&](int w, int d) { return lt.right[static_cast<std::size_t>(w * d2 + d)]; };
    S5Bisim b{Relation(w1, w2, true), Relation(d1, d2, true)};
    bool changed = true;
    while (changed) {
        changed = false;
        for (int w = 0; w < w1; ++w)
            for (int v = 0; v < w2; ++v) {
                if (!b.beta1.has(w, v)) continue;
                bool ok = true;
                for (int d = 0; d < d1 && ok; ++d) {
                    bool found = false;
                    for (int e = 0; e < d2 && !found; ++e) found = b.beta2.has(d, e) && lt1(w, d) == lt2(v, e);
                    ok = found;
                }
                for (int e = 0; e < d2 && ok; ++e) {
                    bool found = false;
                    for (int d = 0; d < d1 && !found; ++d) found = b.beta2.has(d, e) && lt1(w, d) == lt2(v, e);
                    ok = found;
                }
                if (!ok) {
                    b.beta1.set(w, v, false);
                    changed = true;
                }
            }
        for (int d = 0; d < d1; ++d)
            for (int e = 0; e < d2; ++e) {
                if (!b.beta2.has(d, e)) continue;
                bool ok = true;
                for (int w = 0; w < w1 && ok; ++w) {
                    bool found = false;
                    for (int v = 0; v < w2 && !found; ++v) found = b.beta1.has(w, v) && lt1(w, d) == lt2(v, e);
                    ok = found;
                }
                for (int v = 0; v < w2 && ok; ++v) {
                    bool found = false;
                    for (int w = 0; w < w1 && !found; ++w) found = b.beta1.has(w, v) && lt1(w, d) == lt2(v, e);
                    ok = found;
                }
                if (!ok) {
                    b.beta2.set(d, e, false);
                    changed = true;
                }
            }
    }
    return b;
}

Relation s5_point_relation(const S5Bisim& b, const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    LiteralTypes lt = literal_types(m1, m2, sigma);
    Relation r(m1.npoints(), m2.npoints());
    for (int w = 0; w < m1.nw(); ++w)
        for (int v = 0; v < m2.nw(); ++v) {
            if (!b.beta1.has(w, v)) continue;
            for (int d = 0; d < m1.nd(); ++d)
                for (int e = 0; e < m2.nd(); ++e)
                    if (b.beta2.has(d, e) &&
                        lt.left[static_cast<std::size_t>(m1.point(w, d))] == lt.right[static_cast<std::size_t>(m2.point(v, e))])
                        r.set(m1.point(w, d), m2.point(v, e));
        }
    return r;
}

bool s5_bisimilar(const KripkeModel& m1, Point p1, const KripkeModel& m2, Point p2, const Signature& sigma)
{
    S5Bisim b = max_bisim_s5(m1, m2, sigma);
    if (!b.beta1.has(p1.w, p2.w) || !b.beta2.has(p1.d, p2.d)) return false;
    for (const auto& p : sigma)
        if (m1.holds(p, p1.w, p1.d) != m2.holds(p, p2.w, p2.d)) return false;
    return true;
}

KBisim max_k_bisim(const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma, int k)
{
    LiteralTypes lt = literal_types(m1, m2, sigma);
    Frame a = frame_of(m1), b = frame_of(m2);
    KBisim out;
    for (int i = 0; i <= k; ++i) {
        Relation r = seed(lt);
        refine_rounds(r, a, b, i == 0 ? nullptr : &out.levels.back(), false, false);
        out.levels.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// verification

namespace {

std::string pt(const KripkeModel& m, int p)
{
    return "(" + m.worlds[static_cast<std::size_t>(p / m.nd())] + "," + m.domain[static_cast<std::size_t>(p % m.nd())] + ")";
}

std::string pair_str(const KripkeModel& m1, int p, const KripkeModel& m2, int q)
{
    return "(" + pt(m1, p) + "," + pt(m2, q) + ")";
}

void check_points(const Relation& r, const Relation* wrel, const KripkeModel& m1, const KripkeModel& m2,
                  const LiteralTypes& lt, const std::string& tag, Report& rep)
{
    Frame a = frame_of(m1), b = frame_of(m2);
    PairCheck pc{a, b};
    for (int p = 0; p < r.n1; ++p)
        for (int q = 0; q < r.n2; ++q) {
            if (!r.has(p, q)) continue;
            int w = p / a.nd, d = p % a.nd, w2 = q / b.nd, d2 = q % b.nd;
            std::string where = tag + pair_str(m1, p, m2, q);
            if (lt.left[static_cast<std::size_t>(p)] != lt.right[static_cast<std::size_t>(q)]) rep.push_back({"(a)", where});
            if (wrel && !pc.world_forth(*wrel, w, d, w2, d2)) rep.push_back({"(w) forth", where});
            if (wrel && !pc.world_back(*wrel, w, d, w2, d2)) rep.push_back({"(w) back", where});
            if (!pc.dom_forth(r, w, w2)) rep.push_back({"(d) forth", where});
            if (!pc.dom_back(r, w, w2)) rep.push_back({"(d) back", where});
        }
}

}  // namespace

Report verify_bisimulation(const GeneralBisim& b, const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    Report rep;
    if (b.beta.n1 != m1.npoints() || b.beta.n2 != m2.npoints()) {
        rep.push_back({"shape", "relation size does not match the models"});
        return rep;
    }
    check_points(b.beta, &b.beta, m1, m2, literal_types(m1, m2, sigma), "", rep);
    return rep;
}

Report verify_bisimulation(const S5Bisim& b, const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    Report rep;
    if (b.beta1.n1 != m1.nw() || b.beta1.n2 != m2.nw() || b.beta2.n1 != m1.nd() || b.beta2.n2 != m2.nd()) {
        rep.push_back({"shape", "relation size does not match the models"});
        return rep;
    }
    LiteralTypes lt = literal_types(m1, m2, sigma);
    auto l1 = [&](int w, int d) { return lt.left[static_cast<std::size_t>(m1.point(w, d))]; };
    auto l2 = [&](int w, int d) { return lt.right[static_cast<std::size_t>(m2.point(w, d))]; };
    for (int w = 0; w < m1.nw(); ++w)
        for (int v = 0; v < m2.nw(); ++v) {
            if (!b.beta1.has(w, v)) continue;
            std::string where = "(" + m1.worlds[static_cast<std::size_t>(w)] + "," + m2.worlds[static_cast<std::size_t>(v)] + ")";
            for (int d = 0; d < m1.nd(); ++d) {
                bool found = false;
                for (int e = 0; e < m2.nd() && !found; ++e) found = b.beta2.has(d, e) && l1(w, d) == l2(v, e);
                if (!found) rep.push_back({"(s5_1) forth", where + " element " + m1.domain[static_cast<std::size_t>(d)]});
            }
            for (int e = 0; e < m2.nd(); ++e) {
                bool found = false;
                for (int d = 0; d < m1.nd() && !found; ++d) found = b.beta2.has(d, e) && l1(w, d) == l2(v, e);
                if (!found) rep.push_back({"(s5_1) back", where + " element " + m2.domain[static_cast<std::size_t>(e)]});
            }
        }
    for (int d = 0; d < m1.nd(); ++d)
        for (int e = 0; e < m2.nd(); ++e) {
            if (!b.beta2.has(d, e)) continue;
            std::string where = "(" + m1.domain[static_cast<std::size_t>(d)] + "," + m2.domain[static_cast<std::size_t>(e)] + ")";
            for (int w = 0; w < m1.nw(); ++w) {
                bool found = false;
                for (int v = 0; v < m2.nw() && !found; ++v) found = b.beta1.has(w, v) && l1(w, d) == l2(v, e);
                if (!found) rep.push_back({"(s5_2) forth", where + " world " + m1.worlds[static_cast<std::size_t>(w)]});
            }
            for (int v = 0; v < m2.nw(); ++v) {
                bool found = false;
                for (int w = 0; w < m1.nw() && !found; ++w) found = b.beta1.has(w, v) && l1(w, d) == l2(v, e);
                if (!found) rep.push_back({"(s5_2) back", where + " world " + m2.worlds[static_cast<std::size_t>(v)]});
            }
        }
    return rep;
}

Report verify_bisimulation(const KBisim& b, const KripkeModel& m1, const KripkeModel& m2, const Signature& sigma)
{
    Report rep;
    LiteralTypes lt = literal_types(m1, m2, sigma);
    for (std::size_t i = 0; i < b.levels.size(); ++i) {
        const Relation& r = b.levels[i];
        if (r.n1 != m1.npoints() || r.n2 != m2.npoints()) {
            rep.push_back({"shape", "level " + std::to_string(i) + " does not match the models"});
            continue;
        }
        check_points(r, i == 0 ? nullptr : &b.levels[i - 1], m1, m2, lt, "level " + std::to_string(i) + " ", rep);
    }
    return rep;
}

json report_json(const Report& r)
{
    json out = json::array();
    for (const auto& v : r) out.push_back({{"condition", v.condition}, {"at", v.detail}});
    return out;
}

json dump_points(const Relation& r, const KripkeModel& m1, const KripkeModel& m2)
{
    json out = json::array();
    for (int p = 0; p < r.n1; ++p)
        for (int q = 0; q < r.n2; ++q)
            if (r.has(p, q))
                out.push_back({{m1.worlds[static_cast<std::size_t>(p / m1.nd())], m1.domain[static_cast<std::size_t>(p % m1.nd())]},
                               {m2.worlds[static_cast<std::size_t>(q / m2.nd())], m2.domain[static_cast<std::size_t>(q % m2.nd())]}});
    return out;
}

json dump(const GeneralBisim& b, const KripkeModel& m1, const KripkeModel& m2)
{
    return {{"beta", dump_points(b.beta, m1, m2)}};
}

json dump(const S5Bisim& b, const KripkeModel& m1, const KripkeModel& m2)
{
    json w = json::array(), d = json::array();
    for (int i = 0; i < b.beta1.n1; ++i)
        for (int j = 0; j < b.beta1.n2; ++j)
            if (b.beta1.has(i, j)) w.push_back({m1.worlds[static_cast<std::size_t>(i)], m2.worlds[static_cast<std::size_t>(j)]});
    for (int i = 0; i < b.beta2.n1; ++i)
        for (int j = 0; j < b.beta2.n2; ++j)
            if (b.beta2.has(i, j)) d.push_back({m1.domain[static_cast<std::size_t>(i)], m2.domain[static_cast<std::size_t>(j)]});
    return {{"beta1", w}, {"beta2", d}};
}

json dump(const KBisim& b, const KripkeModel& m1, const KripkeModel& m2)
{
    json levels = json::array();
    for (const auto& r : b.levels) levels.push_back(dump_points(r, m1, m2));
    return {{"levels", levels}};
}

}  // namespace qml

// ---------------------------------------------------------------------------
// root keys

namespace qml {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return h ^ x;
}

std::uint64_t set_hash(std::uint64_t seed, std::vector<std::uint64_t> xs)
{
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::uint64_t h = mix(seed, xs.size());
    for (auto x : xs) h = mix(h, x);
    return h;
}

std::vector<std::uint64_t> literal_hashes(const KripkeModel& m, const Signature& sigma)
{
    std::vector<std::uint64_t> out(static_cast<std::size_t>(m.npoints()), 0x51);
    std::uint64_t bit = 1;
    for (const auto& p : sigma) {
        auto it = m.val.find(p);
        if (it != m.val.end())
            for (int x = 0; x < m.npoints(); ++x)
                if (it->second[static_cast<std::size_t>(x)]) out[static_cast<std::size_t>(x)] = mix(out[static_cast<std::size_t>(x)], bit);
        ++bit;
    }
    return out;
}

}  // namespace

std::uint64_t s5_root_key(const KripkeModel& m, const Signature& sigma, int rounds)
{
    std::vector<std::uint64_t> lit = literal_hashes(m, sigma);
    std::vector<std::uint64_t> wc(static_cast<std::size_t>(m.nw()), 1), dc(static_cast<std::size_t>(m.nd()), 2);
    for (int r = 0; r < rounds; ++r) {
        std::vector<std::uint64_t> nw(wc.size()), nd(dc.size());
        for (int w = 0; w < m.nw(); ++w) {
            std::vector<std::uint64_t> xs;
            for (int d = 0; d < m.nd(); ++d) xs.push_back(mix(lit[static_cast<std::size_t>(m.point(w, d))], dc[static_cast<std::size_t>(d)]));
            nw[static_cast<std::size_t>(w)] = set_hash(wc[static_cast<std::size_t>(w)], std::move(xs));
        }
        for (int d = 0; d < m.nd(); ++d) {
            std::vector<std::uint64_t> xs;
            for (int w = 0; w < m.nw(); ++w) xs.push_back(mix(lit[static_cast<std::size_t>(m.point(w, d))], wc[static_cast<std::size_t>(w)]));
            nd[static_cast<std::size_t>(d)] = set_hash(dc[static_cast<std::size_t>(d)], std::move(xs));
        }
        wc.swap(nw);
        dc.swap(nd);
    }
    return mix(mix(lit[0], wc[0]), dc[0]);
}

std::uint64_t k_root_key(const KripkeModel& m, const Signature& sigma, int k)
{
    std::vector<std::uint64_t> lit = literal_hashes(m, sigma);
    std::vector<std::uint64_t> c(lit.size());
    std::vector<std::uint64_t> prev;
    for (int i = 0; i <= k; ++i) {
        std::vector<std::uint64_t> x(lit.size());
        for (int w = 0; w < m.nw(); ++w)
            for (int d = 0; d < m.nd(); ++d) {
                std::uint64_t h = lit[static_cast<std::size_t>(m.point(w, d))];
                if (i > 0) {
                    std::vector<std::uint64_t> succ;
                    for (int v : m.successors(w)) succ.push_back(prev[static_cast<std::size_t>(m.point(v, d))]);
                    h = set_hash(h, std::move(succ));
                }
                x[static_cast<std::size_t>(m.point(w, d))] = h;
            }
        for (int w = 0; w < m.nw(); ++w) {
            std::vector<std::uint64_t> xs;
            for (int d = 0; d < m.nd(); ++d) xs.push_back(x[static_cast<std::size_t>(m.point(w, d))]);
            std::uint64_t ws = set_hash(0x77, std::move(xs));
            for (int d = 0; d < m.nd(); ++d) c[static_cast<std::size_t>(m.point(w, d))] = mix(x[static_cast<std::size_t>(m.point(w, d))], ws);
        }
        prev = c;
    }
    return c[0];
}

std::uint64_t alcu_root_key(const KripkeModel& m, const Signature& sigma, int rounds)
{
    std::vector<std::uint64_t> pc = literal_hashes(m, sigma);
    std::vector<std::string> roles(sigma.begin(), sigma.end());  // absent roles give empty sets
    for (int i = 0; i < rounds; ++i) {
        std::vector<std::uint64_t> wc(static_cast<std::size_t>(m.nw())), dc(static_cast<std::size_t>(m.nd()));
        for (int w = 0; w < m.nw(); ++w) {
            std::vector<std::uint64_t> xs;
            for (int d = 0; d < m.nd(); ++d) xs.push_back(pc[static_cast<std::size_t>(m.point(w, d))]);
            wc[static_cast<std::size_t>(w)] = set_hash(0x3a, std::move(xs));
        }
        for (int d = 0; d < m.nd(); ++d) {
            std::vector<std::uint64_t> xs;
            for (int w = 0; w < m.nw(); ++w) xs.push_back(pc[static_cast<std::size_t>(m.point(w, d))]);
            dc[static_cast<std::size_t>(d)] = set_hash(0x5c, std::move(xs));
        }
        std::vector<std::uint64_t> next(pc.size());
        for (int w = 0; w < m.nw(); ++w)
            for (int d = 0; d < m.nd(); ++d) {
                std::size_t x = static_cast<std::size_t>(m.point(w, d));
                std::uint64_t h = mix(mix(pc[x], wc[static_cast<std::size_t>(w)]), dc[static_cast<std::size_t>(d)]);
                std::uint64_t tag = 0x91;
                for (const auto& r : roles) {
                    std::vector<std::uint64_t> xs;
                    for (int e = 0; e < m.nd(); ++e)
                        if (m.edge(r, w, d, e)) xs.push_back(pc[static_cast<std::size_t>(m.point(w, e))]);
                    h = mix(h, set_hash(++tag, std::move(xs)));
                }
                next[x] = h;
            }
        pc.swap(next);
    }
    return pc[0];
}

}  // namespace qml
