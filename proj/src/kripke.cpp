#include "qml/kripke.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>

namespace qml {

using nlohmann::json;

bool KripkeModel::holds(const std::string& p, int w, int d) const
{
    auto it = val.find(p);
    if (it == val.end()) return false;
    return it->second[static_cast<std::size_t>(point(w, d))] != 0;
}

void KripkeModel::set(const std::string& p, int w, int d, bool v)
{
    auto& bits = val[p];
    bits.resize(static_cast<std::size_t>(npoints()), 0);
    bits[static_cast<std::size_t>(point(w, d))] = v ? 1 : 0;
}

bool KripkeModel::edge(const std::string& r, int w, int d, int e) const
{
    auto it = roles.find(r);
    if (it == roles.end()) return false;
    return it->second[static_cast<std::size_t>((w * nd() + d) * nd() + e)] != 0;
}

void KripkeModel::set_edge(const std::string& r, int w, int d, int e, bool v)
{
    auto& bits = roles[r];
    bits.resize(static_cast<std::size_t>(nw() * nd() * nd()), 0);
    bits[static_cast<std::size_t>((w * nd() + d) * nd() + e)] = v ? 1 : 0;
}

bool KripkeModel::access(int w, int v) const
{
    if (s5) return true;
    const auto& s = succ[static_cast<std::size_t>(w)];
    return std::find(s.begin(), s.end(), v) != s.end();
}

std::vector<int> KripkeModel::successors(int w) const
{
    if (!s5) return succ[static_cast<std::size_t>(w)];
    std::vector<int> all(static_cast<std::size_t>(nw()));
    std::iota(all.begin(), all.end(), 0);
    return all;
}

std::vector<int> KripkeModel::predecessors(int v) const
{
    std::vector<int> out;
    for (int w = 0; w < nw(); ++w)
        if (access(w, v)) out.push_back(w);
    return out;
}

int KripkeModel::world_index(const std::string& id) const
{
    auto it = std::find(worlds.begin(), worlds.end(), id);
    if (it == worlds.end()) throw ModelError("dangling world id: " + id);
    return static_cast<int>(it - worlds.begin());
}

int KripkeModel::element_index(const std::string& id) const
{
    auto it = std::find(domain.begin(), domain.end(), id);
    if (it == domain.end()) throw ModelError("dangling element id: " + id);
    return static_cast<int>(it - domain.begin());
}

void KripkeModel::validate() const
{
    if (worlds.empty()) throw ModelError("model has no worlds");
    if (domain.empty()) throw ModelError("model has an empty domain");
    if (std::set<std::string>(worlds.begin(), worlds.end()).size() != worlds.size())
        throw ModelError("duplicate world id");
    if (std::set<std::string>(domain.begin(), domain.end()).size() != domain.size())
        throw ModelError("duplicate element id");
    if (!s5) {
        if (succ.size() != worlds.size()) throw ModelError("accessibility does not cover the worlds");
        for (const auto& s : succ)
            for (int v : s)
                if (v < 0 || v >= nw()) throw ModelError("accessibility references a missing world");
    }
    for (const auto& [p, bits] : val)
        if (bits.size() != static_cast<std::size_t>(npoints())) throw ModelError("valuation size mismatch for " + p);
    for (const auto& [r, bits] : roles) {
        if (r == "U") throw ModelError("role U is reserved");
        if (bits.size() != static_cast<std::size_t>(nw() * nd() * nd()))
            throw ModelError("role size mismatch for " + r);
    }
}

KripkeModel make_model(int nw, int nd, bool s5)
{
    KripkeModel m;
    m.s5 = s5;
    for (int i = 0; i < nw; ++i) m.worlds.push_back("w" + std::to_string(i));
    for (int i = 0; i < nd; ++i) m.domain.push_back("d" + std::to_string(i));
    if (!s5) m.succ.assign(static_cast<std::size_t>(nw), {});
    return m;
}

namespace {

std::string id_of(const json& j)
{
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw ModelError("ids must be strings or integers");
}

}  // namespace

KripkeModel load_model(const json& j)
{
    if (!j.is_object()) throw ModelError("model must be a JSON object");
    KripkeModel m;
    std::string kind = j.value("kind", "");
    if (kind == "q1s5") m.s5 = true;
    else if (kind == "q1k") m.s5 = false;
    else throw ModelError("kind must be q1s5 or q1k");
    if (!j.contains("worlds") || !j["worlds"].is_array()) throw ModelError("missing worlds");
    if (!j.contains("domain") || !j["domain"].is_array()) throw ModelError("missing domain");
    for (const auto& w : j["worlds"]) m.worlds.push_back(id_of(w));
    for (const auto& d : j["domain"]) m.domain.push_back(id_of(d));
    if (m.worlds.empty()) throw ModelError("model has no worlds");
    if (m.domain.empty()) throw ModelError("model has an empty domain");
    if (m.s5 && j.contains("R")) throw ModelError("R is not allowed for kind q1s5");
    if (!m.s5) {
        if (!j.contains("R") || !j["R"].is_array()) throw ModelError("R is required for kind q1k");
        m.succ.assign(m.worlds.size(), {});
        for (const auto& e : j["R"]) {
            if (!e.is_array() || e.size() != 2) throw ModelError("R entries must be pairs");
            int a = m.world_index(id_of(e[0])), b = m.world_index(id_of(e[1]));
            auto& s = m.succ[static_cast<std::size_t>(a)];
            if (std::find(s.begin(), s.end(), b) == s.end()) s.push_back(b);
        }
        for (auto& s : m.succ) std::sort(s.begin(), s.end());
    }
    if (j.contains("val")) {
        if (!j["val"].is_object()) throw ModelError("val must be an object");
        for (const auto& [p, pts] : j["val"].items()) {
            if (!is_identifier(p)) throw ModelError("bad predicate name: " + p);
            m.val[p].assign(static_cast<std::size_t>(m.npoints()), 0);
            for (const auto& e : pts) {
                if (!e.is_array() || e.size() != 2) throw ModelError("val entries must be [world, element]");
                m.set(p, m.world_index(id_of(e[0])), m.element_index(id_of(e[1])));
            }
        }
    }
    if (j.contains("roles")) {
        if (!j["roles"].is_object()) throw ModelError("roles must be an object");
        for (const auto& [r, per_world] : j["roles"].items()) {
            if (r == "U") throw ModelError("role U is reserved");
            if (!is_identifier(r)) throw ModelError("bad role name: " + r);
            m.roles[r].assign(static_cast<std::size_t>(m.nw() * m.nd() * m.nd()), 0);
            for (const auto& [w, edges] : per_world.items()) {
                int wi = m.world_index(w);
                for (const auto& e : edges) {
                    if (!e.is_array() || e.size() != 2) throw ModelError("role edges must be pairs");
                    m.set_edge(r, wi, m.element_index(id_of(e[0])), m.element_index(id_of(e[1])));
                }
            }
        }
    }
    m.validate();
    return m;
}

KripkeModel load_model_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ModelError(path + ": " + e.what());
    }
    return load_model(j);
}

json save_model(const KripkeModel& m)
{
    json j;
    j["kind"] = m.s5 ? "q1s5" : "q1k";
    j["worlds"] = m.worlds;
    j["domain"] = m.domain;
    if (!m.s5) {
        json r = json::array();
        for (int w = 0; w < m.nw(); ++w)
            for (int v : m.succ[static_cast<std::size_t>(w)]) r.push_back({m.worlds[w], m.worlds[v]});
        j["R"] = r;
    }
    json val = json::object();
    for (const auto& [p, bits] : m.val) {
        json pts = json::array();
        for (int w = 0; w < m.nw(); ++w)
            for (int d = 0; d < m.nd(); ++d)
                if (bits[static_cast<std::size_t>(m.point(w, d))]) pts.push_back({m.worlds[w], m.domain[d]});
        val[p] = pts;
    }
    j["val"] = val;
    if (!m.roles.empty()) {
        json roles = json::object();
        for (const auto& [r, bits] : m.roles) {
            json per = json::object();
            for (int w = 0; w < m.nw(); ++w) {
                json edges = json::array();
                for (int d = 0; d < m.nd(); ++d)
                    for (int e = 0; e < m.nd(); ++e)
                        if (m.edge(r, w, d, e)) edges.push_back({m.domain[d], m.domain[e]});
                if (!edges.empty()) per[m.worlds[w]] = edges;
            }
            roles[r] = per;
        }
        j["roles"] = roles;
    }
    return j;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

void fill(const KripkeModel& m, const Dag& dag, int id, const std::vector<const Bits*>& child, Bits& out,
          bool parallel)
{
    const DagNode& n = dag.node(id);
    const int nw = m.nw(), nd = m.nd(), np = m.npoints();
    out.assign(static_cast<std::size_t>(np), 0);
    const Bits* a = child[0];
    const Bits* b = child[1];
    const Bits* atom_bits = nullptr;
    const Bits* role_bits = nullptr;
    if (n.kind == Kind::Atom) {
        auto it = m.val.find(dag.symbol_name(n.sym));
        if (it != m.val.end()) atom_bits = &it->second;
    }
    if (n.kind == Kind::Role) {
        auto it = m.roles.find(dag.symbol_name(n.sym));
        if (it != m.roles.end()) role_bits = &it->second;
    }
#pragma omp parallel for schedule(static) if (parallel)
    for (int p = 0; p < np; ++p) {
        const int w = p / nd, d = p % nd;
        std::uint8_t v = 0;
        switch (n.kind) {
        case Kind::Top: v = 1; break;
        case Kind::Atom: v = atom_bits ? (*atom_bits)[static_cast<std::size_t>(p)] : 0; break;
        case Kind::Not: v = !(*a)[static_cast<std::size_t>(p)]; break;
        case Kind::And: v = (*a)[static_cast<std::size_t>(p)] && (*b)[static_cast<std::size_t>(p)]; break;
        case Kind::Exists:
            for (int e = 0; e < nd && !v; ++e) v = (*a)[static_cast<std::size_t>(w * nd + e)];
            break;
        case Kind::Diamond:
            if (m.s5) {
                for (int u = 0; u < nw && !v; ++u) v = (*a)[static_cast<std::size_t>(u * nd + d)];
            } else {
                for (int u : m.succ[static_cast<std::size_t>(w)]) {
                    if ((*a)[static_cast<std::size_t>(u * nd + d)]) {
                        v = 1;
                        break;
                    }
                }
            }
            break;
        case Kind::Role:
            if (role_bits)
                for (int e = 0; e < nd && !v; ++e)
                    v = (*role_bits)[static_cast<std::size_t>((w * nd + d) * nd + e)] &&
                        (*a)[static_cast<std::size_t>(w * nd + e)];
            break;
        }
        out[static_cast<std::size_t>(p)] = v ? 1 : 0;
    }
}

}  // namespace

void Evaluator::compute(int id)
{
    for (int x : dag_.reachable({id})) {
        if (tables_.count(x)) continue;
        const DagNode& n = dag_.node(x);
        std::vector<const Bits*> child{nullptr, nullptr};
        if (n.a >= 0) child[0] = &tables_.at(n.a);
        if (n.b >= 0) child[1] = &tables_.at(n.b);
        Bits out;
        fill(m_, dag_, x, child, out, false);
        tables_.emplace(x, std::move(out));
    }
}

const Bits& Evaluator::table(int id)
{
    auto it = tables_.find(id);
    if (it != tables_.end()) return it->second;
    compute(id);
    return tables_.at(id);
}

std::vector<Bits> evaluate_all(const KripkeModel& m, const Dag& dag, const std::vector<int>& roots, bool parallel)
{
    std::vector<Bits> tables(static_cast<std::size_t>(dag.size()));
    for (int x : dag.reachable(roots)) {
        const DagNode& n = dag.node(x);
        std::vector<const Bits*> child{nullptr, nullptr};
        if (n.a >= 0) child[0] = &tables[static_cast<std::size_t>(n.a)];
        if (n.b >= 0) child[1] = &tables[static_cast<std::size_t>(n.b)];
        fill(m, dag, x, child, tables[static_cast<std::size_t>(x)], parallel);
    }
    return tables;
}

bool model_check(const KripkeModel& m, Point p, const Formula& f)
{
    if (p.w < 0 || p.w >= m.nw() || p.d < 0 || p.d >= m.nd()) throw ModelError("dangling point");
    Dag dag;
    int id = dag.add(f);
    Evaluator ev(m, dag);
    return ev.holds(id, p.w, p.d);
}

// ---------------------------------------------------------------------------
// enumeration

ModelEnumerator::ModelEnumerator(Signature sigma, int max_w, int max_d, bool s5, bool prune)
    : sigma_(sigma.begin(), sigma.end()), max_w_(max_w), max_d_(max_d), s5_(s5), prune_(prune)
{
    if (max_w < 1 || max_d < 1) throw std::invalid_argument("enumeration bounds must be at least 1");
}

bool ModelEnumerator::advance()
{
    const int vbits = static_cast<int>(sigma_.size()) * w_ * d_;
    const int rbits = s5_ ? 0 : w_ * w_;
    if (vbits + rbits > 62) throw std::overflow_error("enumeration space too large");
    if (++val_ < (std::uint64_t{1} << vbits)) return true;
    val_ = 0;
    if (++rel_ < (std::uint64_t{1} << rbits)) return true;
    rel_ = 0;
    if (++d_ <= max_d_) return true;
    d_ = 1;
    if (++w_ <= max_w_) return true;
    return false;
}

bool ModelEnumerator::canonical() const
{
    std::vector<int> pw(static_cast<std::size_t>(w_)), pd(static_cast<std::size_t>(d_));
    std::iota(pw.begin(), pw.end(), 0);
    const int ns = static_cast<int>(sigma_.size());
    do {
        std::iota(pd.begin(), pd.end(), 0);
        do {
            std::uint64_t rel = 0, val = 0;
            if (!s5_)
                for (int u = 0; u < w_; ++u)
                    for (int v = 0; v < w_; ++v)
                        if (rel_ >> (u * w_ + v) & 1) rel |= std::uint64_t{1} << (pw[u] * w_ + pw[v]);
            for (int s = 0; s < ns; ++s)
                for (int w = 0; w < w_; ++w)
                    for (int d = 0; d < d_; ++d)
                        if (val_ >> ((s * w_ + w) * d_ + d) & 1)
                            val |= std::uint64_t{1} << ((s * w_ + pw[w]) * d_ + pd[d]);
            if (rel < rel_ || (rel == rel_ && val < val_)) return false;
        } while (std::next_permutation(pd.begin(), pd.end()));
    } while (std::next_permutation(pw.begin(), pw.end()));
    return true;
}

KripkeModel ModelEnumerator::build() const
{
    KripkeModel m = make_model(w_, d_, s5_);
    if (!s5_)
        for (int u = 0; u < w_; ++u)
            for (int v = 0; v < w_; ++v)
                if (rel_ >> (u * w_ + v) & 1) m.succ[static_cast<std::size_t>(u)].push_back(v);
    for (std::size_t s = 0; s < sigma_.size(); ++s) {
        Bits bits(static_cast<std::size_t>(w_ * d_), 0);
        for (int w = 0; w < w_; ++w)
            for (int d = 0; d < d_; ++d)
                bits[static_cast<std::size_t>(w * d_ + d)] =
                    (val_ >> ((static_cast<int>(s) * w_ + w) * d_ + d)) & 1;
        m.val[sigma_[s]] = bits;
    }
    return m;
}

std::optional<KripkeModel> ModelEnumerator::next()
{
    while (!done_) {
        if (started_ && !advance()) {
            done_ = true;
            break;
        }
        started_ = true;
        if (prune_ && !canonical()) continue;
        return build();
    }
    return std::nullopt;
}

}  // namespace qml
