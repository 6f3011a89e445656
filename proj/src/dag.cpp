#include "qml/dag.hpp"

#include <algorithm>
#include <stdexcept>

namespace qml {

int Dag::mk(Kind k, int sym, int a, int b)
{
    auto key = std::make_tuple(static_cast<int>(k), sym, a, b);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({k, sym, a, b});
    index_.emplace(key, id);
    return id;
}

int Dag::symbol(const std::string& name)
{
    auto it = sym_index_.find(name);
    if (it != sym_index_.end()) return it->second;
    int id = static_cast<int>(syms_.size());
    syms_.push_back(name);
    sym_index_.emplace(name, id);
    return id;
}

int Dag::find_symbol(const std::string& name) const
{
    auto it = sym_index_.find(name);
    return it == sym_index_.end() ? -1 : it->second;
}

int Dag::top() { return mk(Kind::Top, -1, -1, -1); }
int Dag::atom(const std::string& name) { return mk(Kind::Atom, symbol(name), -1, -1); }

int Dag::neg(int x)
{
    if (node(x).kind == Kind::Not) return node(x).a;
    return mk(Kind::Not, -1, x, -1);
}

int Dag::conj(int x, int y) { return mk(Kind::And, -1, x, y); }
int Dag::disj(int x, int y) { return neg(conj(neg(x), neg(y))); }
int Dag::implies(int x, int y) { return neg(conj(x, neg(y))); }
int Dag::iff(int x, int y) { return conj(implies(x, y), implies(y, x)); }
int Dag::exists(int x) { return mk(Kind::Exists, -1, x, -1); }
int Dag::forall(int x) { return neg(exists(neg(x))); }
int Dag::diamond(int x) { return mk(Kind::Diamond, -1, x, -1); }
int Dag::box(int x) { return neg(diamond(neg(x))); }
int Dag::some(const std::string& role, int x) { return mk(Kind::Role, symbol(role), x, -1); }
int Dag::only(const std::string& role, int x) { return neg(some(role, neg(x))); }

int Dag::conj_all(const std::vector<int>& xs)
{
    if (xs.empty()) return top();
    int r = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) r = conj(r, xs[i]);
    return r;
}

int Dag::disj_all(const std::vector<int>& xs)
{
    if (xs.empty()) return neg(top());
    int r = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) r = disj(r, xs[i]);
    return r;
}

int Dag::add(const Formula& f)
{
    std::unordered_map<const Node*, int> memo;
    auto go = [&](auto&& self, const Formula& g) -> int {
        auto it = memo.find(g.get());
        if (it != memo.end()) return it->second;
        int r = -1;
        switch (g->op) {
        case Op::Top: r = top(); break;
        case Op::Bottom: r = neg(top()); break;
        case Op::Atom: r = atom(g->name); break;
        case Op::Not: r = neg(self(self, g->a)); break;
        case Op::And: r = conj(self(self, g->a), self(self, g->b)); break;
        case Op::Or: r = disj(self(self, g->a), self(self, g->b)); break;
        case Op::Implies: r = implies(self(self, g->a), self(self, g->b)); break;
        case Op::Iff: r = iff(self(self, g->a), self(self, g->b)); break;
        case Op::Diamond: r = diamond(self(self, g->a)); break;
        case Op::Box: r = box(self(self, g->a)); break;
        case Op::Exists: r = exists(self(self, g->a)); break;
        case Op::Forall: r = forall(self(self, g->a)); break;
        }
        memo.emplace(g.get(), r);
        return r;
    };
    return go(go, f);
}

Formula Dag::to_formula(int id) const
{
    std::unordered_map<int, Formula> memo;
    auto go = [&](auto&& self, int x) -> Formula {
        auto it = memo.find(x);
        if (it != memo.end()) return it->second;
        const DagNode& n = node(x);
        Formula r;
        switch (n.kind) {
        case Kind::Top: r = mk_top(); break;
        case Kind::Atom: r = mk_atom(symbol_name(n.sym)); break;
        case Kind::Not: r = mk_not(self(self, n.a)); break;
        case Kind::And: r = mk_and(self(self, n.a), self(self, n.b)); break;
        case Kind::Exists: r = mk_exists(self(self, n.a)); break;
        case Kind::Diamond: r = mk_diamond(self(self, n.a)); break;
        case Kind::Role: throw std::invalid_argument("role restriction has no formula counterpart");
        }
        memo.emplace(x, r);
        return r;
    };
    return go(go, id);
}

std::vector<int> Dag::reachable(const std::vector<int>& roots) const
{
    std::vector<int> order;
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<std::pair<int, int>> stack;
    for (int root : roots) {
        if (seen[static_cast<std::size_t>(root)]) continue;
        stack.push_back({root, 0});
        seen[static_cast<std::size_t>(root)] = 1;
        while (!stack.empty()) {
            auto& [x, state] = stack.back();
            const DagNode& n = node(x);
            int child = -1;
            if (state == 0) {
                state = 1;
                child = n.a;
            } else if (state == 1) {
                state = 2;
                child = n.b;
            } else {
                order.push_back(x);
                stack.pop_back();
                continue;
            }
            if (child >= 0 && !seen[static_cast<std::size_t>(child)]) {
                seen[static_cast<std::size_t>(child)] = 1;
                stack.push_back({child, 0});
            }
        }
    }
    return order;
}

std::vector<int> Dag::atoms_of(const std::vector<int>& roots) const
{
    std::vector<int> out;
    for (int x : reachable(roots))
        if (node(x).kind == Kind::Atom) out.push_back(node(x).sym);
    std::sort(out.begin(), out.end(), [&](int a, int b) { return symbol_name(a) < symbol_name(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> Dag::roles_of(const std::vector<int>& roots) const
{
    std::vector<int> out;
    for (int x : reachable(roots))
        if (node(x).kind == Kind::Role) out.push_back(node(x).sym);
    std::sort(out.begin(), out.end(), [&](int a, int b) { return symbol_name(a) < symbol_name(b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int Dag::modal_depth(int id) const
{
    std::unordered_map<int, int> depth;
    for (int x : reachable({id})) {
        const DagNode& n = node(x);
        int d = 0;
        if (n.a >= 0) d = depth[n.a];
        if (n.b >= 0) d = std::max(d, depth[n.b]);
        if (n.kind == Kind::Diamond) ++d;
        depth[x] = d;
    }
    return depth[id];
}

ClosureIndex closure(Dag& dag, const std::vector<int>& roots)
{
    ClosureIndex c;
    auto add = [&](int id) {
        if (c.index_of.count(id)) return;
        c.index_of.emplace(id, static_cast<int>(c.members.size()));
        c.members.push_back(id);
    };
    for (int x : dag.reachable(roots)) {
        add(x);
        add(dag.neg(x));
    }
    c.negation.resize(c.members.size());
    for (std::size_t i = 0; i < c.members.size(); ++i) {
        int m = c.members[i];
        c.negation[i] = c.index_of.at(dag.neg(m));
        const DagNode& n = dag.node(m);
        Kind k = n.kind == Kind::Not ? dag.node(n.a).kind : n.kind;
        if (k == Kind::Exists) c.exists_members.push_back(static_cast<int>(i));
        if (k == Kind::Diamond) c.diamond_members.push_back(static_cast<int>(i));
    }
    return c;
}

}  // namespace qml
