#include "qml/ground.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>

namespace qml {

using sat::Lit;

Shape Shape::s5_grid(int nw, int nd) { return Shape{nw, nd, true, {}}; }

Shape Shape::tree(const std::vector<std::vector<int>>& children, int nd)
{
    return Shape{static_cast<int>(children.size()), nd, false, children};
}

namespace {

// Canonical codes of unordered trees; children codes sorted.
std::vector<std::string> tree_codes(int depth, int branch)
{
    if (depth == 0) return {"()"};
    std::vector<std::string> sub = tree_codes(depth - 1, branch);
    std::vector<std::string> out;
    std::vector<int> pick;
    std::function<void(int, int)> go = [&](int start, int left) {
        std::string code = "(";
        for (int i : pick) code += sub[static_cast<std::size_t>(i)];
        code += ")";
        out.push_back(code);
        if (left == 0) return;
        for (int i = start; i < static_cast<int>(sub.size()); ++i) {
            pick.push_back(i);
            go(i, left - 1);
            pick.pop_back();
        }
    };
    go(0, branch);
    std::sort(out.begin(), out.end(), [](const std::string& a, const std::string& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::vector<int>> decode(const std::string& code)
{
    std::vector<std::vector<int>> children;
    std::vector<int> stack;
    for (char c : code) {
        if (c == '(') {
            int id = static_cast<int>(children.size());
            children.emplace_back();
            if (!stack.empty()) children[static_cast<std::size_t>(stack.back())].push_back(id);
            stack.push_back(id);
        } else {
            stack.pop_back();
        }
    }
    return children;
}

std::uint64_t key3(int a, int b, int c)
{
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 40) ^
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(b + 1)) << 20) ^
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(c + 1));
}

}  // namespace

std::vector<std::vector<std::vector<int>>> tree_shapes(int depth, int branch)
{
    std::vector<std::vector<std::vector<int>>> out;
    for (const auto& code : tree_codes(depth, branch)) out.push_back(decode(code));
    return out;
}

Grounder::Grounder(const Dag& dag, sat::Solver& solver, Shape shape, std::set<int> props)
    : dag_(dag), s_(solver), shape_(std::move(shape)), props_(std::move(props))
{
    true_ = sat::mk_lit(s_.new_var());
    s_.add_clause({true_});
}

Lit Grounder::fresh() { return sat::mk_lit(s_.new_var()); }

Lit Grounder::mk_and(const std::vector<Lit>& xs)
{
    std::vector<Lit> ys;
    for (Lit x : xs) {
        if (is_false(x)) return sat::negate(true_);
        if (!is_true(x)) ys.push_back(x);
    }
    if (ys.empty()) return true_;
    if (ys.size() == 1) return ys[0];
    Lit v = fresh();
    std::vector<Lit> big{v};
    for (Lit y : ys) {
        s_.add_clause({sat::negate(v), y});
        big.push_back(sat::negate(y));
    }
    s_.add_clause(big);
    return v;
}

Lit Grounder::mk_or(const std::vector<Lit>& xs)
{
    std::vector<Lit> neg;
    for (Lit x : xs) neg.push_back(sat::negate(x));
    return sat::negate(mk_and(neg));
}

Lit Grounder::atom_lit(int sym, int w, int d)
{
    if (props_.count(sym)) d = 0;
    std::uint64_t k = key3(sym, w, d);
    auto it = atoms_.find(k);
    if (it != atoms_.end()) return it->second;
    Lit l = fresh();
    atoms_.emplace(k, l);
    return l;
}

Lit Grounder::role_lit(int sym, int w, int d, int e)
{
    std::uint64_t k = key3(sym, w, d * shape_.nd + e);
    auto it = roles_.find(k);
    if (it != roles_.end()) return it->second;
    Lit l = fresh();
    roles_.emplace(k, l);
    return l;
}

Lit Grounder::ground(int id, int w, int d)
{
    const DagNode& n = dag_.node(id);
    int kw = w, kd = d;
    if (n.kind == Kind::Exists) kd = -1;
    if (n.kind == Kind::Diamond && shape_.s5) kw = -1;
    std::uint64_t k = key3(id, kw, kd);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    Lit r = true_;
    switch (n.kind) {
    case Kind::Top: r = true_; break;
    case Kind::Atom: r = atom_lit(n.sym, w, d); break;
    case Kind::Not: r = sat::negate(ground(n.a, w, d)); break;
    case Kind::And: {
        Lit a = ground(n.a, w, d);
        if (is_false(a)) {
            r = a;
            break;
        }
        r = mk_and({a, ground(n.b, w, d)});
        break;
    }
    case Kind::Exists: {
        std::vector<Lit> xs;
        for (int e = 0; e < shape_.nd; ++e) xs.push_back(ground(n.a, w, e));
        r = mk_or(xs);
        break;
    }
    case Kind::Diamond: {
        std::vector<Lit> xs;
        if (shape_.s5) {
            for (int v = 0; v < shape_.nw; ++v) xs.push_back(ground(n.a, v, d));
        } else {
            for (int v : shape_.succ[static_cast<std::size_t>(w)]) xs.push_back(ground(n.a, v, d));
        }
        r = mk_or(xs);
        break;
    }
    case Kind::Role: {
        std::vector<Lit> xs;
        for (int e = 0; e < shape_.nd; ++e) xs.push_back(mk_and({role_lit(n.sym, w, d, e), ground(n.a, w, e)}));
        r = mk_or(xs);
        break;
    }
    }
    memo_.emplace(k, r);
    return r;
}

void Grounder::require(int id, int w, int d) { s_.add_clause({ground(id, w, d)}); }

void Grounder::declare(const std::vector<int>& atoms, const std::vector<int>& roles)
{
    vars_of(atoms, roles);
}

std::vector<Lit> Grounder::vars_of(const std::vector<int>& atoms, const std::vector<int>& roles)
{
    std::vector<Lit> out;
    for (int a : atoms)
        for (int w = 0; w < shape_.nw; ++w)
            for (int d = 0; d < (props_.count(a) ? 1 : shape_.nd); ++d) out.push_back(atom_lit(a, w, d));
    for (int r : roles)
        for (int w = 0; w < shape_.nw; ++w)
            for (int d = 0; d < shape_.nd; ++d)
                for (int e = 0; e < shape_.nd; ++e) out.push_back(role_lit(r, w, d, e));
    return out;
}

KripkeModel Grounder::extract(const std::vector<int>& atoms, const std::vector<int>& roles) const
{
    KripkeModel m = make_model(shape_.nw, shape_.nd, shape_.s5);
    if (!shape_.s5) m.succ = shape_.succ;
    for (int a : atoms) {
        Bits bits(static_cast<std::size_t>(m.npoints()), 0);
        for (int w = 0; w < shape_.nw; ++w)
            for (int d = 0; d < shape_.nd; ++d) {
                auto it = atoms_.find(key3(a, w, props_.count(a) ? 0 : d));
                if (it != atoms_.end() && s_.lit_value(it->second)) bits[static_cast<std::size_t>(m.point(w, d))] = 1;
            }
        m.val[dag_.symbol_name(a)] = bits;
    }
    for (int r : roles) {
        Bits bits(static_cast<std::size_t>(m.nw() * m.nd() * m.nd()), 0);
        for (int w = 0; w < shape_.nw; ++w)
            for (int d = 0; d < shape_.nd; ++d)
                for (int e = 0; e < shape_.nd; ++e) {
                    auto it = roles_.find(key3(r, w, d * shape_.nd + e));
                    if (it != roles_.end() && s_.lit_value(it->second))
                        bits[static_cast<std::size_t>((w * m.nd() + d) * m.nd() + e)] = 1;
                }
        m.roles[dag_.symbol_name(r)] = bits;
    }
    return m;
}

}  // namespace qml
