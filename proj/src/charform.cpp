#include "qml/charform.hpp"

#include <map>
#include <tuple>

namespace qml {

namespace {

// Hash-consing builder: equal structures share one node, so duplicates are detected by pointer.
class Builder {
public:
    Formula top() { return intern(Op::Top, "", nullptr, nullptr); }
    Formula bottom() { return intern(Op::Bottom, "", nullptr, nullptr); }
    Formula atom(const std::string& p) { return intern(Op::Atom, p, nullptr, nullptr); }
    Formula neg(const Formula& a) { return intern(Op::Not, "", a, nullptr); }
    Formula diamond(const Formula& a) { return intern(Op::Diamond, "", a, nullptr); }
    Formula box(const Formula& a) { return intern(Op::Box, "", a, nullptr); }
    Formula exists(const Formula& a) { return intern(Op::Exists, "", a, nullptr); }
    Formula forall(const Formula& a) { return intern(Op::Forall, "", a, nullptr); }

    Formula conj(std::vector<Formula> xs) { return fold(std::move(xs), Op::And, top()); }
    Formula disj(std::vector<Formula> xs) { return fold(std::move(xs), Op::Or, bottom()); }

private:
    Formula fold(std::vector<Formula> xs, Op op, Formula unit)
    {
        std::vector<Formula> ys;
        for (auto& x : xs) {
            bool dup = false;
            for (auto& y : ys) dup = dup || y.get() == x.get();
            if (!dup && x.get() != unit.get()) ys.push_back(x);
        }
        if (ys.empty()) return unit;
        Formula acc = ys.back();
        for (std::size_t i = ys.size() - 1; i-- > 0;) acc = intern(op, "", ys[i], acc);
        return acc;
    }

    Formula intern(Op op, const std::string& name, const Formula& a, const Formula& b)
    {
        auto key = std::make_tuple(static_cast<int>(op), name, a.get(), b.get());
        auto it = table_.find(key);
        if (it != table_.end()) return it->second;
        Formula f = std::make_shared<const Node>(Node{op, name, a, b});
        table_.emplace(key, f);
        return f;
    }

    std::map<std::tuple<int, std::string, const Node*, const Node*>, Formula> table_;
};

class CharBuilder {
public:
    CharBuilder(const KripkeModel& m, const Signature& sigma) : m_(m), sigma_(sigma) {}

    Formula t0(int w, int d)
    {
        auto key = std::make_pair(w, d);
        auto it = t0_.find(key);
        if (it != t0_.end()) return it->second;
        std::vector<Formula> lits;
        for (const auto& p : sigma_) lits.push_back(m_.holds(p, w, d) ? b_.atom(p) : b_.neg(b_.atom(p)));
        Formula f = b_.conj(lits);
        t0_.emplace(key, f);
        return f;
    }

    // t^0(w,e) ∧ ⋀◇τ^{k-1}(v,e) ∧ □⋁τ^{k-1}(v,e), or t^0(w,e) when k = 0.
    Formula local(int w, int e, int k)
    {
        if (k == 0) return t0(w, e);
        std::vector<Formula> dia, alts;
        for (int v : m_.successors(w)) {
            Formula t = tau(v, e, k - 1);
            dia.push_back(b_.diamond(t));
            alts.push_back(t);
        }
        std::vector<Formula> parts{t0(w, e)};
        parts.insert(parts.end(), dia.begin(), dia.end());
        parts.push_back(b_.box(b_.disj(alts)));
        return b_.conj(parts);
    }

    Formula tau(int w, int d, int k)
    {
        auto key = std::make_tuple(w, d, k);
        auto it = tau_.find(key);
        if (it != tau_.end()) return it->second;
        std::vector<Formula> ex, all;
        for (int e = 0; e < m_.nd(); ++e) {
            Formula l = local(w, e, k);
            ex.push_back(b_.exists(l));
            all.push_back(l);
        }
        std::vector<Formula> parts{local(w, d, k)};
        parts.insert(parts.end(), ex.begin(), ex.end());
        parts.push_back(b_.forall(b_.disj(all)));
        Formula f = b_.conj(parts);
        tau_.emplace(key, f);
        return f;
    }

private:
    const KripkeModel& m_;
    const Signature& sigma_;
    Builder b_;
    std::map<std::pair<int, int>, Formula> t0_;
    std::map<std::tuple<int, int, int>, Formula> tau_;
};

}  // namespace

Formula literal_type_formula(const KripkeModel& m, Point p, const Signature& sigma)
{
    CharBuilder cb(m, sigma);
    return cb.t0(p.w, p.d);
}

Formula char_formula(const KripkeModel& m, Point p, const Signature& sigma, int k)
{
    if (p.w < 0 || p.w >= m.nw() || p.d < 0 || p.d >= m.nd()) throw ModelError("dangling point");
    CharBuilder cb(m, sigma);
    return cb.tau(p.w, p.d, k);
}

}  // namespace qml
