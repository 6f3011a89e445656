#include "qml/translate.hpp"

#include <cctype>
#include <stdexcept>

namespace qml {

namespace {

FOFormula mk(FOp op, FOFormula a = nullptr, FOFormula b = nullptr)
{
    return std::make_shared<const FNode>(FNode{op, {}, 0, 0, 0, std::move(a), std::move(b)});
}

FOFormula atom(const std::string& p, char u, char v)
{
    return std::make_shared<const FNode>(FNode{FOp::Atom, p, u, v, 0, nullptr, nullptr});
}

FOFormula quant(FOp op, char var, FOFormula body)
{
    return std::make_shared<const FNode>(FNode{op, {}, 0, 0, var, std::move(body), nullptr});
}

FOFormula dagger(const Formula& f)
{
    switch (f->op) {
    case Op::Top: return mk(FOp::Top);
    case Op::Bottom: return mk(FOp::Bottom);
    case Op::Atom: return atom(f->name, 'y', 'x');
    case Op::Not: return mk(FOp::Not, dagger(f->a));
    case Op::And: return mk(FOp::And, dagger(f->a), dagger(f->b));
    case Op::Or: return mk(FOp::Or, dagger(f->a), dagger(f->b));
    case Op::Implies: return mk(FOp::Implies, dagger(f->a), dagger(f->b));
    case Op::Iff: return mk(FOp::Iff, dagger(f->a), dagger(f->b));
    case Op::Diamond: return quant(FOp::Exists, 'y', dagger(f->a));
    case Op::Box: return quant(FOp::Forall, 'y', dagger(f->a));
    case Op::Exists: return quant(FOp::Exists, 'x', dagger(f->a));
    case Op::Forall: return quant(FOp::Forall, 'x', dagger(f->a));
    }
    throw std::logic_error("unhandled operator");
}

FOFormula standard(const Formula& f, char w)
{
    char next = w == 'z' ? 'y' : 'z';
    switch (f->op) {
    case Op::Top: return mk(FOp::Top);
    case Op::Bottom: return mk(FOp::Bottom);
    case Op::Atom: return atom(f->name, w, 'x');
    case Op::Not: return mk(FOp::Not, standard(f->a, w));
    case Op::And: return mk(FOp::And, standard(f->a, w), standard(f->b, w));
    case Op::Or: return mk(FOp::Or, standard(f->a, w), standard(f->b, w));
    case Op::Implies: return mk(FOp::Implies, standard(f->a, w), standard(f->b, w));
    case Op::Iff: return mk(FOp::Iff, standard(f->a, w), standard(f->b, w));
    case Op::Diamond:
        return quant(FOp::Exists, next, mk(FOp::And, atom(kAccessibility, w, next), standard(f->a, next)));
    case Op::Box:
        return quant(FOp::Forall, next, mk(FOp::Implies, atom(kAccessibility, w, next), standard(f->a, next)));
    case Op::Exists: return quant(FOp::Exists, 'x', standard(f->a, w));
    case Op::Forall: return quant(FOp::Forall, 'x', standard(f->a, w));
    }
    throw std::logic_error("unhandled operator");
}

const char* op_word(FOp op)
{
    switch (op) {
    case FOp::Not: return "not";
    case FOp::And: return "and";
    case FOp::Or: return "or";
    case FOp::Implies: return "implies";
    case FOp::Iff: return "iff";
    case FOp::Exists: return "exists";
    case FOp::Forall: return "forall";
    default: return "";
    }
}

std::string tptp_name(const std::string& p)
{
    std::string out;
    for (char ch : p) {
        if (ch == '\'') out += "_prime";
        else out += ch;
    }
    if (out.empty() || !std::islower(static_cast<unsigned char>(out[0]))) out = "p_" + out;
    return out;
}

std::string tptp(const FOFormula& f)
{
    auto V = [](char v) { return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(v)))); };
    switch (f->op) {
    case FOp::Top: return "$true";
    case FOp::Bottom: return "$false";
    case FOp::Atom: return tptp_name(f->pred) + "(" + V(f->arg1) + "," + V(f->arg2) + ")";
    case FOp::Not: return "~ " + tptp(f->a);
    case FOp::And: return "(" + tptp(f->a) + " & " + tptp(f->b) + ")";
    case FOp::Or: return "(" + tptp(f->a) + " | " + tptp(f->b) + ")";
    case FOp::Implies: return "(" + tptp(f->a) + " => " + tptp(f->b) + ")";
    case FOp::Iff: return "(" + tptp(f->a) + " <=> " + tptp(f->b) + ")";
    case FOp::Exists: return "? [" + V(f->var) + "] : " + tptp(f->a);
    case FOp::Forall: return "! [" + V(f->var) + "] : " + tptp(f->a);
    }
    return "";
}

void free_rec(const FOFormula& f, std::set<char> bound, std::set<char>& out)
{
    switch (f->op) {
    case FOp::Atom:
        if (!bound.count(f->arg1)) out.insert(f->arg1);
        if (!bound.count(f->arg2)) out.insert(f->arg2);
        return;
    case FOp::Exists:
    case FOp::Forall:
        bound.insert(f->var);
        free_rec(f->a, bound, out);
        return;
    default:
        if (f->a) free_rec(f->a, bound, out);
        if (f->b) free_rec(f->b, bound, out);
    }
}

int& slot(FOEnv& e, char v)
{
    switch (v) {
    case 'x': return e.x;
    case 'y': return e.y;
    case 'z': return e.z;
    }
    throw std::invalid_argument(std::string("unknown variable ") + v);
}

}  // namespace

FOFormula dagger_translation(const Formula& f) { return dagger(f); }
FOFormula standard_translation(const Formula& f) { return standard(f, 'z'); }

std::string print_fo(const FOFormula& f)
{
    switch (f->op) {
    case FOp::Top: return "true";
    case FOp::Bottom: return "false";
    case FOp::Atom: return "(" + f->pred + " " + f->arg1 + " " + f->arg2 + ")";
    case FOp::Not: return "(not " + print_fo(f->a) + ")";
    case FOp::Exists:
    case FOp::Forall: return std::string("(") + op_word(f->op) + " " + f->var + " " + print_fo(f->a) + ")";
    default: return std::string("(") + op_word(f->op) + " " + print_fo(f->a) + " " + print_fo(f->b) + ")";
    }
}

std::string print_tptp(const FOFormula& f, const std::string& name)
{
    std::set<char> fv = free_vars(f);
    std::string body = tptp(f);
    if (!fv.empty()) {
        std::string vs;
        for (char v : fv) vs += (vs.empty() ? "" : ",") + std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(v))));
        body = "! [" + vs + "] : " + body;
    }
    return "fof(" + name + ", axiom, " + body + ").";
}

std::set<char> free_vars(const FOFormula& f)
{
    std::set<char> out;
    free_rec(f, {}, out);
    return out;
}

std::set<std::string> predicates(const FOFormula& f)
{
    std::set<std::string> out;
    if (f->op == FOp::Atom) out.insert(f->pred);
    if (f->a) {
        auto s = predicates(f->a);
        out.insert(s.begin(), s.end());
    }
    if (f->b) {
        auto s = predicates(f->b);
        out.insert(s.begin(), s.end());
    }
    return out;
}

bool substitution_free(const FOFormula& f)
{
    if (f->op == FOp::Atom) return f->arg1 == 'y' && f->arg2 == 'x';
    return (!f->a || substitution_free(f->a)) && (!f->b || substitution_free(f->b));
}

bool FOStructure::holds(const std::string& p, int a, int b) const
{
    auto it = preds.find(p);
    return it != preds.end() && it->second[static_cast<std::size_t>(a * size + b)] != 0;
}

bool fo_eval(const FOStructure& s, const FOFormula& f, FOEnv env)
{
    switch (f->op) {
    case FOp::Top: return true;
    case FOp::Bottom: return false;
    case FOp::Atom: return s.holds(f->pred, slot(env, f->arg1), slot(env, f->arg2));
    case FOp::Not: return !fo_eval(s, f->a, env);
    case FOp::And: return fo_eval(s, f->a, env) && fo_eval(s, f->b, env);
    case FOp::Or: return fo_eval(s, f->a, env) || fo_eval(s, f->b, env);
    case FOp::Implies: return !fo_eval(s, f->a, env) || fo_eval(s, f->b, env);
    case FOp::Iff: return fo_eval(s, f->a, env) == fo_eval(s, f->b, env);
    case FOp::Exists:
    case FOp::Forall: {
        bool want = f->op == FOp::Exists;
        for (int v = 0; v < s.size; ++v) {
            FOEnv e = env;
            slot(e, f->var) = v;
            if (fo_eval(s, f->a, e) == want) return want;
        }
        return !want;
    }
    }
    return false;
}

KripkeModel fo_to_square(const FOStructure& s)
{
    KripkeModel m = make_model(s.size, s.size, true);
    for (const auto& [p, bits] : s.preds)
        for (int a = 0; a < s.size; ++a)
            for (int b = 0; b < s.size; ++b)
                if (s.holds(p, a, b)) m.set(p, a, b);
    return m;
}

FOStructure square_to_fo(const KripkeModel& m, std::vector<int> f)
{
    if (m.nw() != m.nd()) throw ModelError("square_to_fo needs |W| = |D|");
    if (f.empty())
        for (int d = 0; d < m.nd(); ++d) f.push_back(d);
    std::vector<int> seen(static_cast<std::size_t>(m.nw()), 0);
    if (static_cast<int>(f.size()) != m.nd()) throw ModelError("bijection has the wrong size");
    for (int w : f) {
        if (w < 0 || w >= m.nw() || seen[static_cast<std::size_t>(w)]++) throw ModelError("f is not a bijection");
    }
    FOStructure s;
    s.size = m.nd();
    for (const auto& [p, bits] : m.val) {
        Bits t(static_cast<std::size_t>(s.size * s.size), 0);
        for (int a = 0; a < s.size; ++a)
            for (int b = 0; b < s.size; ++b) t[static_cast<std::size_t>(a * s.size + b)] = m.holds(p, f[static_cast<std::size_t>(a)], b) ? 1 : 0;
        s.preds[p] = t;
    }
    return s;
}

}  // namespace qml
