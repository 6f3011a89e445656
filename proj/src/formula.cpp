#include "qml/formula.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace qml {

namespace {

Formula make(Op op, Formula a = nullptr, Formula b = nullptr, std::string name = {})
{
    return std::make_shared<const Node>(Node{op, std::move(name), std::move(a), std::move(b)});
}

}  // namespace

Formula mk_top() { return make(Op::Top); }
Formula mk_bottom() { return make(Op::Bottom); }
Formula mk_atom(std::string name) { return make(Op::Atom, nullptr, nullptr, std::move(name)); }
Formula mk_not(Formula a) { return make(Op::Not, std::move(a)); }
Formula mk_and(Formula a, Formula b) { return make(Op::And, std::move(a), std::move(b)); }
Formula mk_or(Formula a, Formula b) { return make(Op::Or, std::move(a), std::move(b)); }
Formula mk_implies(Formula a, Formula b) { return make(Op::Implies, std::move(a), std::move(b)); }
Formula mk_iff(Formula a, Formula b) { return make(Op::Iff, std::move(a), std::move(b)); }
Formula mk_diamond(Formula a) { return make(Op::Diamond, std::move(a)); }
Formula mk_box(Formula a) { return make(Op::Box, std::move(a)); }
Formula mk_exists(Formula a) { return make(Op::Exists, std::move(a)); }
Formula mk_forall(Formula a) { return make(Op::Forall, std::move(a)); }

Formula mk_and_all(const std::vector<Formula>& xs)
{
    if (xs.empty()) return mk_top();
    Formula r = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) r = mk_and(r, xs[i]);
    return r;
}

Formula mk_or_all(const std::vector<Formula>& xs)
{
    if (xs.empty()) return mk_bottom();
    Formula r = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) r = mk_or(r, xs[i]);
    return r;
}

SyntaxError::SyntaxError(const std::string& msg, int line, int column)
    : std::runtime_error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line(line),
      column(column)
{
}

bool is_identifier(std::string_view s)
{
    if (s.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s.substr(1))
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
    return true;
}

// ---------------------------------------------------------------------------
// parser

namespace {

enum class Tok { Ident, True, False, Not, Dia, Box, Ex, All, And, Or, Imp, Iff, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

std::vector<Token> lex(std::string_view s)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        int l = line, cl = col;
        auto starts = [&](std::string_view t) { return s.substr(i, t.size()) == t; };
        if (starts("<->")) {
            out.push_back({Tok::Iff, "<->", l, cl});
            advance(3);
        } else if (starts("->")) {
            out.push_back({Tok::Imp, "->", l, cl});
            advance(2);
        } else if (starts("<>")) {
            out.push_back({Tok::Dia, "<>", l, cl});
            advance(2);
        } else if (starts("[]")) {
            out.push_back({Tok::Box, "[]", l, cl});
            advance(2);
        } else if (c == '~') {
            out.push_back({Tok::Not, "~", l, cl});
            advance(1);
        } else if (c == '&') {
            out.push_back({Tok::And, "&", l, cl});
            advance(1);
        } else if (c == '|') {
            out.push_back({Tok::Or, "|", l, cl});
            advance(1);
        } else if (c == '(') {
            out.push_back({Tok::LParen, "(", l, cl});
            advance(1);
        } else if (c == ')') {
            out.push_back({Tok::RParen, ")", l, cl});
            advance(1);
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i + 1;
            while (j < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
                ++j;
            std::string word(s.substr(i, j - i));
            Tok k = Tok::Ident;
            if (word == "true") k = Tok::True;
            else if (word == "false") k = Tok::False;
            else if (word == "E") k = Tok::Ex;
            else if (word == "A") k = Tok::All;
            out.push_back({k, word, l, cl});
            advance(j - i);
        } else {
            throw SyntaxError(std::string("unexpected character '") + c + "'", l, cl);
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view s) : toks_(lex(s)) {}

    Formula run()
    {
        Formula f = iff();
        if (peek().kind == Tok::RParen) throw SyntaxError("unbalanced parentheses", peek().line, peek().col);
        if (peek().kind != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().line, peek().col);
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_++]; }
    bool accept(Tok k)
    {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }

    Formula iff()
    {
        Formula f = imp();
        while (accept(Tok::Iff)) f = mk_iff(f, imp());
        return f;
    }

    Formula imp()
    {
        Formula f = disj();
        if (accept(Tok::Imp)) return mk_implies(f, imp());
        return f;
    }

    Formula disj()
    {
        Formula f = conj();
        while (accept(Tok::Or)) f = mk_or(f, conj());
        return f;
    }

    Formula conj()
    {
        Formula f = unary();
        while (accept(Tok::And)) f = mk_and(f, unary());
        return f;
    }

    Formula unary()
    {
        switch (peek().kind) {
        case Tok::Not: next(); return mk_not(unary());
        case Tok::Dia: next(); return mk_diamond(unary());
        case Tok::Box: next(); return mk_box(unary());
        case Tok::Ex: next(); return mk_exists(unary());
        case Tok::All: next(); return mk_forall(unary());
        default: return primary();
        }
    }

    Formula primary()
    {
        Token t = next();
        switch (t.kind) {
        case Tok::True: return mk_top();
        case Tok::False: return mk_bottom();
        case Tok::Ident: return mk_atom(t.text);
        case Tok::LParen: {
            Formula f = iff();
            if (!accept(Tok::RParen)) throw SyntaxError("unbalanced parentheses", peek().line, peek().col);
            return f;
        }
        case Tok::End: throw SyntaxError("unexpected end of input", t.line, t.col);
        case Tok::RParen: throw SyntaxError("unbalanced parentheses", t.line, t.col);
        default: throw SyntaxError("unexpected '" + t.text + "'", t.line, t.col);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

int level(Op op)
{
    switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    default: return 5;
    }
}

const char* infix(Op op)
{
    switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Implies: return " -> ";
    case Op::Iff: return " <-> ";
    default: return "";
    }
}

const char* prefix(Op op)
{
    switch (op) {
    case Op::Not: return "~";
    case Op::Diamond: return "<>";
    case Op::Box: return "[]";
    case Op::Exists: return "E ";
    case Op::Forall: return "A ";
    default: return "";
    }
}

void print_rec(const Formula& f, bool pretty, int need, std::string& out)
{
    switch (f->op) {
    case Op::Top: out += "true"; return;
    case Op::Bottom: out += "false"; return;
    case Op::Atom: out += f->name; return;
    case Op::Not:
    case Op::Diamond:
    case Op::Box:
    case Op::Exists:
    case Op::Forall:
        out += prefix(f->op);
        print_rec(f->a, pretty, 5, out);
        return;
    default: break;
    }
    int lv = level(f->op);
    bool paren = !pretty || lv < need;
    if (paren) out += '(';
    int left_need = lv, right_need = lv + 1;
    if (f->op == Op::Implies) {
        left_need = lv + 1;
        right_need = lv;
    }
    print_rec(f->a, pretty, left_need, out);
    out += infix(f->op);
    print_rec(f->b, pretty, right_need, out);
    if (paren) out += ')';
}

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).run(); }

std::string print_formula(const Formula& f, bool pretty)
{
    std::string out;
    print_rec(f, pretty, 0, out);
    return out;
}

bool equal(const Formula& x, const Formula& y)
{
    if (x == y) return true;
    if (x->op != y->op || x->name != y->name) return false;
    if ((x->a == nullptr) != (y->a == nullptr) || (x->b == nullptr) != (y->b == nullptr)) return false;
    if (x->a && !equal(x->a, y->a)) return false;
    if (x->b && !equal(x->b, y->b)) return false;
    return true;
}

namespace {

Formula neg(const Formula& f)
{
    if (f->op == Op::Not) return f->a;
    return mk_not(f);
}

Formula conj_neg(const Formula& a, const Formula& b) { return neg(mk_and(a, neg(b))); }

}  // namespace

Formula normalize(const Formula& f)
{
    switch (f->op) {
    case Op::Top:
    case Op::Atom: return f;
    case Op::Bottom: return mk_not(mk_top());
    case Op::Not: return neg(normalize(f->a));
    case Op::And: return mk_and(normalize(f->a), normalize(f->b));
    case Op::Or: return neg(mk_and(neg(normalize(f->a)), neg(normalize(f->b))));
    case Op::Implies: return conj_neg(normalize(f->a), normalize(f->b));
    case Op::Iff: {
        Formula a = normalize(f->a), b = normalize(f->b);
        return mk_and(conj_neg(a, b), conj_neg(b, a));
    }
    case Op::Diamond: return mk_diamond(normalize(f->a));
    case Op::Box: return neg(mk_diamond(neg(normalize(f->a))));
    case Op::Exists: return mk_exists(normalize(f->a));
    case Op::Forall: return neg(mk_exists(neg(normalize(f->a))));
    }
    return f;
}

bool is_core(const Formula& f)
{
    switch (f->op) {
    case Op::Top:
    case Op::Atom: return true;
    case Op::Not: return f->a->op != Op::Not && is_core(f->a);
    case Op::And: return is_core(f->a) && is_core(f->b);
    case Op::Exists:
    case Op::Diamond: return is_core(f->a);
    default: return false;
    }
}

std::size_t node_count(const Formula& f)
{
    std::size_t n = 1;
    if (f->a) n += node_count(f->a);
    if (f->b) n += node_count(f->b);
    return n;
}

Signature signature_of(const Formula& f)
{
    Signature s;
    std::function<void(const Formula&)> go = [&](const Formula& g) {
        if (g->op == Op::Atom) s.insert(g->name);
        if (g->a) go(g->a);
        if (g->b) go(g->b);
    };
    go(f);
    return s;
}

Signature sig_union(const Signature& a, const Signature& b)
{
    Signature r = a;
    r.insert(b.begin(), b.end());
    return r;
}

Signature sig_intersection(const Signature& a, const Signature& b)
{
    Signature r;
    for (const auto& x : a)
        if (b.count(x)) r.insert(x);
    return r;
}

Signature parse_signature(std::string_view csv)
{
    Signature s;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) return;
        if (!is_identifier(cur)) throw std::invalid_argument("bad symbol in signature: " + cur);
        s.insert(cur);
        cur.clear();
    };
    for (char c : csv) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) flush();
        else cur += c;
    }
    flush();
    return s;
}

std::string print_signature(const Signature& s)
{
    std::string out;
    for (const auto& x : s) {
        if (!out.empty()) out += ',';
        out += x;
    }
    return out;
}

int modal_depth(const Formula& f)
{
    int da = f->a ? modal_depth(f->a) : 0;
    int db = f->b ? modal_depth(f->b) : 0;
    int d = std::max(da, db);
    if (f->op == Op::Diamond || f->op == Op::Box) ++d;
    return d;
}

Renaming fresh_renaming(const Signature& symbols, const Signature& keep, const Signature& avoid)
{
    Renaming r;
    Signature used = sig_union(symbols, avoid);
    used.insert(keep.begin(), keep.end());
    for (const auto& p : symbols) {
        if (keep.count(p)) continue;
        std::string q = p + "'";
        while (used.count(q)) q += "'";
        used.insert(q);
        r[p] = q;
    }
    return r;
}

Formula rename_atoms(const Formula& f, const Renaming& r)
{
    switch (f->op) {
    case Op::Atom: {
        auto it = r.find(f->name);
        return it == r.end() ? f : mk_atom(it->second);
    }
    case Op::Top:
    case Op::Bottom: return f;
    default: break;
    }
    Formula a = f->a ? rename_atoms(f->a, r) : nullptr;
    Formula b = f->b ? rename_atoms(f->b, r) : nullptr;
    return make(f->op, a, b);
}

Formula rename_outside(const Formula& f, const Signature& sigma)
{
    Signature s = signature_of(f);
    return rename_atoms(f, fresh_renaming(s, sigma, s));
}

}  // namespace qml
