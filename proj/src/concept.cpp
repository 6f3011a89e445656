#include "qml/concept.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace qml {

namespace {

Concept make(COp op, Concept a = nullptr, Concept b = nullptr, std::string name = {})
{
    return std::make_shared<const CNode>(CNode{op, std::move(name), std::move(a), std::move(b)});
}

}  // namespace

Concept c_top() { return make(COp::Top); }
Concept c_bottom() { return make(COp::Bottom); }
Concept c_name(std::string name) { return make(COp::Name, nullptr, nullptr, std::move(name)); }

Concept c_not(Concept a)
{
    if (a->op == COp::Top) return c_bottom();
    if (a->op == COp::Bottom) return c_top();
    return make(COp::Not, std::move(a));
}

Concept c_and(Concept a, Concept b)
{
    if (a->op == COp::Top) return b;
    if (b->op == COp::Top) return a;
    if (a->op == COp::Bottom || b->op == COp::Bottom) return c_bottom();
    return make(COp::And, std::move(a), std::move(b));
}

Concept c_or(Concept a, Concept b)
{
    if (a->op == COp::Bottom) return b;
    if (b->op == COp::Bottom) return a;
    if (a->op == COp::Top || b->op == COp::Top) return c_top();
    return make(COp::Or, std::move(a), std::move(b));
}

Concept c_some(std::string role, Concept a) { return make(COp::Some, std::move(a), nullptr, std::move(role)); }
Concept c_all(std::string role, Concept a) { return make(COp::All, std::move(a), nullptr, std::move(role)); }
Concept c_diamond(Concept a) { return make(COp::Diamond, std::move(a)); }
Concept c_box(Concept a) { return make(COp::Box, std::move(a)); }

Concept c_and_all(const std::vector<Concept>& xs)
{
    Concept r = c_top();
    for (const auto& x : xs) r = c_and(r, x);
    return r;
}

Concept c_implies(Concept a, Concept b) { return c_or(c_not(std::move(a)), std::move(b)); }
Concept c_iff(Concept a, Concept b) { return c_and(c_implies(a, b), c_implies(b, a)); }

namespace {

enum class Tok { Ident, Not, And, Or, Dot, LParen, RParen, Dia, Box, StandBox, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

std::vector<Token> lex(std::string_view s)
{
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string t, int c) { out.push_back({k, std::move(t), line, c}); };
    while (i < s.size()) {
        char c = s[i];
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            ++col;
            continue;
        }
        int c0 = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
            std::string word(s.substr(i, j - i));
            if (word == "box" && j < s.size() && s[j] == '[') {
                auto close = s.find(']', j);
                if (close == std::string_view::npos) throw SyntaxError("unterminated box[", line, c0);
                push(Tok::StandBox, std::string(s.substr(j + 1, close - j - 1)), c0);
                col += static_cast<int>(close + 1 - i);
                i = close + 1;
                continue;
            }
            push(Tok::Ident, word, c0);
            col += static_cast<int>(j - i);
            i = j;
            continue;
        }
        if (s.substr(i, 2) == "<>") {
            push(Tok::Dia, "<>", c0);
            i += 2;
            col += 2;
            continue;
        }
        if (s.substr(i, 2) == "[]") {
            push(Tok::Box, "[]", c0);
            i += 2;
            col += 2;
            continue;
        }
        Tok k;
        switch (c) {
        case '~': k = Tok::Not; break;
        case '&': k = Tok::And; break;
        case '|': k = Tok::Or; break;
        case '.': k = Tok::Dot; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        default: throw SyntaxError(std::string("unexpected character '") + c + "'", line, c0);
        }
        push(k, std::string(1, c), c0);
        ++i;
        ++col;
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const StandpointBox* box) : toks_(std::move(toks)), box_(box) {}

    Concept parse_all()
    {
        Concept c = disj();
        if (peek().kind == Tok::RParen) throw SyntaxError("unbalanced parentheses", peek().line, peek().col);
        if (peek().kind != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().line, peek().col);
        return c;
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

    Concept disj()
    {
        Concept c = conj();
        while (accept(Tok::Or)) c = make(COp::Or, c, conj());
        return c;
    }

    Concept conj()
    {
        Concept c = unary();
        while (accept(Tok::And)) c = make(COp::And, c, unary());
        return c;
    }

    Concept unary()
    {
        Token t = next();
        switch (t.kind) {
        case Tok::Not: return make(COp::Not, unary());
        case Tok::Dia: return make(COp::Diamond, unary());
        case Tok::Box: return make(COp::Box, unary());
        case Tok::StandBox:
            if (!box_) throw SyntaxError("box[e] is only allowed in standpoint files", t.line, t.col);
            return (*box_)(t.text, unary());
        case Tok::LParen: {
            Concept c = disj();
            if (!accept(Tok::RParen)) throw SyntaxError("unbalanced parentheses", peek().line, peek().col);
            return c;
        }
        case Tok::Ident: {
            if (t.text == "Top") return make(COp::Top);
            if (t.text == "Bottom") return make(COp::Bottom);
            if (t.text == "some" || t.text == "all") {
                Token r = next();
                if (r.kind != Tok::Ident) throw SyntaxError("expected role name", r.line, r.col);
                if (!accept(Tok::Dot)) throw SyntaxError("expected '.'", peek().line, peek().col);
                return make(t.text == "some" ? COp::Some : COp::All, unary(), nullptr, r.text);
            }
            return make(COp::Name, nullptr, nullptr, t.text);
        }
        case Tok::End: throw SyntaxError("unexpected end of input", t.line, t.col);
        case Tok::RParen: throw SyntaxError("unbalanced parentheses", t.line, t.col);
        default: throw SyntaxError("unexpected '" + t.text + "'", t.line, t.col);
        }
    }

    std::vector<Token> toks_;
    const StandpointBox* box_;
    std::size_t pos_ = 0;
};

int prec(COp op)
{
    switch (op) {
    case COp::Or: return 1;
    case COp::And: return 2;
    default: return 3;
    }
}

void print(std::ostream& os, const Concept& c, bool pretty, int outer)
{
    switch (c->op) {
    case COp::Top: os << "Top"; return;
    case COp::Bottom: os << "Bottom"; return;
    case COp::Name: os << c->name; return;
    case COp::Not: os << "~"; print(os, c->a, pretty, 3); return;
    case COp::Diamond: os << "<>"; print(os, c->a, pretty, 3); return;
    case COp::Box: os << "[]"; print(os, c->a, pretty, 3); return;
    case COp::Some:
    case COp::All:
        os << (c->op == COp::Some ? "some " : "all ") << c->name << ".";
        print(os, c->a, pretty, 3);
        return;
    case COp::And:
    case COp::Or: {
        int p = prec(c->op);
        bool paren = !pretty || p < outer;
        if (paren) os << "(";
        print(os, c->a, pretty, p);
        os << (c->op == COp::And ? " & " : " | ");
        print(os, c->b, pretty, p + 1);
        if (paren) os << ")";
        return;
    }
    }
}

void collect(const Concept& c, Signature& concepts, Signature& roles)
{
    if (!c) return;
    if (c->op == COp::Name) concepts.insert(c->name);
    if ((c->op == COp::Some || c->op == COp::All) && c->name != kUniversalRole) roles.insert(c->name);
    collect(c->a, concepts, roles);
    collect(c->b, concepts, roles);
}

}  // namespace

Concept parse_concept(std::string_view text) { return Parser(lex(text), nullptr).parse_all(); }

Concept parse_concept(std::string_view text, const StandpointBox& box) { return Parser(lex(text), &box).parse_all(); }

std::string print_concept(const Concept& c, bool pretty)
{
    std::ostringstream os;
    print(os, c, pretty, 0);
    return os.str();
}

bool equal(const Concept& x, const Concept& y)
{
    if (!x || !y) return !x && !y;
    return x->op == y->op && x->name == y->name && equal(x->a, y->a) && equal(x->b, y->b);
}

Signature concept_signature(const Concept& c)
{
    Signature a, r;
    collect(c, a, r);
    return sig_union(a, r);
}

Signature concept_names(const Concept& c)
{
    Signature a, r;
    collect(c, a, r);
    return a;
}

Signature role_names(const Concept& c)
{
    Signature a, r;
    collect(c, a, r);
    return r;
}

int add_concept(Dag& dag, const Concept& c)
{
    switch (c->op) {
    case COp::Top: return dag.top();
    case COp::Bottom: return dag.neg(dag.top());
    case COp::Name: return dag.atom(c->name);
    case COp::Not: return dag.neg(add_concept(dag, c->a));
    case COp::And: return dag.conj(add_concept(dag, c->a), add_concept(dag, c->b));
    case COp::Or: return dag.disj(add_concept(dag, c->a), add_concept(dag, c->b));
    case COp::Diamond: return dag.diamond(add_concept(dag, c->a));
    case COp::Box: return dag.box(add_concept(dag, c->a));
    case COp::Some: {
        int x = add_concept(dag, c->a);
        return c->name == kUniversalRole ? dag.exists(x) : dag.some(c->name, x);
    }
    case COp::All: {
        int x = add_concept(dag, c->a);
        return c->name == kUniversalRole ? dag.forall(x) : dag.only(c->name, x);
    }
    }
    return dag.top();
}

Concept concept_from_formula(const Formula& f)
{
    switch (f->op) {
    case Op::Top: return make(COp::Top);
    case Op::Bottom: return make(COp::Bottom);
    case Op::Atom: return c_name(f->name);
    case Op::Not: return make(COp::Not, concept_from_formula(f->a));
    case Op::And: return make(COp::And, concept_from_formula(f->a), concept_from_formula(f->b));
    case Op::Or: return make(COp::Or, concept_from_formula(f->a), concept_from_formula(f->b));
    case Op::Implies:
        return make(COp::Or, make(COp::Not, concept_from_formula(f->a)), concept_from_formula(f->b));
    case Op::Iff: {
        Concept a = concept_from_formula(f->a), b = concept_from_formula(f->b);
        return make(COp::And, make(COp::Or, make(COp::Not, a), b), make(COp::Or, make(COp::Not, b), a));
    }
    case Op::Diamond: return make(COp::Diamond, concept_from_formula(f->a));
    case Op::Box: return make(COp::Box, concept_from_formula(f->a));
    case Op::Exists: return c_some(kUniversalRole, concept_from_formula(f->a));
    case Op::Forall: return c_all(kUniversalRole, concept_from_formula(f->a));
    }
    return make(COp::Top);
}

Concept rename_concept(const Concept& c, const Renaming& r)
{
    if (!c) return c;
    std::string name = c->name;
    if (c->op == COp::Name || c->op == COp::Some || c->op == COp::All) {
        auto it = r.find(name);
        if (it != r.end()) name = it->second;
    }
    return make(c->op, rename_concept(c->a, r), rename_concept(c->b, r), name);
}

Ontology parse_ontology(std::string_view text)
{
    Ontology o;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        bool eq = false;
        auto pos = line.find("<=");
        if (pos == std::string::npos) {
            pos = line.find("==");
            eq = true;
        }
        if (pos == std::string::npos) throw SyntaxError("expected '<=' or '=='", lineno, 1);
        Concept l, rr;
        try {
            l = parse_concept(line.substr(0, pos));
            rr = parse_concept(line.substr(pos + 2));
        } catch (const SyntaxError& e) {
            throw SyntaxError(e.what(), lineno, e.column);
        }
        o.push_back({l, rr});
        if (eq) o.push_back({rr, l});
    }
    return o;
}

std::string print_ontology(const Ontology& o)
{
    std::string out;
    for (const auto& ci : o) out += print_concept(ci.lhs, true) + " <= " + print_concept(ci.rhs, true) + "\n";
    return out;
}

Signature ontology_signature(const Ontology& o)
{
    Signature s;
    for (const auto& ci : o) s = sig_union(s, sig_union(concept_signature(ci.lhs), concept_signature(ci.rhs)));
    return s;
}

}  // namespace qml
