#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "qml/alcu.hpp"

namespace qml {

std::string standpoint_concept(const std::string& s)
{
    std::string out = s;
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

namespace {

Concept check_expr(const Concept& e, const std::vector<std::string>& names)
{
    switch (e->op) {
    case COp::Top: return e;
    case COp::Name:
        if (std::find(names.begin(), names.end(), e->name) == names.end())
            throw std::invalid_argument("unknown standpoint name: " + e->name);
        return c_name(standpoint_concept(e->name));
    case COp::Not: return c_not(check_expr(e->a, names));
    case COp::And: return c_and(check_expr(e->a, names), check_expr(e->b, names));
    case COp::Or: return c_or(check_expr(e->a, names), check_expr(e->b, names));
    default: throw std::invalid_argument("standpoint expressions use *, names, & and ~ only");
    }
}

// e†: Boolean combination of the standpoint concepts, with * as Top.
Concept parse_expr(std::string text, const std::vector<std::string>& names)
{
    std::string t;
    for (char ch : text) {
        if (ch == '*') t += " Top ";
        else t += ch;
    }
    return check_expr(parse_concept(t), names);
}

}  // namespace

StandpointOntology parse_standpoint_ontology(std::string_view text)
{
    StandpointOntology so;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    StandpointBox box = [&so](const std::string& expr, Concept body) {
        return c_box(c_or(c_not(parse_expr(expr, so.standpoints)), body));
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream words(line);
        std::string first;
        if (!(words >> first)) continue;
        if (first == "standpoints") {
            std::string s;
            while (words >> s) {
                s.erase(std::remove(s.begin(), s.end(), ','), s.end());
                if (!s.empty()) so.standpoints.push_back(s);
            }
            continue;
        }
        auto start = line.find("box[");
        auto close = line.find(']', start == std::string::npos ? 0 : start);
        if (start == std::string::npos || close == std::string::npos || line.find_first_not_of(" \t") != start)
            throw SyntaxError("expected box[e] C <= D", lineno, 1);
        Concept e = parse_expr(line.substr(start + 4, close - start - 4), so.standpoints);
        std::string rest = line.substr(close + 1);
        bool eq = false;
        auto pos = rest.find("<=");
        if (pos == std::string::npos) {
            pos = rest.find("==");
            eq = true;
        }
        if (pos == std::string::npos) throw SyntaxError("expected '<=' or '=='", lineno, static_cast<int>(close) + 2);
        Concept l, r;
        try {
            l = parse_concept(rest.substr(0, pos), box);
            r = parse_concept(rest.substr(pos + 2), box);
        } catch (const SyntaxError& err) {
            throw SyntaxError(err.what(), lineno, err.column);
        }
        so.axioms.push_back({e, l, r});
        if (eq) so.axioms.push_back({e, r, l});
    }
    return so;
}

Inclusion encode_standpoint_inclusion(const StandpointOntology&, const StandpointInclusion& a)
{
    return {c_top(), c_box(c_all(kUniversalRole, c_or(c_not(c_and(a.standpoint, a.lhs)), a.rhs)))};
}

Ontology encode_standpoint(const StandpointOntology& so)
{
    Ontology o;
    for (const auto& s : so.standpoints) {
        Concept S = c_name(standpoint_concept(s));
        o.push_back({c_top(), c_box(c_all(kUniversalRole, c_iff(c_some(kUniversalRole, S), c_all(kUniversalRole, S))))});
    }
    for (const auto& a : so.axioms) o.push_back(encode_standpoint_inclusion(so, a));
    return o;
}

}  // namespace qml
