#include "amtk/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace amtk {

struct Formula::Node {
    Kind kind;
    std::string name;
    Formula a{nullptr};  // null for leaves
    Formula b{nullptr};
    int depth = 0;
    std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

const std::string& empty_string() {
    static const std::string s;
    return s;
}

}  // namespace

Formula::Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
    static const auto n = [] {
        auto p = std::make_shared<Node>();
        p->kind = Kind::Top;
        p->hash = 0x51;
        return p;
    }();
    return Formula(n);
}

Formula Formula::bot() {
    static const auto n = [] {
        auto p = std::make_shared<Node>();
        p->kind = Kind::Bot;
        p->hash = 0xb0;
        return p;
    }();
    return Formula(n);
}

Formula Formula::prop(std::string name) {
    auto p = std::make_shared<Node>(Node{Kind::Prop, std::move(name), Formula(nullptr), Formula(nullptr), 0, 0});
    p->hash = mix(0x11, std::hash<std::string>{}(p->name));
    return Formula(p);
}

Formula Formula::neg(Formula f) {
    auto h = mix(0x22, f.hash());
    int d = f.depth();
    return Formula(std::make_shared<Node>(Node{Kind::Not, {}, std::move(f), Formula(nullptr), d, h}));
}

Formula Formula::disj(Formula l, Formula r) {
    auto h = mix(mix(0x33, l.hash()), r.hash());
    int d = std::max(l.depth(), r.depth());
    return Formula(std::make_shared<Node>(Node{Kind::Or, {}, std::move(l), std::move(r), d, h}));
}

Formula Formula::diamond(std::string agent, Formula f) {
    auto h = mix(mix(0x44, std::hash<std::string>{}(agent)), f.hash());
    int d = f.depth() + 1;
    return Formula(std::make_shared<Node>(Node{Kind::Diamond, std::move(agent), std::move(f), Formula(nullptr), d, h}));
}

Formula Formula::conj(const Formula& l, const Formula& r) { return neg(disj(neg(l), neg(r))); }

Formula Formula::implies(const Formula& l, const Formula& r) { return disj(neg(l), r); }

Formula Formula::box(const std::string& agent, const Formula& f) { return neg(diamond(agent, neg(f))); }

Formula Formula::disj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
    return acc;
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
    return acc;
}

Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_ ? node_->name : empty_string(); }
const Formula& Formula::left() const { return node_->a; }
const Formula& Formula::right() const { return node_->b; }
int Formula::depth() const { return node_->depth; }
std::size_t Formula::hash() const { return node_->hash; }

int Formula::compare(const Formula& x, const Formula& y) {
    if (x.node_ == y.node_) return 0;
    const Node& a = *x.node_;
    const Node& b = *y.node_;
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    switch (a.kind) {
    case Kind::Top:
    case Kind::Bot:
        return 0;
    case Kind::Prop:
        return a.name.compare(b.name) < 0 ? -1 : (a.name == b.name ? 0 : 1);
    case Kind::Not:
        return compare(a.a, b.a);
    case Kind::Or: {
        int c = compare(a.a, b.a);
        return c != 0 ? c : compare(a.b, b.b);
    }
    case Kind::Diamond: {
        if (a.name != b.name) return a.name < b.name ? -1 : 1;
        return compare(a.a, b.a);
    }
    }
    return 0;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash()) return false;
    return Formula::compare(a, b) == 0;
}

bool operator<(const Formula& a, const Formula& b) { return Formula::compare(a, b) < 0; }

SyntaxError::SyntaxError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, Top, Bot, Not, Or, And, Arrow, LAngle, RAngle, LBrack, RBrack, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t at = i;
        if (ident_start(c)) {
            while (i < s.size() && ident_char(s[i])) ++i;
            std::string word(s.substr(at, i - at));
            if (word == "top")
                out.push_back({Tok::Top, word, at});
            else if (word == "bot")
                out.push_back({Tok::Bot, word, at});
            else
                out.push_back({Tok::Ident, word, at});
            continue;
        }
        if (c == '-' && i + 1 < s.size() && s[i + 1] == '>') {
            out.push_back({Tok::Arrow, "->", at});
            i += 2;
            continue;
        }
        Tok k;
        switch (c) {
        case '~': k = Tok::Not; break;
        case '|': k = Tok::Or; break;
        case '&': k = Tok::And; break;
        case '<': k = Tok::LAngle; break;
        case '>': k = Tok::RAngle; break;
        case '[': k = Tok::LBrack; break;
        case ']': k = Tok::RBrack; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        default: throw SyntaxError(std::string("unknown token '") + c + "'", at);
        }
        out.push_back({k, std::string(1, c), at});
        ++i;
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Formula run() {
        Formula f = imp();
        if (peek().kind != Tok::End) throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
        return f;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    Token take() { return toks_[i_++]; }

    void expect(Tok k, const char* what) {
        if (peek().kind != k) throw SyntaxError(std::string("expected ") + what, peek().pos);
        ++i_;
    }

    std::string ident() {
        if (peek().kind != Tok::Ident) throw SyntaxError("expected identifier", peek().pos);
        Token t = take();
        if (t.text.rfind(kReservedPrefix, 0) == 0) throw SyntaxError("reserved identifier '" + t.text + "'", t.pos);
        return t.text;
    }

    Formula imp() {
        Formula l = disj();
        if (peek().kind == Tok::Arrow) {
            ++i_;
            return Formula::implies(l, imp());
        }
        return l;
    }

    Formula disj() {
        Formula l = conj();
        while (peek().kind == Tok::Or) {
            ++i_;
            l = Formula::disj(l, conj());
        }
        return l;
    }

    Formula conj() {
        Formula l = unary();
        while (peek().kind == Tok::And) {
            ++i_;
            l = Formula::conj(l, unary());
        }
        return l;
    }

    Formula unary() {
        switch (peek().kind) {
        case Tok::Not:
            ++i_;
            return Formula::neg(unary());
        case Tok::LAngle: {
            ++i_;
            std::string a = ident();
            expect(Tok::RAngle, "'>'");
            return Formula::diamond(a, unary());
        }
        case Tok::LBrack: {
            ++i_;
            std::string a = ident();
            expect(Tok::RBrack, "']'");
            return Formula::box(a, unary());
        }
        default:
            return atom();
        }
    }

    Formula atom() {
        switch (peek().kind) {
        case Tok::Top: ++i_; return Formula::top();
        case Tok::Bot: ++i_; return Formula::bot();
        case Tok::Ident: return Formula::prop(ident());
        case Tok::LParen: {
            ++i_;
            Formula f = imp();
            expect(Tok::RParen, "')'");
            return f;
        }
        case Tok::End: throw SyntaxError("unexpected end of input", peek().pos);
        default: throw SyntaxError("unexpected '" + peek().text + "'", peek().pos);
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

// precedence levels used by the printer
constexpr int kImp = 0, kOr = 1, kAnd = 2, kUnary = 3;

bool as_box(const Formula& f, std::string& agent, Formula& body) {
    if (f.kind() != Kind::Not) return false;
    const Formula& d = f.left();
    if (d.kind() != Kind::Diamond || d.left().kind() != Kind::Not) return false;
    agent = d.name();
    body = d.left().left();
    return true;
}

bool as_and(const Formula& f, Formula& l, Formula& r) {
    if (f.kind() != Kind::Not) return false;
    const Formula& o = f.left();
    if (o.kind() != Kind::Or || o.left().kind() != Kind::Not || o.right().kind() != Kind::Not) return false;
    l = o.left().left();
    r = o.right().left();
    return true;
}

void print(const Formula& f, int ctx, std::string& out) {
    std::string agent;
    Formula a, b;
    auto wrap = [&](int level, auto&& body) {
        bool paren = level < ctx;
        if (paren) out += '(';
        body();
        if (paren) out += ')';
    };
    switch (f.kind()) {
    case Kind::Top: out += "top"; return;
    case Kind::Bot: out += "bot"; return;
    case Kind::Prop: out += f.name(); return;
    case Kind::Diamond:
        out += '<' + f.name() + '>';
        print(f.left(), kUnary, out);
        return;
    case Kind::Or:
        wrap(kOr, [&] {
            print(f.left(), kOr, out);
            out += " | ";
            print(f.right(), kAnd, out);
        });
        return;
    case Kind::Not:
        if (as_box(f, agent, a)) {
            out += '[' + agent + ']';
            print(a, kUnary, out);
        } else if (as_and(f, a, b)) {
            wrap(kAnd, [&] {
                print(a, kAnd, out);
                out += " & ";
                print(b, kUnary, out);
            });
        } else {
            out += '~';
            print(f.left(), kUnary, out);
        }
        return;
    }
}

}  // namespace

Formula parse(std::string_view text) { return Parser(lex(text)).run(); }

std::string render(const Formula& f) {
    std::string out;
    print(f, kImp, out);
    return out;
}

int depth(const Formula& f) { return f.depth(); }

int max_depth(const FormulaSet& fs) {
    int d = 0;
    for (const auto& f : fs) d = std::max(d, f.depth());
    return d;
}

Formula single_negation(const Formula& f) { return f.is_negation() ? f.left() : Formula::neg(f); }

FormulaSet closure(const FormulaSet& phis) {
    FormulaSet out;
    std::vector<Formula> todo(phis.begin(), phis.end());
    while (!todo.empty()) {
        Formula f = std::move(todo.back());
        todo.pop_back();
        if (!out.insert(f).second) continue;
        todo.push_back(single_negation(f));
        switch (f.kind()) {
        case Kind::Not:
        case Kind::Diamond: todo.push_back(f.left()); break;
        case Kind::Or:
            todo.push_back(f.left());
            todo.push_back(f.right());
            break;
        default: break;
        }
    }
    return out;
}

namespace {
void collect(const Formula& f, std::set<std::string>& props, std::set<std::string>& agents) {
    switch (f.kind()) {
    case Kind::Prop: props.insert(f.name()); break;
    case Kind::Not: collect(f.left(), props, agents); break;
    case Kind::Diamond:
        agents.insert(f.name());
        collect(f.left(), props, agents);
        break;
    case Kind::Or:
        collect(f.left(), props, agents);
        collect(f.right(), props, agents);
        break;
    default: break;
    }
}
}  // namespace

std::set<std::string> propositions_of(const FormulaSet& phis) {
    std::set<std::string> props, agents;
    for (const auto& f : phis) collect(f, props, agents);
    return props;
}

std::set<std::string> agents_of(const FormulaSet& phis) {
    std::set<std::string> props, agents;
    for (const auto& f : phis) collect(f, props, agents);
    return agents;
}

}  // namespace amtk
