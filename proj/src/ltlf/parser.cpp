#include "rsyn/errors.hpp"
#include "rsyn/ltlf.hpp"

#include <cctype>

namespace rsyn {

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Equiv, Next, WeakNext,
                 Until, Release, Eventually, Always, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    Token next() {
        skip_space();
        Token t{Tok::End, "", line_, col_};
        if (pos_ >= s_.size())
            return t;
        char c = s_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t b = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                advance();
            t.text = s_.substr(b, pos_ - b);
            t.kind = keyword(t.text);
            return t;
        }
        if (s_.compare(pos_, 3, "<->") == 0) {
            advance(3);
            t.kind = Tok::Equiv;
            t.text = "<->";
            return t;
        }
        if (s_.compare(pos_, 2, "->") == 0) {
            advance(2);
            t.kind = Tok::Implies;
            t.text = "->";
            return t;
        }
        advance();
        t.text = std::string(1, c);
        switch (c) {
        case '!': t.kind = Tok::Not; break;
        case '&': t.kind = Tok::And; break;
        case '|': t.kind = Tok::Or; break;
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        default:
            throw ParseError(t.line, t.col, std::string("unexpected character '") + c + "'");
        }
        return t;
    }

private:
    static Tok keyword(const std::string& w) {
        if (w == "true") return Tok::True;
        if (w == "false") return Tok::False;
        if (w == "X") return Tok::Next;
        if (w == "N") return Tok::WeakNext;
        if (w == "U") return Tok::Until;
        if (w == "R") return Tok::Release;
        if (w == "F") return Tok::Eventually;
        if (w == "G") return Tok::Always;
        return Tok::Ident;
    }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            advance();
    }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n; ++i, ++pos_) {
            if (s_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

class Parser {
public:
    Parser(const std::string& text, const PropSet& props) : lex_(text), props_(props) {
        cur_ = lex_.next();
    }

    Formula parse_all() {
        Formula f = equiv();
        if (cur_.kind != Tok::End)
            fail("unexpected '" + cur_.text + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(cur_.line, cur_.col, msg); }

    void shift() { cur_ = lex_.next(); }

    Formula equiv() {
        Formula f = impl();
        while (cur_.kind == Tok::Equiv) {
            shift();
            Formula g = impl();
            f = ltl::conj(ltl::implies(f, g), ltl::implies(g, f));
        }
        return f;
    }

    Formula impl() {
        Formula f = disj();
        if (cur_.kind == Tok::Implies) {
            shift();
            return ltl::implies(f, impl());
        }
        return f;
    }

    Formula disj() {
        Formula f = conj();
        while (cur_.kind == Tok::Or) {
            shift();
            f = ltl::disj(f, conj());
        }
        return f;
    }

    Formula conj() {
        Formula f = binary_temporal();
        while (cur_.kind == Tok::And) {
            shift();
            f = ltl::conj(f, binary_temporal());
        }
        return f;
    }

    Formula binary_temporal() {
        Formula f = unary();
        if (cur_.kind == Tok::Until) {
            shift();
            return ltl::until(f, binary_temporal());
        }
        if (cur_.kind == Tok::Release) {
            shift();
            return ltl::release(f, binary_temporal());
        }
        return f;
    }

    Formula unary() {
        switch (cur_.kind) {
        case Tok::Not: shift(); return ltl::neg(unary());
        case Tok::Next: shift(); return ltl::next(unary());
        case Tok::WeakNext: shift(); return ltl::wnext(unary());
        case Tok::Eventually: shift(); return ltl::eventually(unary());
        case Tok::Always: shift(); return ltl::always(unary());
        default: return primary();
        }
    }

    Formula primary() {
        switch (cur_.kind) {
        case Tok::True: shift(); return ltl::tt();
        case Tok::False: shift(); return ltl::ff();
        case Tok::Ident: {
            int idx = props_.index_of(cur_.text);
            if (idx < 0)
                throw UndeclaredAtom(cur_.text);
            Formula a = ltl::atom(cur_.text, idx);
            shift();
            return a;
        }
        case Tok::LParen: {
            shift();
            Formula f = equiv();
            if (cur_.kind != Tok::RParen)
                fail("expected ')'");
            shift();
            return f;
        }
        case Tok::End:
            fail("unexpected end of input");
        default:
            fail("unexpected '" + cur_.text + "'");
        }
    }

    Lexer lex_;
    const PropSet& props_;
    Token cur_;
};

// Binding strength used by the printer; larger binds tighter.
int prec(Op op) {
    switch (op) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until:
    case Op::Release: return 4;
    case Op::Not:
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Always: return 5;
    default: return 6;
    }
}

std::string wrap(const Formula& f, bool parens) {
    std::string s = print(f);
    return parens ? "(" + s + ")" : s;
}

} // namespace

Formula parse(const std::string& text, const PropSet& props) {
    return Parser(text, props).parse_all();
}

std::string print(const Formula& f) {
    int p = prec(f.op());
    switch (f.op()) {
    case Op::Atom: return f.name();
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Not: return "!" + wrap(f.child(), prec(f.child().op()) < p);
    case Op::Next: return "X " + wrap(f.child(), prec(f.child().op()) < p);
    case Op::WeakNext: return "N " + wrap(f.child(), prec(f.child().op()) < p);
    case Op::Eventually: return "F " + wrap(f.child(), prec(f.child().op()) < p);
    case Op::Always: return "G " + wrap(f.child(), prec(f.child().op()) < p);
    case Op::And:
    case Op::Or: {
        // left associative
        const char* sym = f.op() == Op::And ? " & " : " | ";
        return wrap(f.lhs(), prec(f.lhs().op()) < p) + sym + wrap(f.rhs(), prec(f.rhs().op()) <= p);
    }
    case Op::Implies:
    case Op::Until:
    case Op::Release: {
        // right associative
        const char* sym = f.op() == Op::Implies ? " -> " : f.op() == Op::Until ? " U " : " R ";
        return wrap(f.lhs(), prec(f.lhs().op()) <= p) + sym + wrap(f.rhs(), prec(f.rhs().op()) < p);
    }
    }
    return "";
}

} // namespace rsyn
