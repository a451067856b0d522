#include "rsyn/errors.hpp"
#include "rsyn/ltlf.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace rsyn {

namespace {
const std::set<std::string> kKeywords = {"true", "false", "X", "N", "U", "R", "F", "G"};
}

bool is_keyword(const std::string& word) { return kKeywords.count(word) > 0; }

void PropSet::validate(std::size_t cap) const {
    if (env.empty() && agent.empty())
        throw Error("proposition set is empty");
    if (size() > cap)
        throw Error("too many propositions: " + std::to_string(size()) + " > " + std::to_string(cap));
    std::set<std::string> seen;
    for (std::size_t i = 0; i < size(); ++i) {
        const std::string& n = name(i);
        bool ident = !n.empty() && (std::isalpha(static_cast<unsigned char>(n[0])) || n[0] == '_');
        for (char c : n)
            ident = ident && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
        if (!ident)
            throw Error("invalid proposition name '" + n + "'");
        if (is_keyword(n))
            throw Error("proposition name '" + n + "' is a keyword");
        if (!seen.insert(n).second)
            throw Error("proposition '" + n + "' declared twice");
    }
}

int PropSet::index_of(const std::string& n) const {
    for (std::size_t i = 0; i < env.size(); ++i)
        if (env[i] == n)
            return static_cast<int>(i);
    for (std::size_t i = 0; i < agent.size(); ++i)
        if (agent[i] == n)
            return static_cast<int>(env.size() + i);
    return -1;
}

const std::string& PropSet::name(std::size_t i) const {
    return i < env.size() ? env[i] : agent.at(i - env.size());
}

std::string letter_to_string(Letter l, const PropSet& props) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < props.size(); ++i) {
        if (!(l >> i & 1))
            continue;
        if (!first)
            out += ", ";
        out += props.name(i);
        first = false;
    }
    return out + "}";
}

std::string part_to_string(Letter part, const PropSet& props, bool agent) {
    return letter_to_string(agent ? props.join(0, part) : part, props);
}

Letter parse_letter(const std::string& text, const PropSet& props) {
    std::size_t b = text.find_first_not_of(" \t");
    std::size_t e = text.find_last_not_of(" \t");
    if (b == std::string::npos || text[b] != '{' || text[e] != '}')
        throw Error("letter must be written as {p, q, ...}: '" + text + "'");
    Letter l = 0;
    std::string body = text.substr(b + 1, e - b - 1);
    std::size_t pos = 0;
    while (pos <= body.size()) {
        std::size_t comma = body.find(',', pos);
        if (comma == std::string::npos)
            comma = body.size();
        std::string item = body.substr(pos, comma - pos);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) {
            int idx = props.index_of(item);
            if (idx < 0)
                throw UndeclaredAtom(item);
            l |= Letter(1) << idx;
        }
        pos = comma + 1;
    }
    return l;
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
int Formula::atom() const { return node_->atom; }
const Formula& Formula::lhs() const { return node_->a; }
const Formula& Formula::rhs() const { return node_->b; }

bool Formula::operator==(const Formula& o) const {
    if (node_ == o.node_)
        return true;
    if (op() != o.op())
        return false;
    switch (op()) {
    case Op::Atom:
        return name() == o.name();
    case Op::True:
    case Op::False:
        return true;
    case Op::Not:
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Always:
        return lhs() == o.lhs();
    default:
        return lhs() == o.lhs() && rhs() == o.rhs();
    }
}

std::size_t Formula::depth() const {
    switch (op()) {
    case Op::Atom:
    case Op::True:
    case Op::False:
        return 0;
    case Op::Not:
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Always:
        return 1 + lhs().depth();
    default:
        return 1 + std::max(lhs().depth(), rhs().depth());
    }
}

namespace ltl {

namespace {
Formula make(Op op, Formula a = Formula(), Formula b = Formula()) {
    auto n = std::make_shared<FormulaNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return Formula(std::move(n));
}

std::shared_ptr<const FormulaNode> constant(Op op) {
    auto n = std::make_shared<FormulaNode>();
    n->op = op;
    return n;
}
} // namespace

Formula atom(const std::string& name, int index) {
    auto n = std::make_shared<FormulaNode>();
    n->op = Op::Atom;
    n->name = name;
    n->atom = index;
    return Formula(std::move(n));
}

Formula atom(const PropSet& props, const std::string& name) {
    int idx = props.index_of(name);
    if (idx < 0)
        throw UndeclaredAtom(name);
    return atom(name, idx);
}

Formula tt() {
    static const std::shared_ptr<const FormulaNode> t = constant(Op::True);
    return Formula(t);
}

Formula ff() {
    static const std::shared_ptr<const FormulaNode> f = constant(Op::False);
    return Formula(f);
}

Formula neg(Formula f) { return make(Op::Not, std::move(f)); }
Formula conj(Formula a, Formula b) { return make(Op::And, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return make(Op::Or, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return make(Op::Implies, std::move(a), std::move(b)); }
Formula next(Formula f) { return make(Op::Next, std::move(f)); }
Formula wnext(Formula f) { return make(Op::WeakNext, std::move(f)); }
Formula until(Formula a, Formula b) { return make(Op::Until, std::move(a), std::move(b)); }
Formula release(Formula a, Formula b) { return make(Op::Release, std::move(a), std::move(b)); }
Formula eventually(Formula f) { return make(Op::Eventually, std::move(f)); }
Formula always(Formula f) { return make(Op::Always, std::move(f)); }

} // namespace ltl

Formula expand_abbreviations(const Formula& f) {
    using namespace ltl;
    switch (f.op()) {
    case Op::Atom:
    case Op::True:
    case Op::False:
        return f;
    case Op::Not:
        return neg(expand_abbreviations(f.child()));
    case Op::And:
        return conj(expand_abbreviations(f.lhs()), expand_abbreviations(f.rhs()));
    case Op::Or:
        return disj(expand_abbreviations(f.lhs()), expand_abbreviations(f.rhs()));
    case Op::Implies:
        return disj(neg(expand_abbreviations(f.lhs())), expand_abbreviations(f.rhs()));
    case Op::Next:
        return next(expand_abbreviations(f.child()));
    case Op::WeakNext:
        return neg(next(neg(expand_abbreviations(f.child()))));
    case Op::Until:
        return until(expand_abbreviations(f.lhs()), expand_abbreviations(f.rhs()));
    case Op::Release:
        return neg(until(neg(expand_abbreviations(f.lhs())), neg(expand_abbreviations(f.rhs()))));
    case Op::Eventually:
        return until(tt(), expand_abbreviations(f.child()));
    case Op::Always:
        return neg(until(tt(), neg(expand_abbreviations(f.child()))));
    }
    return f;
}

namespace {
Formula nnf(const Formula& f, bool negated) {
    using namespace ltl;
    switch (f.op()) {
    case Op::Atom:
        return negated ? neg(f) : f;
    case Op::True:
        return negated ? ff() : tt();
    case Op::False:
        return negated ? tt() : ff();
    case Op::Not:
        return nnf(f.child(), !negated);
    case Op::And:
        return negated ? disj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                       : conj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Or:
        return negated ? conj(nnf(f.lhs(), true), nnf(f.rhs(), true))
                       : disj(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Implies:
        return negated ? conj(nnf(f.lhs(), false), nnf(f.rhs(), true))
                       : disj(nnf(f.lhs(), true), nnf(f.rhs(), false));
    case Op::Next:
        return negated ? wnext(nnf(f.child(), true)) : next(nnf(f.child(), false));
    case Op::WeakNext:
        return negated ? next(nnf(f.child(), true)) : wnext(nnf(f.child(), false));
    case Op::Until:
        return negated ? release(nnf(f.lhs(), true), nnf(f.rhs(), true))
                       : until(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Release:
        return negated ? until(nnf(f.lhs(), true), nnf(f.rhs(), true))
                       : release(nnf(f.lhs(), false), nnf(f.rhs(), false));
    case Op::Eventually:
        return negated ? release(ff(), nnf(f.child(), true)) : until(tt(), nnf(f.child(), false));
    case Op::Always:
        return negated ? until(tt(), nnf(f.child(), true)) : release(ff(), nnf(f.child(), false));
    }
    return f;
}
} // namespace

Formula to_nnf(const Formula& f) { return nnf(f, false); }

Letter atom_mask(const Formula& f) {
    switch (f.op()) {
    case Op::Atom:
        return Letter(1) << f.atom();
    case Op::True:
    case Op::False:
        return 0;
    case Op::Not:
    case Op::Next:
    case Op::WeakNext:
    case Op::Eventually:
    case Op::Always:
        return atom_mask(f.child());
    default:
        return atom_mask(f.lhs()) | atom_mask(f.rhs());
    }
}

} // namespace rsyn
