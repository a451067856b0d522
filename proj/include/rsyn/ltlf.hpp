#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace rsyn {

// Propositions are indexed env first, then agent. A Letter is a bitset over
// those indices: bit i set means proposition i holds.
using Letter = std::uint32_t;
using Trace = std::vector<Letter>;   // nonempty when evaluated
using History = std::vector<Letter>; // may be empty

struct PropSet {
    static constexpr std::size_t kDefaultCap = 16;

    std::vector<std::string> env;
    std::vector<std::string> agent;

    // Throws rsyn::Error on duplicates, overlap, keywords, emptiness or cap.
    void validate(std::size_t cap = kDefaultCap) const;

    std::size_t size() const { return env.size() + agent.size(); }
    std::size_t num_env() const { return env.size(); }
    std::size_t num_agent() const { return agent.size(); }
    int index_of(const std::string& name) const;
    const std::string& name(std::size_t i) const;

    Letter env_mask() const { return (Letter(1) << env.size()) - 1; }
    Letter x_part(Letter l) const { return l & env_mask(); }
    Letter y_part(Letter l) const { return l >> env.size(); }
    Letter join(Letter x, Letter y) const { return x | (y << env.size()); }

    bool operator==(const PropSet& o) const { return env == o.env && agent == o.agent; }
    bool operator!=(const PropSet& o) const { return !(*this == o); }
};

bool is_keyword(const std::string& word);

// "{a, b}" with names in index order; "{}" for the empty letter.
std::string letter_to_string(Letter l, const PropSet& props);
// Restricted to the env (offset 0) or agent (offset num_env) block.
std::string part_to_string(Letter part, const PropSet& props, bool agent);
Letter parse_letter(const std::string& text, const PropSet& props);

enum class Op {
    Atom, True, False, Not, And, Or, Implies,
    Next, WeakNext, Until, Release, Eventually, Always
};

struct FormulaNode;

// Immutable AST handle; copies share structure.
class Formula {
public:
    Formula() = default; // null handle; only valid as a placeholder
    explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}

    Op op() const;
    const std::string& name() const; // Atom only
    int atom() const;                // prop index, Atom only
    const Formula& lhs() const;
    const Formula& rhs() const;
    const Formula& child() const { return lhs(); }

    bool operator==(const Formula& o) const;
    bool operator!=(const Formula& o) const { return !(*this == o); }

    std::size_t depth() const;
    bool null() const { return !node_; }

private:
    std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
    Op op;
    std::string name;
    int atom = -1;
    Formula a, b;
};

namespace ltl {
Formula atom(const std::string& name, int index);
Formula atom(const PropSet& props, const std::string& name);
Formula tt();
Formula ff();
Formula neg(Formula f);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula next(Formula f);
Formula wnext(Formula f);
Formula until(Formula a, Formula b);
Formula release(Formula a, Formula b);
Formula eventually(Formula f);
Formula always(Formula f);
} // namespace ltl

// Grammar, loosest first: <->, ->, |, &, U R (right assoc), unary ! X N F G.
// a <-> b is sugar for (a -> b) & (b -> a).
Formula parse(const std::string& text, const PropSet& props);
std::string print(const Formula& f);

bool evaluate(const Formula& f, const Trace& t, std::size_t i);
bool evaluate_all_prefixes(const Formula& f, const Trace& t);
// Some nonempty prefix t[0..k], k >= i, satisfies f at instant i.
bool evaluate_some_prefix(const Formula& f, const Trace& t, std::size_t i);

// Rewrites F, G, N, R and -> into the core connectives.
Formula expand_abbreviations(const Formula& f);
// Negation normal form over Atom, !Atom, True, False, &, |, X, N, U, R.
Formula to_nnf(const Formula& f);

// Bitmask of propositions occurring in f.
Letter atom_mask(const Formula& f);

} // namespace rsyn
