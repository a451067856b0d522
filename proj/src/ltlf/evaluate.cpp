#include "rsyn/errors.hpp"
#include "rsyn/ltlf.hpp"

namespace rsyn {

namespace {

// Direct transcription of the finite-trace semantics. Exponential on nested
// temporal operators, which is fine for the small instances it checks.
bool eval(const Formula& f, const Trace& t, std::size_t i) {
    const std::size_t last = t.size() - 1;
    switch (f.op()) {
    case Op::Atom:
        return (t[i] >> f.atom()) & 1;
    case Op::True:
        return true;
    case Op::False:
        return false;
    case Op::Not:
        return !eval(f.child(), t, i);
    case Op::And:
        return eval(f.lhs(), t, i) && eval(f.rhs(), t, i);
    case Op::Or:
        return eval(f.lhs(), t, i) || eval(f.rhs(), t, i);
    case Op::Implies:
        return !eval(f.lhs(), t, i) || eval(f.rhs(), t, i);
    case Op::Next:
        return i < last && eval(f.child(), t, i + 1);
    case Op::WeakNext:
        return i == last || eval(f.child(), t, i + 1);
    case Op::Until:
        for (std::size_t j = i; j <= last; ++j) {
            if (eval(f.rhs(), t, j))
                return true;
            if (!eval(f.lhs(), t, j))
                return false;
        }
        return false;
    case Op::Release:
        for (std::size_t j = i; j <= last; ++j) {
            if (!eval(f.rhs(), t, j))
                return false;
            if (eval(f.lhs(), t, j))
                return true;
        }
        return true;
    case Op::Eventually:
        for (std::size_t j = i; j <= last; ++j)
            if (eval(f.child(), t, j))
                return true;
        return false;
    case Op::Always:
        for (std::size_t j = i; j <= last; ++j)
            if (!eval(f.child(), t, j))
                return false;
        return true;
    }
    return false;
}

} // namespace

bool evaluate(const Formula& f, const Trace& t, std::size_t i) {
    if (i >= t.size())
        throw Error("instant " + std::to_string(i) + " out of range for trace of length " +
                    std::to_string(t.size()));
    return eval(f, t, i);
}

bool evaluate_all_prefixes(const Formula& f, const Trace& t) {
    for (std::size_t k = 1; k <= t.size(); ++k) {
        Trace prefix(t.begin(), t.begin() + k);
        if (!eval(f, prefix, 0))
            return false;
    }
    return true;
}

bool evaluate_some_prefix(const Formula& f, const Trace& t, std::size_t i) {
    for (std::size_t k = i + 1; k <= t.size(); ++k) {
        Trace prefix(t.begin(), t.begin() + k);
        if (eval(f, prefix, i))
            return true;
    }
    return false;
}

} // namespace rsyn
