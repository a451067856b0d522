#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rsyn {

// Every failure raised by the library derives from Error so callers can
// separate engine errors from std::bad_alloc and friends.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    int line;
    int column;
    ParseError(int line, int column, const std::string& msg)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line(line), column(column) {}
};

struct UndeclaredAtom : Error {
    std::string atom;
    explicit UndeclaredAtom(const std::string& name)
        : Error("undeclared atom '" + name + "'"), atom(name) {}
};

struct ResourceError : Error {
    using Error::Error;
};

struct UndefinedTransition : Error {
    std::size_t step;
    explicit UndefinedTransition(std::size_t step)
        : Error("undefined transition at step " + std::to_string(step)), step(step) {}
};

struct MalformedArena : Error {
    using Error::Error;
};

struct EnvUnrealizable : Error {
    EnvUnrealizable() : Error("environment specification is not realizable") {}
};

struct HistoryLeftRegion : Error {
    std::size_t step;
    explicit HistoryLeftRegion(std::size_t step)
        : Error("history leaves the winning region at step " + std::to_string(step)), step(step) {}
};

struct BaseUnrealizable : Error {
    BaseUnrealizable() : Error("base problem is not realizable") {}
};

struct IllegalEnvMove : Error {
    std::size_t round;
    IllegalEnvMove(std::size_t round, const std::string& move)
        : Error("illegal environment move " + move + " at round " + std::to_string(round)),
          round(round) {}
};

struct SessionClosed : Error {
    SessionClosed() : Error("session is closed") {}
};

struct AlreadyCommitted : Error {
    explicit AlreadyCommitted(const std::string& what) : Error(what + " already committed") {}
};

struct HorizonExceeded : Error {
    std::size_t round;
    explicit HorizonExceeded(std::size_t round)
        : Error("play exceeded its horizon at round " + std::to_string(round)), round(round) {}
};

} // namespace rsyn
