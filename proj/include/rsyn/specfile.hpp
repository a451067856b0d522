#pragma once

#include "rsyn/synthesis.hpp"

#include <string>
#include <vector>

namespace rsyn {

struct FurtherBlock {
    std::string name;
    Formula duty;
    Formula right;
    History at; // empty when the block has no at: line
    bool has_at = false;
};

struct SpecFile {
    ProblemSpec problem;
    std::vector<FurtherBlock> further;

    const FurtherBlock* find_further(const std::string& name) const;
};

// Line format:
//   vars env: a b c        vars agent: x y
//   env: <formula>         duty: <formula>        right: <formula>
//   further NAME           followed by duty:, right:, and optionally
//                          at: {..} {..} (letters of h)
// '#' starts a comment; a trailing '\' joins the next line.
SpecFile parse_spec(const std::string& text);
SpecFile load_spec(const std::string& path);

} // namespace rsyn
