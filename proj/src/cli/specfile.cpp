#include "rsyn/errors.hpp"
#include "rsyn/specfile.hpp"

#include <fstream>
#include <optional>
#include <sstream>

namespace rsyn {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

struct Line {
    int number;
    std::string text;
};

std::vector<Line> logical_lines(const std::string& text) {
    std::vector<Line> out;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    bool joining = false;
    while (std::getline(in, raw)) {
        ++number;
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        std::string t = trim(raw);
        bool more = !t.empty() && t.back() == '\\';
        if (more)
            t = trim(t.substr(0, t.size() - 1));
        if (joining)
            out.back().text += " " + t;
        else if (!t.empty() || more)
            out.push_back({number, t});
        joining = more;
    }
    return out;
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;)
        out.push_back(w);
    return out;
}

// Splits "{a, b} {} {c}" into letters.
History parse_history(const std::string& s, const PropSet& props, int line) {
    History h;
    std::size_t pos = 0;
    while ((pos = s.find_first_not_of(" \t", pos)) != std::string::npos) {
        std::size_t end = s.find('}', pos);
        if (s[pos] != '{' || end == std::string::npos)
            throw ParseError(line, int(pos) + 1, "expected a letter {..}");
        h.push_back(parse_letter(s.substr(pos, end - pos + 1), props));
        pos = end + 1;
    }
    return h;
}

} // namespace

const FurtherBlock* SpecFile::find_further(const std::string& name) const {
    for (const auto& f : further)
        if (f.name == name)
            return &f;
    return nullptr;
}

SpecFile parse_spec(const std::string& text) {
    SpecFile spec;
    std::optional<std::vector<std::string>> env_vars, agent_vars;
    std::optional<std::pair<int, std::string>> env, duty, right;
    struct PendingFurther {
        int line;
        std::string name;
        std::optional<std::pair<int, std::string>> duty, right, at;
    };
    std::vector<PendingFurther> blocks;

    for (const Line& l : logical_lines(text)) {
        std::size_t colon = l.text.find(':');
        std::string key = trim(l.text.substr(0, colon));
        std::string value = colon == std::string::npos ? "" : trim(l.text.substr(colon + 1));
        auto once = [&](auto& slot, auto v) {
            if (slot)
                throw ParseError(l.number, 1, "duplicate '" + key + "' section");
            slot = v;
        };
        if (colon == std::string::npos) {
            auto w = words(l.text);
            if (w.size() == 2 && w[0] == "further") {
                blocks.push_back({l.number, w[1], {}, {}, {}});
                continue;
            }
            throw ParseError(l.number, 1, "expected 'key: value' or 'further NAME'");
        }
        if (!blocks.empty()) {
            auto& b = blocks.back();
            if (key == "duty")
                once(b.duty, std::make_pair(l.number, value));
            else if (key == "right")
                once(b.right, std::make_pair(l.number, value));
            else if (key == "at")
                once(b.at, std::make_pair(l.number, value));
            else
                throw ParseError(l.number, 1, "unexpected '" + key + "' inside further block");
            continue;
        }
        if (key == "vars env")
            once(env_vars, words(value));
        else if (key == "vars agent")
            once(agent_vars, words(value));
        else if (key == "env")
            once(env, std::make_pair(l.number, value));
        else if (key == "duty")
            once(duty, std::make_pair(l.number, value));
        else if (key == "right")
            once(right, std::make_pair(l.number, value));
        else
            throw ParseError(l.number, 1, "unknown section '" + key + "'");
    }

    if (!env_vars || !agent_vars)
        throw ParseError(1, 1, "missing 'vars env:' or 'vars agent:'");
    if (!env || !duty || !right)
        throw ParseError(1, 1, "missing 'env:', 'duty:' or 'right:'");
    spec.problem.props = PropSet{*env_vars, *agent_vars};
    spec.problem.props.validate();

    auto formula = [&](const std::pair<int, std::string>& src) {
        try {
            return parse(src.second, spec.problem.props);
        } catch (const ParseError& e) {
            // re-anchor to the spec file line; columns stay relative to the value
            throw ParseError(src.first, e.column, e.what());
        }
    };
    spec.problem.env = formula(*env);
    spec.problem.duty = formula(*duty);
    spec.problem.right = formula(*right);

    for (const auto& b : blocks) {
        if (!b.duty || !b.right)
            throw ParseError(b.line, 1, "further block '" + b.name + "' needs duty: and right:");
        if (spec.find_further(b.name))
            throw ParseError(b.line, 1, "further block '" + b.name + "' declared twice");
        FurtherBlock f;
        f.name = b.name;
        f.duty = formula(*b.duty);
        f.right = formula(*b.right);
        if (b.at) {
            f.has_at = true;
            f.at = parse_history(b.at->second, spec.problem.props, b.at->first);
        }
        spec.further.push_back(std::move(f));
    }
    return spec;
}

SpecFile load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

} // namespace rsyn
