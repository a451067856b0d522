#include "rsyn/cli.hpp"
#include "rsyn/errors.hpp"

#include <sstream>

namespace rsyn {

std::unique_ptr<EnvPolicy> PlayScript::policy() const {
    std::unique_ptr<EnvPolicy> fb;
    if (fallback == Random)
        fb = std::make_unique<RandomPolicy>(seed);
    else if (fallback == First)
        fb = std::make_unique<FirstPolicy>();
    return std::make_unique<ScriptedPolicy>(moves, std::move(fb));
}

PlayScript parse_script(const std::string& text, const SpecFile& spec) {
    const PropSet& props = spec.problem.props;
    PlayScript out;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        std::istringstream words(raw);
        std::string cmd;
        if (!(words >> cmd))
            continue;
        std::string rest;
        std::getline(words, rest);
        std::istringstream args(rest);
        std::string a, b;
        args >> a >> b;
        if (cmd == "move") {
            Letter l;
            try {
                l = parse_letter(rest, props);
            } catch (const Error& e) {
                throw ParseError(number, 1, e.what());
            }
            if (props.y_part(l) != 0)
                throw ParseError(number, 1, "env move mentions agent propositions");
            out.moves.push_back(l);
        } else if (cmd == "exercise" && a == "right" && b.empty()) {
            out.events.push_back({out.moves.size(), ScheduledEvent::ExerciseRight, "", {}, {}});
        } else if (cmd == "exercise" && a == "further-right" && b.empty()) {
            out.events.push_back({out.moves.size(), ScheduledEvent::ExerciseFurtherRight, "", {}, {}});
        } else if (cmd == "inject" && !a.empty() && b.empty()) {
            const FurtherBlock* f = spec.find_further(a);
            if (!f)
                throw ParseError(number, 1, "no further block named '" + a + "'");
            out.events.push_back({out.moves.size(), ScheduledEvent::Inject, a, f->duty, f->right});
        } else if (cmd == "fallback" && a == "first" && b.empty()) {
            out.fallback = PlayScript::First;
        } else if (cmd == "fallback" && a == "random" && !b.empty()) {
            try {
                std::size_t used = 0;
                out.seed = std::stoull(b, &used);
                if (used != b.size())
                    throw std::invalid_argument(b);
            } catch (const std::exception&) {
                throw ParseError(number, 1, "bad seed '" + b + "'");
            }
            out.fallback = PlayScript::Random;
        } else {
            throw ParseError(number, 1, "unknown script command '" + raw + "'");
        }
    }
    return out;
}

} // namespace rsyn
