#include "rsyn/errors.hpp"
#include "rsyn/synthesis.hpp"

#include <deque>
#include <sstream>

namespace rsyn {

TransducerTable tabulate(const Transducer& t) {
    const Dfa& a = *t.arena;
    TransducerTable out;
    out.props = a.props;
    out.states = a.num_states;
    out.initial = a.initial;
    for (int q = 0; q < a.num_states; ++q) {
        if (t.goal[q])
            out.goal.push_back(q);
        if (!t.region.contains(q))
            continue;
        out.member_layer[q] = t.region.member_layer[q];
        auto& row = out.tau[q];
        for (Letter x = 0; x < a.num_x(); ++x)
            if (a.defined(q, x))
                row[x] = t.tau(q, x);
    }
    return out;
}

nlohmann::json to_json(const TransducerTable& t) {
    using nlohmann::json;
    json layer = json::object();
    for (const auto& [q, j] : t.member_layer)
        layer[std::to_string(q)] = j;
    json tau = json::object();
    for (const auto& [q, row] : t.tau) {
        json r = json::object();
        for (const auto& [x, ys] : row) {
            json list = json::array();
            for (Letter y : ys)
                list.push_back(part_to_string(y, t.props, true));
            r[part_to_string(x, t.props, false)] = list;
        }
        tau[std::to_string(q)] = r;
    }
    return {{"props", {{"env", t.props.env}, {"agent", t.props.agent}}},
            {"states", t.states},
            {"initial", t.initial},
            {"goal", t.goal},
            {"member_layer", layer},
            {"tau", tau}};
}

TransducerTable transducer_from_json(const nlohmann::json& j) {
    TransducerTable t;
    try {
        t.props.env = j.at("props").at("env").get<std::vector<std::string>>();
        t.props.agent = j.at("props").at("agent").get<std::vector<std::string>>();
        t.props.validate();
        t.states = j.at("states").get<int>();
        t.initial = j.at("initial").get<int>();
        t.goal = j.at("goal").get<std::vector<int>>();
        for (const auto& [q, layer] : j.at("member_layer").items())
            t.member_layer[std::stoi(q)] = layer.get<int>();
        for (const auto& [q, row] : j.at("tau").items()) {
            auto& r = t.tau[std::stoi(q)];
            for (const auto& [x, ys] : row.items()) {
                MoveSet moves;
                for (const auto& y : ys)
                    moves.push_back(t.props.y_part(parse_letter(y.get<std::string>(), t.props)));
                r[parse_letter(x, t.props)] = moves;
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed transducer: ") + e.what());
    }
    return t;
}

std::string strategy_dot(const Transducer& t, const std::string& name) {
    const Dfa& a = *t.arena;
    std::ostringstream os;
    os << "digraph " << name << " {\n  rankdir=LR;\n  init [shape=point];\n";
    std::vector<bool> seen(a.num_states, false);
    std::deque<int> queue{a.initial};
    seen[a.initial] = true;
    std::ostringstream edges;
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        os << "  " << q << " [shape=" << (t.goal[q] ? "doublecircle" : "circle") << ", label=\"" << q;
        if (t.region.contains(q))
            os << "\\nlayer " << t.region.member_layer[q];
        os << "\"];\n";
        // goal states stop, except the initial one which still owes a round
        if (t.goal[q] && q != a.initial)
            continue;
        for (Letter x = 0; x < a.num_x(); ++x) {
            MoveSet ys = t.tau(q, x);
            if (ys.empty())
                continue;
            int next = a.next(q, a.props.join(x, ys.front()));
            edges << "  " << q << " -> " << next << " [label=\"" << part_to_string(x, a.props, false) << " / "
                  << part_to_string(ys.front(), a.props, true) << "\"];\n";
            if (!seen[next]) {
                seen[next] = true;
                queue.push_back(next);
            }
        }
    }
    os << "  init -> " << a.initial << ";\n" << edges.str() << "}\n";
    return os.str();
}

} // namespace rsyn
