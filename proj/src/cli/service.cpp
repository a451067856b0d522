#include "rsyn/cli.hpp"
#include "rsyn/errors.hpp"

#include <sstream>

namespace rsyn {

using nlohmann::json;

json session_view(const Session& s) {
    const PropSet& props = s.result().props;
    json history = json::array();
    for (Letter l : s.history())
        history.push_back(letter_to_string(l, props));
    json moves = json::array();
    for (Letter x : s.env_moves())
        moves.push_back(part_to_string(x, props, false));
    json options = json::array();
    if (s.status() == SessionStatus::Running) {
        if (!s.right_committed())
            options.push_back("exercise-right");
        if (s.further_active() && !s.further_right_committed())
            options.push_back("exercise-further-right");
        if (!s.further_active())
            options.push_back("inject");
    }
    json v = {{"status", to_string(s.status())},
              {"mode", to_string(s.mode())},
              {"realizable", s.result().realizable},
              {"round", s.round()},
              {"history", history},
              {"arena_state", s.arena_state()},
              {"layer", s.layer()},
              {"env_moves", moves},
              {"right_committed", s.right_committed()},
              {"options", options}};
    if (s.further_active())
        v["further"] = {{"at", s.further_at()}, {"right_committed", s.further_right_committed()}};
    if (s.status() == SessionStatus::Rejected)
        v["reason"] = s.reject_reason();
    if (s.status() == SessionStatus::Stopped)
        v["record"] = to_json(make_record(s), props);
    return v;
}

namespace {

struct HttpError : Error {
    int status;
    HttpError(int status, const std::string& msg) : Error(msg), status(status) {}
};

json parse_body(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object())
        throw HttpError(400, "request body must be a JSON object");
    if (!j.contains("v") || j["v"] != 1)
        throw HttpError(400, "unsupported protocol version; expected \"v\": 1");
    return j;
}

std::string string_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string())
        throw HttpError(400, std::string("missing string field '") + key + "'");
    return j[key].get<std::string>();
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> out;
    std::istringstream in(path);
    for (std::string seg; std::getline(in, seg, '/');)
        if (!seg.empty())
            out.push_back(seg);
    return out;
}

json sizes(const SynthesisResult& r) {
    return {{"env", r.env_dfa.num_states},
            {"env_arena", r.env_arena.arena.num_states},
            {"duty", r.duty_dfa.num_states},
            {"right", r.right_dfa.num_states},
            {"product", r.product->dfa.num_states},
            {"agn_r", r.agn_r.size()},
            {"agn", r.realizable ? r.agn.size() : 0}};
}

} // namespace

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        throw HttpError(404, "no session '" + id + "'");
    return it->second;
}

SessionService::Response SessionService::handle(const std::string& method, const std::string& path,
                                                const std::string& body) {
    auto ok = [](int status, json j) {
        j["v"] = 1;
        return Response{status, std::move(j)};
    };
    try {
        auto seg = split_path(path);
        if (seg.empty() || seg[0] != "sessions")
            throw HttpError(404, "unknown path " + path);

        if (seg.size() == 1) {
            if (method != "POST")
                throw HttpError(404, "unknown route " + method + " " + path);
            json req = parse_body(body);
            SpecFile spec = parse_spec(string_field(req, "spec"));
            SynthOptions opt;
            if (req.contains("options")) {
                opt.reserved_stop = req["options"].value("reserved_stop", false);
                opt.lazy_rights = req["options"].value("lazy_rights", false);
            }
            auto res = std::make_shared<const SynthesisResult>(synthesize(spec.problem, opt));
            auto entry = std::make_shared<Entry>(std::move(spec), res);
            std::string id;
            {
                std::lock_guard lock(mutex_);
                id = std::to_string(next_id_++);
                sessions_[id] = entry;
            }
            return ok(201, {{"id", id}, {"realizable", res->realizable}, {"sizes", sizes(*res)},
                            {"view", session_view(entry->session)}});
        }

        const std::string& id = seg[1];
        if (seg.size() == 2 && method == "DELETE") {
            std::lock_guard lock(mutex_);
            if (!sessions_.erase(id))
                throw HttpError(404, "no session '" + id + "'");
            return ok(200, {{"id", id}, {"deleted", true}});
        }
        auto entry = find(id);
        std::lock_guard lock(entry->mutex);
        Session& s = entry->session;
        if (seg.size() == 2 && method == "GET")
            return ok(200, {{"id", id}, {"view", session_view(s)}});
        if (seg.size() != 3 || method != "POST")
            throw HttpError(404, "unknown route " + method + " " + path);

        json req = parse_body(body);
        const std::string& action = seg[2];
        const PropSet& props = s.result().props;
        if (action == "env-move") {
            Letter x = parse_letter(string_field(req, "letter"), props);
            if (props.y_part(x) != 0)
                throw HttpError(400, "env move mentions agent propositions");
            auto y = s.step(x);
            json move = y ? json(part_to_string(*y, props, true)) : json("stop");
            return ok(200, {{"agent_move", move}, {"view", session_view(s)}});
        }
        if (action == "exercise-right") {
            s.exercise_right();
            return ok(200, {{"view", session_view(s)}});
        }
        if (action == "exercise-further-right") {
            if (!s.further_active() && s.status() == SessionStatus::Running)
                throw HttpError(409, "no further right to exercise");
            s.exercise_further_right();
            return ok(200, {{"view", session_view(s)}});
        }
        if (action == "further") {
            Formula fd, fr;
            std::string name;
            if (req.contains("name")) {
                name = string_field(req, "name");
                const FurtherBlock* f = entry->spec.find_further(name);
                if (!f)
                    throw HttpError(400, "no further block named '" + name + "'");
                fd = f->duty;
                fr = f->right;
            } else {
                fd = parse(string_field(req, "fd"), entry->spec.problem.props);
                fr = parse(string_field(req, "fr"), entry->spec.problem.props);
            }
            InjectOutcome out = s.inject_further(fd, fr, name);
            json resp = {{"accepted", out.accepted}, {"view", session_view(s)}};
            if (!out.accepted)
                resp["reason"] = out.reason;
            return ok(200, resp);
        }
        throw HttpError(404, "unknown route " + method + " " + path);
    } catch (const HttpError& e) {
        return ok(e.status, {{"error", e.what()}});
    } catch (const IllegalEnvMove& e) {
        return ok(422, {{"error", e.what()}, {"round", e.round}});
    } catch (const EnvUnrealizable& e) {
        return ok(422, {{"error", e.what()}});
    } catch (const SessionClosed& e) {
        return ok(409, {{"error", e.what()}});
    } catch (const AlreadyCommitted& e) {
        return ok(409, {{"error", e.what()}});
    } catch (const ParseError& e) {
        return ok(400, {{"error", e.what()}, {"line", e.line}, {"column", e.column}});
    } catch (const ResourceError& e) {
        return ok(422, {{"error", e.what()}});
    } catch (const Error& e) {
        return ok(400, {{"error", e.what()}});
    } catch (const json::exception& e) {
        return ok(400, {{"error", e.what()}});
    }
}

} // namespace rsyn
