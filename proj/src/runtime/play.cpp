#include "rsyn/errors.hpp"
#include "rsyn/runtime.hpp"

#include <algorithm>

namespace rsyn {

ScriptedPolicy::ScriptedPolicy(std::vector<Letter> script, std::unique_ptr<EnvPolicy> fallback)
    : script_(std::move(script)), fallback_(std::move(fallback)) {}

Letter ScriptedPolicy::choose(const Session& s) {
    if (next_ < script_.size())
        return script_[next_++];
    if (!fallback_)
        throw Error("script exhausted at round " + std::to_string(s.round()));
    return fallback_->choose(s);
}

Letter RandomPolicy::choose(const Session& s) {
    std::vector<Letter> moves = s.env_moves();
    if (moves.empty())
        throw Error("no environment move at round " + std::to_string(s.round()));
    x_ = x_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return moves[(x_ >> 33) % moves.size()];
}

Letter FirstPolicy::choose(const Session& s) {
    std::vector<Letter> moves = s.env_moves();
    if (moves.empty())
        throw Error("no environment move at round " + std::to_string(s.round()));
    return moves.front();
}

PlayRecord make_record(const Session& s) {
    const ProblemSpec& p = s.result().spec;
    PlayRecord r;
    r.play = s.history();
    r.stop_round = r.play.size();
    r.events = s.events();
    if (r.play.empty())
        return r;
    r.duty_satisfied = evaluate_some_prefix(p.duty, r.play, 0);
    r.right_satisfied = evaluate_some_prefix(p.right, r.play, 0);
    if (s.further_active()) {
        r.further = true;
        r.further_at = s.further_at();
        if (r.further_at < r.play.size()) {
            r.further_duty_satisfied = evaluate_some_prefix(*s.further_duty(), r.play, r.further_at);
            r.further_right_satisfied = evaluate_some_prefix(*s.further_right(), r.play, r.further_at);
        }
    }
    return r;
}

void validate(const Session& s, const PlayRecord& r) {
    auto fail = [&](const std::string& what) {
        throw Error("play of " + std::to_string(r.play.size()) + " rounds misses " + what);
    };
    if (!r.duty_satisfied)
        fail("the duty");
    if (s.right_committed() && !r.right_satisfied)
        fail("the exercised right");
    if (r.further && !r.further_duty_satisfied)
        fail("the further duty");
    if (s.further_right_committed() && !r.further_right_satisfied)
        fail("the exercised further right");
}

namespace {

// Injections before exercises within a round, otherwise schedule order.
void order(std::vector<ScheduledEvent>& schedule) {
    std::stable_sort(schedule.begin(), schedule.end(), [](const ScheduledEvent& a, const ScheduledEvent& b) {
        if (a.round != b.round)
            return a.round < b.round;
        return (a.kind == ScheduledEvent::Inject) > (b.kind == ScheduledEvent::Inject);
    });
}

// Fires the events due at the session's round; true if the strategy changed.
bool fire(Session& s, const std::vector<ScheduledEvent>& schedule) {
    bool changed = false;
    for (const auto& e : schedule) {
        if (e.round != s.round() || s.status() != SessionStatus::Running)
            continue;
        switch (e.kind) {
        case ScheduledEvent::Inject:
            changed = s.inject_further(e.fd, e.fr, e.name).accepted || changed;
            break;
        case ScheduledEvent::ExerciseRight:
            s.exercise_right();
            changed = true;
            break;
        case ScheduledEvent::ExerciseFurtherRight:
            s.exercise_further_right();
            changed = true;
            break;
        }
    }
    return changed;
}

} // namespace

PlayRecord run_to_completion(Session& s, EnvPolicy& env, std::vector<ScheduledEvent> schedule) {
    order(schedule);
    std::size_t since_switch = 0;
    while (s.status() == SessionStatus::Running) {
        if (fire(s, schedule))
            since_switch = 0;
        if (since_switch > std::size_t(s.active_arena().num_states))
            throw HorizonExceeded(s.round());
        s.step(env.choose(s));
        ++since_switch;
    }
    if (s.status() == SessionStatus::Rejected)
        throw Error("session rejected: " + s.reject_reason());
    PlayRecord r = make_record(s);
    validate(s, r);
    return r;
}

namespace {

void explore(Session s, const std::vector<ScheduledEvent>& schedule, std::size_t since_switch,
             const std::function<void(const Session&)>& visit) {
    if (fire(s, schedule))
        since_switch = 0;
    if (since_switch > std::size_t(s.active_arena().num_states))
        throw HorizonExceeded(s.round());
    for (Letter x : s.env_moves()) {
        Session next = s;
        next.step(x);
        if (next.status() == SessionStatus::Running)
            explore(std::move(next), schedule, since_switch + 1, visit);
        else
            visit(next);
    }
}

} // namespace

void explore_plays(const Session& start, const std::vector<ScheduledEvent>& schedule,
                   const std::function<void(const Session&)>& visit) {
    if (start.status() != SessionStatus::Running) {
        visit(start);
        return;
    }
    std::vector<ScheduledEvent> ordered = schedule;
    order(ordered);
    explore(start, ordered, 0, visit);
}

nlohmann::json to_json(const PlayRecord& r, const PropSet& props) {
    using nlohmann::json;
    json play = json::array();
    for (Letter l : r.play)
        play.push_back(letter_to_string(l, props));
    json events = json::array();
    for (const auto& e : r.events) {
        json ev = {{"round", e.round}, {"kind", e.kind}};
        if (!e.name.empty())
            ev["name"] = e.name;
        if (e.kind == "inject") {
            ev["accepted"] = e.accepted;
            if (!e.accepted)
                ev["reason"] = e.reason;
        }
        events.push_back(ev);
    }
    json out = {{"play", play},
                {"stop_round", r.stop_round},
                {"duty_satisfied", r.duty_satisfied},
                {"right_satisfied", r.right_satisfied},
                {"events", events}};
    if (r.further)
        out["further"] = {{"at", r.further_at},
                          {"duty_satisfied", r.further_duty_satisfied},
                          {"right_satisfied", r.further_right_satisfied}};
    return out;
}

} // namespace rsyn
