#pragma once

#include "rsyn/synthesis.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rsyn {

enum class SessionMode { DutyOnly, RightsCommitted, Further };
enum class SessionStatus { Running, Stopped, Rejected };

std::string to_string(SessionMode m);
std::string to_string(SessionStatus s);

struct SessionEvent {
    std::size_t round = 0;
    std::string kind; // "exercise-right", "exercise-further-right", "inject"
    std::string name; // further block name, if any
    bool accepted = true;
    std::string reason;
};

struct InjectOutcome {
    bool accepted = false;
    std::string reason; // "history left Agn_r", "goal unreachable", "further-already-active"
};

// A live play of the synthesized strategy against an environment that feeds
// X-parts one round at a time. Copies are independent sessions sharing the
// immutable synthesis results.
class Session {
public:
    explicit Session(std::shared_ptr<const SynthesisResult> res);

    // Agent answer to x, or nullopt for stop (which closes the session).
    std::optional<Letter> step(Letter x);
    void exercise_right();
    void exercise_further_right();
    InjectOutcome inject_further(const Formula& fd, const Formula& fr, const std::string& name = "");

    SessionMode mode() const { return mode_; }
    SessionStatus status() const { return status_; }
    const std::string& reject_reason() const { return reject_reason_; }
    const History& history() const { return history_; }
    std::size_t round() const { return history_.size(); }
    bool right_committed() const { return right_committed_; }
    bool further_right_committed() const { return fr_committed_; }
    bool further_active() const { return further_ != nullptr; }
    std::size_t further_at() const { return further_at_; }
    const Formula* further_duty() const { return further_ ? &fd_ : nullptr; }
    const Formula* further_right() const { return further_ ? &fr_ : nullptr; }
    const std::vector<SessionEvent>& events() const { return events_; }
    const SynthesisResult& result() const { return *res_; }

    // State of the arena the active strategy runs on: the base product, or
    // the re-rooted further arena once a further spec was accepted.
    const Dfa& active_arena() const;
    int arena_state() const;
    // Layer of arena_state in the active strategy's region (-1 outside).
    int layer() const;
    // X-parts defined at arena_state, ascending; empty once closed.
    std::vector<Letter> env_moves() const;
    // Replays history from the initial product state; equals arena_state.
    int replay_state() const;

    void record(SessionEvent e) { events_.push_back(std::move(e)); }

private:
    void require_running() const;
    void switch_further();

    std::shared_ptr<const SynthesisResult> res_;
    std::optional<Strategy> strategy_;
    SessionMode mode_ = SessionMode::DutyOnly;
    SessionStatus status_ = SessionStatus::Running;
    std::string reject_reason_;
    History history_;
    bool right_committed_ = false;
    bool fr_committed_ = false;
    std::shared_ptr<const FurtherResult> further_;
    Formula fd_, fr_;
    std::size_t further_at_ = 0;
    std::vector<SessionEvent> events_;
};

// Chooses the environment's X-part among the moves defined at the session's
// arena state. Exhaustive adversaries are run with explore_plays instead.
class EnvPolicy {
public:
    virtual ~EnvPolicy() = default;
    virtual Letter choose(const Session& s) = 0;
};

// Fixed sequence of X-parts, then an optional fallback policy.
class ScriptedPolicy : public EnvPolicy {
public:
    ScriptedPolicy(std::vector<Letter> script, std::unique_ptr<EnvPolicy> fallback = nullptr);
    Letter choose(const Session& s) override;

private:
    std::vector<Letter> script_;
    std::size_t next_ = 0;
    std::unique_ptr<EnvPolicy> fallback_;
};

// x <- x * 6364136223846793005 + 1442695040888963407 per draw; the move is
// entry (x >> 33) mod n of the ascending defined X-parts.
class RandomPolicy : public EnvPolicy {
public:
    explicit RandomPolicy(std::uint64_t seed) : x_(seed) {}
    Letter choose(const Session& s) override;

private:
    std::uint64_t x_;
};

// Smallest defined X-part.
class FirstPolicy : public EnvPolicy {
public:
    Letter choose(const Session& s) override;
};

struct ScheduledEvent {
    enum Kind { Inject, ExerciseRight, ExerciseFurtherRight };
    std::size_t round = 0;
    Kind kind = ExerciseRight;
    std::string name;
    Formula fd, fr; // Inject only
};

struct PlayRecord {
    Trace play;
    std::size_t stop_round = 0;
    bool duty_satisfied = false;
    bool right_satisfied = false;
    bool further = false;
    std::size_t further_at = 0;
    bool further_duty_satisfied = false;
    bool further_right_satisfied = false;
    std::vector<SessionEvent> events;
};

// Evaluator verdicts on the frozen play of a stopped session.
PlayRecord make_record(const Session& s);
// Throws Error naming the first obligation the play misses: duty at 0,
// further duty at its injection round, and every committed right.
void validate(const Session& s, const PlayRecord& r);

// Steps the session until stop. Events fire at round boundaries before the
// env move; in one round injections come first. Throws HorizonExceeded when
// a strategy runs more rounds than its arena has states.
PlayRecord run_to_completion(Session& s, EnvPolicy& env, std::vector<ScheduledEvent> schedule = {});

// Every play against every environment that stays in the restricted arena.
// The visitor sees each stopped session.
void explore_plays(const Session& start, const std::vector<ScheduledEvent>& schedule,
                   const std::function<void(const Session&)>& visit);

nlohmann::json to_json(const PlayRecord& r, const PropSet& props);

} // namespace rsyn
