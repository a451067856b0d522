#include "rsyn/errors.hpp"
#include "rsyn/runtime.hpp"

#include <algorithm>

namespace rsyn {

std::string to_string(SessionMode m) {
    switch (m) {
    case SessionMode::DutyOnly:
        return "duty-only";
    case SessionMode::RightsCommitted:
        return "rights-committed";
    case SessionMode::Further:
        return "further";
    }
    return "";
}

std::string to_string(SessionStatus s) {
    switch (s) {
    case SessionStatus::Running:
        return "running";
    case SessionStatus::Stopped:
        return "stopped";
    case SessionStatus::Rejected:
        return "rejected";
    }
    return "";
}

Session::Session(std::shared_ptr<const SynthesisResult> res) : res_(std::move(res)) {
    if (!res_->realizable) {
        status_ = SessionStatus::Rejected;
        reject_reason_ = "unrealizable";
        return;
    }
    strategy_.emplace(res_->duty_transducer, History{});
}

void Session::require_running() const {
    if (status_ != SessionStatus::Running)
        throw SessionClosed();
}

const Dfa& Session::active_arena() const {
    if (strategy_)
        return *strategy_->transducer().arena;
    return res_->product->dfa;
}

int Session::arena_state() const { return strategy_ ? strategy_->state() : res_->product->dfa.initial; }

int Session::layer() const {
    if (!strategy_)
        return -1;
    return strategy_->transducer().region.member_layer[strategy_->state()];
}

std::vector<Letter> Session::env_moves() const {
    std::vector<Letter> out;
    if (status_ != SessionStatus::Running)
        return out;
    const Dfa& a = active_arena();
    for (Letter x = 0; x < a.num_x(); ++x)
        if (a.defined(arena_state(), x))
            out.push_back(x);
    return out;
}

int Session::replay_state() const {
    const Dfa& base = res_->product->dfa;
    if (!further_)
        return run_on(base, history_).landed;
    History suffix(history_.begin() + long(further_at_), history_.end());
    return run_on(further_->arena->dfa, suffix).landed;
}

std::optional<Letter> Session::step(Letter x) {
    require_running();
    const Dfa& a = active_arena();
    if (x >= a.num_x() || !a.defined(arena_state(), x))
        throw IllegalEnvMove(round(), part_to_string(x, a.props, false));
    std::optional<Letter> y = strategy_->respond(x);
    if (!y) {
        status_ = SessionStatus::Stopped;
        return y;
    }
    history_.push_back(a.props.join(x, *y));
    return y;
}

void Session::switch_further() {
    RightsChoice c = right_committed_ ? (fr_committed_ ? RightsChoice::Both : RightsChoice::Right)
                                      : (fr_committed_ ? RightsChoice::FurtherRight : RightsChoice::None);
    History suffix(history_.begin() + long(further_at_), history_.end());
    strategy_.emplace(further_->transducer(c), suffix);
}

void Session::exercise_right() {
    require_running();
    if (right_committed_)
        throw AlreadyCommitted("right");
    if (further_) {
        right_committed_ = true;
        try {
            switch_further();
        } catch (...) {
            right_committed_ = false;
            throw;
        }
    } else {
        strategy_.emplace(rights_strategy_at(*res_, history_));
        right_committed_ = true;
        mode_ = SessionMode::RightsCommitted;
    }
    events_.push_back({round(), "exercise-right", "", true, ""});
}

void Session::exercise_further_right() {
    require_running();
    if (!further_)
        throw Error("no further right to exercise");
    if (fr_committed_)
        throw AlreadyCommitted("further right");
    fr_committed_ = true;
    try {
        switch_further();
    } catch (...) {
        fr_committed_ = false;
        throw;
    }
    events_.push_back({round(), "exercise-further-right", "", true, ""});
}

InjectOutcome Session::inject_further(const Formula& fd, const Formula& fr, const std::string& name) {
    require_running();
    InjectOutcome out;
    if (further_) {
        out.reason = "further-already-active";
    } else {
        FurtherSpec fs{res_->spec, fd, fr, history_, right_committed_};
        auto result = std::make_shared<FurtherResult>(synthesize_further(fs, *res_, res_->options));
        out.accepted = result->realizable;
        out.reason = result->reason;
        if (out.accepted) {
            further_ = std::move(result);
            fd_ = fd;
            fr_ = fr;
            further_at_ = history_.size();
            mode_ = SessionMode::Further;
            switch_further();
        }
    }
    events_.push_back({round(), "inject", name, out.accepted, out.reason});
    return out;
}

} // namespace rsyn
