#pragma once

#include "rsyn/automata.hpp"
#include "rsyn/games.hpp"

#include "json.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace rsyn {

struct ProblemSpec {
    PropSet props;
    Formula env;
    Formula duty;
    Formula right;
};

struct SynthOptions {
    // Append a fresh agent proposition that alone means stop, instead of
    // reserving the all-false agent move.
    bool reserved_stop = false;
    // Build the on-demand transducers of a further result only when asked.
    bool lazy_rights = false;
    CompileOptions compile;
};

// Strategy generator over an arena: descend the layers of `region` until the
// run has visited `goal`, then stop.
struct Transducer {
    std::shared_ptr<const Dfa> arena;
    WinningRegion region;
    StateSet goal;
    MoveSet moves; // non-stop agent moves, ascending
    Letter stop = 0;
    // States a play must not leave (right-awareness). At goal and unranked
    // states tau prefers moves into `keep`.
    StateSet keep;

    // Allowed Y-parts at (q, x), ascending; empty if x is undefined at q.
    MoveSet tau(int q, Letter x) const;
};

// Deterministic strategy drawn from a transducer, smallest Y-part first.
// The seed history is replayed from the arena's initial state.
class Strategy {
public:
    Strategy(std::shared_ptr<const Transducer> t, const History& seed);

    // The stop rule: at least one letter played and goal visited.
    bool stopping() const { return rounds_ >= 1 && visited_goal_; }
    // Agent answer to env move x; nullopt is stop. Non-stop answers advance.
    std::optional<Letter> respond(Letter x);
    // Answer without advancing.
    std::optional<Letter> peek(Letter x) const;
    // Advances with an externally chosen letter (used when replaying).
    void advance(Letter l);

    int state() const { return state_; }
    std::size_t rounds() const { return rounds_; }
    const Transducer& transducer() const { return *t_; }

private:
    std::shared_ptr<const Transducer> t_;
    int state_ = 0;
    std::size_t rounds_ = 0;
    bool visited_goal_ = false;
};

Strategy instantiate(std::shared_ptr<const Transducer> t, const History& seed = {});

struct SynthesisResult {
    ProblemSpec spec;
    SynthOptions options;
    PropSet props; // spec.props plus the reserved stop proposition, if any
    Letter stop = 0;
    MoveSet moves;

    Dfa env_dfa;         // A_e, Safe(S)
    Restricted env_arena; // A'_e
    Dfa duty_dfa;        // A_d
    Dfa right_dfa;       // A_r
    std::shared_ptr<const Product> product; // A'_e x A_d x A_r
    StateSet r_d, r_r, r_dr;

    WinningRegion agn_r;
    WinningRegion agn; // on reduce_reach_safe(R_d, Agn_r)
    bool realizable = false;
    std::shared_ptr<const Transducer> duty_transducer;   // T
    std::shared_ptr<const Transducer> rights_transducer; // T_r
};

// Throws EnvUnrealizable when env admits no environment strategy.
SynthesisResult synthesize(const ProblemSpec& p, const SynthOptions& opt = {});

// Strategy enforcing `target` w.r.t. h, or nullopt when the run on h leaves
// the target's winning region.
std::optional<Strategy> enforce_wrt_history(const ProblemSpec& p, const Formula& target, const History& h,
                                            const SynthOptions& opt = {});

// T_r instantiated from h. Throws HistoryLeftRegion if h leaves Agn_r.
Strategy rights_strategy_at(const SynthesisResult& res, const History& h);

// The restricted env arena re-rooted after h.
Restricted env_after_history(const SynthesisResult& res, const History& h);
Restricted env_after_history(const ProblemSpec& p, const History& h, const SynthOptions& opt = {});

struct FurtherSpec {
    ProblemSpec base;
    Formula further_duty;
    Formula further_right;
    History at_history;
    bool right_committed = false; // phi_r was exercised along h
};

enum class RightsChoice { None, Right, FurtherRight, Both };

class FurtherResult {
public:
    bool realizable = false;
    std::string reason; // "history left Agn_r" or "goal unreachable" when rejected

    std::shared_ptr<const Product> arena; // re-rooted A_{d and r} x A_fd x A_fr
    std::vector<int> base_state;          // arena state -> base product state
    StateSet r_d, r_r, r_fd, r_fr;
    WinningRegion agn_rfr;

    // T-hat, or the transducer for the chosen rights. Built on first use
    // when the lazy option is set; thread-safe.
    std::shared_ptr<const Transducer> transducer(RightsChoice c) const;

private:
    friend FurtherResult synthesize_further(const FurtherSpec&, const SynthesisResult&, const SynthOptions&);
    struct Cache {
        std::once_flag once[4];
        std::shared_ptr<const Transducer> t[4];
    };
    std::shared_ptr<const Transducer> build(RightsChoice c) const;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
    MoveSet moves_;
    Letter stop_ = 0;
    bool right_committed_ = false;
};

// Throws BaseUnrealizable, UndefinedTransition for an incompatible h.
FurtherResult synthesize_further(const FurtherSpec& fs, const SynthOptions& opt = {});
// Same, reusing an existing synthesis of fs.base.
FurtherResult synthesize_further(const FurtherSpec& fs, const SynthesisResult& base, const SynthOptions& opt = {});

// Plain-data view of a transducer, the unit of export and import.
struct TransducerTable {
    PropSet props;
    int states = 0;
    int initial = 0;
    std::vector<int> goal;
    std::map<int, int> member_layer;
    std::map<int, std::map<Letter, MoveSet>> tau; // region states, defined X-parts
};

TransducerTable tabulate(const Transducer& t);
nlohmann::json to_json(const TransducerTable& t);
TransducerTable transducer_from_json(const nlohmann::json& j);
// Strategy graph under the smallest-Y tie-break, from the initial state.
std::string strategy_dot(const Transducer& t, const std::string& name = "strategy");

} // namespace rsyn
