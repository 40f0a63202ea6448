#pragma once

#include "gazeplan/core/gaze_plan.hpp"
#include "gazeplan/core/target_registry.hpp"
#include "gazeplan/events/events.hpp"
#include "gazeplan/planner/config.hpp"
#include "gazeplan/rng.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gazeplan {

/// An event handed to the planner for the current tick. `offset_ms` is the
/// event onset relative to the tick start, in [0, 200).
struct TickEvent {
    std::int64_t offset_ms = 0;
    Event event;
};

/// Robot-spoken reference to a task object, with the absolute time the
/// referring word starts.
struct SpokenReference {
    TargetId target;
    std::int64_t word_t_ms = 0;

    friend bool operator==(const SpokenReference&, const SpokenReference&) = default;
};

/// Zero-priority window written by intimacy regulation, in absolute ticks.
/// Windows that have not started yet are re-derived every tick; once a
/// window starts executing it stays in force until it ends.
struct AversionWindow {
    TargetId user;
    std::int64_t begin_tick = 0;
    std::int64_t end_tick = 0;

    friend bool operator==(const AversionWindow&, const AversionWindow&) = default;
};

struct PlannerTickReport {
    int applied_events = 0;
    int asr_deliveries = 0;
    std::vector<std::string> errors;
    /// Every write made by intimacy regulation this tick, frames relative to
    /// the tick (re-applied committed windows included).
    std::vector<std::pair<TargetId, FrameRange>> intimacy_writes;
    /// Windows newly inserted this tick.
    std::vector<AversionWindow> new_aversions;
    std::vector<SpokenReference> references;
};

/// Convert a millisecond offset from the tick start to a frame boundary
/// (nearest frame edge, halves round up).
int frame_at(std::int64_t ms) noexcept;

/// Frames covered by the millisecond span [begin_ms, end_ms) relative to the
/// tick start, clipped at frame 0. May be empty.
FrameRange frames_for(std::int64_t begin_ms, std::int64_t end_ms) noexcept;

/// A point near `addressee`'s face: yaw offset of magnitude [8, 15] degrees
/// with random sign, pitch offset in [-10, +5] degrees, same distance.
/// Throws KindError for non-user targets.
Vec3 sample_environment(const Target& addressee, DeterministicRng& rng);

/// Gaze planner: owns the rolling plan and writes priority spans for the
/// conversational events of each tick.
class Planner {
public:
    static constexpr std::size_t kExecutedTailLength = 25;

    Planner(TargetRegistry targets, PlannerConfig config, std::uint64_t seed);

    /// Planner half of one tick: target lifecycle, event handlers in order,
    /// due ASR word deliveries, then intimacy regulation. Handler failures
    /// are reported and leave the plan as it was before that event.
    PlannerTickReport plan_tick(std::int64_t tick_index, const std::vector<TickEvent>& events);

    /// Record the executed target for this tick and shift the plan.
    void finish_tick(const TargetId& executed);

    // Individual rules. Offsets are relative to the start of the current tick.
    void on_robot_speaking(const RobotSpeakingEvent& ev, std::int64_t offset_ms = 0,
                           std::vector<SpokenReference>* references = nullptr);
    void on_robot_listening(const RobotListeningEvent& ev, std::int64_t offset_ms = 0);
    void on_user_speaking(const UserSpeakingEvent& ev, std::int64_t offset_ms = 0);
    void on_target_moved(const TargetMovedEvent& ev, std::int64_t offset_ms = 0);
    void apply_lifecycle(const TargetLifecycleEvent& ev);
    /// RJA for one heard word at `offset_ms` into the tick.
    int on_word_heard(const WordTiming& word, std::int64_t offset_ms);
    PlannerTickReport check_intimacy_regulation();

    /// Start a new environment-gaze episode: sample a fresh anchor near the
    /// current addressee and move the environment target there.
    Vec3 begin_environment_episode();

    /// User the robot is currently oriented to: active addressees, then the
    /// last speaker, then the first registered user.
    std::optional<TargetId> current_addressee() const;

    /// Final targets over the whole horizon, with hysteresis from the last
    /// executed target.
    std::vector<TargetId> prospective_targets() const;

    /// Plan as the controller sees it: the rule-written plan with every
    /// aversion window zeroed.
    const GazePlan& plan() const;
    /// Plan as written by the event rules alone.
    const GazePlan& base_plan() const noexcept { return plan_; }
    GazePlan& base_plan() noexcept {
        dirty_ = true;
        return plan_;
    }
    const TargetRegistry& targets() const noexcept { return targets_; }
    const PlannerConfig& config() const noexcept { return config_; }
    void set_config(const PlannerConfig& config);
    const std::deque<TargetId>& executed_tail() const noexcept { return executed_tail_; }
    const std::vector<TargetId>& active_addressees() const noexcept { return active_addressees_; }
    const Vec3& env_anchor() const noexcept { return env_anchor_; }
    std::optional<TargetId> last_executed() const;
    std::int64_t current_tick() const noexcept { return tick_; }
    const std::vector<AversionWindow>& aversions() const noexcept { return aversions_; }

private:
    struct PendingWord {
        std::int64_t deliver_ms = 0;  // absolute
        WordTiming word;
    };
    struct ActiveMove {
        TargetId target;
        std::int64_t onset_ms = 0;  // absolute
        std::vector<Waypoint> waypoints;
    };

    void write(const TargetId& id, FrameRange frames, double p);
    void update_moving_targets();
    void forget_target(const TargetId& id);
    int threshold_frames(const TargetId& user, std::int64_t run_start_tick);
    std::int64_t tick_start_ms() const noexcept { return tick_ * kFrameMs; }

    TargetRegistry targets_;
    PlannerConfig config_;
    GazePlan plan_;
    DeterministicRng rng_;
    std::deque<TargetId> executed_tail_;
    std::int64_t executed_run_start_ = 0;  // tick the last executed target's current run began
    std::vector<TargetId> active_addressees_;
    std::optional<TargetId> last_speaker_;
    Vec3 env_anchor_;
    std::int64_t tick_ = 0;
    std::vector<PendingWord> pending_words_;
    std::vector<ActiveMove> moves_;
    std::vector<AversionWindow> aversions_;
    std::map<std::pair<TargetId, std::int64_t>, int> run_thresholds_;
    mutable GazePlan effective_;
    mutable bool dirty_ = true;
};

}  // namespace gazeplan
