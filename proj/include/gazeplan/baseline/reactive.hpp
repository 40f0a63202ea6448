#pragma once

#include "gazeplan/controller/controller.hpp"
#include "gazeplan/core/target_registry.hpp"
#include "gazeplan/planner/planner.hpp"
#include "gazeplan/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gazeplan {

/// Ranking of the reactive system's gaze sources; higher wins.
enum class GazeSource : std::uint8_t {
    Environment = 0,
    Addressee = 1,  // robot speaking or listening
    Speaker = 2,
    Reference = 3,  // verbal reference to a task object
    Moved = 4,      // task object being dragged
};

std::string_view to_string(GazeSource source) noexcept;

struct ReactiveTickResult {
    GazeCommand command;
    GazeSource source = GazeSource::Environment;
    int applied_events = 0;
    std::vector<std::string> errors;
    std::vector<SpokenReference> references;
};

/// Reactive comparison system: fixates one target for a random 1-5 s,
/// switching early only for a source of strictly higher rank. The head is
/// always fully aligned with the gaze.
class ReactiveGaze {
public:
    static constexpr std::int64_t kMinFixationMs = 1000;
    static constexpr std::int64_t kMaxFixationMs = 5000;

    ReactiveGaze(TargetRegistry targets, std::uint64_t seed, ControllerConfig controller = {});

    ReactiveTickResult reactive_tick(std::int64_t tick_index, const std::vector<TickEvent>& events);

    const TargetId& current_target() const noexcept { return current_; }
    GazeSource current_source() const noexcept { return current_source_; }
    std::int64_t fixation_deadline() const noexcept { return deadline_; }
    const TargetRegistry& targets() const noexcept { return targets_; }
    const Controller& controller() const noexcept { return controller_; }
    Controller& controller() noexcept { return controller_; }
    /// Fixation lengths drawn so far, in ticks.
    const std::vector<int>& fixation_draws() const noexcept { return draws_; }

private:
    struct ActiveSource {
        TargetId target;
        GazeSource source;
        std::int64_t begin_ms = 0;  // absolute
        std::int64_t end_ms = 0;    // absolute, exclusive
    };
    struct PendingWord {
        std::int64_t deliver_ms = 0;
        WordTiming word;
    };
    struct ActiveMove {
        TargetId target;
        std::int64_t onset_ms = 0;
        std::vector<Waypoint> waypoints;
    };

    void apply(const Event& event, std::int64_t onset_ms, ReactiveTickResult& result);
    void add_source(const TargetId& target, GazeSource source, std::int64_t begin_ms, std::int64_t end_ms);
    /// Highest-ranked source live at `now_ms`; ties prefer the earliest
    /// registered source.
    const ActiveSource* best_source(std::int64_t now_ms) const;
    void start_fixation(const TargetId& target, GazeSource source, std::int64_t tick_index);
    void refresh_environment();
    void forget_target(const TargetId& id);

    TargetRegistry targets_;
    Controller controller_;
    DeterministicRng rng_;
    TargetId current_;
    GazeSource current_source_ = GazeSource::Environment;
    std::int64_t deadline_ = 0;
    bool started_ = false;
    std::vector<ActiveSource> sources_;
    std::vector<PendingWord> pending_words_;
    std::vector<ActiveMove> moves_;
    std::vector<TargetId> addressees_;
    std::vector<int> draws_;
};

}  // namespace gazeplan
