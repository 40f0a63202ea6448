#pragma once

#include "gazeplan/baseline/reactive.hpp"
#include "gazeplan/controller/controller.hpp"
#include "gazeplan/planner/config.hpp"
#include "gazeplan/planner/planner.hpp"
#include "gazeplan/sim/trace.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gazeplan {

struct EngineTick {
    TraceRecord record;
    /// First summary-window frames of every plan row before the shift
    /// (planned system only).
    std::map<TargetId, std::vector<double>> plan_columns;
    int applied_events = 0;
};

/// Runs one system (planned or reactive) tick by tick.
class Engine {
public:
    Engine(std::vector<Target> targets, EngineConfig config, std::uint64_t seed, SystemKind system);

    /// Execute the next tick with the events whose onset falls inside it.
    EngineTick tick(const std::vector<TickEvent>& events);

    std::int64_t next_tick() const noexcept { return next_tick_; }
    SystemKind system() const noexcept { return system_; }
    const EngineConfig& config() const noexcept { return config_; }
    /// Validated replacement; takes effect from the next tick.
    void set_config(const EngineConfig& config);
    /// Live targets (including the environment anchor).
    const TargetRegistry& targets() const noexcept;

    const Planner* planner() const noexcept { return planner_.get(); }
    const ReactiveGaze* reactive() const noexcept { return reactive_.get(); }

private:
    struct InProgress {
        std::string tag;
        std::int64_t begin_ms = 0;
        std::int64_t end_ms = 0;
    };

    void note_events(const std::vector<TickEvent>& events, std::int64_t now);
    std::vector<std::string> active_tags(std::int64_t now);
    std::vector<SpokenReference> due_references(std::int64_t now);
    EngineTick planned_tick(const std::vector<TickEvent>& events);
    EngineTick reactive_tick(const std::vector<TickEvent>& events);
    void fill_pose(TraceRecord& record, const GazeCommand& command) const;

    EngineConfig config_;
    SystemKind system_;
    std::int64_t next_tick_ = 0;
    std::unique_ptr<Planner> planner_;
    std::unique_ptr<Controller> controller_;
    std::unique_ptr<ReactiveGaze> reactive_;
    std::vector<InProgress> in_progress_;
    std::vector<SpokenReference> pending_references_;
};

}  // namespace gazeplan
