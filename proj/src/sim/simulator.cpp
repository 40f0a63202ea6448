#include "gazeplan/sim/simulator.hpp"

#include "gazeplan/sim/engine.hpp"

#include <algorithm>

namespace gazeplan {

std::map<std::int64_t, std::vector<TickEvent>> schedule_events(const Scenario& scenario) {
    std::map<std::int64_t, std::vector<TickEvent>> ticks;
    for (const auto& te : scenario.timeline) {
        const std::int64_t tick = te.t_ms / kFrameMs;
        ticks[tick].push_back(TickEvent{te.t_ms - tick * kFrameMs, te.event});
    }
    return ticks;
}

std::int64_t scenario_tick_count(const Scenario& scenario) noexcept {
    std::int64_t end_ms = 0;
    for (const auto& te : scenario.timeline) {
        end_ms = std::max(end_ms, te.t_ms + event_duration_ms(te.event));
    }
    const std::int64_t total = end_ms + kTrailingMs;
    return (total + kFrameMs - 1) / kFrameMs;
}

std::vector<TraceRecord> run_scenario(const Scenario& scenario, SystemKind system, const EngineConfig& config,
                                      std::optional<std::uint64_t> seed) {
    Engine engine(scenario.targets, config, seed.value_or(scenario.seed), system);
    const auto scheduled = schedule_events(scenario);
    const std::int64_t count = scenario_tick_count(scenario);
    const std::vector<TickEvent> none;
    std::vector<TraceRecord> trace;
    trace.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
        const auto it = scheduled.find(k);
        trace.push_back(engine.tick(it == scheduled.end() ? none : it->second).record);
    }
    return trace;
}

}  // namespace gazeplan
