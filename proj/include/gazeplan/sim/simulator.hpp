#pragma once

#include "gazeplan/events/events.hpp"
#include "gazeplan/planner/config.hpp"
#include "gazeplan/sim/trace.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace gazeplan {

/// Quiet time simulated after the last event ends.
inline constexpr std::int64_t kTrailingMs = 2000;

/// Timeline events grouped by the tick their onset falls in, with onsets
/// relative to the tick start.
std::map<std::int64_t, std::vector<TickEvent>> schedule_events(const Scenario& scenario);

/// Ticks needed to cover every event plus the trailing quiet time.
std::int64_t scenario_tick_count(const Scenario& scenario) noexcept;

/// Run a scenario through one system. `seed` overrides the scenario seed.
std::vector<TraceRecord> run_scenario(const Scenario& scenario, SystemKind system,
                                      const EngineConfig& config = {},
                                      std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace gazeplan
