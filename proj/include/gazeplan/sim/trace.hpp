#pragma once

#include "gazeplan/core/gaze_plan.hpp"
#include "gazeplan/planner/planner.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazeplan {

inline constexpr int kTraceSchemaVersion = 1;

enum class SystemKind : std::uint8_t { Planned, Reactive };

std::string_view to_string(SystemKind system) noexcept;
std::optional<SystemKind> system_from_string(std::string_view text) noexcept;

/// One executed tick.
struct TraceRecord {
    std::int64_t tick_index = 0;
    std::int64_t t_ms = 0;
    SystemKind system = SystemKind::Planned;
    TargetId current_target;
    TargetKind current_kind = TargetKind::Environment;
    double slack = 0.0;
    Direction gaze_direction;
    Direction head_direction;
    Direction eye_in_head;
    double gaze_error_deg = 0.0;
    std::optional<PlanSummary> plan_summary;  // planned system only
    std::vector<std::string> active_events;   // tags of events in progress
    std::vector<TargetId> aversion;           // users averted from by intimacy regulation
    std::vector<SpokenReference> references;  // robot-spoken reference words starting this tick
    std::vector<std::string> errors;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

nlohmann::ordered_json record_to_json(const TraceRecord& record);
TraceRecord record_from_json(const nlohmann::json& j);

/// One JSON object per line, newline terminated.
std::string trace_to_jsonl(const std::vector<TraceRecord>& records);
std::vector<TraceRecord> parse_trace_jsonl(std::string_view text);

struct VerifyResult {
    bool ok = true;
    std::optional<std::int64_t> first_mismatch_tick;
    std::string message;
};

/// Record-by-record comparison of two traces.
VerifyResult verify_traces(std::string_view trace_text, std::string_view golden_text);

}  // namespace gazeplan
