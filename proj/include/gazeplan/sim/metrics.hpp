#pragma once

#include "gazeplan/sim/trace.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gazeplan {

inline constexpr int kMetricsSchemaVersion = 1;

struct FixationStats {
    int count = 0;
    double mean_ms = 0.0;
    double max_ms = 0.0;

    friend bool operator==(const FixationStats&, const FixationStats&) = default;
};

struct ReferenceLead {
    TargetId target;
    std::int64_t word_t_ms = 0;
    /// Word start minus the start of the fixation on the referent that is
    /// current when the word starts; empty if the referent is not current.
    std::optional<std::int64_t> lead_ms;

    friend bool operator==(const ReferenceLead&, const ReferenceLead&) = default;
};

struct MetricsReport {
    std::int64_t tick_count = 0;
    int gaze_shift_count = 0;
    double total_head_rotation_deg = 0.0;
    std::map<std::string, FixationStats> fixation_by_kind;  // key: target kind name
    std::map<std::string, double> time_share;               // key: target id
    int aversion_episode_count = 0;
    double aversion_mean_ms = 0.0;
    std::vector<ReferenceLead> referential_leads;
    /// Longest run of consecutive ticks on one user, in ticks.
    int max_user_run_ticks = 0;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Throws EmptyInputError for an empty trace.
MetricsReport compute_metrics(const std::vector<TraceRecord>& trace);

nlohmann::ordered_json metrics_to_json(const MetricsReport& report);

/// {"schema_version": 1, "planned": {...}, "reactive": {...}}
nlohmann::ordered_json compare_to_json(const MetricsReport& planned, const MetricsReport& reactive);

}  // namespace gazeplan
