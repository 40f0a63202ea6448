#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string_view>

namespace gazeplan {

/// Priorities and timings used by the planner rules. Durations in ms.
struct PlannerConfig {
    double p_speaking_addressee = 0.3;
    double p_listening = 0.4;
    double p_user_speaking = 0.6;
    double p_yield = 0.9;
    double p_referential = 0.9;
    double p_moved = 1.0;
    double p_rja_verbal = 0.7;
    std::int64_t pause_threshold_ms = 800;
    std::int64_t yield_lead_ms = 1000;
    std::int64_t hold_lead_ms = 2000;
    std::int64_t ref_lead_ms = 1000;
    std::int64_t moved_hold_ms = 2000;
    std::int64_t rja_delay_ms = 200;
    std::int64_t rja_hold_ms = 800;
    std::int64_t intimacy_min_ms = 3000;
    std::int64_t intimacy_max_ms = 5000;
    std::int64_t aversion_ms = 1000;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;

    friend bool operator==(const PlannerConfig&, const PlannerConfig&) = default;
};

struct ControllerConfig {
    double neck_max_speed = 120.0;  // deg/s
    double slack_base = 48.0;
    double slack_step = 6.0;
    int summary_window = 10;
    int rapid_shift_min_alternations = 2;
    double eye_max_yaw = 50.0;
    double eye_max_pitch = 40.0;

    void validate() const;

    friend bool operator==(const ControllerConfig&, const ControllerConfig&) = default;
};

/// Planner and controller parameters addressed through one flat namespace of
/// field names, as used by config files and live updates.
struct EngineConfig {
    PlannerConfig planner;
    ControllerConfig controller;

    void validate() const {
        planner.validate();
        controller.validate();
    }

    friend bool operator==(const EngineConfig&, const EngineConfig&) = default;
};

/// Apply a flat {"field": value} object on top of `base`. Unknown keys,
/// wrong types and out-of-range results throw ConfigError naming the field;
/// `base` is returned unchanged semantics-wise (the result is a copy).
EngineConfig apply_config_overrides(const EngineConfig& base, const nlohmann::json& overrides);

/// Read a config override file (flat JSON object).
EngineConfig load_config_file(std::string_view path, const EngineConfig& base = {});

nlohmann::ordered_json config_to_json(const EngineConfig& config);

}  // namespace gazeplan
