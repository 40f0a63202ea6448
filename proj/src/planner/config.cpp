#include "gazeplan/planner/config.hpp"

#include "gazeplan/error.hpp"
#include "gazeplan/events/scenario_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace gazeplan {
namespace {

using Slot = std::variant<double*, std::int64_t*, int*>;

struct NamedField {
    const char* name;
    Slot slot;
};

std::vector<NamedField> fields_of(EngineConfig& c) {
    PlannerConfig& p = c.planner;
    ControllerConfig& k = c.controller;
    return {
        {"p_speaking_addressee", &p.p_speaking_addressee},
        {"p_listening", &p.p_listening},
        {"p_user_speaking", &p.p_user_speaking},
        {"p_yield", &p.p_yield},
        {"p_referential", &p.p_referential},
        {"p_moved", &p.p_moved},
        {"p_rja_verbal", &p.p_rja_verbal},
        {"pause_threshold_ms", &p.pause_threshold_ms},
        {"yield_lead_ms", &p.yield_lead_ms},
        {"hold_lead_ms", &p.hold_lead_ms},
        {"ref_lead_ms", &p.ref_lead_ms},
        {"moved_hold_ms", &p.moved_hold_ms},
        {"rja_delay_ms", &p.rja_delay_ms},
        {"rja_hold_ms", &p.rja_hold_ms},
        {"intimacy_min_ms", &p.intimacy_min_ms},
        {"intimacy_max_ms", &p.intimacy_max_ms},
        {"aversion_ms", &p.aversion_ms},
        {"neck_max_speed", &k.neck_max_speed},
        {"slack_base", &k.slack_base},
        {"slack_step", &k.slack_step},
        {"summary_window", &k.summary_window},
        {"rapid_shift_min_alternations", &k.rapid_shift_min_alternations},
        {"eye_max_yaw", &k.eye_max_yaw},
        {"eye_max_pitch", &k.eye_max_pitch},
    };
}

void check_priority(const char* name, double value) {
    if (!(value >= 0.0 && value <= 1.0)) throw ConfigError(name, "priority must be in [0, 1]");
}

void check_positive(const char* name, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) throw ConfigError(name, "must be > 0");
}

}  // namespace

void PlannerConfig::validate() const {
    check_priority("p_speaking_addressee", p_speaking_addressee);
    check_priority("p_listening", p_listening);
    check_priority("p_user_speaking", p_user_speaking);
    check_priority("p_yield", p_yield);
    check_priority("p_referential", p_referential);
    check_priority("p_moved", p_moved);
    check_priority("p_rja_verbal", p_rja_verbal);
    check_positive("pause_threshold_ms", static_cast<double>(pause_threshold_ms));
    check_positive("yield_lead_ms", static_cast<double>(yield_lead_ms));
    check_positive("hold_lead_ms", static_cast<double>(hold_lead_ms));
    check_positive("ref_lead_ms", static_cast<double>(ref_lead_ms));
    check_positive("moved_hold_ms", static_cast<double>(moved_hold_ms));
    check_positive("rja_delay_ms", static_cast<double>(rja_delay_ms));
    check_positive("rja_hold_ms", static_cast<double>(rja_hold_ms));
    check_positive("intimacy_min_ms", static_cast<double>(intimacy_min_ms));
    check_positive("intimacy_max_ms", static_cast<double>(intimacy_max_ms));
    check_positive("aversion_ms", static_cast<double>(aversion_ms));
    if (intimacy_min_ms > intimacy_max_ms) {
        throw ConfigError("intimacy_max_ms", "must be >= intimacy_min_ms");
    }
}

void ControllerConfig::validate() const {
    check_positive("neck_max_speed", neck_max_speed);
    check_positive("slack_base", slack_base);
    check_positive("slack_step", slack_step);
    check_positive("summary_window", summary_window);
    check_positive("rapid_shift_min_alternations", rapid_shift_min_alternations);
    check_positive("eye_max_yaw", eye_max_yaw);
    check_positive("eye_max_pitch", eye_max_pitch);
    if (summary_window > 300) throw ConfigError("summary_window", "must be <= 300 frames");
}

EngineConfig apply_config_overrides(const EngineConfig& base, const nlohmann::json& overrides) {
    if (!overrides.is_object()) throw ConfigError("config", "overrides must be a JSON object");
    EngineConfig result = base;
    auto fields = fields_of(result);
    for (const auto& [key, value] : overrides.items()) {
        const auto it = std::find_if(fields.begin(), fields.end(),
                                     [&](const NamedField& f) { return key == f.name; });
        if (it == fields.end()) throw ConfigError(key, "unknown configuration field");
        std::visit(
            [&](auto* slot) {
                using T = std::remove_pointer_t<decltype(slot)>;
                if constexpr (std::is_same_v<T, double>) {
                    if (!value.is_number()) throw ConfigError(key, "must be a number");
                    *slot = value.template get<double>();
                } else {
                    if (!value.is_number_integer()) throw ConfigError(key, "must be an integer");
                    const auto v = value.template get<std::int64_t>();
                    if constexpr (std::is_same_v<T, int>) {
                        if (v < -1000000 || v > 1000000) throw ConfigError(key, "out of range");
                    }
                    *slot = static_cast<T>(v);
                }
            },
            it->slot);
    }
    result.validate();
    return result;
}

EngineConfig load_config_file(std::string_view path, const EngineConfig& base) {
    std::ifstream in{std::string(path)};
    if (!in) throw ConfigError("config", "cannot open '" + std::string(path) + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return apply_config_overrides(base, parse_json_text(buffer.str()));
}

nlohmann::ordered_json config_to_json(const EngineConfig& config) {
    EngineConfig copy = config;
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& f : fields_of(copy)) {
        std::visit([&](auto* slot) { out[f.name] = *slot; }, f.slot);
    }
    return out;
}

}  // namespace gazeplan
