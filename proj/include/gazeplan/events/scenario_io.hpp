#pragma once

#include "gazeplan/core/target_registry.hpp"
#include "gazeplan/events/events.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>

namespace gazeplan {

/// Parse and validate a scenario document (UTF-8 JSON). Syntax errors throw
/// ParseError with line/column; schema or invariant violations throw
/// ValidationError naming the timeline index. The returned scenario always
/// contains exactly one environment target, and robot events with no
/// addressees are expanded to every user alive at that time.
Scenario parse_scenario(std::string_view bytes);

/// Canonical JSON text for a scenario; parse_scenario(serialize_scenario(s))
/// reproduces `s`.
std::string serialize_scenario(const Scenario& scenario);

/// Check timeline ordering and referential integrity, filling default
/// addressees in place.
void validate_scenario(Scenario& scenario);

/// Check one event against the live targets; fills default addressees.
/// Throws ValidationError (index npos), UnknownTargetError or KindError.
void validate_event(Event& event, const TargetRegistry& registry);

nlohmann::ordered_json target_to_json(const Target& target);
Target target_from_json(const nlohmann::json& j);

/// Event <-> {"type": ..., fields...}. from_json rejects unknown fields;
/// `allow_t_ms` lets a timeline entry carry its "t_ms" key.
nlohmann::ordered_json event_to_json(const Event& event);
Event event_from_json(const nlohmann::json& j, bool allow_t_ms = false);

/// Parse JSON text, converting nlohmann parse errors into ParseError.
nlohmann::json parse_json_text(std::string_view bytes);

}  // namespace gazeplan
