#pragma once

#include "gazeplan/core/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace gazeplan {

/// One word with millisecond offsets from the utterance (or speech) onset.
struct WordTiming {
    std::string text;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;

    friend bool operator==(const WordTiming&, const WordTiming&) = default;
};

struct RobotSpeakingEvent {
    std::string utterance;
    std::vector<WordTiming> words;
    bool yielding = false;
    std::vector<TargetId> addressees;

    std::int64_t duration_ms() const noexcept { return words.empty() ? 0 : words.back().end_ms; }
    friend bool operator==(const RobotSpeakingEvent&, const RobotSpeakingEvent&) = default;
};

struct RobotListeningEvent {
    std::vector<TargetId> addressees;
    std::int64_t duration_ms = 0;

    friend bool operator==(const RobotListeningEvent&, const RobotListeningEvent&) = default;
};

struct UserSpeakingEvent {
    TargetId speaker;
    std::int64_t duration_ms = 0;
    std::vector<WordTiming> recognized_words;

    friend bool operator==(const UserSpeakingEvent&, const UserSpeakingEvent&) = default;
};

struct Waypoint {
    std::int64_t offset_ms = 0;
    Vec3 position;

    friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct TargetMovedEvent {
    TargetId target;
    std::vector<Waypoint> waypoints;

    std::int64_t duration_ms() const noexcept {
        return waypoints.empty() ? 0 : waypoints.back().offset_ms;
    }
    friend bool operator==(const TargetMovedEvent&, const TargetMovedEvent&) = default;
};

enum class LifecycleAction : std::uint8_t { Add, Remove };

struct TargetLifecycleEvent {
    LifecycleAction action = LifecycleAction::Add;
    Target target;

    friend bool operator==(const TargetLifecycleEvent&, const TargetLifecycleEvent&) = default;
};

using Event = std::variant<RobotSpeakingEvent, RobotListeningEvent, UserSpeakingEvent,
                           TargetMovedEvent, TargetLifecycleEvent>;

struct TimedEvent {
    std::int64_t t_ms = 0;
    Event event;

    friend bool operator==(const TimedEvent&, const TimedEvent&) = default;
};

struct Scenario {
    std::uint64_t seed = 0;
    std::vector<Target> targets;
    std::vector<TimedEvent> timeline;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Wire tag of an event ("robot_speaking", "target_add", ...).
std::string_view event_tag(const Event& event) noexcept;

/// How long the event stays in progress after its onset (0 for lifecycle
/// events).
std::int64_t event_duration_ms(const Event& event) noexcept;

/// Linear interpolation along a drag trajectory at `t_ms` after its onset;
/// clamps to the first and last waypoint.
Vec3 position_along(const std::vector<Waypoint>& waypoints, std::int64_t t_ms);

}  // namespace gazeplan
