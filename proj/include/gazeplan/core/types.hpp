#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gazeplan {

/// Plan resolution. Every frame of the gaze plan and every engine tick is
/// this long.
inline constexpr int kFrameMs = 200;

/// Number of frames the controller summarizes (two seconds).
inline constexpr int kSummaryFrames = 10;

class TargetId {
public:
    TargetId() = default;
    explicit TargetId(std::string value) : value_(std::move(value)) {}

    const std::string& str() const noexcept { return value_; }
    bool empty() const noexcept { return value_.empty(); }

    friend auto operator<=>(const TargetId&, const TargetId&) = default;
    friend bool operator==(const TargetId&, const TargetId&) = default;

private:
    std::string value_;
};

enum class TargetKind : std::uint8_t { User, TaskObject, Environment };

std::string_view to_string(TargetKind kind) noexcept;
std::optional<TargetKind> target_kind_from_string(std::string_view text) noexcept;

/// Meters, robot-head-centered: x right, y up, z forward.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

struct Target {
    TargetId id;
    TargetKind kind = TargetKind::User;
    Vec3 position;
    std::string label;
    std::vector<std::string> aliases;

    friend bool operator==(const Target&, const Target&) = default;
};

/// Degrees. Positive yaw turns toward the robot's left, positive pitch up.
struct Direction {
    double yaw = 0.0;
    double pitch = 0.0;

    friend bool operator==(const Direction&, const Direction&) = default;
};

/// A priority score in [0, 1]. Construction outside that range throws
/// RangeError.
class Priority {
public:
    constexpr Priority() = default;
    explicit Priority(double value);

    constexpr double value() const noexcept { return value_; }

    friend constexpr auto operator<=>(const Priority&, const Priority&) = default;

private:
    double value_ = 0.0;
};

}  // namespace gazeplan

template <>
struct std::hash<gazeplan::TargetId> {
    std::size_t operator()(const gazeplan::TargetId& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
