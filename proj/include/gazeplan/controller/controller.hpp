#pragma once

#include "gazeplan/core/gaze_plan.hpp"
#include "gazeplan/core/target_registry.hpp"
#include "gazeplan/planner/config.hpp"

#include <cstdint>
#include <optional>

namespace gazeplan {

struct RobotPose {
    Direction head;         // neck orientation
    Direction eye_in_head;  // eyes relative to the head

    Direction gaze() const noexcept;
    friend bool operator==(const RobotPose&, const RobotPose&) = default;
};

struct GazeCommand {
    std::int64_t tick_index = 0;
    TargetId current_target;
    Direction gaze_direction;
    Direction head_target;
    double slack = 0.0;
    RobotPose pose_after;
    /// Angle between the commanded gaze and the composed gaze after the step;
    /// nonzero only when the eyes hit their limits while the head catches up.
    double gaze_error_deg = 0.0;
    PlanSummary summary;
};

struct StepResult {
    RobotPose pose;
    double gaze_error_deg = 0.0;
};

/// Frames j in [0, summary.size()) whose final target is `target`.
int same_target_freq(const PlanSummary& summary, const TargetId& target) noexcept;

/// max(base - freq * step, 0); defaults reproduce 48 - 6 * freq.
double slack_for(int freq, double base = 48.0, double step = 6.0) noexcept;

/// Number of times the summary returns to a target it already showed earlier
/// in the window (A B A counts one, A B A B counts two).
int count_alternations(const PlanSummary& summary) noexcept;

/// First summary entry that differs from entry 0, if any.
std::optional<TargetId> next_differing_target(const PlanSummary& summary);

/// Gaze controller: turns the plan summary into eye and head commands.
class Controller {
public:
    explicit Controller(ControllerConfig config = {}, RobotPose initial = {});

    /// Head direction for this tick: angular midpoint of the current and the
    /// next target during rapid shifts, otherwise hold the head while it is
    /// within `slack` of the gaze, else the point `slack` degrees short of
    /// the gaze along the great circle from the head.
    Direction head_target(const RobotPose& pose, const Direction& gaze, double slack,
                          const PlanSummary& summary, const TargetRegistry& targets) const;

    /// Eyes jump to `gaze`; the head turns toward `cmd_head` at most
    /// neck_max_speed * dt; eyes counter-rotate and are clamped to their
    /// limits. Throws ReachabilityError if `gaze` is out of eye range even
    /// from `cmd_head`.
    StepResult step(const RobotPose& pose, const Direction& cmd_head, const Direction& gaze,
                    double dt_s = 0.2) const;

    /// Pull `cmd_head` toward `gaze` just enough that the eyes can reach the
    /// gaze from it.
    Direction reachable_head(const Direction& cmd_head, const Direction& gaze) const noexcept;

    /// Planned-system controller tick: summarize, pick T_c, compute slack and
    /// head target, and move the robot.
    GazeCommand control_tick(const GazePlan& plan, const TargetRegistry& targets,
                             std::int64_t tick_index = 0);

    /// Same as control_tick from an already computed summary.
    GazeCommand command_from_summary(const PlanSummary& summary, const TargetRegistry& targets,
                                     std::int64_t tick_index);

    /// Fixation command with the head fully aligned (slack 0), used by the
    /// reactive baseline.
    GazeCommand fixate(const TargetId& target, const TargetRegistry& targets, std::int64_t tick_index);

    const RobotPose& pose() const noexcept { return pose_; }
    const std::optional<TargetId>& previous_target() const noexcept { return previous_; }
    const ControllerConfig& config() const noexcept { return config_; }
    void set_config(const ControllerConfig& config);

private:
    GazeCommand execute(const TargetId& target, const Direction& gaze, const Direction& cmd_head,
                        double slack, std::int64_t tick_index);

    ControllerConfig config_;
    RobotPose pose_;
    std::optional<TargetId> previous_;
};

}  // namespace gazeplan
