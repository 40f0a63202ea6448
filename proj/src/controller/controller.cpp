#include "gazeplan/controller/controller.hpp"

#include "gazeplan/core/geometry.hpp"
#include "gazeplan/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace gazeplan {
namespace {

constexpr double kLimitEpsilon = 1e-9;

Direction clamp_eyes(const Direction& eye, double max_yaw, double max_pitch) noexcept {
    return Direction{std::clamp(eye.yaw, -max_yaw, max_yaw), std::clamp(eye.pitch, -max_pitch, max_pitch)};
}

bool within_limits(const Direction& eye, double max_yaw, double max_pitch) noexcept {
    return std::abs(eye.yaw) <= max_yaw + kLimitEpsilon && std::abs(eye.pitch) <= max_pitch + kLimitEpsilon;
}

}  // namespace

Direction RobotPose::gaze() const noexcept { return compose(head, eye_in_head); }

int same_target_freq(const PlanSummary& summary, const TargetId& target) noexcept {
    return static_cast<int>(std::count(summary.begin(), summary.end(), target));
}

double slack_for(int freq, double base, double step) noexcept {
    return std::max(base - static_cast<double>(freq) * step, 0.0);
}

int count_alternations(const PlanSummary& summary) noexcept {
    int alternations = 0;
    for (std::size_t j = 1; j < summary.size(); ++j) {
        if (summary[j] == summary[j - 1]) continue;
        if (std::find(summary.begin(), summary.begin() + static_cast<std::ptrdiff_t>(j), summary[j]) !=
            summary.begin() + static_cast<std::ptrdiff_t>(j)) {
            ++alternations;
        }
    }
    return alternations;
}

std::optional<TargetId> next_differing_target(const PlanSummary& summary) {
    for (std::size_t j = 1; j < summary.size(); ++j) {
        if (summary[j] != summary[0]) return summary[j];
    }
    return std::nullopt;
}

Controller::Controller(ControllerConfig config, RobotPose initial) : config_(config), pose_(initial) {
    config_.validate();
}

void Controller::set_config(const ControllerConfig& config) {
    config.validate();
    config_ = config;
}

Direction Controller::head_target(const RobotPose& pose, const Direction& gaze, double slack,
                                  const PlanSummary& summary, const TargetRegistry& targets) const {
    if (count_alternations(summary) >= config_.rapid_shift_min_alternations) {
        const std::set<TargetId> distinct(summary.begin(), summary.end());
        const auto next = next_differing_target(summary);
        if (distinct.size() >= 2 && next) {
            if (const Target* other = targets.find(*next)) {
                return midpoint(gaze, direction_to(other->position));
            }
        }
    }
    const double distance = angular_distance(pose.head, gaze);
    if (distance <= slack) return pose.head;
    return slerp(gaze, pose.head, slack / distance);
}

Direction Controller::reachable_head(const Direction& cmd_head, const Direction& gaze) const noexcept {
    const Direction eye = relative(gaze, cmd_head);
    if (within_limits(eye, config_.eye_max_yaw, config_.eye_max_pitch)) return cmd_head;
    const Direction clamped = clamp_eyes(eye, config_.eye_max_yaw, config_.eye_max_pitch);
    return relative(gaze, clamped);
}

StepResult Controller::step(const RobotPose& pose, const Direction& cmd_head, const Direction& gaze,
                            double dt_s) const {
    if (!(dt_s > 0.0)) throw RangeError("step needs dt > 0");
    const Direction eye_at_target = relative(gaze, cmd_head);
    if (!within_limits(eye_at_target, config_.eye_max_yaw, config_.eye_max_pitch)) {
        const Direction reached =
            compose(cmd_head, clamp_eyes(eye_at_target, config_.eye_max_yaw, config_.eye_max_pitch));
        throw ReachabilityError(angular_distance(gaze, reached));
    }

    StepResult result;
    result.pose.head = rotate_toward(pose.head, cmd_head, config_.neck_max_speed * dt_s);
    const Direction eye = relative(gaze, result.pose.head);
    if (within_limits(eye, config_.eye_max_yaw, config_.eye_max_pitch)) {
        result.pose.eye_in_head = eye;
    } else {
        result.pose.eye_in_head = clamp_eyes(eye, config_.eye_max_yaw, config_.eye_max_pitch);
        result.gaze_error_deg = angular_distance(gaze, result.pose.gaze());
    }
    return result;
}

GazeCommand Controller::execute(const TargetId& target, const Direction& gaze, const Direction& cmd_head,
                                double slack, std::int64_t tick_index) {
    const StepResult stepped = step(pose_, cmd_head, gaze);
    GazeCommand command;
    command.tick_index = tick_index;
    command.current_target = target;
    command.gaze_direction = gaze;
    command.head_target = cmd_head;
    command.slack = slack;
    command.pose_after = stepped.pose;
    command.gaze_error_deg = stepped.gaze_error_deg;
    pose_ = stepped.pose;
    previous_ = target;
    return command;
}

GazeCommand Controller::command_from_summary(const PlanSummary& summary, const TargetRegistry& targets,
                                             std::int64_t tick_index) {
    if (summary.empty()) throw EmptyInputError("plan summary is empty");
    const TargetId& current = summary.front();
    const Direction gaze = direction_to(targets.at(current).position);
    const double slack =
        slack_for(same_target_freq(summary, current), config_.slack_base, config_.slack_step);
    const Direction head = reachable_head(head_target(pose_, gaze, slack, summary, targets), gaze);
    GazeCommand command = execute(current, gaze, head, slack, tick_index);
    command.summary = summary;
    return command;
}

GazeCommand Controller::control_tick(const GazePlan& plan, const TargetRegistry& targets,
                                     std::int64_t tick_index) {
    const PlanSummary summary =
        final_targets_over(plan, targets.environment(), previous_, config_.summary_window);
    return command_from_summary(summary, targets, tick_index);
}

GazeCommand Controller::fixate(const TargetId& target, const TargetRegistry& targets,
                               std::int64_t tick_index) {
    const Direction gaze = direction_to(targets.at(target).position);
    return execute(target, gaze, gaze, 0.0, tick_index);
}

}  // namespace gazeplan
