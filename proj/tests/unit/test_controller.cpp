#include "gazeplan/controller/controller.hpp"
#include "gazeplan/core/geometry.hpp"
#include "gazeplan/error.hpp"
#include "gazeplan/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace gazeplan;

namespace {

const TargetId kEnv{"env"};
const TargetId kUser{"user"};
const TargetId kUser2{"user2"};
const TargetId kZebra{"zebra"};

// Positions chosen so the directions are easy to read off: user straight
// ahead, user2 40 degrees to the right, zebra 20 degrees left and level.
Vec3 at_yaw(double yaw_deg, double pitch_deg = 0.0) {
    return unit_vector(Direction{yaw_deg, pitch_deg});
}

TargetRegistry registry() {
    return TargetRegistry({Target{kUser, TargetKind::User, at_yaw(0), "User", {}},
                           Target{kUser2, TargetKind::User, at_yaw(-40), "User", {}},
                           Target{kZebra, TargetKind::TaskObject, at_yaw(20), "Zebra", {"zebra"}},
                           Target{kEnv, TargetKind::Environment, at_yaw(10, -5), "", {}}});
}

PlanSummary summary_of(std::initializer_list<const char*> ids) {
    PlanSummary s;
    for (const char* id : ids) s.emplace_back(id);
    return s;
}

void expect_direction(const Direction& got, const Direction& want, double tol = 1e-9) {
    EXPECT_NEAR(got.yaw, want.yaw, tol);
    EXPECT_NEAR(got.pitch, want.pitch, tol);
}

}  // namespace

TEST(Slack, TableMatchesFortyEightMinusSixPerFrame) {
    const double expected[] = {48, 42, 36, 30, 24, 18, 12, 6, 0, 0, 0};
    for (int f = 0; f <= 10; ++f) EXPECT_DOUBLE_EQ(slack_for(f), expected[f]) << f;
}

TEST(Slack, MonotoneInStepsOfZeroOrSix) {
    for (int f = 0; f < 10; ++f) {
        const double d = slack_for(f) - slack_for(f + 1);
        EXPECT_TRUE(d == 0.0 || d == 6.0) << f;
    }
}

TEST(SameTargetFreq, CountsFramesIncludingTheFirst) {
    EXPECT_EQ(same_target_freq(PlanSummary(10, kUser), kUser), 10);
    EXPECT_EQ(same_target_freq(PlanSummary(10, kEnv), kUser), 0);
    const auto glance = summary_of({"zebra", "zebra", "zebra", "zebra", "user", "user", "user", "user", "user", "user"});
    EXPECT_EQ(same_target_freq(glance, kZebra), 4);
    EXPECT_DOUBLE_EQ(slack_for(same_target_freq(glance, kZebra)), 24.0);
}

TEST(Alternations, CountsReturnsToEarlierTargets) {
    EXPECT_EQ(count_alternations(summary_of({"a", "a", "b", "b"})), 0);
    EXPECT_EQ(count_alternations(summary_of({"a", "b", "a"})), 1);
    EXPECT_EQ(count_alternations(summary_of({"a", "b", "a", "b"})), 2);
    EXPECT_EQ(count_alternations(summary_of({"a", "b", "c", "d"})), 0);
    EXPECT_EQ(next_differing_target(summary_of({"a", "a", "c"})), TargetId{"c"});
    EXPECT_FALSE(next_differing_target(summary_of({"a", "a"})).has_value());
}

TEST(HeadTarget, ZeroSlackAlignsFully) {
    const Controller c;
    const RobotPose pose{{-30, 0}, {0, 0}};
    const Direction gaze{15, 5};
    expect_direction(c.head_target(pose, gaze, 0.0, PlanSummary(10, kUser), registry()), gaze);
}

TEST(HeadTarget, HeadStaysWithinSlack) {
    const Controller c;
    const RobotPose pose{{0, 0}, {0, 0}};
    const Direction gaze{20, 0};
    expect_direction(c.head_target(pose, gaze, 48.0, PlanSummary(10, kZebra), registry()), pose.head);
}

TEST(HeadTarget, MovesJustEnoughOutsideSlack) {
    const Controller c;
    const RobotPose pose{{0, 0}, {0, 0}};
    const Direction gaze{40, 0};
    // Level arc: the head stops 30 degrees short of the gaze.
    expect_direction(c.head_target(pose, gaze, 30.0, PlanSummary(10, kZebra), registry()), Direction{10, 0}, 1e-9);
}

TEST(HeadTarget, RapidShiftsAimBetweenTheUsers) {
    const Controller c;
    const RobotPose pose{{0, 0}, {0, 0}};
    const auto summary = summary_of({"user", "user2", "user", "user2", "user", "user2", "user", "user2", "user", "user2"});
    const Direction gaze = direction_to(registry().at(kUser).position);
    expect_direction(c.head_target(pose, gaze, 18.0, summary, registry()), Direction{-20, 0}, 1e-9);
}

TEST(HeadTarget, SingleHandoffIsNotARapidShift) {
    const Controller c;
    const RobotPose pose{{0, 0}, {0, 0}};
    const auto summary = summary_of({"user", "user", "user", "user", "user", "user2", "user2", "user2", "user2", "user2"});
    expect_direction(c.head_target(pose, Direction{0, 0}, 18.0, summary, registry()), Direction{0, 0});
}

TEST(Step, NeckRateLimitAndEyeCompensation) {
    const Controller c;
    const StepResult r = c.step(RobotPose{{0, 0}, {0, 0}}, Direction{30, 0}, Direction{30, 0});
    // 120 deg/s * 0.2 s = 24 deg of head; the eyes cover the other 6.
    EXPECT_NEAR(r.pose.head.yaw, 24.0, 1e-9);
    EXPECT_NEAR(r.pose.eye_in_head.yaw, 6.0, 1e-9);
    expect_direction(r.pose.gaze(), Direction{30, 0});
    EXPECT_DOUBLE_EQ(r.gaze_error_deg, 0.0);
}

TEST(Step, CommandAtCurrentHeadOnlyRetargetsTheEyes) {
    const Controller c;
    const RobotPose pose{{10, 5}, {3, 0}};
    const StepResult r = c.step(pose, pose.head, Direction{25, -5});
    EXPECT_EQ(r.pose.head, pose.head);
    expect_direction(r.pose.eye_in_head, Direction{15, -10});
}

TEST(Step, GazeBeyondEyeRangeIsUnreachable) {
    const Controller c;
    const RobotPose pose{{0, 0}, {0, 0}};
    try {
        c.step(pose, pose.head, Direction{80, 0});
        FAIL() << "expected a reachability error";
    } catch (const ReachabilityError& e) {
        EXPECT_NEAR(e.residual_deg(), 30.0, 1e-9);
    }
    EXPECT_THROW(c.step(pose, pose.head, Direction{10, 0}, 0.0), RangeError);
}

TEST(Step, EyesClampWhileTheHeadCatchesUp) {
    const Controller c;
    // Reachable from the commanded head, but the neck needs two ticks.
    const StepResult r = c.step(RobotPose{{0, 0}, {0, 0}}, Direction{70, 0}, Direction{100, 0});
    EXPECT_NEAR(r.pose.head.yaw, 24.0, 1e-9);
    EXPECT_NEAR(r.pose.eye_in_head.yaw, 50.0, 1e-9);
    EXPECT_NEAR(r.gaze_error_deg, 26.0, 1e-9);
}

TEST(ControlTick, LongUserRunTurnsTheHead) {
    Controller c;
    GazePlan plan;
    plan.add_target(kUser2);
    plan.set_priority(kUser2, {0, 20}, Priority(0.4));
    GazeCommand cmd = c.control_tick(plan, registry(), 0);
    EXPECT_EQ(cmd.current_target, kUser2);
    EXPECT_DOUBLE_EQ(cmd.slack, 0.0);
    expect_direction(cmd.head_target, Direction{-40, 0}, 1e-9);
    EXPECT_NEAR(cmd.pose_after.head.yaw, -24.0, 1e-9);
    cmd = c.control_tick(plan, registry(), 1);
    EXPECT_NEAR(cmd.pose_after.head.yaw, -40.0, 1e-9);
}

TEST(ControlTick, BriefGlanceLeavesTheHead) {
    Controller c(ControllerConfig{}, RobotPose{{0, 0}, {0, 0}});
    GazePlan plan;
    plan.add_target(kUser);
    plan.add_target(kZebra);
    plan.set_priority(kUser, {0, 10}, Priority(0.6));
    plan.set_priority(kZebra, {0, 4}, Priority(0.7));
    const GazeCommand cmd = c.control_tick(plan, registry(), 0);
    EXPECT_EQ(cmd.current_target, kZebra);
    EXPECT_GE(cmd.slack, 24.0);
    // Zebra is 20 degrees off and within slack: eyes only.
    expect_direction(cmd.pose_after.head, Direction{0, 0});
    expect_direction(cmd.pose_after.gaze(), Direction{20, 0});
}

TEST(ControlTick, EmptyPlanLooksAtTheEnvironment) {
    Controller c;
    GazePlan plan;
    plan.add_target(kUser);
    const GazeCommand cmd = c.control_tick(plan, registry(), 0);
    EXPECT_EQ(cmd.current_target, kEnv);
    expect_direction(cmd.gaze_direction, direction_to(registry().at(kEnv).position));
}

TEST(ControllerProperty, GlanceEconomy) {
    // Any target held for at most 2 frames and within 36 degrees of the
    // current head never moves the head.
    DeterministicRng rng(17);
    for (int trial = 0; trial < 500; ++trial) {
        const double yaw = rng.uniform(-25, 25);
        const double pitch = rng.uniform(-20, 20);
        const Direction head{rng.uniform(-10, 10), rng.uniform(-5, 5)};
        const Direction target_dir{head.yaw + yaw, head.pitch + pitch};
        if (angular_distance(head, target_dir) > 36.0) continue;
        const TargetRegistry targets({Target{kUser, TargetKind::User, unit_vector(head), "", {}},
                                      Target{kZebra, TargetKind::TaskObject, unit_vector(target_dir), "", {}}});
        const int frames = 1 + static_cast<int>(rng.uniform01() * 2);
        PlanSummary summary(static_cast<std::size_t>(frames), kZebra);
        summary.resize(10, kUser);
        Controller c(ControllerConfig{}, RobotPose{head, {0, 0}});
        const GazeCommand cmd = c.command_from_summary(summary, targets, 0);
        EXPECT_GE(cmd.slack, 36.0);
        expect_direction(cmd.pose_after.head, head, 1e-9);
    }
}

TEST(ControllerProperty, HeadSpeedAndGazeContinuityOnRandomPlans) {
    DeterministicRng rng(99);
    const TargetRegistry targets = registry();
    const std::vector<TargetId> ids{kUser, kUser2, kZebra};
    Controller c;
    for (int tick = 0; tick < 1000; ++tick) {
        GazePlan plan;
        for (const auto& id : ids) {
            plan.add_target(id);
            const int begin = static_cast<int>(rng.uniform01() * 10);
            const int end = begin + 1 + static_cast<int>(rng.uniform01() * 12);
            plan.set_priority(id, {begin, end}, Priority(std::round(rng.uniform01() * 10) / 10));
        }
        const RobotPose before = c.pose();
        const GazeCommand cmd = c.control_tick(plan, targets, tick);
        EXPECT_LE(angular_distance(before.head, cmd.pose_after.head), 24.0 + 1e-9);
        if (cmd.gaze_error_deg == 0.0) {
            EXPECT_NEAR(angular_distance(cmd.pose_after.gaze(), direction_to(targets.at(cmd.current_target).position)),
                        0.0, 1e-9);
        }
        EXPECT_GE(cmd.slack, 0.0);
        EXPECT_LE(cmd.slack, 48.0);
        EXPECT_LE(std::abs(cmd.pose_after.eye_in_head.yaw), 50.0 + 1e-9);
        EXPECT_LE(std::abs(cmd.pose_after.eye_in_head.pitch), 40.0 + 1e-9);
    }
}

TEST(ControllerProperty, CurrentTargetMatchesAnIndependentArgmax) {
    DeterministicRng rng(123);
    const TargetRegistry targets = registry();
    const std::vector<TargetId> ids{kUser, kUser2, kZebra};
    for (int trial = 0; trial < 1000; ++trial) {
        GazePlan plan;
        double best = 0.0;
        for (const auto& id : ids) {
            plan.add_target(id);
            const double p = std::round(rng.uniform01() * 4) / 4;
            plan.set_priority(id, {0, 10}, Priority(p));
            best = std::max(best, p);
        }
        // Fresh controller: no previous target, so ties go to the smallest id.
        TargetId expected = kEnv;
        if (best > 0.0) {
            for (auto it = ids.rbegin(); it != ids.rend(); ++it) {
                if (plan.get(*it, 0) == best && (expected == kEnv || *it < expected)) expected = *it;
            }
        }
        Controller c;
        EXPECT_EQ(c.control_tick(plan, targets, 0).current_target, expected);
    }
}

TEST(Fixate, HeadFullyAligned) {
    Controller c(ControllerConfig{}, RobotPose{{0, 0}, {0, 0}});
    const GazeCommand cmd = c.fixate(kZebra, registry(), 0);
    EXPECT_DOUBLE_EQ(cmd.slack, 0.0);
    expect_direction(cmd.head_target, Direction{20, 0}, 1e-9);
    EXPECT_NEAR(cmd.pose_after.head.yaw, 20.0, 1e-9);
}

TEST(ControllerConfig, RejectsNonPositiveValues) {
    ControllerConfig bad;
    bad.neck_max_speed = 0;
    EXPECT_THROW(Controller{bad}, ConfigError);
}
