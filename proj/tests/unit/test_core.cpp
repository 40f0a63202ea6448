#include "gazeplan/core/gaze_plan.hpp"
#include "gazeplan/core/geometry.hpp"
#include "gazeplan/core/target_registry.hpp"
#include "gazeplan/error.hpp"
#include "gazeplan/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace gazeplan;

namespace {

const TargetId kEnv{"env"};
const TargetId kUser{"user"};
const TargetId kCard{"card"};

GazePlan plan_with(std::initializer_list<TargetId> ids) {
    GazePlan plan;
    for (const auto& id : ids) plan.add_target(id);
    return plan;
}

// Brute-force argmax over columns written independently of the library's
// implementation: ties prefer the previous choice, then the smallest id.
std::vector<TargetId> oracle_final_targets(const std::vector<TargetId>& ids,
                                           const std::vector<std::vector<double>>& values,
                                           const std::optional<TargetId>& previous, int frames) {
    std::vector<TargetId> out;
    std::optional<TargetId> prev = previous;
    for (int j = 0; j < frames; ++j) {
        double best = 0.0;
        for (std::size_t i = 0; i < ids.size(); ++i) best = std::max(best, values[i][static_cast<std::size_t>(j)]);
        TargetId chosen = kEnv;
        if (best > 0.0) {
            std::vector<TargetId> tied;
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (values[i][static_cast<std::size_t>(j)] == best) tied.push_back(ids[i]);
            }
            chosen = *std::min_element(tied.begin(), tied.end());
            if (prev && std::find(tied.begin(), tied.end(), *prev) != tied.end()) chosen = *prev;
        }
        out.push_back(chosen);
        prev = chosen;
    }
    return out;
}

}  // namespace

TEST(Priority, AcceptsUnitIntervalOnly) {
    EXPECT_DOUBLE_EQ(Priority(0.0).value(), 0.0);
    EXPECT_DOUBLE_EQ(Priority(1.0).value(), 1.0);
    EXPECT_THROW(Priority(-0.01), RangeError);
    EXPECT_THROW(Priority(1.01), RangeError);
    EXPECT_THROW(Priority(std::numeric_limits<double>::quiet_NaN()), RangeError);
}

TEST(GazePlan, WriteThenRead) {
    GazePlan plan = plan_with({kUser});
    plan.set_priority(kUser, {0, 15}, Priority(0.3));
    EXPECT_DOUBLE_EQ(plan.get(kUser, 7), 0.3);
    EXPECT_DOUBLE_EQ(plan.get(kUser, 15), 0.0);
    EXPECT_EQ(plan.horizon(), 15);
}

TEST(GazePlan, LastWriteWins) {
    GazePlan plan = plan_with({kCard});
    plan.set_priority(kCard, {5, 10}, Priority(0.9));
    plan.set_priority(kCard, {7, 8}, Priority(0.0));
    EXPECT_DOUBLE_EQ(plan.get(kCard, 7), 0.0);
    EXPECT_DOUBLE_EQ(plan.get(kCard, 6), 0.9);
    EXPECT_DOUBLE_EQ(plan.get(kCard, 8), 0.9);
}

TEST(GazePlan, WritesPastTheCapAreTruncated) {
    GazePlan plan = plan_with({kUser});
    EXPECT_NO_THROW(plan.set_priority(kUser, {0, 400}, Priority(0.5)));
    EXPECT_EQ(plan.horizon(), GazePlan::kMaxHorizon);
    EXPECT_DOUBLE_EQ(plan.get(kUser, 299), 0.5);
    EXPECT_DOUBLE_EQ(plan.get(kUser, 300), 0.0);
}

TEST(GazePlan, RejectsUnknownTargetsAndBadRanges) {
    GazePlan plan = plan_with({kUser});
    EXPECT_THROW(plan.set_priority(kCard, {0, 1}, Priority(0.5)), UnknownTargetError);
    EXPECT_THROW(plan.set_priority(kUser, {3, 3}, Priority(0.5)), RangeError);
    EXPECT_THROW(plan.set_priority(kUser, {-1, 3}, Priority(0.5)), RangeError);
    EXPECT_THROW(plan.get(kCard, 0), UnknownTargetError);
}

TEST(GazePlan, ShiftMovesEveryColumnLeft) {
    GazePlan plan = plan_with({kUser});
    plan.set_priority(kUser, {2, 5}, Priority(0.3));
    plan.shift();
    for (int j = 0; j < 10; ++j) EXPECT_DOUBLE_EQ(plan.get(kUser, j), (j >= 1 && j < 4) ? 0.3 : 0.0) << j;
}

TEST(GazePlan, ShiftOfEmptyPlanIsEmpty) {
    GazePlan plan = plan_with({kUser, kCard});
    plan.shift();
    EXPECT_TRUE(plan.empty());
    EXPECT_EQ(plan.horizon(), GazePlan::kMinHorizon);
}

TEST(GazePlan, HorizonNeverDropsBelowTen) {
    GazePlan plan = plan_with({kUser});
    plan.set_priority(kUser, {0, 12}, Priority(0.4));
    for (int i = 0; i < 20; ++i) {
        plan.shift();
        EXPECT_GE(plan.horizon(), GazePlan::kMinHorizon);
    }
    EXPECT_TRUE(plan.empty());
}

TEST(GazePlan, ShiftLinearityProperty) {
    DeterministicRng rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        GazePlan base = plan_with({kUser, kCard});
        for (int w = 0; w < 4; ++w) {
            const int a = static_cast<int>(rng.uniform(0, 30));
            const int len = 1 + static_cast<int>(rng.uniform(0, 20));
            base.set_priority(rng.coin() ? kUser : kCard, {a, a + len}, Priority(rng.uniform01()));
        }
        const int a = 1 + static_cast<int>(rng.uniform(0, 40));
        const int b = a + 1 + static_cast<int>(rng.uniform(0, 30));
        const Priority v(std::round(rng.uniform01() * 10) / 10);

        GazePlan lhs = base;
        lhs.set_priority(kUser, {a, b}, v);
        lhs.shift();
        GazePlan rhs = base;
        rhs.shift();
        rhs.set_priority(kUser, {a - 1, b - 1}, v);
        const int frames = std::max(lhs.horizon(), rhs.horizon());
        for (const auto& id : {kUser, kCard}) {
            for (int j = 0; j < frames; ++j) ASSERT_DOUBLE_EQ(lhs.get(id, j), rhs.get(id, j)) << trial;
        }
    }
}

TEST(GazePlan, ReadsStayInUnitInterval) {
    DeterministicRng rng(5);
    GazePlan plan = plan_with({kUser, kCard});
    for (int i = 0; i < 200; ++i) {
        const int a = static_cast<int>(rng.uniform(0, 100));
        plan.set_priority(rng.coin() ? kUser : kCard, {a, a + 5}, Priority(rng.uniform01()));
        if (i % 7 == 0) plan.shift();
    }
    for (const auto& id : plan.target_ids()) {
        for (double p : plan.row(id)) {
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
        }
    }
}

TEST(FinalTargets, AllZeroIsEnvironment) {
    const GazePlan plan = plan_with({kUser, kCard});
    EXPECT_EQ(final_targets(plan, kEnv), PlanSummary(10, kEnv));
}

TEST(FinalTargets, HigherPriorityWins) {
    GazePlan plan = plan_with({kUser, TargetId{"zebra"}});
    plan.set_priority(kUser, {0, 10}, Priority(0.3));
    plan.set_priority(TargetId{"zebra"}, {3, 4}, Priority(0.9));
    const auto summary = final_targets(plan, kEnv);
    EXPECT_EQ(summary[3], TargetId{"zebra"});
    EXPECT_EQ(summary[2], kUser);
    EXPECT_EQ(summary[4], kUser);
}

TEST(FinalTargets, TiesPreferThePreviousFrame) {
    const TargetId a{"user_a"};
    const TargetId b{"user_b"};
    GazePlan plan = plan_with({a, b});
    plan.set_priority(a, {1, 2}, Priority(0.5));
    plan.set_priority(a, {2, 3}, Priority(0.9));
    plan.set_priority(b, {2, 3}, Priority(0.9));
    EXPECT_EQ(final_targets(plan, kEnv)[2], a);

    GazePlan flipped = plan_with({a, b});
    flipped.set_priority(b, {1, 2}, Priority(0.5));
    flipped.set_priority(a, {2, 3}, Priority(0.9));
    flipped.set_priority(b, {2, 3}, Priority(0.9));
    EXPECT_EQ(final_targets(flipped, kEnv)[2], b);
}

TEST(FinalTargets, FrameZeroTieUsesPreviousTick) {
    const TargetId a{"a"};
    const TargetId b{"b"};
    GazePlan plan = plan_with({a, b});
    plan.set_priority(a, {0, 10}, Priority(0.6));
    plan.set_priority(b, {0, 10}, Priority(0.6));
    EXPECT_EQ(final_targets(plan, kEnv, b), PlanSummary(10, b));
    EXPECT_EQ(final_targets(plan, kEnv, std::nullopt), PlanSummary(10, a));
}

TEST(FinalTargets, MatchesBruteForceOracle) {
    DeterministicRng rng(2024);
    const double levels[] = {0.0, 0.0, 0.3, 0.4, 0.6, 0.7, 0.9, 1.0};
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform(0, 5));
        std::vector<TargetId> ids;
        for (int i = 0; i < n; ++i) ids.emplace_back("t" + std::to_string(i));
        GazePlan plan;
        std::vector<std::vector<double>> values(static_cast<std::size_t>(n), std::vector<double>(10, 0.0));
        for (int i = 0; i < n; ++i) {
            plan.add_target(ids[static_cast<std::size_t>(i)]);
            for (int j = 0; j < 10; ++j) {
                const double v = levels[static_cast<int>(rng.uniform(0, 8))];
                values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
                if (v > 0) plan.set_priority(ids[static_cast<std::size_t>(i)], {j, j + 1}, Priority(v));
            }
        }
        std::optional<TargetId> previous;
        if (rng.coin()) previous = ids[static_cast<std::size_t>(rng.uniform(0, n))];
        ASSERT_EQ(final_targets(plan, kEnv, previous), oracle_final_targets(ids, values, previous, 10)) << trial;
    }
}

TEST(Geometry, DirectionConvention) {
    const Direction ahead = direction_to({0, 0, 1});
    EXPECT_NEAR(ahead.yaw, 0.0, 1e-12);
    EXPECT_NEAR(ahead.pitch, 0.0, 1e-12);
    // x is to the robot's right, positive yaw is to its left.
    EXPECT_NEAR(direction_to({1, 0, 1}).yaw, -45.0, 1e-12);
    EXPECT_NEAR(direction_to({-1, 0, 1}).yaw, 45.0, 1e-12);
    EXPECT_NEAR(direction_to({1, 0, 1}).pitch, 0.0, 1e-12);
    EXPECT_NEAR(direction_to({0, 1, 1}).pitch, 45.0, 1e-12);
    EXPECT_NEAR(direction_to({0, 1, 1}).yaw, 0.0, 1e-12);
}

TEST(Geometry, DegeneratePositions) {
    EXPECT_THROW(direction_to({0, 0, 0}), DegeneratePositionError);
    EXPECT_THROW(direction_to({std::numeric_limits<double>::infinity(), 0, 1}), DegeneratePositionError);
}

TEST(Geometry, UnitVectorRoundTrip) {
    DeterministicRng rng(3);
    for (int i = 0; i < 200; ++i) {
        const Direction d{rng.uniform(-179, 179), rng.uniform(-89, 89)};
        const Direction back = direction_to(unit_vector(d));
        EXPECT_NEAR(back.yaw, d.yaw, 1e-9);
        EXPECT_NEAR(back.pitch, d.pitch, 1e-9);
    }
}

TEST(Geometry, AngularDistanceAndRotation) {
    EXPECT_NEAR(angular_distance({0, 0}, {90, 0}), 90.0, 1e-9);
    EXPECT_NEAR(angular_distance({10, 0}, {10, 0}), 0.0, 1e-9);
    EXPECT_NEAR(angular_distance({170, 0}, {-170, 0}), 20.0, 1e-9);
    const Direction r = rotate_toward({0, 0}, {60, 0}, 24.0);
    EXPECT_NEAR(r.yaw, 24.0, 1e-9);
    const Direction s = rotate_toward({0, 0}, {6, 0}, 24.0);
    EXPECT_NEAR(s.yaw, 6.0, 1e-9);
    const Direction m = midpoint({-20, 0}, {40, 0});
    EXPECT_NEAR(m.yaw, 10.0, 1e-9);
    EXPECT_NEAR(wrap_degrees(190.0), -170.0, 1e-12);
    EXPECT_NEAR(wrap_degrees(-180.0), -180.0, 1e-12);
}

TEST(Geometry, ComposeAndRelativeAreInverse) {
    const Direction head{170, 10};
    const Direction eye{20, -5};
    const Direction gaze = compose(head, eye);
    EXPECT_NEAR(gaze.yaw, -170.0, 1e-9);
    const Direction back = relative(gaze, head);
    EXPECT_NEAR(back.yaw, 20.0, 1e-9);
    EXPECT_NEAR(back.pitch, -5.0, 1e-9);
}

TEST(TargetRegistry, AddsEnvironmentAndValidates) {
    TargetRegistry reg({Target{kUser, TargetKind::User, {0, 0, 1}, "User", {}}});
    EXPECT_EQ(reg.all().size(), 2u);
    EXPECT_EQ(reg.at(reg.environment()).kind, TargetKind::Environment);
    EXPECT_THROW(reg.add(Target{kUser, TargetKind::User, {0, 0, 1}, "dup", {}}), ValidationError);
    EXPECT_THROW(reg.add(Target{kCard, TargetKind::TaskObject, {0, 0, -1}, "behind", {}}), ValidationError);
    EXPECT_THROW(reg.add(Target{kCard, TargetKind::TaskObject, {0, 0, 1}, "Card", {"Card"}}), ValidationError);
    EXPECT_THROW(reg.remove(TargetId{"ghost"}), UnknownTargetError);
    EXPECT_THROW(reg.remove(reg.environment()), KindError);
    reg.add(Target{kCard, TargetKind::TaskObject, {0.1, -0.2, 0.5}, "Card", {"card"}});
    EXPECT_EQ(reg.of_kind(TargetKind::TaskObject).size(), 1u);
    reg.remove(kCard);
    EXPECT_FALSE(reg.contains(kCard));
}

TEST(Rng, DeterministicStreams) {
    DeterministicRng a(derive_seed(42, 1));
    DeterministicRng b(derive_seed(42, 1));
    DeterministicRng c(derive_seed(42, 2));
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.uniform01();
        EXPECT_EQ(x, b.uniform01());
        EXPECT_GE(x, 0.0);
        EXPECT_LT(x, 1.0);
        differs = differs || x != c.uniform01();
    }
    EXPECT_TRUE(differs);
}
