#pragma once

#include "gazeplan/core/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace gazeplan {

/// Half-open frame range [begin, end).
struct FrameRange {
    int begin = 0;
    int end = 0;

    int size() const noexcept { return end > begin ? end - begin : 0; }
    bool empty() const noexcept { return end <= begin; }
    friend bool operator==(const FrameRange&, const FrameRange&) = default;
};

/// Final target per frame for the summary window (frame 0 first).
using PlanSummary = std::vector<TargetId>;

/// Rolling matrix of priorities, one row per registered target and one
/// column per future 200 ms frame. Frame 0 is the step about to execute.
/// Unwritten cells read 0.
class GazePlan {
public:
    static constexpr int kMinHorizon = kSummaryFrames;
    static constexpr int kMaxHorizon = 300;

    GazePlan() = default;

    void add_target(const TargetId& id);
    void remove_target(const TargetId& id);
    bool has_target(const TargetId& id) const noexcept;
    std::vector<TargetId> target_ids() const;

    int horizon() const noexcept { return horizon_; }

    /// Overwrite [frames.begin, frames.end) for `id` with `p`. Frames past
    /// kMaxHorizon are dropped. Throws UnknownTargetError or RangeError.
    void set_priority(const TargetId& id, FrameRange frames, Priority p);

    double get(const TargetId& id, int frame) const;

    /// Row of `id` covering frames [0, horizon()).
    std::span<const double> row(const TargetId& id) const;

    /// P[i][j] <- P[i][j+1]; the horizon shrinks by one but never below
    /// kMinHorizon.
    void shift();

    /// True when every cell of every row is zero.
    bool empty() const noexcept;

    friend bool operator==(const GazePlan&, const GazePlan&) = default;

private:
    std::map<TargetId, std::vector<double>> rows_;
    int horizon_ = kMinHorizon;
};

/// Per-frame argmax over `frame_count` frames (the final target per frame). A column whose
/// maximum is 0 resolves to `environment`. Ties at a nonzero maximum prefer
/// the target chosen for the previous frame (`previous` for frame 0), then
/// the lexicographically smallest id.
std::vector<TargetId> final_targets_over(const GazePlan& plan, const TargetId& environment,
                                         const std::optional<TargetId>& previous,
                                         int frame_count);

/// The 10-frame summary the controller consumes.
PlanSummary final_targets(const GazePlan& plan, const TargetId& environment,
                          const std::optional<TargetId>& previous = std::nullopt);

}  // namespace gazeplan
