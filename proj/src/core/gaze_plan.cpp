#include "gazeplan/core/gaze_plan.hpp"

#include "gazeplan/error.hpp"

#include <algorithm>

namespace gazeplan {

void GazePlan::add_target(const TargetId& id) {
    rows_.try_emplace(id, std::vector<double>(static_cast<std::size_t>(horizon_), 0.0));
}

void GazePlan::remove_target(const TargetId& id) { rows_.erase(id); }

bool GazePlan::has_target(const TargetId& id) const noexcept { return rows_.contains(id); }

std::vector<TargetId> GazePlan::target_ids() const {
    std::vector<TargetId> ids;
    ids.reserve(rows_.size());
    for (const auto& [id, row] : rows_) ids.push_back(id);
    return ids;
}

void GazePlan::set_priority(const TargetId& id, FrameRange frames, Priority p) {
    const auto it = rows_.find(id);
    if (it == rows_.end()) throw UnknownTargetError(id.str());
    if (frames.begin < 0 || frames.end <= frames.begin) {
        throw RangeError("invalid frame range [" + std::to_string(frames.begin) + ", " +
                         std::to_string(frames.end) + ")");
    }
    const int end = std::min(frames.end, kMaxHorizon);
    if (frames.begin >= end) return;
    if (end > horizon_) {
        horizon_ = end;
        for (auto& [_, row] : rows_) row.resize(static_cast<std::size_t>(horizon_), 0.0);
    }
    std::fill(it->second.begin() + frames.begin, it->second.begin() + end, p.value());
}

double GazePlan::get(const TargetId& id, int frame) const {
    const auto it = rows_.find(id);
    if (it == rows_.end()) throw UnknownTargetError(id.str());
    if (frame < 0 || frame >= horizon_) return 0.0;
    return it->second[static_cast<std::size_t>(frame)];
}

std::span<const double> GazePlan::row(const TargetId& id) const {
    const auto it = rows_.find(id);
    if (it == rows_.end()) throw UnknownTargetError(id.str());
    return it->second;
}

void GazePlan::shift() {
    const int next = std::max(kMinHorizon, horizon_ - 1);
    for (auto& [_, row] : rows_) {
        row.erase(row.begin());
        row.resize(static_cast<std::size_t>(next), 0.0);
    }
    horizon_ = next;
}

bool GazePlan::empty() const noexcept {
    return std::all_of(rows_.begin(), rows_.end(), [](const auto& entry) {
        return std::all_of(entry.second.begin(), entry.second.end(),
                           [](double v) { return v == 0.0; });
    });
}

std::vector<TargetId> final_targets_over(const GazePlan& plan, const TargetId& environment,
                                         const std::optional<TargetId>& previous,
                                         int frame_count) {
    const std::vector<TargetId> ids = plan.target_ids();  // sorted: map order
    std::vector<std::span<const double>> rows;
    rows.reserve(ids.size());
    for (const auto& id : ids) rows.push_back(plan.row(id));
    const auto cell = [&](std::size_t i, int j) {
        return j < plan.horizon() ? rows[i][static_cast<std::size_t>(j)] : 0.0;
    };

    std::vector<TargetId> out;
    out.reserve(static_cast<std::size_t>(std::max(frame_count, 0)));
    std::optional<std::size_t> prior;
    if (previous) {
        const auto it = std::find(ids.begin(), ids.end(), *previous);
        if (it != ids.end()) prior = static_cast<std::size_t>(it - ids.begin());
    }
    for (int j = 0; j < frame_count; ++j) {
        double best = 0.0;
        for (std::size_t i = 0; i < ids.size(); ++i) best = std::max(best, cell(i, j));
        if (best == 0.0) {
            out.push_back(environment);
            prior.reset();
            continue;
        }
        std::size_t chosen = 0;
        if (prior && cell(*prior, j) == best) {
            chosen = *prior;
        } else {
            while (cell(chosen, j) != best) ++chosen;
        }
        out.push_back(ids[chosen]);
        prior = chosen;
    }
    return out;
}

PlanSummary final_targets(const GazePlan& plan, const TargetId& environment,
                          const std::optional<TargetId>& previous) {
    return final_targets_over(plan, environment, previous, kSummaryFrames);
}

}  // namespace gazeplan
