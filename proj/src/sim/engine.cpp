#include "gazeplan/sim/engine.hpp"

#include "gazeplan/error.hpp"

#include <algorithm>
#include <set>

namespace gazeplan {

Engine::Engine(std::vector<Target> targets, EngineConfig config, std::uint64_t seed, SystemKind system)
    : config_(config), system_(system) {
    config_.validate();
    TargetRegistry registry(std::move(targets));
    if (system_ == SystemKind::Planned) {
        planner_ = std::make_unique<Planner>(std::move(registry), config_.planner, seed);
        controller_ = std::make_unique<Controller>(config_.controller);
    } else {
        reactive_ = std::make_unique<ReactiveGaze>(std::move(registry), seed, config_.controller);
    }
}

void Engine::set_config(const EngineConfig& config) {
    config.validate();
    config_ = config;
    if (planner_) {
        planner_->set_config(config_.planner);
        controller_->set_config(config_.controller);
    } else {
        reactive_->controller().set_config(config_.controller);
    }
}

const TargetRegistry& Engine::targets() const noexcept {
    return planner_ ? planner_->targets() : reactive_->targets();
}

void Engine::note_events(const std::vector<TickEvent>& events, std::int64_t now) {
    for (const auto& te : events) {
        const std::int64_t begin = now + te.offset_ms;
        in_progress_.push_back(
            InProgress{std::string(event_tag(te.event)), begin, begin + event_duration_ms(te.event)});
    }
}

std::vector<std::string> Engine::active_tags(std::int64_t now) {
    const std::int64_t tick_end = now + kFrameMs;
    std::erase_if(in_progress_, [&](const InProgress& e) { return e.end_ms <= now && e.begin_ms < now; });
    std::set<std::string> tags;
    for (const auto& e : in_progress_) {
        if (e.begin_ms < tick_end) tags.insert(e.tag);
    }
    return {tags.begin(), tags.end()};
}

std::vector<SpokenReference> Engine::due_references(std::int64_t now) {
    std::vector<SpokenReference> due;
    std::erase_if(pending_references_, [&](const SpokenReference& r) {
        if (r.word_t_ms < now + kFrameMs) {
            due.push_back(r);
            return true;
        }
        return false;
    });
    std::stable_sort(due.begin(), due.end(),
                     [](const SpokenReference& a, const SpokenReference& b) { return a.word_t_ms < b.word_t_ms; });
    return due;
}

void Engine::fill_pose(TraceRecord& record, const GazeCommand& command) const {
    record.current_target = command.current_target;
    record.current_kind = targets().at(command.current_target).kind;
    record.slack = command.slack;
    record.gaze_direction = command.gaze_direction;
    record.head_direction = command.pose_after.head;
    record.eye_in_head = command.pose_after.eye_in_head;
    record.gaze_error_deg = command.gaze_error_deg;
}

EngineTick Engine::tick(const std::vector<TickEvent>& events) {
    EngineTick out = system_ == SystemKind::Planned ? planned_tick(events) : reactive_tick(events);
    ++next_tick_;
    return out;
}

EngineTick Engine::planned_tick(const std::vector<TickEvent>& events) {
    const std::int64_t tick = next_tick_;
    const std::int64_t now = tick * kFrameMs;
    EngineTick out;
    TraceRecord& record = out.record;
    record.tick_index = tick;
    record.t_ms = now;
    record.system = SystemKind::Planned;

    PlannerTickReport report = planner_->plan_tick(tick, events);
    out.applied_events = report.applied_events;
    record.errors = std::move(report.errors);
    note_events(events, now);
    pending_references_.insert(pending_references_.end(), report.references.begin(), report.references.end());

    const TargetId env = planner_->targets().environment();
    const int window = config_.controller.summary_window;
    PlanSummary summary = final_targets_over(planner_->plan(), env, controller_->previous_target(), window);
    if (summary.front() == env && controller_->previous_target() != env) {
        planner_->begin_environment_episode();
    }

    GazeCommand command;
    try {
        command = controller_->command_from_summary(summary, planner_->targets(), tick);
    } catch (const ReachabilityError& e) {
        record.errors.emplace_back(e.what());
        command = controller_->fixate(summary.front(), planner_->targets(), tick);
        command.summary = summary;
    }
    fill_pose(record, command);
    record.plan_summary = summary;
    record.active_events = active_tags(now);
    for (const auto& w : planner_->aversions()) {
        if (w.begin_tick <= tick && tick < w.end_tick &&
            std::find(record.aversion.begin(), record.aversion.end(), w.user) == record.aversion.end()) {
            record.aversion.push_back(w.user);
        }
    }
    std::sort(record.aversion.begin(), record.aversion.end());
    record.references = due_references(now);

    const GazePlan& plan = planner_->plan();
    for (const auto& id : plan.target_ids()) {
        std::vector<double> column(static_cast<std::size_t>(window));
        for (int f = 0; f < window; ++f) column[static_cast<std::size_t>(f)] = plan.get(id, f);
        out.plan_columns.emplace(id, std::move(column));
    }

    planner_->finish_tick(command.current_target);
    return out;
}

EngineTick Engine::reactive_tick(const std::vector<TickEvent>& events) {
    const std::int64_t tick = next_tick_;
    const std::int64_t now = tick * kFrameMs;
    EngineTick out;
    TraceRecord& record = out.record;
    record.tick_index = tick;
    record.t_ms = now;
    record.system = SystemKind::Reactive;

    ReactiveTickResult result = reactive_->reactive_tick(tick, events);
    out.applied_events = result.applied_events;
    record.errors = std::move(result.errors);
    note_events(events, now);
    pending_references_.insert(pending_references_.end(), result.references.begin(), result.references.end());

    fill_pose(record, result.command);
    record.active_events = active_tags(now);
    record.references = due_references(now);
    return out;
}

}  // namespace gazeplan
