#include "gazeplan/planner/planner.hpp"

#include "gazeplan/core/geometry.hpp"
#include "gazeplan/error.hpp"
#include "gazeplan/events/keywords.hpp"

#include <algorithm>
#include <cmath>

namespace gazeplan {
namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) noexcept {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}


}  // namespace

int frame_at(std::int64_t ms) noexcept {
    return static_cast<int>(std::clamp<std::int64_t>(floor_div(ms + kFrameMs / 2, kFrameMs), -1000000,
                                                     1000000));
}

FrameRange frames_for(std::int64_t begin_ms, std::int64_t end_ms) noexcept {
    FrameRange range{std::max(0, frame_at(begin_ms)), frame_at(end_ms)};
    if (range.end < range.begin) range.end = range.begin;
    return range;
}

Vec3 sample_environment(const Target& addressee, DeterministicRng& rng) {
    if (addressee.kind != TargetKind::User) {
        throw KindError("environment anchor needs a user addressee, got '" + addressee.id.str() + "'");
    }
    const Direction face = direction_to(addressee.position);
    const double magnitude = rng.uniform(8.0, 15.0);
    const double yaw_offset = rng.coin() ? magnitude : -magnitude;
    const double pitch_offset = rng.uniform(-10.0, 5.0);
    const Direction dir{wrap_degrees(face.yaw + yaw_offset),
                        std::clamp(face.pitch + pitch_offset, -90.0, 90.0)};
    return scale(unit_vector(dir), norm(addressee.position));
}

Planner::Planner(TargetRegistry targets, PlannerConfig config, std::uint64_t seed)
    : targets_(std::move(targets)), config_(config), rng_(derive_seed(seed, 1)) {
    config_.validate();
    for (const auto& target : targets_.all()) {
        if (target.kind != TargetKind::Environment) plan_.add_target(target.id);
    }
    env_anchor_ = targets_.at(targets_.environment()).position;
}

void Planner::set_config(const PlannerConfig& config) {
    config.validate();
    config_ = config;
}

std::optional<TargetId> Planner::last_executed() const {
    if (executed_tail_.empty()) return std::nullopt;
    return executed_tail_.back();
}

void Planner::write(const TargetId& id, FrameRange frames, double p) {
    if (frames.empty()) return;
    plan_.set_priority(id, frames, Priority{p});
    dirty_ = true;
}

const GazePlan& Planner::plan() const {
    if (dirty_) {
        effective_ = plan_;
        for (const auto& w : aversions_) {
            if (!effective_.has_target(w.user)) continue;
            const FrameRange frames{static_cast<int>(std::max<std::int64_t>(0, w.begin_tick - tick_)),
                                    static_cast<int>(std::max<std::int64_t>(0, w.end_tick - tick_))};
            if (!frames.empty()) effective_.set_priority(w.user, frames, Priority{0.0});
        }
        dirty_ = false;
    }
    return effective_;
}

PlannerTickReport Planner::plan_tick(std::int64_t tick_index, const std::vector<TickEvent>& events) {
    tick_ = tick_index;
    dirty_ = true;
    PlannerTickReport report;

    // updateTargets: lifecycle first, then positions of dragged objects.
    for (const auto& te : events) {
        if (const auto* lifecycle = std::get_if<TargetLifecycleEvent>(&te.event)) {
            try {
                apply_lifecycle(*lifecycle);
                ++report.applied_events;
            } catch (const Error& e) {
                report.errors.emplace_back(e.what());
            }
        }
    }
    update_moving_targets();

    for (const auto& te : events) {
        if (std::holds_alternative<TargetLifecycleEvent>(te.event)) continue;
        GazePlan before = plan_;
        try {
            std::visit(
                [&](const auto& ev) {
                    using T = std::decay_t<decltype(ev)>;
                    if constexpr (std::is_same_v<T, RobotSpeakingEvent>) {
                        on_robot_speaking(ev, te.offset_ms, &report.references);
                    } else if constexpr (std::is_same_v<T, RobotListeningEvent>) {
                        on_robot_listening(ev, te.offset_ms);
                    } else if constexpr (std::is_same_v<T, UserSpeakingEvent>) {
                        on_user_speaking(ev, te.offset_ms);
                    } else if constexpr (std::is_same_v<T, TargetMovedEvent>) {
                        on_target_moved(ev, te.offset_ms);
                    }
                },
                te.event);
            ++report.applied_events;
        } catch (const Error& e) {
            plan_ = std::move(before);
            dirty_ = true;
            report.errors.emplace_back(e.what());
        }
    }

    // Incremental ASR: words heard during this tick trigger RJA now.
    const std::int64_t tick_end = tick_start_ms() + kFrameMs;
    std::vector<PendingWord> due;
    std::erase_if(pending_words_, [&](const PendingWord& pw) {
        if (pw.deliver_ms < tick_end) {
            due.push_back(pw);
            return true;
        }
        return false;
    });
    for (const auto& pw : due) {
        on_word_heard(pw.word, std::max<std::int64_t>(0, pw.deliver_ms - tick_start_ms()));
        ++report.asr_deliveries;
    }

    PlannerTickReport intimacy = check_intimacy_regulation();
    report.intimacy_writes = std::move(intimacy.intimacy_writes);
    report.new_aversions = std::move(intimacy.new_aversions);
    return report;
}

void Planner::finish_tick(const TargetId& executed) {
    if (executed_tail_.empty() || executed_tail_.back() != executed) executed_run_start_ = tick_;
    executed_tail_.push_back(executed);
    while (executed_tail_.size() > kExecutedTailLength) executed_tail_.pop_front();
    plan_.shift();
    ++tick_;
    dirty_ = true;
}

void Planner::on_robot_speaking(const RobotSpeakingEvent& ev, std::int64_t offset_ms,
                                std::vector<SpokenReference>* references) {
    for (const auto& id : ev.addressees) {
        if (targets_.at(id).kind != TargetKind::User) {
            throw KindError("addressee '" + id.str() + "' is not a user");
        }
    }
    const std::int64_t duration = ev.duration_ms();
    const auto span = [&](std::int64_t a, std::int64_t b) { return frames_for(offset_ms + a, offset_ms + b); };

    for (const auto& id : ev.addressees) write(id, span(0, duration), config_.p_speaking_addressee);

    // checkPauses
    for (std::size_t i = 1; i < ev.words.size(); ++i) {
        const std::int64_t gap_begin = ev.words[i - 1].end_ms;
        const std::int64_t gap_end = ev.words[i].start_ms;
        if (gap_end - gap_begin > config_.pause_threshold_ms) {
            for (const auto& id : ev.addressees) write(id, span(gap_begin, gap_end), 0.0);
        }
    }

    // checkTurnYielding
    for (const auto& id : ev.addressees) {
        if (ev.yielding) {
            write(id, span(duration - config_.yield_lead_ms, duration), config_.p_yield);
        } else {
            write(id, span(duration - config_.hold_lead_ms, duration), 0.0);
        }
    }

    // checkReferentialGaze
    const std::vector<Target> objects = targets_.of_kind(TargetKind::TaskObject);
    for (const auto& match : match_keywords(ev.words, objects)) {
        const WordTiming& word = ev.words[match.word_index];
        write(match.target, span(word.start_ms - config_.ref_lead_ms, word.end_ms), config_.p_referential);
        if (references != nullptr) {
            references->push_back(SpokenReference{match.target, tick_start_ms() + offset_ms + word.start_ms});
        }
    }

    active_addressees_ = ev.addressees;
}

void Planner::on_robot_listening(const RobotListeningEvent& ev, std::int64_t offset_ms) {
    for (const auto& id : ev.addressees) {
        if (targets_.at(id).kind != TargetKind::User) {
            throw KindError("addressee '" + id.str() + "' is not a user");
        }
    }
    for (const auto& id : ev.addressees) {
        write(id, frames_for(offset_ms, offset_ms + ev.duration_ms), config_.p_listening);
    }
    active_addressees_ = ev.addressees;
}

void Planner::on_user_speaking(const UserSpeakingEvent& ev, std::int64_t offset_ms) {
    if (targets_.at(ev.speaker).kind != TargetKind::User) {
        throw KindError("speaker '" + ev.speaker.str() + "' is not a user");
    }
    // attendSpeaker
    write(ev.speaker, frames_for(offset_ms, offset_ms + ev.duration_ms), config_.p_user_speaking);
    last_speaker_ = ev.speaker;
    // checkRJA runs as each word is heard (see plan_tick).
    const std::int64_t onset = tick_start_ms() + offset_ms;
    for (const auto& word : ev.recognized_words) {
        pending_words_.push_back(PendingWord{onset + word.end_ms, word});
    }
}

int Planner::on_word_heard(const WordTiming& word, std::int64_t offset_ms) {
    const std::vector<Target> objects = targets_.of_kind(TargetKind::TaskObject);
    const WordTiming single[] = {word};
    int writes = 0;
    for (const auto& match : match_keywords(single, objects)) {
        const std::int64_t begin = offset_ms + config_.rja_delay_ms;
        write(match.target, frames_for(begin, begin + config_.rja_hold_ms), config_.p_rja_verbal);
        ++writes;
    }
    return writes;
}

void Planner::on_target_moved(const TargetMovedEvent& ev, std::int64_t offset_ms) {
    const Target& target = targets_.at(ev.target);
    if (target.kind != TargetKind::TaskObject) {
        throw KindError("target '" + ev.target.str() + "' is not a task object");
    }
    if (ev.waypoints.empty()) throw ValidationError("target_moved needs waypoints");
    write(ev.target, frames_for(offset_ms, offset_ms + config_.moved_hold_ms), config_.p_moved);
    std::erase_if(moves_, [&](const ActiveMove& m) { return m.target == ev.target; });
    moves_.push_back(ActiveMove{ev.target, tick_start_ms() + offset_ms, ev.waypoints});
    targets_.set_position(ev.target, ev.waypoints.front().position);
}

void Planner::apply_lifecycle(const TargetLifecycleEvent& ev) {
    if (ev.action == LifecycleAction::Add) {
        if (ev.target.kind == TargetKind::Environment) {
            throw ValidationError("cannot add a second environment target");
        }
        targets_.add(ev.target);
        plan_.add_target(ev.target.id);
        dirty_ = true;
    } else {
        targets_.remove(ev.target.id);
        plan_.remove_target(ev.target.id);
        forget_target(ev.target.id);
        dirty_ = true;
    }
}

void Planner::forget_target(const TargetId& id) {
    std::erase(active_addressees_, id);
    if (last_speaker_ == id) last_speaker_.reset();
    std::erase_if(moves_, [&](const ActiveMove& m) { return m.target == id; });
    std::erase_if(aversions_, [&](const AversionWindow& w) { return w.user == id; });
    std::erase_if(run_thresholds_, [&](const auto& entry) { return entry.first.first == id; });
}

void Planner::update_moving_targets() {
    const std::int64_t now = tick_start_ms();
    std::erase_if(moves_, [&](const ActiveMove& move) {
        if (!targets_.contains(move.target)) return true;
        const std::int64_t t = now - move.onset_ms;
        targets_.set_position(move.target, position_along(move.waypoints, t));
        return t >= move.waypoints.back().offset_ms;
    });
}

std::vector<TargetId> Planner::prospective_targets() const {
    const GazePlan& effective = plan();
    return final_targets_over(effective, targets_.environment(), last_executed(), effective.horizon());
}

int Planner::threshold_frames(const TargetId& user, std::int64_t run_start_tick) {
    const auto key = std::make_pair(user, run_start_tick);
    if (const auto it = run_thresholds_.find(key); it != run_thresholds_.end()) return it->second;
    const double threshold_ms = rng_.uniform(static_cast<double>(config_.intimacy_min_ms),
                                             static_cast<double>(config_.intimacy_max_ms));
    const int frames = static_cast<int>(std::floor(threshold_ms / kFrameMs));
    run_thresholds_.emplace(key, frames);
    return frames;
}

PlannerTickReport Planner::check_intimacy_regulation() {
    PlannerTickReport report;

    // Windows already executing are kept; pending ones are derived afresh so
    // that a run broken by later events no longer triggers them.
    const std::vector<AversionWindow> previous = aversions_;
    std::erase_if(aversions_, [&](const AversionWindow& w) { return w.end_tick <= tick_ || w.begin_tick > tick_; });
    dirty_ = true;

    const int aversion_frames = std::max(1, frame_at(config_.aversion_ms));
    std::vector<std::pair<TargetId, std::int64_t>> seen_runs;
    constexpr int kMaxPasses = 5;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        // The executed run that reaches the present, followed by the
        // prospective plan, in absolute ticks. Runs that ended earlier can
        // no longer change.
        std::int64_t tail_start = tick_;
        std::vector<TargetId> sequence;
        if (const auto last = last_executed()) {
            tail_start = executed_run_start_;
            sequence.assign(static_cast<std::size_t>(tick_ - executed_run_start_), *last);
        }
        const auto planned = prospective_targets();
        sequence.insert(sequence.end(), planned.begin(), planned.end());

        bool inserted = false;
        std::size_t i = 0;
        while (i < sequence.size()) {
            std::size_t j = i + 1;
            while (j < sequence.size() && sequence[j] == sequence[i]) ++j;
            const Target* target = targets_.find(sequence[i]);
            if (target != nullptr && target->kind == TargetKind::User) {
                const std::int64_t run_start = tail_start + static_cast<std::int64_t>(i);
                const auto length = static_cast<std::int64_t>(j - i);
                seen_runs.emplace_back(sequence[i], run_start);
                const int allowed = threshold_frames(sequence[i], run_start);
                if (length > allowed) {
                    const std::int64_t crossing = std::max(run_start + allowed, tick_);
                    aversions_.push_back(AversionWindow{sequence[i], crossing, crossing + aversion_frames});
                    dirty_ = true;
                    inserted = true;
                }
            }
            i = j;
        }
        if (!inserted) break;
    }

    for (const auto& w : aversions_) {
        const FrameRange frames{static_cast<int>(std::max<std::int64_t>(0, w.begin_tick - tick_)),
                                static_cast<int>(w.end_tick - tick_)};
        report.intimacy_writes.emplace_back(w.user, frames);
        if (std::find(previous.begin(), previous.end(), w) == previous.end()) report.new_aversions.push_back(w);
    }

    // Keep thresholds of runs still visible; anything else is redrawn if it
    // reappears.
    std::erase_if(run_thresholds_, [&](const auto& entry) {
        return std::find(seen_runs.begin(), seen_runs.end(), entry.first) == seen_runs.end();
    });
    return report;
}

std::optional<TargetId> Planner::current_addressee() const {
    for (const auto& id : active_addressees_) {
        const Target* t = targets_.find(id);
        if (t != nullptr && t->kind == TargetKind::User) return id;
    }
    if (last_speaker_ && targets_.contains(*last_speaker_)) return last_speaker_;
    for (const auto& t : targets_.all()) {
        if (t.kind == TargetKind::User) return t.id;
    }
    return std::nullopt;
}

Vec3 Planner::begin_environment_episode() {
    if (const auto addressee = current_addressee()) {
        env_anchor_ = sample_environment(targets_.at(*addressee), rng_);
    }
    targets_.set_position(targets_.environment(), env_anchor_);
    return env_anchor_;
}

}  // namespace gazeplan
