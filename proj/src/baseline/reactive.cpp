#include "gazeplan/baseline/reactive.hpp"

#include "gazeplan/core/geometry.hpp"
#include "gazeplan/error.hpp"
#include "gazeplan/events/keywords.hpp"

#include <algorithm>
#include <cmath>

namespace gazeplan {
namespace {


void require_kind(const TargetRegistry& targets, const TargetId& id, TargetKind kind) {
    if (targets.at(id).kind != kind) {
        throw KindError("target '" + id.str() + "' has kind " + std::string(to_string(targets.at(id).kind)));
    }
}

}  // namespace

std::string_view to_string(GazeSource source) noexcept {
    switch (source) {
        case GazeSource::Environment: return "environment";
        case GazeSource::Addressee: return "addressee";
        case GazeSource::Speaker: return "speaker";
        case GazeSource::Reference: return "reference";
        case GazeSource::Moved: return "moved";
    }
    return "environment";
}

ReactiveGaze::ReactiveGaze(TargetRegistry targets, std::uint64_t seed, ControllerConfig controller)
    : targets_(std::move(targets)), controller_(controller), rng_(derive_seed(seed, 2)),
      current_(targets_.environment()) {}

void ReactiveGaze::add_source(const TargetId& target, GazeSource source, std::int64_t begin_ms,
                              std::int64_t end_ms) {
    sources_.push_back(ActiveSource{target, source, begin_ms, std::max(end_ms, begin_ms + kFrameMs)});
}

void ReactiveGaze::forget_target(const TargetId& id) {
    std::erase_if(sources_, [&](const ActiveSource& s) { return s.target == id; });
    std::erase_if(moves_, [&](const ActiveMove& m) { return m.target == id; });
    std::erase(addressees_, id);
}

void ReactiveGaze::apply(const Event& event, std::int64_t onset_ms, ReactiveTickResult& result) {
    std::visit(
        [&](const auto& ev) {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, RobotSpeakingEvent>) {
                for (const auto& id : ev.addressees) require_kind(targets_, id, TargetKind::User);
                for (const auto& id : ev.addressees) {
                    add_source(id, GazeSource::Addressee, onset_ms, onset_ms + ev.duration_ms());
                }
                const auto objects = targets_.of_kind(TargetKind::TaskObject);
                for (const auto& match : match_keywords(ev.words, objects)) {
                    const WordTiming& word = ev.words[match.word_index];
                    add_source(match.target, GazeSource::Reference, onset_ms + word.start_ms,
                               onset_ms + word.end_ms);
                    result.references.push_back(SpokenReference{match.target, onset_ms + word.start_ms});
                }
                addressees_ = ev.addressees;
            } else if constexpr (std::is_same_v<T, RobotListeningEvent>) {
                for (const auto& id : ev.addressees) require_kind(targets_, id, TargetKind::User);
                for (const auto& id : ev.addressees) {
                    add_source(id, GazeSource::Addressee, onset_ms, onset_ms + ev.duration_ms);
                }
                addressees_ = ev.addressees;
            } else if constexpr (std::is_same_v<T, UserSpeakingEvent>) {
                require_kind(targets_, ev.speaker, TargetKind::User);
                add_source(ev.speaker, GazeSource::Speaker, onset_ms, onset_ms + ev.duration_ms);
                for (const auto& word : ev.recognized_words) {
                    pending_words_.push_back(PendingWord{onset_ms + word.end_ms, word});
                }
            } else if constexpr (std::is_same_v<T, TargetMovedEvent>) {
                require_kind(targets_, ev.target, TargetKind::TaskObject);
                add_source(ev.target, GazeSource::Moved, onset_ms, onset_ms + ev.duration_ms());
                std::erase_if(moves_, [&](const ActiveMove& m) { return m.target == ev.target; });
                moves_.push_back(ActiveMove{ev.target, onset_ms, ev.waypoints});
                targets_.set_position(ev.target, ev.waypoints.front().position);
            }
        },
        event);
}

const ReactiveGaze::ActiveSource* ReactiveGaze::best_source(std::int64_t now_ms) const {
    const ActiveSource* best = nullptr;
    for (const auto& s : sources_) {
        const bool live = s.begin_ms < now_ms + kFrameMs && s.end_ms > now_ms;
        if (!live) continue;
        if (best == nullptr || s.source > best->source) best = &s;
    }
    return best;
}

void ReactiveGaze::refresh_environment() {
    std::optional<TargetId> addressee;
    for (const auto& id : addressees_) {
        if (targets_.contains(id)) {
            addressee = id;
            break;
        }
    }
    if (!addressee) {
        for (const auto& t : targets_.all()) {
            if (t.kind == TargetKind::User) {
                addressee = t.id;
                break;
            }
        }
    }
    if (addressee) {
        targets_.set_position(targets_.environment(), sample_environment(targets_.at(*addressee), rng_));
    }
}

void ReactiveGaze::start_fixation(const TargetId& target, GazeSource source, std::int64_t tick_index) {
    const bool new_environment_episode = target == targets_.environment() && current_ != target;
    const double duration_ms = rng_.uniform(static_cast<double>(kMinFixationMs),
                                            static_cast<double>(kMaxFixationMs));
    const int ticks = static_cast<int>(std::lround(duration_ms / kFrameMs));
    draws_.push_back(ticks);
    deadline_ = tick_index + ticks;
    if (new_environment_episode || (!started_ && target == targets_.environment())) refresh_environment();
    current_ = target;
    current_source_ = source;
    started_ = true;
}

ReactiveTickResult ReactiveGaze::reactive_tick(std::int64_t tick_index, const std::vector<TickEvent>& events) {
    ReactiveTickResult result;
    const std::int64_t now = tick_index * kFrameMs;
    bool current_removed = false;

    for (const auto& te : events) {
        const auto* lifecycle = std::get_if<TargetLifecycleEvent>(&te.event);
        if (lifecycle == nullptr) continue;
        try {
            if (lifecycle->action == LifecycleAction::Add) {
                if (lifecycle->target.kind == TargetKind::Environment) {
                    throw ValidationError("cannot add a second environment target");
                }
                targets_.add(lifecycle->target);
            } else {
                targets_.remove(lifecycle->target.id);
                forget_target(lifecycle->target.id);
                if (lifecycle->target.id == current_) current_removed = true;
            }
            ++result.applied_events;
        } catch (const Error& e) {
            result.errors.emplace_back(e.what());
        }
    }

    std::erase_if(moves_, [&](const ActiveMove& move) {
        const std::int64_t t = now - move.onset_ms;
        targets_.set_position(move.target, position_along(move.waypoints, t));
        return t >= move.waypoints.back().offset_ms;
    });

    for (const auto& te : events) {
        if (std::holds_alternative<TargetLifecycleEvent>(te.event)) continue;
        const std::size_t before = sources_.size();
        const std::size_t references_before = result.references.size();
        try {
            apply(te.event, now + te.offset_ms, result);
            ++result.applied_events;
        } catch (const Error& e) {
            sources_.resize(before);
            result.references.resize(references_before);
            result.errors.emplace_back(e.what());
        }
    }

    const std::int64_t tick_end = now + kFrameMs;
    std::vector<PendingWord> due;
    std::erase_if(pending_words_, [&](const PendingWord& pw) {
        if (pw.deliver_ms < tick_end) {
            due.push_back(pw);
            return true;
        }
        return false;
    });
    const auto objects = targets_.of_kind(TargetKind::TaskObject);
    for (const auto& pw : due) {
        const WordTiming single[] = {pw.word};
        for (const auto& match : match_keywords(single, objects)) {
            add_source(match.target, GazeSource::Reference, std::max(pw.deliver_ms, now), pw.deliver_ms + kFrameMs);
        }
    }

    std::erase_if(sources_, [&](const ActiveSource& s) { return s.end_ms <= now; });

    // Sources that become live during this tick count as arrivals.
    const ActiveSource* arrival = nullptr;
    for (const auto& s : sources_) {
        if (s.begin_ms >= now && s.begin_ms < tick_end) {
            if (arrival == nullptr || s.source > arrival->source) arrival = &s;
        }
    }

    const ActiveSource* best = best_source(now);
    const auto switch_to_best = [&] {
        if (best != nullptr) {
            start_fixation(best->target, best->source, tick_index);
        } else {
            start_fixation(targets_.environment(), GazeSource::Environment, tick_index);
        }
    };

    if (!started_ || current_removed) {
        switch_to_best();
    } else if (arrival != nullptr && arrival->source > current_source_) {
        start_fixation(arrival->target, arrival->source, tick_index);
    } else if (tick_index >= deadline_) {
        switch_to_best();
    }

    result.source = current_source_;
    result.command = controller_.fixate(current_, targets_, tick_index);
    return result;
}

}  // namespace gazeplan
