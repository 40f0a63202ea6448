#include "gazeplan/sim/metrics.hpp"

#include "gazeplan/core/geometry.hpp"
#include "gazeplan/error.hpp"

#include <algorithm>
#include <set>

namespace gazeplan {
namespace {

struct Segment {
    std::size_t begin = 0;  // record index
    std::size_t end = 0;    // exclusive
};

std::vector<Segment> run_length(const std::vector<TraceRecord>& trace) {
    std::vector<Segment> segments;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i == 0 || trace[i].current_target != trace[i - 1].current_target) {
            segments.push_back(Segment{i, i + 1});
        } else {
            segments.back().end = i + 1;
        }
    }
    return segments;
}

}  // namespace

MetricsReport compute_metrics(const std::vector<TraceRecord>& trace) {
    if (trace.empty()) throw EmptyInputError("metrics need at least one trace record");
    MetricsReport m;
    m.tick_count = static_cast<std::int64_t>(trace.size());

    for (std::size_t i = 1; i < trace.size(); ++i) {
        if (trace[i].current_target != trace[i - 1].current_target) ++m.gaze_shift_count;
        m.total_head_rotation_deg += angular_distance(trace[i - 1].head_direction, trace[i].head_direction);
    }

    const auto segments = run_length(trace);
    std::map<std::string, double> total_ms;
    for (const auto& s : segments) {
        const TraceRecord& first = trace[s.begin];
        const double ms = static_cast<double>((s.end - s.begin) * kFrameMs);
        FixationStats& stats = m.fixation_by_kind[std::string(to_string(first.current_kind))];
        ++stats.count;
        total_ms[std::string(to_string(first.current_kind))] += ms;
        stats.max_ms = std::max(stats.max_ms, ms);
        if (first.current_kind == TargetKind::User) {
            m.max_user_run_ticks = std::max(m.max_user_run_ticks, static_cast<int>(s.end - s.begin));
        }
    }
    for (auto& [kind, stats] : m.fixation_by_kind) stats.mean_ms = total_ms[kind] / stats.count;

    std::map<std::string, std::int64_t> ticks_on;
    for (const auto& r : trace) ++ticks_on[r.current_target.str()];
    for (const auto& [id, n] : ticks_on) {
        m.time_share[id] = static_cast<double>(n) / static_cast<double>(trace.size());
    }

    // An aversion episode is a maximal tick run during which a given user is
    // listed as averted.
    std::set<std::string> users;
    for (const auto& r : trace) {
        for (const auto& u : r.aversion) users.insert(u.str());
    }
    std::int64_t aversion_ticks = 0;
    for (const auto& user : users) {
        bool inside = false;
        for (const auto& r : trace) {
            const bool now = std::any_of(r.aversion.begin(), r.aversion.end(),
                                         [&](const TargetId& id) { return id.str() == user; });
            if (now) {
                ++aversion_ticks;
                if (!inside) ++m.aversion_episode_count;
            }
            inside = now;
        }
    }
    if (m.aversion_episode_count > 0) {
        m.aversion_mean_ms = static_cast<double>(aversion_ticks * kFrameMs) / m.aversion_episode_count;
    }

    std::vector<std::size_t> segment_of(trace.size());
    for (std::size_t s = 0; s < segments.size(); ++s) {
        for (std::size_t i = segments[s].begin; i < segments[s].end; ++i) segment_of[i] = s;
    }
    const std::int64_t first_tick = trace.front().tick_index;
    for (const auto& r : trace) {
        for (const auto& ref : r.references) {
            ReferenceLead lead{ref.target, ref.word_t_ms, std::nullopt};
            const std::int64_t word_tick = ref.word_t_ms / kFrameMs;
            const std::int64_t index = word_tick - first_tick;
            if (index >= 0 && index < static_cast<std::int64_t>(trace.size()) &&
                trace[static_cast<std::size_t>(index)].current_target == ref.target) {
                const Segment& seg = segments[segment_of[static_cast<std::size_t>(index)]];
                lead.lead_ms = ref.word_t_ms - trace[seg.begin].tick_index * kFrameMs;
            }
            m.referential_leads.push_back(std::move(lead));
        }
    }
    return m;
}

nlohmann::ordered_json metrics_to_json(const MetricsReport& m) {
    nlohmann::ordered_json j;
    j["schema_version"] = kMetricsSchemaVersion;
    j["tick_count"] = m.tick_count;
    j["gaze_shift_count"] = m.gaze_shift_count;
    j["total_head_rotation_deg"] = m.total_head_rotation_deg;
    nlohmann::ordered_json fixations = nlohmann::ordered_json::object();
    for (const auto& [kind, s] : m.fixation_by_kind) {
        fixations[kind] = {{"count", s.count}, {"mean_ms", s.mean_ms}, {"max_ms", s.max_ms}};
    }
    j["fixation_by_kind"] = fixations;
    nlohmann::ordered_json shares = nlohmann::ordered_json::object();
    for (const auto& [id, share] : m.time_share) shares[id] = share;
    j["time_share"] = shares;
    j["aversion_episode_count"] = m.aversion_episode_count;
    j["aversion_mean_ms"] = m.aversion_mean_ms;
    nlohmann::ordered_json leads = nlohmann::ordered_json::array();
    for (const auto& l : m.referential_leads) {
        nlohmann::ordered_json entry{{"target", l.target.str()}, {"word_t_ms", l.word_t_ms}};
        entry["lead_ms"] = l.lead_ms ? nlohmann::ordered_json(*l.lead_ms) : nlohmann::ordered_json(nullptr);
        leads.push_back(entry);
    }
    j["referential_leads"] = leads;
    j["max_user_run_ticks"] = m.max_user_run_ticks;
    return j;
}

nlohmann::ordered_json compare_to_json(const MetricsReport& planned, const MetricsReport& reactive) {
    nlohmann::ordered_json j;
    j["schema_version"] = kMetricsSchemaVersion;
    j["planned"] = metrics_to_json(planned);
    j["reactive"] = metrics_to_json(reactive);
    return j;
}

}  // namespace gazeplan
