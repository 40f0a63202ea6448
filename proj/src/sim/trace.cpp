#include "gazeplan/sim/trace.hpp"

#include "gazeplan/error.hpp"
#include "gazeplan/events/scenario_io.hpp"

#include <sstream>

namespace gazeplan {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json direction_json(const Direction& d) { return ordered_json{{"yaw", d.yaw}, {"pitch", d.pitch}}; }

Direction direction_from(const json& j) {
    return Direction{j.at("yaw").get<double>(), j.at("pitch").get<double>()};
}

std::vector<std::string> strings_from(const json& j) {
    std::vector<std::string> out;
    for (const auto& item : j) out.push_back(item.get<std::string>());
    return out;
}

}  // namespace

std::string_view to_string(SystemKind system) noexcept {
    return system == SystemKind::Planned ? "planned" : "reactive";
}

std::optional<SystemKind> system_from_string(std::string_view text) noexcept {
    if (text == "planned") return SystemKind::Planned;
    if (text == "reactive") return SystemKind::Reactive;
    return std::nullopt;
}

ordered_json record_to_json(const TraceRecord& r) {
    ordered_json j;
    j["schema_version"] = kTraceSchemaVersion;
    j["tick_index"] = r.tick_index;
    j["t_ms"] = r.t_ms;
    j["system"] = std::string(to_string(r.system));
    j["current_target"] = r.current_target.str();
    j["current_kind"] = std::string(to_string(r.current_kind));
    j["slack"] = r.slack;
    j["gaze_direction"] = direction_json(r.gaze_direction);
    j["head_direction"] = direction_json(r.head_direction);
    j["eye_in_head"] = direction_json(r.eye_in_head);
    j["gaze_error_deg"] = r.gaze_error_deg;
    if (r.plan_summary) {
        ordered_json summary = ordered_json::array();
        for (const auto& id : *r.plan_summary) summary.push_back(id.str());
        j["plan_summary"] = summary;
    } else {
        j["plan_summary"] = nullptr;
    }
    j["active_events"] = r.active_events;
    ordered_json aversion = ordered_json::array();
    for (const auto& id : r.aversion) aversion.push_back(id.str());
    j["aversion"] = aversion;
    ordered_json refs = ordered_json::array();
    for (const auto& ref : r.references) {
        refs.push_back(ordered_json{{"target", ref.target.str()}, {"word_t_ms", ref.word_t_ms}});
    }
    j["references"] = refs;
    j["errors"] = r.errors;
    return j;
}

TraceRecord record_from_json(const json& j) {
    try {
        if (j.at("schema_version").get<int>() != kTraceSchemaVersion) {
            throw ValidationError("unsupported trace schema_version");
        }
        TraceRecord r;
        r.tick_index = j.at("tick_index").get<std::int64_t>();
        r.t_ms = j.at("t_ms").get<std::int64_t>();
        const auto system = system_from_string(j.at("system").get<std::string>());
        if (!system) throw ValidationError("unknown system in trace record");
        r.system = *system;
        r.current_target = TargetId{j.at("current_target").get<std::string>()};
        const auto kind = target_kind_from_string(j.at("current_kind").get<std::string>());
        if (!kind) throw ValidationError("unknown target kind in trace record");
        r.current_kind = *kind;
        r.slack = j.at("slack").get<double>();
        r.gaze_direction = direction_from(j.at("gaze_direction"));
        r.head_direction = direction_from(j.at("head_direction"));
        r.eye_in_head = direction_from(j.at("eye_in_head"));
        r.gaze_error_deg = j.at("gaze_error_deg").get<double>();
        if (!j.at("plan_summary").is_null()) {
            PlanSummary summary;
            for (const auto& id : j.at("plan_summary")) summary.emplace_back(id.get<std::string>());
            r.plan_summary = std::move(summary);
        }
        r.active_events = strings_from(j.at("active_events"));
        for (const auto& id : j.at("aversion")) r.aversion.emplace_back(id.get<std::string>());
        for (const auto& ref : j.at("references")) {
            r.references.push_back(SpokenReference{TargetId{ref.at("target").get<std::string>()},
                                                   ref.at("word_t_ms").get<std::int64_t>()});
        }
        r.errors = strings_from(j.at("errors"));
        return r;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed trace record: ") + e.what());
    }
}

std::string trace_to_jsonl(const std::vector<TraceRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += record_to_json(r).dump();
        out += '\n';
    }
    return out;
}

std::vector<TraceRecord> parse_trace_jsonl(std::string_view text) {
    std::vector<TraceRecord> records;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        try {
            records.push_back(record_from_json(parse_json_text(line)));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no, e.column());
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

VerifyResult verify_traces(std::string_view trace_text, std::string_view golden_text) {
    const auto trace = parse_trace_jsonl(trace_text);
    const auto golden = parse_trace_jsonl(golden_text);
    VerifyResult result;
    const std::size_t common = std::min(trace.size(), golden.size());
    for (std::size_t i = 0; i < common; ++i) {
        if (trace[i] == golden[i]) continue;
        const json a = record_to_json(trace[i]);
        const json b = record_to_json(golden[i]);
        std::string fields;
        for (const auto& [key, value] : b.items()) {
            if (!a.contains(key) || a.at(key) != value) {
                if (!fields.empty()) fields += ", ";
                fields += key;
            }
        }
        result.ok = false;
        result.first_mismatch_tick = golden[i].tick_index;
        result.message = "tick " + std::to_string(golden[i].tick_index) + " differs in: " + fields;
        return result;
    }
    if (trace.size() != golden.size()) {
        result.ok = false;
        result.first_mismatch_tick = static_cast<std::int64_t>(common);
        result.message = "trace has " + std::to_string(trace.size()) + " records, golden has " +
                         std::to_string(golden.size());
        return result;
    }
    result.message = "traces match (" + std::to_string(trace.size()) + " records)";
    return result;
}

}  // namespace gazeplan
