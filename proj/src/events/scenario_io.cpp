#include "gazeplan/events/scenario_io.hpp"

#include "gazeplan/core/geometry.hpp"
#include "gazeplan/error.hpp"
#include "gazeplan/events/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <sstream>

namespace gazeplan {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void require_object(const json& j, std::string_view what) {
    if (!j.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
}

void reject_unknown_fields(const json& j, std::string_view what,
                           std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ValidationError(std::string(what) + ": unknown field '" + key + "'");
        }
    }
}

const json& field(const json& j, std::string_view what, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) {
        throw ValidationError(std::string(what) + ": missing field '" + key + "'");
    }
    return *it;
}

std::int64_t as_int(const json& j, std::string_view what) {
    if (!j.is_number_integer()) throw ValidationError(std::string(what) + " must be an integer");
    return j.get<std::int64_t>();
}

double as_number(const json& j, std::string_view what) {
    if (!j.is_number()) throw ValidationError(std::string(what) + " must be a number");
    return j.get<double>();
}

std::string as_string(const json& j, std::string_view what) {
    if (!j.is_string()) throw ValidationError(std::string(what) + " must be a string");
    return j.get<std::string>();
}

bool as_bool(const json& j, std::string_view what) {
    if (!j.is_boolean()) throw ValidationError(std::string(what) + " must be a boolean");
    return j.get<bool>();
}

const json& as_array(const json& j, std::string_view what) {
    if (!j.is_array()) throw ValidationError(std::string(what) + " must be an array");
    return j;
}

Vec3 vec3_from_json(const json& j, std::string_view what) {
    if (!j.is_array() || j.size() != 3) {
        throw ValidationError(std::string(what) + " must be an array [x, y, z]");
    }
    return Vec3{as_number(j[0], what), as_number(j[1], what), as_number(j[2], what)};
}

ordered_json vec3_to_json(const Vec3& v) { return ordered_json::array({v.x, v.y, v.z}); }

std::vector<TargetId> ids_from_json(const json& j, std::string_view what) {
    std::vector<TargetId> ids;
    for (const auto& item : as_array(j, what)) ids.emplace_back(as_string(item, what));
    return ids;
}

ordered_json ids_to_json(const std::vector<TargetId>& ids) {
    ordered_json out = ordered_json::array();
    for (const auto& id : ids) out.push_back(id.str());
    return out;
}

std::vector<WordTiming> words_from_json(const json& j, std::string_view what) {
    std::vector<WordTiming> words;
    for (const auto& item : as_array(j, what)) {
        require_object(item, what);
        reject_unknown_fields(item, what, {"text", "start_ms", "end_ms"});
        words.push_back(WordTiming{as_string(field(item, what, "text"), "word text"),
                                   as_int(field(item, what, "start_ms"), "start_ms"),
                                   as_int(field(item, what, "end_ms"), "end_ms")});
    }
    return words;
}

ordered_json words_to_json(const std::vector<WordTiming>& words) {
    ordered_json out = ordered_json::array();
    for (const auto& w : words) {
        out.push_back(ordered_json{{"text", w.text}, {"start_ms", w.start_ms}, {"end_ms", w.end_ms}});
    }
    return out;
}

void validate_words(const std::vector<WordTiming>& words, std::string_view what) {
    std::int64_t previous_end = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        if (w.start_ms < 0 || w.end_ms <= w.start_ms) {
            throw ValidationError(std::string(what) + ": word " + std::to_string(i) +
                                  " needs 0 <= start_ms < end_ms");
        }
        if (i > 0 && w.start_ms < previous_end) {
            throw ValidationError(std::string(what) + ": word " + std::to_string(i) +
                                  " overlaps or precedes the previous word");
        }
        previous_end = w.end_ms;
    }
}

void require_user(const TargetRegistry& registry, const TargetId& id) {
    const Target& target = registry.at(id);
    if (target.kind != TargetKind::User) {
        throw KindError("target '" + id.str() + "' is not a user");
    }
}

void fill_addressees(std::vector<TargetId>& addressees, const TargetRegistry& registry) {
    if (addressees.empty()) {
        for (const auto& user : registry.of_kind(TargetKind::User)) addressees.push_back(user.id);
        if (addressees.empty()) throw ValidationError("no addressees and no users registered");
    }
    for (const auto& id : addressees) require_user(registry, id);
}

std::string join_words(const std::vector<WordTiming>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w.text;
    }
    return out;
}

std::vector<std::string> normalized_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(text)};
    std::string token;
    while (in >> token) {
        std::string normalized = normalize_token(token);
        if (!normalized.empty()) tokens.push_back(std::move(normalized));
    }
    return tokens;
}

struct EventVisitor {
    const TargetRegistry& registry;

    void operator()(RobotSpeakingEvent& ev) const {
        if (ev.words.empty()) throw ValidationError("robot_speaking needs at least one word");
        validate_words(ev.words, "robot_speaking");
        if (ev.utterance.empty()) ev.utterance = join_words(ev.words);
        std::vector<std::string> from_words;
        for (const auto& w : ev.words) {
            for (auto& token : normalized_tokens(w.text)) from_words.push_back(std::move(token));
        }
        if (normalized_tokens(ev.utterance) != from_words) {
            throw ValidationError("robot_speaking words do not cover the utterance text");
        }
        fill_addressees(ev.addressees, registry);
    }

    void operator()(RobotListeningEvent& ev) const {
        if (ev.duration_ms <= 0) throw ValidationError("robot_listening duration_ms must be > 0");
        fill_addressees(ev.addressees, registry);
    }

    void operator()(UserSpeakingEvent& ev) const {
        require_user(registry, ev.speaker);
        if (ev.duration_ms <= 0) throw ValidationError("user_speaking duration_ms must be > 0");
        validate_words(ev.recognized_words, "user_speaking");
        if (!ev.recognized_words.empty() && ev.recognized_words.back().end_ms > ev.duration_ms) {
            throw ValidationError("user_speaking recognized words extend past duration_ms");
        }
    }

    void operator()(TargetMovedEvent& ev) const {
        const Target& target = registry.at(ev.target);
        if (target.kind != TargetKind::TaskObject) {
            throw KindError("target '" + ev.target.str() + "' is not a task object");
        }
        if (ev.waypoints.size() < 2) throw ValidationError("target_moved needs at least 2 waypoints");
        if (ev.waypoints.front().offset_ms != 0) {
            throw ValidationError("target_moved waypoints must start at offset 0");
        }
        for (std::size_t i = 0; i < ev.waypoints.size(); ++i) {
            const auto& wp = ev.waypoints[i];
            if (i > 0 && wp.offset_ms < ev.waypoints[i - 1].offset_ms) {
                throw ValidationError("target_moved waypoint offsets must be nondecreasing");
            }
            Target moved = target;
            moved.position = wp.position;
            validate_target(moved);
        }
    }

    void operator()(TargetLifecycleEvent& ev) const {
        if (ev.action == LifecycleAction::Add) {
            if (registry.contains(ev.target.id)) {
                throw ValidationError("target_add of already registered id '" + ev.target.id.str() + "'");
            }
            if (ev.target.kind == TargetKind::Environment) {
                throw ValidationError("target_add cannot add a second environment target");
            }
            validate_target(ev.target);
        } else {
            const Target& existing = registry.at(ev.target.id);
            if (existing.kind == TargetKind::Environment) {
                throw ValidationError("the environment target cannot be removed");
            }
            ev.target = existing;
        }
    }
};

}  // namespace

json parse_json_text(std::string_view bytes) {
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        const std::size_t offset = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, bytes.size());
        std::size_t line = 1;
        std::size_t column = 1;
        for (std::size_t i = 0; i < offset; ++i) {
            if (bytes[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string message = e.what();
        if (const auto pos = message.find("syntax error"); pos != std::string::npos) {
            message = message.substr(pos);
        }
        throw ParseError(message, line, column);
    }
}

ordered_json target_to_json(const Target& target) {
    ordered_json aliases = ordered_json::array();
    for (const auto& alias : target.aliases) aliases.push_back(alias);
    return ordered_json{{"id", target.id.str()},
                        {"kind", std::string(to_string(target.kind))},
                        {"position", vec3_to_json(target.position)},
                        {"label", target.label},
                        {"aliases", aliases}};
}

Target target_from_json(const json& j) {
    require_object(j, "target");
    reject_unknown_fields(j, "target", {"id", "kind", "position", "label", "aliases"});
    Target target;
    target.id = TargetId{as_string(field(j, "target", "id"), "target id")};
    const std::string kind = as_string(field(j, "target", "kind"), "target kind");
    const auto parsed = target_kind_from_string(kind);
    if (!parsed) throw ValidationError("target '" + target.id.str() + "': unknown kind '" + kind + "'");
    target.kind = *parsed;
    target.position = vec3_from_json(field(j, "target", "position"), "target position");
    target.label = j.contains("label") ? as_string(j["label"], "target label") : target.id.str();
    if (j.contains("aliases")) {
        for (const auto& alias : as_array(j["aliases"], "target aliases")) {
            target.aliases.push_back(as_string(alias, "target alias"));
        }
    }
    return target;
}

ordered_json event_to_json(const Event& event) {
    ordered_json out{{"type", std::string(event_tag(event))}};
    std::visit(
        [&](const auto& ev) {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, RobotSpeakingEvent>) {
                out["utterance"] = ev.utterance;
                out["words"] = words_to_json(ev.words);
                out["yielding"] = ev.yielding;
                out["addressees"] = ids_to_json(ev.addressees);
            } else if constexpr (std::is_same_v<T, RobotListeningEvent>) {
                out["addressees"] = ids_to_json(ev.addressees);
                out["duration_ms"] = ev.duration_ms;
            } else if constexpr (std::is_same_v<T, UserSpeakingEvent>) {
                out["speaker"] = ev.speaker.str();
                out["duration_ms"] = ev.duration_ms;
                out["recognized_words"] = words_to_json(ev.recognized_words);
            } else if constexpr (std::is_same_v<T, TargetMovedEvent>) {
                out["target"] = ev.target.str();
                ordered_json waypoints = ordered_json::array();
                for (const auto& wp : ev.waypoints) {
                    waypoints.push_back(
                        ordered_json{{"offset_ms", wp.offset_ms}, {"position", vec3_to_json(wp.position)}});
                }
                out["waypoints"] = waypoints;
            } else {
                out["target"] = target_to_json(ev.target);
            }
        },
        event);
    return out;
}

Event event_from_json(const json& j, bool allow_t_ms) {
    require_object(j, "event");
    const std::string type = as_string(field(j, "event", "type"), "event type");
    const auto check_fields = [&](std::initializer_list<std::string_view> allowed) {
        for (const auto& [key, _] : j.items()) {
            if (key == "type" || (allow_t_ms && key == "t_ms")) continue;
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                throw ValidationError(type + ": unknown field '" + key + "'");
            }
        }
    };

    if (type == "robot_speaking") {
        check_fields({"utterance", "words", "yielding", "addressees"});
        RobotSpeakingEvent ev;
        if (j.contains("utterance")) ev.utterance = as_string(j["utterance"], "utterance");
        ev.words = words_from_json(field(j, type, "words"), "words");
        if (j.contains("yielding")) ev.yielding = as_bool(j["yielding"], "yielding");
        if (j.contains("addressees")) ev.addressees = ids_from_json(j["addressees"], "addressees");
        return ev;
    }
    if (type == "robot_listening") {
        check_fields({"addressees", "duration_ms"});
        RobotListeningEvent ev;
        if (j.contains("addressees")) ev.addressees = ids_from_json(j["addressees"], "addressees");
        ev.duration_ms = as_int(field(j, type, "duration_ms"), "duration_ms");
        return ev;
    }
    if (type == "user_speaking") {
        check_fields({"speaker", "duration_ms", "recognized_words"});
        UserSpeakingEvent ev;
        ev.speaker = TargetId{as_string(field(j, type, "speaker"), "speaker")};
        ev.duration_ms = as_int(field(j, type, "duration_ms"), "duration_ms");
        if (j.contains("recognized_words")) {
            ev.recognized_words = words_from_json(j["recognized_words"], "recognized_words");
        }
        return ev;
    }
    if (type == "target_moved") {
        check_fields({"target", "waypoints"});
        TargetMovedEvent ev;
        ev.target = TargetId{as_string(field(j, type, "target"), "target")};
        for (const auto& item : as_array(field(j, type, "waypoints"), "waypoints")) {
            require_object(item, "waypoint");
            reject_unknown_fields(item, "waypoint", {"offset_ms", "position"});
            ev.waypoints.push_back(Waypoint{as_int(field(item, "waypoint", "offset_ms"), "offset_ms"),
                                            vec3_from_json(field(item, "waypoint", "position"),
                                                           "waypoint position")});
        }
        return ev;
    }
    if (type == "target_add" || type == "target_remove") {
        check_fields({"target"});
        TargetLifecycleEvent ev;
        ev.action = type == "target_add" ? LifecycleAction::Add : LifecycleAction::Remove;
        const json& target = field(j, type, "target");
        if (ev.action == LifecycleAction::Remove && target.is_object() && target.size() == 1 &&
            target.contains("id")) {
            ev.target.id = TargetId{as_string(target["id"], "target id")};
        } else {
            ev.target = target_from_json(target);
        }
        return ev;
    }
    throw ValidationError("unknown event type '" + type + "'");
}

void validate_event(Event& event, const TargetRegistry& registry) {
    std::visit(EventVisitor{registry}, event);
}

void validate_scenario(Scenario& scenario) {
    TargetRegistry registry;
    try {
        registry = TargetRegistry(scenario.targets);
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        throw ValidationError(e.what());
    }
    scenario.targets = registry.all();

    std::int64_t previous_t = 0;
    for (std::size_t i = 0; i < scenario.timeline.size(); ++i) {
        const auto t = scenario.timeline[i].t_ms;
        if (t < 0) throw ValidationError("t_ms must be >= 0", i);
        if (t < previous_t) throw ValidationError("timeline t_ms must be nondecreasing", i);
        previous_t = t;
    }

    // Lifecycle events of a tick are applied before the other events of
    // that tick, so validate in the same order the engine applies them.
    std::size_t begin = 0;
    while (begin < scenario.timeline.size()) {
        const std::int64_t tick = scenario.timeline[begin].t_ms / kFrameMs;
        std::size_t end = begin;
        while (end < scenario.timeline.size() && scenario.timeline[end].t_ms / kFrameMs == tick) ++end;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = begin; i < end; ++i) {
                Event& event = scenario.timeline[i].event;
                const bool lifecycle = std::holds_alternative<TargetLifecycleEvent>(event);
                if (lifecycle != (pass == 0)) continue;
                try {
                    validate_event(event, registry);
                    if (lifecycle) {
                        const auto& ev = std::get<TargetLifecycleEvent>(event);
                        if (ev.action == LifecycleAction::Add) {
                            registry.add(ev.target);
                        } else {
                            registry.remove(ev.target.id);
                        }
                    }
                } catch (const ValidationError& e) {
                    throw ValidationError(e.what(), i);
                } catch (const Error& e) {
                    throw ValidationError(e.what(), i);
                }
            }
        }
        begin = end;
    }
}

Scenario parse_scenario(std::string_view bytes) {
    const json doc = parse_json_text(bytes);
    require_object(doc, "scenario");
    reject_unknown_fields(doc, "scenario", {"seed", "targets", "timeline"});

    Scenario scenario;
    const json& seed = field(doc, "scenario", "seed");
    if (!seed.is_number_integer()) throw ValidationError("seed must be an integer");
    scenario.seed = seed.is_number_unsigned() ? seed.get<std::uint64_t>()
                                              : static_cast<std::uint64_t>(seed.get<std::int64_t>());
    for (const auto& item : as_array(field(doc, "scenario", "targets"), "targets")) {
        scenario.targets.push_back(target_from_json(item));
    }
    const json& timeline = as_array(field(doc, "scenario", "timeline"), "timeline");
    for (std::size_t i = 0; i < timeline.size(); ++i) {
        try {
            const json& entry = timeline[i];
            require_object(entry, "timeline entry");
            const std::int64_t t = as_int(field(entry, "timeline entry", "t_ms"), "t_ms");
            scenario.timeline.push_back(TimedEvent{t, event_from_json(entry, true)});
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), i);
        }
    }
    validate_scenario(scenario);
    return scenario;
}

std::string serialize_scenario(const Scenario& scenario) {
    ordered_json doc;
    doc["seed"] = scenario.seed;
    ordered_json targets = ordered_json::array();
    for (const auto& target : scenario.targets) targets.push_back(target_to_json(target));
    doc["targets"] = targets;
    ordered_json timeline = ordered_json::array();
    for (const auto& entry : scenario.timeline) {
        ordered_json item{{"t_ms", entry.t_ms}};
        const ordered_json event = event_to_json(entry.event);
        for (const auto& [key, value] : event.items()) item[key] = value;
        timeline.push_back(item);
    }
    doc["timeline"] = timeline;
    return doc.dump(2) + "\n";
}

std::string_view event_tag(const Event& event) noexcept {
    switch (event.index()) {
        case 0: return "robot_speaking";
        case 1: return "robot_listening";
        case 2: return "user_speaking";
        case 3: return "target_moved";
        default:
            return std::get<TargetLifecycleEvent>(event).action == LifecycleAction::Add ? "target_add"
                                                                                          : "target_remove";
    }
}

std::int64_t event_duration_ms(const Event& event) noexcept {
    return std::visit(
        [](const auto& ev) -> std::int64_t {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, RobotSpeakingEvent>) return ev.duration_ms();
            else if constexpr (std::is_same_v<T, RobotListeningEvent>) return ev.duration_ms;
            else if constexpr (std::is_same_v<T, UserSpeakingEvent>) return ev.duration_ms;
            else if constexpr (std::is_same_v<T, TargetMovedEvent>) return ev.duration_ms();
            else return 0;
        },
        event);
}

Vec3 position_along(const std::vector<Waypoint>& waypoints, std::int64_t t_ms) {
    if (t_ms <= waypoints.front().offset_ms) return waypoints.front().position;
    for (std::size_t i = 1; i < waypoints.size(); ++i) {
        const auto& a = waypoints[i - 1];
        const auto& b = waypoints[i];
        if (t_ms <= b.offset_ms) {
            const auto span = b.offset_ms - a.offset_ms;
            if (span == 0) return b.position;
            return lerp(a.position, b.position,
                        static_cast<double>(t_ms - a.offset_ms) / static_cast<double>(span));
        }
    }
    return waypoints.back().position;
}

}  // namespace gazeplan
