#include "gazeplan/service/protocol.hpp"

#include "gazeplan/events/scenario_io.hpp"

namespace gazeplan {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void reject_unknown(const json& j, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const auto a : allowed) known = known || key == a;
        if (!known) throw ProtocolError(key, "unknown field '" + key + "'");
    }
}

ordered_json stamp(std::string_view kind) {
    ordered_json j;
    j["schema_version"] = kProtocolVersion;
    j["kind"] = std::string(kind);
    return j;
}

void attach_id(ordered_json& j, const json& request_id) {
    if (!request_id.is_null()) j["request_id"] = request_id;
}

OpenRequest parse_open(const json& j) {
    reject_unknown(j, {"type", "id", "mode", "system", "world", "config", "seed"});
    OpenRequest open;
    if (j.contains("mode")) {
        const auto& mode = j.at("mode");
        if (mode == "stepped") {
            open.mode = SessionMode::Stepped;
        } else if (mode == "realtime") {
            open.mode = SessionMode::Realtime;
        } else {
            throw ProtocolError("mode", "mode must be \"stepped\" or \"realtime\"");
        }
    }
    if (j.contains("system")) {
        const auto system = j.at("system").is_string()
                                ? system_from_string(j.at("system").get<std::string>())
                                : std::nullopt;
        if (!system) throw ProtocolError("system", "system must be \"planned\" or \"reactive\"");
        open.system = *system;
    }
    if (j.contains("world") && !j.at("world").is_null()) {
        if (!j.at("world").is_object()) throw ProtocolError("world", "world must be a scenario object");
        open.world = parse_scenario(j.at("world").dump());
    } else {
        validate_scenario(open.world);
    }
    if (j.contains("config") && !j.at("config").is_null()) {
        if (!j.at("config").is_object()) throw ProtocolError("config", "config must be an object");
        open.config = j.at("config");
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ProtocolError("seed", "seed must be a non-negative integer");
        open.seed = j.at("seed").get<std::uint64_t>();
    }
    return open;
}

InjectRequest parse_inject(const json& j) {
    reject_unknown(j, {"type", "id", "event", "offset_ms"});
    if (!j.contains("event") || !j.at("event").is_object()) {
        throw ProtocolError("event", "inject needs an \"event\" object");
    }
    InjectRequest inject;
    inject.event = event_from_json(j.at("event"));
    if (j.contains("offset_ms")) {
        const auto& offset = j.at("offset_ms");
        if (!offset.is_number_integer() || offset.get<std::int64_t>() < 0 ||
            offset.get<std::int64_t>() >= kFrameMs) {
            throw ProtocolError("offset_ms", "offset_ms must be an integer in [0, 200)");
        }
        inject.offset_ms = offset.get<std::int64_t>();
    }
    return inject;
}

ConfigRequest parse_config(const json& j) {
    reject_unknown(j, {"type", "id", "values"});
    if (!j.contains("values") || !j.at("values").is_object()) {
        throw ProtocolError("values", "config needs a \"values\" object");
    }
    return ConfigRequest{j.at("values")};
}

StepRequest parse_step(const json& j) {
    reject_unknown(j, {"type", "id", "count"});
    StepRequest step;
    if (j.contains("count")) {
        const auto& count = j.at("count");
        if (!count.is_number_integer() || count.get<std::int64_t>() < 1 || count.get<std::int64_t>() > 10000) {
            throw ProtocolError("count", "count must be an integer in [1, 10000]");
        }
        step.count = count.get<int>();
    }
    return step;
}

}  // namespace

std::string_view to_string(SessionMode mode) noexcept {
    return mode == SessionMode::Stepped ? "stepped" : "realtime";
}

ClientMessage parse_client_message(std::string_view text) {
    const json j = parse_json_text(text);
    if (!j.is_object()) throw ProtocolError("", "message must be a JSON object");
    if (!j.contains("type") || !j.at("type").is_string()) {
        throw ProtocolError("type", "message needs a string \"type\"");
    }
    ClientMessage message;
    if (j.contains("id")) message.id = j.at("id");
    const auto type = j.at("type").get<std::string>();
    if (type == "open") {
        message.request = parse_open(j);
    } else if (type == "inject") {
        message.request = parse_inject(j);
    } else if (type == "config") {
        message.request = parse_config(j);
    } else if (type == "step") {
        message.request = parse_step(j);
    } else if (type == "close") {
        reject_unknown(j, {"type", "id"});
        message.request = CloseRequest{};
    } else {
        throw ProtocolError("type", "unknown message type '" + type + "'");
    }
    return message;
}

json request_id_of(std::string_view text) noexcept {
    try {
        const json j = json::parse(text);
        if (j.is_object() && j.contains("id")) return j.at("id");
    } catch (...) {
    }
    return nullptr;
}

ordered_json session_opened_message(const std::string& session_id, SessionMode mode, SystemKind system,
                                    std::int64_t next_tick, const TargetRegistry& targets,
                                    const EngineConfig& config, const json& request_id) {
    ordered_json j = stamp("SESSION_OPENED");
    attach_id(j, request_id);
    j["session"] = session_id;
    j["mode"] = std::string(to_string(mode));
    j["system"] = std::string(to_string(system));
    j["next_tick"] = next_tick;
    ordered_json list = ordered_json::array();
    for (const auto& t : targets.all()) list.push_back(target_to_json(t));
    j["targets"] = list;
    j["config"] = config_to_json(config);
    return j;
}

ordered_json state_message(const std::string& session_id, const EngineTick& tick) {
    ordered_json j = stamp("STATE");
    j["session"] = session_id;
    j["record"] = record_to_json(tick.record);
    ordered_json columns = ordered_json::object();
    for (const auto& [id, values] : tick.plan_columns) columns[id.str()] = values;
    j["priorities"] = columns;
    return j;
}

ordered_json event_ack_message(std::int64_t apply_tick, std::string_view event_type, const json& request_id) {
    ordered_json j = stamp("EVENT_ACK");
    attach_id(j, request_id);
    j["event_type"] = std::string(event_type);
    j["apply_tick"] = apply_tick;
    return j;
}

ordered_json config_ack_message(const EngineConfig& config, std::int64_t apply_tick, const json& request_id) {
    ordered_json j = stamp("CONFIG_ACK");
    attach_id(j, request_id);
    j["apply_tick"] = apply_tick;
    j["config"] = config_to_json(config);
    return j;
}

ordered_json error_message(const std::string& message, const std::string& field, const json& request_id) {
    ordered_json j = stamp("ERROR");
    attach_id(j, request_id);
    j["message"] = message;
    j["field"] = field.empty() ? ordered_json(nullptr) : ordered_json(field);
    return j;
}

ordered_json heartbeat_message(std::optional<std::int64_t> next_tick) {
    ordered_json j = stamp("HEARTBEAT");
    j["next_tick"] = next_tick ? ordered_json(*next_tick) : ordered_json(nullptr);
    return j;
}

ordered_json session_closed_message(const json& request_id) {
    ordered_json j = stamp("SESSION_CLOSED");
    attach_id(j, request_id);
    return j;
}

}  // namespace gazeplan
