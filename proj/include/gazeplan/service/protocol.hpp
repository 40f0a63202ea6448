#pragma once

#include "gazeplan/error.hpp"
#include "gazeplan/events/events.hpp"
#include "gazeplan/planner/config.hpp"
#include "gazeplan/sim/engine.hpp"
#include "gazeplan/sim/trace.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace gazeplan {

inline constexpr int kProtocolVersion = 1;

/// Malformed client message; `field` names the offending key when known.
class ProtocolError : public Error {
public:
    ProtocolError(std::string field, const std::string& what) : Error(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class SessionMode : std::uint8_t { Stepped, Realtime };

std::string_view to_string(SessionMode mode) noexcept;

struct OpenRequest {
    SessionMode mode = SessionMode::Stepped;
    SystemKind system = SystemKind::Planned;
    Scenario world;             // validated; empty world holds only the environment
    nlohmann::json config = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
};

struct InjectRequest {
    Event event;
    std::int64_t offset_ms = 0;  // onset inside the tick it applies at
};

struct ConfigRequest {
    nlohmann::json values;
};

struct StepRequest {
    int count = 1;
};

struct CloseRequest {};

using ClientRequest = std::variant<OpenRequest, InjectRequest, ConfigRequest, StepRequest, CloseRequest>;

struct ClientMessage {
    nlohmann::json id;  // echoed back as "request_id"; null when absent
    ClientRequest request;
};

/// Parse one client message. Throws ParseError for bad JSON and
/// ProtocolError / ValidationError for schema problems.
ClientMessage parse_client_message(std::string_view text);

/// Best-effort extraction of the "id" field, for error replies.
nlohmann::json request_id_of(std::string_view text) noexcept;

// Server messages. Every message carries "schema_version" and "kind".
nlohmann::ordered_json session_opened_message(const std::string& session_id, SessionMode mode,
                                              SystemKind system, std::int64_t next_tick,
                                              const TargetRegistry& targets, const EngineConfig& config,
                                              const nlohmann::json& request_id);
nlohmann::ordered_json state_message(const std::string& session_id, const EngineTick& tick);
nlohmann::ordered_json event_ack_message(std::int64_t apply_tick, std::string_view event_type,
                                         const nlohmann::json& request_id);
nlohmann::ordered_json config_ack_message(const EngineConfig& config, std::int64_t apply_tick,
                                          const nlohmann::json& request_id);
nlohmann::ordered_json error_message(const std::string& message, const std::string& field,
                                     const nlohmann::json& request_id);
nlohmann::ordered_json heartbeat_message(std::optional<std::int64_t> next_tick);
nlohmann::ordered_json session_closed_message(const nlohmann::json& request_id);

}  // namespace gazeplan
