#pragma once

#include "gazeplan/service/protocol.hpp"
#include "gazeplan/sim/engine.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace gazeplan {

/// A live engine plus the events and config changes queued for its next
/// tick. All methods are thread-safe; state only changes at tick
/// boundaries.
class Session {
public:
    /// Throws ConfigError for bad config overrides and ValidationError for
    /// an invalid world.
    Session(std::string id, const OpenRequest& request);

    const std::string& id() const noexcept { return id_; }
    SessionMode mode() const noexcept { return mode_; }
    SystemKind system() const noexcept;

    /// Validate `event` against the targets it will meet and queue it.
    /// Returns the tick it applies at. Throws on invalid events, leaving
    /// the session untouched.
    std::int64_t inject(Event event, std::int64_t offset_ms = 0);

    /// Validate the overrides and queue the resulting config for the next
    /// tick. Returns the new config and the tick it applies at.
    std::pair<EngineConfig, std::int64_t> configure(const nlohmann::json& overrides);

    /// Run one tick with everything queued for it.
    EngineTick step();

    std::int64_t next_tick() const;
    EngineConfig config() const;
    nlohmann::ordered_json opened_message(const nlohmann::json& request_id) const;

private:
    void reset_projection();

    mutable std::mutex mutex_;
    std::string id_;
    SessionMode mode_;
    Engine engine_;
    std::map<std::int64_t, std::vector<TickEvent>> timeline_;  // events from the opening world
    std::vector<TickEvent> injected_;
    std::optional<EngineConfig> pending_config_;
    /// Targets as the next tick will see them after queued lifecycle events.
    TargetRegistry projected_;
};

/// Outgoing message queue. STATE frames are dropped (oldest first) once
/// `state_capacity` of them are waiting; other messages are never dropped.
class Outbox {
public:
    explicit Outbox(std::size_t state_capacity = 64) : capacity_(state_capacity) {}

    void push(std::string text, bool droppable);
    /// Wait up to `timeout` for a message; empty when timed out or closed.
    std::optional<std::string> pop(std::chrono::milliseconds timeout);
    void close();
    bool closed() const;
    std::size_t dropped() const;

private:
    struct Item {
        std::string text;
        bool droppable = false;
    };
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::deque<Item> items_;
    std::size_t capacity_;
    std::size_t droppable_count_ = 0;
    std::size_t dropped_ = 0;
    bool closed_ = false;
};

/// Transport-independent protocol handler for one client connection. It
/// owns at most one session and the engine thread that ticks it.
class Connection {
public:
    using Sink = std::function<void(std::string text, bool droppable)>;

    explicit Connection(Sink sink, std::chrono::milliseconds tick_period = std::chrono::milliseconds(kFrameMs));
    ~Connection();
    Connection(const Connection&) = delete;
    Connection& operator=(const Connection&) = delete;

    /// Handle one client message. Returns false once the client has closed.
    bool handle(std::string_view text);

    /// Emit a HEARTBEAT message.
    void heartbeat();

    bool has_session() const;
    /// Block until every requested step has run (stepped mode).
    void wait_idle();

private:
    void engine_loop();
    void stop_engine();
    void emit(const nlohmann::ordered_json& message, bool droppable);
    void run_one_tick();

    Sink sink_;
    std::chrono::milliseconds period_;
    std::shared_ptr<Session> session_;

    mutable std::mutex mutex_;  // guards the fields below and orders ticks against acks
    std::condition_variable cv_;
    int pending_steps_ = 0;
    bool running_ = false;
    bool stop_ = false;
    bool realtime_ = false;
    std::thread engine_thread_;
    std::mutex emit_mutex_;
};

}  // namespace gazeplan
