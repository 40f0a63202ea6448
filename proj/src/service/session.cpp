#include "gazeplan/service/session.hpp"

#include "gazeplan/events/scenario_io.hpp"
#include "gazeplan/sim/simulator.hpp"

#include <atomic>
#include <iterator>

namespace gazeplan {
namespace {

std::string next_session_id() {
    static std::atomic<std::uint64_t> counter{0};
    return "s" + std::to_string(++counter);
}

}  // namespace

// ---------------------------------------------------------------- Session

Session::Session(std::string id, const OpenRequest& request)
    : id_(std::move(id)), mode_(request.mode),
      engine_(request.world.targets, apply_config_overrides(EngineConfig{}, request.config),
              request.seed.value_or(request.world.seed), request.system),
      timeline_(schedule_events(request.world)), projected_(engine_.targets()) {
    reset_projection();
}

SystemKind Session::system() const noexcept { return engine_.system(); }

void Session::reset_projection() {
    projected_ = engine_.targets();
    const auto it = timeline_.find(engine_.next_tick());
    if (it == timeline_.end()) return;
    for (const auto& te : it->second) {
        const auto* lifecycle = std::get_if<TargetLifecycleEvent>(&te.event);
        if (lifecycle == nullptr) continue;
        if (lifecycle->action == LifecycleAction::Add) {
            projected_.add(lifecycle->target);
        } else {
            projected_.remove(lifecycle->target.id);
        }
    }
}

std::int64_t Session::inject(Event event, std::int64_t offset_ms) {
    if (offset_ms < 0 || offset_ms >= kFrameMs) throw RangeError("offset_ms must be in [0, 200)");
    std::lock_guard lock(mutex_);
    TargetRegistry projected = projected_;
    validate_event(event, projected);
    if (const auto* lifecycle = std::get_if<TargetLifecycleEvent>(&event)) {
        if (lifecycle->action == LifecycleAction::Add) {
            projected.add(lifecycle->target);
        } else {
            projected.remove(lifecycle->target.id);
        }
    }
    projected_ = std::move(projected);
    injected_.push_back(TickEvent{offset_ms, std::move(event)});
    return engine_.next_tick();
}

std::pair<EngineConfig, std::int64_t> Session::configure(const nlohmann::json& overrides) {
    std::lock_guard lock(mutex_);
    EngineConfig updated = apply_config_overrides(pending_config_.value_or(engine_.config()), overrides);
    pending_config_ = updated;
    return {updated, engine_.next_tick()};
}

EngineTick Session::step() {
    std::lock_guard lock(mutex_);
    if (pending_config_) {
        engine_.set_config(*pending_config_);
        pending_config_.reset();
    }
    std::vector<TickEvent> events;
    if (const auto it = timeline_.find(engine_.next_tick()); it != timeline_.end()) {
        events = it->second;
        timeline_.erase(it);
    }
    events.insert(events.end(), std::make_move_iterator(injected_.begin()), std::make_move_iterator(injected_.end()));
    injected_.clear();
    EngineTick tick = engine_.tick(events);
    reset_projection();
    return tick;
}

std::int64_t Session::next_tick() const {
    std::lock_guard lock(mutex_);
    return engine_.next_tick();
}

EngineConfig Session::config() const {
    std::lock_guard lock(mutex_);
    return pending_config_.value_or(engine_.config());
}

nlohmann::ordered_json Session::opened_message(const nlohmann::json& request_id) const {
    std::lock_guard lock(mutex_);
    return session_opened_message(id_, mode_, engine_.system(), engine_.next_tick(), engine_.targets(),
                                  engine_.config(), request_id);
}

// ----------------------------------------------------------------- Outbox

void Outbox::push(std::string text, bool droppable) {
    {
        std::lock_guard lock(mutex_);
        if (closed_) return;
        if (droppable && droppable_count_ >= capacity_) {
            for (auto it = items_.begin(); it != items_.end(); ++it) {
                if (it->droppable) {
                    items_.erase(it);
                    --droppable_count_;
                    ++dropped_;
                    break;
                }
            }
        }
        items_.push_back(Item{std::move(text), droppable});
        if (droppable) ++droppable_count_;
    }
    cv_.notify_one();
}

std::optional<std::string> Outbox::pop(std::chrono::milliseconds timeout) {
    std::unique_lock lock(mutex_);
    cv_.wait_for(lock, timeout, [&] { return closed_ || !items_.empty(); });
    if (items_.empty()) return std::nullopt;
    Item item = std::move(items_.front());
    items_.pop_front();
    if (item.droppable) --droppable_count_;
    return std::move(item.text);
}

void Outbox::close() {
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool Outbox::closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
}

std::size_t Outbox::dropped() const {
    std::lock_guard lock(mutex_);
    return dropped_;
}

// ------------------------------------------------------------- Connection

Connection::Connection(Sink sink, std::chrono::milliseconds tick_period)
    : sink_(std::move(sink)), period_(tick_period) {}

Connection::~Connection() { stop_engine(); }

void Connection::emit(const nlohmann::ordered_json& message, bool droppable) {
    sink_(message.dump(), droppable);
}

bool Connection::has_session() const {
    std::lock_guard lock(mutex_);
    return session_ != nullptr;
}

void Connection::heartbeat() {
    std::shared_ptr<Session> session;
    {
        std::lock_guard lock(mutex_);
        session = session_;
    }
    std::lock_guard order(emit_mutex_);
    emit(heartbeat_message(session ? std::optional<std::int64_t>(session->next_tick()) : std::nullopt), false);
}

void Connection::run_one_tick() {
    std::lock_guard order(emit_mutex_);
    const EngineTick tick = session_->step();
    emit(state_message(session_->id(), tick), true);
}

void Connection::engine_loop() {
    auto deadline = std::chrono::steady_clock::now();
    std::unique_lock lock(mutex_);
    while (!stop_) {
        if (realtime_) {
            if (cv_.wait_until(lock, deadline, [&] { return stop_; })) break;
            deadline += period_;
        } else {
            cv_.wait(lock, [&] { return stop_ || pending_steps_ > 0; });
            if (stop_) break;
            --pending_steps_;
        }
        running_ = true;
        lock.unlock();
        run_one_tick();
        lock.lock();
        running_ = false;
        cv_.notify_all();
    }
}

void Connection::stop_engine() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    cv_.notify_all();
    if (engine_thread_.joinable()) engine_thread_.join();
}

void Connection::wait_idle() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return stop_ || (pending_steps_ == 0 && !running_); });
}

bool Connection::handle(std::string_view text) {
    const nlohmann::json request_id = request_id_of(text);
    const auto fail = [&](const std::string& message, const std::string& field) {
        std::lock_guard order(emit_mutex_);
        emit(error_message(message, field, request_id), false);
    };

    ClientMessage message;
    try {
        message = parse_client_message(text);
    } catch (const ProtocolError& e) {
        fail(e.what(), e.field());
        return true;
    } catch (const ConfigError& e) {
        fail(e.what(), e.field());
        return true;
    } catch (const Error& e) {
        fail(e.what(), "");
        return true;
    }

    std::shared_ptr<Session> session;
    {
        std::lock_guard lock(mutex_);
        session = session_;
    }

    if (auto* open = std::get_if<OpenRequest>(&message.request)) {
        if (session) {
            fail("a session is already open on this connection", "type");
            return true;
        }
        try {
            session = std::make_shared<Session>(next_session_id(), *open);
        } catch (const ConfigError& e) {
            fail(e.what(), e.field());
            return true;
        } catch (const Error& e) {
            fail(e.what(), "world");
            return true;
        }
        {
            std::lock_guard order(emit_mutex_);
            emit(session->opened_message(message.id), false);
        }
        std::lock_guard lock(mutex_);
        session_ = session;
        realtime_ = open->mode == SessionMode::Realtime;
        engine_thread_ = std::thread([this] { engine_loop(); });
        return true;
    }

    if (std::holds_alternative<CloseRequest>(message.request)) {
        stop_engine();
        std::lock_guard order(emit_mutex_);
        emit(session_closed_message(message.id), false);
        return false;
    }

    if (!session) {
        fail("no open session; send an \"open\" message first", "type");
        return true;
    }

    if (auto* inject = std::get_if<InjectRequest>(&message.request)) {
        std::lock_guard order(emit_mutex_);
        const std::string type(event_tag(inject->event));
        try {
            const std::int64_t tick = session->inject(std::move(inject->event), inject->offset_ms);
            emit(event_ack_message(tick, type, message.id), false);
        } catch (const Error& e) {
            emit(error_message(e.what(), "event", message.id), false);
        }
        return true;
    }

    if (auto* config = std::get_if<ConfigRequest>(&message.request)) {
        std::lock_guard order(emit_mutex_);
        try {
            const auto [updated, tick] = session->configure(config->values);
            emit(config_ack_message(updated, tick, message.id), false);
        } catch (const ConfigError& e) {
            emit(error_message(e.what(), e.field(), message.id), false);
        } catch (const Error& e) {
            emit(error_message(e.what(), "values", message.id), false);
        }
        return true;
    }

    if (const auto* step = std::get_if<StepRequest>(&message.request)) {
        if (session->mode() != SessionMode::Stepped) {
            fail("step is only accepted in stepped mode", "type");
            return true;
        }
        {
            std::lock_guard lock(mutex_);
            pending_steps_ += step->count;
        }
        cv_.notify_all();
        return true;
    }
    return true;
}

}  // namespace gazeplan
