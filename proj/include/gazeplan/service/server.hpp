#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace gazeplan {

struct ServerOptions {
    std::uint16_t port = 8765;  // 0 picks a free port
    std::string bind_address = "127.0.0.1";
    std::chrono::milliseconds heartbeat_period{1000};
    std::chrono::milliseconds tick_period{200};
    std::size_t state_queue_capacity = 64;
};

/// WebSocket endpoint for live sessions: one connection, one session.
class Server {
public:
    explicit Server(ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Port actually bound.
    std::uint16_t port() const noexcept { return port_; }

    /// Accept connections until stop() is called.
    void run();
    void stop() noexcept;

private:
    struct Client;

    void serve_client(const std::shared_ptr<Client>& client);
    void reap_finished();

    ServerOptions options_;
    int listen_fd_ = -1;
    std::uint16_t port_ = 0;
    std::atomic<bool> stopping_{false};
    std::mutex clients_mutex_;
    std::list<std::shared_ptr<Client>> clients_;
};

}  // namespace gazeplan
