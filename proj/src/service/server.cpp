#include "gazeplan/service/server.hpp"

#include "gazeplan/error.hpp"
#include "gazeplan/service/session.hpp"
#include "gazeplan/service/websocket.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>

namespace gazeplan {

struct Server::Client {
    std::thread thread;
    std::mutex mutex;
    int fd = -1;  // valid while the socket is open
    std::atomic<bool> done{false};

    void shutdown() {
        std::lock_guard lock(mutex);
        if (fd >= 0) ::shutdown(fd, SHUT_RDWR);
    }
};

Server::Server(ServerOptions options) : options_(std::move(options)) {
    listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listen_fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
    const int one = 1;
    ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(options_.port);
    if (::inet_pton(AF_INET, options_.bind_address.c_str(), &addr.sin_addr) != 1) {
        ::close(listen_fd_);
        throw Error("invalid bind address " + options_.bind_address);
    }
    if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 16) != 0) {
        const std::string why = std::strerror(errno);
        ::close(listen_fd_);
        throw Error("cannot listen on " + options_.bind_address + ":" + std::to_string(options_.port) + ": " + why);
    }
    socklen_t len = sizeof addr;
    ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

Server::~Server() {
    stop();
    std::list<std::shared_ptr<Client>> clients;
    {
        std::lock_guard lock(clients_mutex_);
        clients.swap(clients_);
    }
    for (auto& c : clients) {
        c->shutdown();
        if (c->thread.joinable()) c->thread.join();
    }
    if (listen_fd_ >= 0) ::close(listen_fd_);
}

void Server::stop() noexcept {
    stopping_ = true;
    std::lock_guard lock(clients_mutex_);
    for (auto& c : clients_) c->shutdown();
}

void Server::reap_finished() {
    std::lock_guard lock(clients_mutex_);
    for (auto it = clients_.begin(); it != clients_.end();) {
        if ((*it)->done) {
            if ((*it)->thread.joinable()) (*it)->thread.join();
            it = clients_.erase(it);
        } else {
            ++it;
        }
    }
}

void Server::run() {
    while (!stopping_) {
        pollfd pfd{listen_fd_, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, 100);
        reap_finished();
        if (ready <= 0) continue;
        const int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) continue;
        const int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        auto client = std::make_shared<Client>();
        client->fd = fd;
        std::lock_guard lock(clients_mutex_);
        if (stopping_) {
            ::close(fd);
            break;
        }
        clients_.push_back(client);
        client->thread = std::thread([this, client] { serve_client(client); });
    }
}

void Server::serve_client(const std::shared_ptr<Client>& client) {
    try {
        WebSocket ws = WebSocket::accept(Socket(client->fd));
        Outbox outbox(options_.state_queue_capacity);
        {
            Connection connection([&](std::string text, bool droppable) { outbox.push(std::move(text), droppable); },
                                  options_.tick_period);
            std::thread writer([&] {
                auto next_heartbeat = std::chrono::steady_clock::now() + options_.heartbeat_period;
                while (true) {
                    const auto now = std::chrono::steady_clock::now();
                    if (now >= next_heartbeat && !outbox.closed()) {
                        connection.heartbeat();
                        next_heartbeat = now + options_.heartbeat_period;
                    }
                    const auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(next_heartbeat - now);
                    auto message = outbox.pop(std::max(wait, std::chrono::milliseconds(1)));
                    if (message) {
                        try {
                            ws.send_text(*message);
                        } catch (const std::exception&) {
                            ws.shutdown();
                            outbox.close();
                        }
                    } else if (outbox.closed()) {
                        break;
                    }
                }
            });
            try {
                while (auto text = ws.receive()) {
                    if (!connection.handle(*text)) break;
                }
            } catch (const std::exception& e) {
                std::cerr << "gazeplan serve: connection dropped: " << e.what() << '\n';
            }
            outbox.close();
            writer.join();
        }
        ws.close();
        std::lock_guard lock(client->mutex);
        client->fd = -1;
    } catch (const std::exception& e) {
        std::cerr << "gazeplan serve: handshake failed: " << e.what() << '\n';
        std::lock_guard lock(client->mutex);
        client->fd = -1;
    }
    client->done = true;
}

}  // namespace gazeplan
