#pragma once

#include <array>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace gazeplan {

enum class Opcode : std::uint8_t {
    Continuation = 0x0,
    Text = 0x1,
    Binary = 0x2,
    Close = 0x8,
    Ping = 0x9,
    Pong = 0xA,
};

struct Frame {
    bool fin = true;
    Opcode opcode = Opcode::Text;
    std::string payload;
};

inline constexpr std::size_t kMaxMessageBytes = 4 * 1024 * 1024;

/// Sec-WebSocket-Accept value for a client key.
std::string websocket_accept_key(std::string_view client_key);

/// One frame; clients must pass a mask, servers must not.
std::string encode_frame(Opcode opcode, std::string_view payload,
                         std::optional<std::array<std::uint8_t, 4>> mask = std::nullopt, bool fin = true);

/// Decode the frame at the front of `buffer`. Returns nullopt when more
/// bytes are needed; otherwise sets `consumed`. Throws ProtocolError for
/// malformed or oversized frames.
std::optional<Frame> decode_frame(std::string_view buffer, std::size_t& consumed,
                                  std::size_t max_payload = kMaxMessageBytes);

/// Owning wrapper around a connected TCP socket.
class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) noexcept : fd_(fd) {}
    ~Socket();
    Socket(Socket&& other) noexcept;
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;

    static Socket connect(const std::string& host, std::uint16_t port);

    int fd() const noexcept { return fd_; }
    bool valid() const noexcept { return fd_ >= 0; }
    /// Bytes read, 0 on orderly shutdown; throws on error.
    std::size_t read_some(char* data, std::size_t size);
    void write_all(std::string_view data);
    /// Unblock readers and writers without releasing the descriptor.
    void shutdown() noexcept;

private:
    int fd_ = -1;
};

/// Message-level WebSocket endpoint over a connected socket. One thread
/// may receive while others send.
class WebSocket {
public:
    /// Server side: read the HTTP upgrade request and answer it.
    static WebSocket accept(Socket socket);
    /// Client side: connect and perform the opening handshake.
    static WebSocket connect(const std::string& host, std::uint16_t port, const std::string& path = "/");

    /// Next complete text or binary message; nullopt once the peer closed.
    /// Answers pings on the way.
    std::optional<std::string> receive();
    void send_text(std::string_view text);
    /// Send a close frame (if still open) and shut the socket down.
    void close() noexcept;
    void shutdown() noexcept { socket_.shutdown(); }

    WebSocket(WebSocket&& other) noexcept;
    WebSocket& operator=(WebSocket&&) = delete;

private:
    WebSocket(Socket socket, bool client, std::string buffered);
    void send_frame(Opcode opcode, std::string_view payload);

    Socket socket_;
    bool client_ = false;
    std::string buffer_;
    std::mutex write_mutex_;
    bool closed_ = false;
};

}  // namespace gazeplan
