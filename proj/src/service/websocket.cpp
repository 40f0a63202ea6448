#include "gazeplan/service/websocket.hpp"

#include "gazeplan/service/protocol.hpp"

#include <openssl/evp.h>

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>
#include <random>
#include <system_error>
#include <utility>

namespace gazeplan {
namespace {

constexpr std::string_view kWebSocketGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
constexpr std::size_t kMaxHandshakeBytes = 16 * 1024;

std::string base64(const unsigned char* data, std::size_t size) {
    std::string out(4 * ((size + 2) / 3), '\0');
    const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data, static_cast<int>(size));
    out.resize(static_cast<std::size_t>(written));
    return out;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

/// Header lookup (case-insensitive name) in a raw HTTP head.
std::optional<std::string> header(std::string_view head, std::string_view name) {
    const std::string wanted = lower(name);
    std::size_t pos = head.find("\r\n");
    while (pos != std::string_view::npos && pos + 2 < head.size()) {
        const std::size_t start = pos + 2;
        const std::size_t end = head.find("\r\n", start);
        const std::string_view line = head.substr(start, end == std::string_view::npos ? end : end - start);
        const auto colon = line.find(':');
        if (colon != std::string_view::npos && lower(trim(line.substr(0, colon))) == wanted) {
            return trim(line.substr(colon + 1));
        }
        pos = end;
    }
    return std::nullopt;
}

/// Read until the end of an HTTP head; returns head and any extra bytes.
std::pair<std::string, std::string> read_http_head(Socket& socket) {
    std::string data;
    char chunk[1024];
    while (true) {
        const auto end = data.find("\r\n\r\n");
        if (end != std::string::npos) return {data.substr(0, end + 4), data.substr(end + 4)};
        if (data.size() > kMaxHandshakeBytes) throw ProtocolError("", "handshake too large");
        const std::size_t n = socket.read_some(chunk, sizeof chunk);
        if (n == 0) throw ProtocolError("", "connection closed during handshake");
        data.append(chunk, n);
    }
}

}  // namespace

std::string websocket_accept_key(std::string_view client_key) {
    const std::string input = std::string(client_key) + std::string(kWebSocketGuid);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(input.data(), input.size(), digest, &length, EVP_sha1(), nullptr) != 1) {
        throw Error("SHA-1 digest failed");
    }
    return base64(digest, length);
}

std::string encode_frame(Opcode opcode, std::string_view payload, std::optional<std::array<std::uint8_t, 4>> mask,
                         bool fin) {
    std::string out;
    out.push_back(static_cast<char>((fin ? 0x80 : 0x00) | static_cast<std::uint8_t>(opcode)));
    const std::uint8_t mask_bit = mask ? 0x80 : 0x00;
    const std::size_t n = payload.size();
    if (n < 126) {
        out.push_back(static_cast<char>(mask_bit | n));
    } else if (n <= 0xFFFF) {
        out.push_back(static_cast<char>(mask_bit | 126));
        out.push_back(static_cast<char>((n >> 8) & 0xFF));
        out.push_back(static_cast<char>(n & 0xFF));
    } else {
        out.push_back(static_cast<char>(mask_bit | 127));
        for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((n >> shift) & 0xFF));
    }
    if (mask) {
        for (const auto b : *mask) out.push_back(static_cast<char>(b));
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(static_cast<char>(static_cast<std::uint8_t>(payload[i]) ^ (*mask)[i % 4]));
        }
    } else {
        out.append(payload);
    }
    return out;
}

std::optional<Frame> decode_frame(std::string_view buffer, std::size_t& consumed, std::size_t max_payload) {
    if (buffer.size() < 2) return std::nullopt;
    const auto byte = [&](std::size_t i) { return static_cast<std::uint8_t>(buffer[i]); };
    Frame frame;
    frame.fin = (byte(0) & 0x80) != 0;
    if ((byte(0) & 0x70) != 0) throw ProtocolError("", "reserved frame bits set");
    const std::uint8_t op = byte(0) & 0x0F;
    switch (op) {
        case 0x0: case 0x1: case 0x2: case 0x8: case 0x9: case 0xA: break;
        default: throw ProtocolError("", "unknown frame opcode");
    }
    frame.opcode = static_cast<Opcode>(op);
    const bool masked = (byte(1) & 0x80) != 0;
    std::uint64_t length = byte(1) & 0x7F;
    std::size_t pos = 2;
    if (length == 126) {
        if (buffer.size() < 4) return std::nullopt;
        length = (std::uint64_t{byte(2)} << 8) | byte(3);
        pos = 4;
    } else if (length == 127) {
        if (buffer.size() < 10) return std::nullopt;
        length = 0;
        for (std::size_t i = 0; i < 8; ++i) length = (length << 8) | byte(2 + i);
        pos = 10;
    }
    if (length > max_payload) throw ProtocolError("", "frame exceeds the message size limit");
    if (op >= 0x8 && (length > 125 || !frame.fin)) throw ProtocolError("", "malformed control frame");
    std::array<std::uint8_t, 4> mask{};
    if (masked) {
        if (buffer.size() < pos + 4) return std::nullopt;
        for (std::size_t i = 0; i < 4; ++i) mask[i] = byte(pos + i);
        pos += 4;
    }
    if (buffer.size() < pos + length) return std::nullopt;
    frame.payload.assign(buffer.substr(pos, static_cast<std::size_t>(length)));
    if (masked) {
        for (std::size_t i = 0; i < frame.payload.size(); ++i) {
            frame.payload[i] = static_cast<char>(static_cast<std::uint8_t>(frame.payload[i]) ^ mask[i % 4]);
        }
    }
    consumed = pos + static_cast<std::size_t>(length);
    return frame;
}

// ----------------------------------------------------------------- Socket

Socket::~Socket() {
    if (fd_ >= 0) ::close(fd_);
}

Socket::Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

Socket Socket::connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* result = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &result); rc != 0) {
        throw Error("cannot resolve " + host + ": " + ::gai_strerror(rc));
    }
    int fd = -1;
    for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
        fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0) continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
        ::close(fd);
        fd = -1;
    }
    ::freeaddrinfo(result);
    if (fd < 0) throw Error("cannot connect to " + host + ":" + service);
    const int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return Socket(fd);
}

std::size_t Socket::read_some(char* data, std::size_t size) {
    while (true) {
        const ssize_t n = ::recv(fd_, data, size, 0);
        if (n >= 0) return static_cast<std::size_t>(n);
        if (errno == EINTR) continue;
        if (errno == ECONNRESET || errno == ENOTCONN) return 0;
        throw std::system_error(errno, std::generic_category(), "recv");
    }
}

void Socket::write_all(std::string_view data) {
    while (!data.empty()) {
        const ssize_t n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw std::system_error(errno, std::generic_category(), "send");
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

void Socket::shutdown() noexcept {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

// -------------------------------------------------------------- WebSocket

WebSocket::WebSocket(Socket socket, bool client, std::string buffered)
    : socket_(std::move(socket)), client_(client), buffer_(std::move(buffered)) {}

WebSocket::WebSocket(WebSocket&& other) noexcept
    : socket_(std::move(other.socket_)), client_(other.client_), buffer_(std::move(other.buffer_)),
      closed_(other.closed_) {}

WebSocket WebSocket::accept(Socket socket) {
    auto [head, rest] = read_http_head(socket);
    const auto reject = [&](const std::string& why) {
        socket.write_all("HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\nConnection: close\r\n\r\n");
        throw ProtocolError("", why);
    };
    if (head.rfind("GET ", 0) != 0) reject("expected a GET upgrade request");
    const auto upgrade = header(head, "Upgrade");
    if (!upgrade || lower(*upgrade) != "websocket") reject("missing Upgrade: websocket");
    const auto key = header(head, "Sec-WebSocket-Key");
    if (!key || key->empty()) reject("missing Sec-WebSocket-Key");
    socket.write_all("HTTP/1.1 101 Switching Protocols\r\n"
                     "Upgrade: websocket\r\n"
                     "Connection: Upgrade\r\n"
                     "Sec-WebSocket-Accept: " +
                     websocket_accept_key(*key) + "\r\n\r\n");
    return WebSocket(std::move(socket), false, std::move(rest));
}

WebSocket WebSocket::connect(const std::string& host, std::uint16_t port, const std::string& path) {
    Socket socket = Socket::connect(host, port);
    std::random_device rd;
    unsigned char nonce[16];
    for (auto& b : nonce) b = static_cast<unsigned char>(rd() & 0xFF);
    const std::string key = base64(nonce, sizeof nonce);
    socket.write_all("GET " + path + " HTTP/1.1\r\n" + "Host: " + host + ":" + std::to_string(port) +
                     "\r\n"
                     "Upgrade: websocket\r\n"
                     "Connection: Upgrade\r\n"
                     "Sec-WebSocket-Version: 13\r\n"
                     "Sec-WebSocket-Key: " +
                     key + "\r\n\r\n");
    auto [head, rest] = read_http_head(socket);
    if (head.rfind("HTTP/1.1 101", 0) != 0) throw ProtocolError("", "server refused the upgrade");
    const auto accept = header(head, "Sec-WebSocket-Accept");
    if (!accept || *accept != websocket_accept_key(key)) throw ProtocolError("", "bad Sec-WebSocket-Accept");
    return WebSocket(std::move(socket), true, std::move(rest));
}

void WebSocket::send_frame(Opcode opcode, std::string_view payload) {
    std::optional<std::array<std::uint8_t, 4>> mask;
    if (client_) {
        static thread_local std::mt19937 gen{std::random_device{}()};
        mask = std::array<std::uint8_t, 4>{};
        for (auto& b : *mask) b = static_cast<std::uint8_t>(gen() & 0xFF);
    }
    const std::string frame = encode_frame(opcode, payload, mask);
    std::lock_guard lock(write_mutex_);
    socket_.write_all(frame);
}

void WebSocket::send_text(std::string_view text) { send_frame(Opcode::Text, text); }

std::optional<std::string> WebSocket::receive() {
    std::string message;
    bool in_message = false;
    char chunk[4096];
    while (true) {
        std::size_t consumed = 0;
        std::optional<Frame> frame = decode_frame(buffer_, consumed);
        if (!frame) {
            const std::size_t n = socket_.read_some(chunk, sizeof chunk);
            if (n == 0) return std::nullopt;
            buffer_.append(chunk, n);
            continue;
        }
        buffer_.erase(0, consumed);
        switch (frame->opcode) {
            case Opcode::Ping:
                send_frame(Opcode::Pong, frame->payload);
                break;
            case Opcode::Pong:
                break;
            case Opcode::Close: {
                std::lock_guard lock(write_mutex_);
                if (!closed_) {
                    closed_ = true;
                    try {
                        socket_.write_all(encode_frame(Opcode::Close, frame->payload.substr(0, 2),
                                                       client_ ? std::optional<std::array<std::uint8_t, 4>>(
                                                                     std::array<std::uint8_t, 4>{1, 2, 3, 4})
                                                               : std::nullopt));
                    } catch (...) {
                    }
                }
                return std::nullopt;
            }
            case Opcode::Text:
            case Opcode::Binary:
                if (in_message) throw ProtocolError("", "new message before the previous one finished");
                message = std::move(frame->payload);
                in_message = true;
                break;
            case Opcode::Continuation:
                if (!in_message) throw ProtocolError("", "continuation frame without a message");
                if (message.size() + frame->payload.size() > kMaxMessageBytes) {
                    throw ProtocolError("", "message exceeds the size limit");
                }
                message += frame->payload;
                break;
        }
        if (in_message && frame->fin) return message;
    }
}

void WebSocket::close() noexcept {
    {
        std::lock_guard lock(write_mutex_);
        if (!closed_) {
            closed_ = true;
            try {
                const std::string payload{'\x03', '\xE8'};  // 1000, normal closure
                socket_.write_all(encode_frame(Opcode::Close, payload,
                                               client_ ? std::optional<std::array<std::uint8_t, 4>>(
                                                             std::array<std::uint8_t, 4>{5, 6, 7, 8})
                                                       : std::nullopt));
            } catch (...) {
            }
        }
    }
    socket_.shutdown();
}

}  // namespace gazeplan
