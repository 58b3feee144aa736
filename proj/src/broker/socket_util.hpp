#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <string>

namespace semfuzz::broker {

// Thin RAII wrapper over a connected TCP socket. Throws BrokerError on
// connect/send failures; recv distinguishes timeout (0 bytes) from closure.
class TcpSocket {
public:
  TcpSocket() = default;
  TcpSocket(TcpSocket&& other) noexcept;
  TcpSocket& operator=(TcpSocket&& other) noexcept;
  ~TcpSocket();

  TcpSocket(const TcpSocket&) = delete;
  TcpSocket& operator=(const TcpSocket&) = delete;

  static TcpSocket connect(const std::string& host, std::uint16_t port,
                           std::chrono::milliseconds timeout);

  void send_all(std::string_view data);

  // Up to `max` bytes within `timeout`. Returns 0 on timeout; throws
  // BrokerError when the peer closed or the socket failed.
  std::size_t recv_some(char* out, std::size_t max, std::chrono::milliseconds timeout);

  bool valid() const { return fd_ >= 0; }
  int fd() const { return fd_; }
  void close_fd();

private:
  explicit TcpSocket(int fd) : fd_(fd) {}
  int fd_ = -1;
};

}  // namespace semfuzz::broker
