#pragma once

#include <mutex>

#include "broker/broker.hpp"
#include "broker/resp.hpp"
#include "broker/socket_util.hpp"

namespace semfuzz::broker {

// Broker implementation speaking RESP over TCP, compatible with a stock
// key-value broker. Queue mapping: push = LPUSH (head), blocking pop = BRPOP
// (tail) so pushes and pops line up FIFO; waits under one second are emulated
// by polling RPOP at 10ms intervals because BRPOP timeouts have whole-second
// resolution.
class RespClient final : public Broker {
public:
  RespClient(std::string host, std::uint16_t port);
  ~RespClient() override = default;

  void queue_push(const std::string& queue, const Bytes& payload) override;
  std::optional<Bytes> queue_pop(const std::string& queue,
                                 std::chrono::milliseconds timeout) override;
  std::size_t queue_len(const std::string& queue) override;
  void context_set(const std::string& key, const Bytes& value) override;
  std::optional<Bytes> context_get(const std::string& key) override;
  bool connected() const override;

  /// PING round trip; throws BrokerError when the server misbehaves.
  void ping();

  /// Drops the connection and dials again (used by reconnect loops).
  void reconnect();

private:
  resp::Reply request(const std::vector<Bytes>& args, std::chrono::milliseconds read_timeout);
  resp::Reply request_locked(const std::vector<Bytes>& args,
                             std::chrono::milliseconds read_timeout);
  void ensure_connected_locked();

  static Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

  std::string host_;
  std::uint16_t port_;
  mutable std::mutex mutex_;
  TcpSocket socket_;
  resp::Decoder decoder_;
  bool connected_ = false;
};

}  // namespace semfuzz::broker
