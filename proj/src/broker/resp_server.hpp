#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "broker/resp.hpp"
#include "core/types.hpp"

namespace semfuzz::broker {

// Minimal RESP-speaking broker so every test can run hermetically. Implements
// LPUSH, RPUSH, LPOP, RPOP, BRPOP (single key), GET, SET, PING and LLEN on a
// single-threaded event loop; blocked BRPOP clients are parked and served in
// arrival order. No auth, no persistence.
class MiniRespServer {
public:
  // port 0 binds an ephemeral port; port() reports the actual one.
  explicit MiniRespServer(const std::string& host = "127.0.0.1", std::uint16_t port = 0);
  ~MiniRespServer();

  MiniRespServer(const MiniRespServer&) = delete;
  MiniRespServer& operator=(const MiniRespServer&) = delete;

  std::uint16_t port() const { return port_; }
  const std::string& host() const { return host_; }

  void stop();

private:
  struct Connection {
    resp::Decoder decoder;
    std::string outbuf;
    bool blocked = false;
    std::string blocked_key;
    bool block_forever = false;
    std::chrono::steady_clock::time_point block_deadline{};
    bool closing = false;
  };

  void loop();
  void accept_clients();
  void read_from(int fd);
  void process_commands(int fd);
  resp::Reply execute(int fd, const std::vector<Bytes>& args);
  void enqueue_reply(int fd, const resp::Reply& reply);
  void flush(int fd);
  void close_connection(int fd);
  void serve_blocked(const std::string& key);
  void expire_blocked();

  static std::string upper_ascii(const Bytes& b);

  std::string host_;
  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  int wake_pipe_[2] = {-1, -1};
  std::atomic<bool> stop_{false};
  std::thread thread_;

  std::map<int, Connection> connections_;
  std::map<std::string, std::deque<Bytes>> queues_;
  std::map<std::string, Bytes> kv_;
  std::map<std::string, std::deque<int>> blocked_;  // key -> waiting fds, FIFO
};

}  // namespace semfuzz::broker
