#include "broker/resp_server.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstring>

#include "core/errors.hpp"

namespace semfuzz::broker {

namespace {
constexpr std::size_t kReadChunk = 65536;
// Per-connection read buffer cap; a client exceeding it is dropped.
constexpr std::size_t kMaxBuffered = 4 * 1024 * 1024;

void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}
}  // namespace

MiniRespServer::MiniRespServer(const std::string& host, std::uint16_t port) : host_(host) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw BrokerError("cannot create listen socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw BrokerError("mini-server bind address must be an IPv4 literal: " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const int err = errno;
    ::close(listen_fd_);
    throw BrokerError("cannot bind " + host + ":" + std::to_string(port) + ": " +
                      std::strerror(err));
  }
  if (::listen(listen_fd_, 64) != 0) {
    ::close(listen_fd_);
    throw BrokerError("listen failed");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  set_nonblocking(listen_fd_);

  if (::pipe(wake_pipe_) != 0) {
    ::close(listen_fd_);
    throw BrokerError("cannot create wake pipe");
  }
  set_nonblocking(wake_pipe_[0]);

  thread_ = std::thread([this] { loop(); });
}

MiniRespServer::~MiniRespServer() { stop(); }

void MiniRespServer::stop() {
  bool expected = false;
  if (!stop_.compare_exchange_strong(expected, true)) {
    if (thread_.joinable()) thread_.join();
    return;
  }
  if (wake_pipe_[1] >= 0) {
    const char byte = 'x';
    [[maybe_unused]] ssize_t rc = ::write(wake_pipe_[1], &byte, 1);
  }
  if (thread_.joinable()) thread_.join();
  for (auto& [fd, conn] : connections_) ::close(fd);
  connections_.clear();
  if (listen_fd_ >= 0) ::close(listen_fd_);
  if (wake_pipe_[0] >= 0) ::close(wake_pipe_[0]);
  if (wake_pipe_[1] >= 0) ::close(wake_pipe_[1]);
  listen_fd_ = -1;
}

void MiniRespServer::loop() {
  while (!stop_.load()) {
    std::vector<pollfd> fds;
    fds.push_back({listen_fd_, POLLIN, 0});
    fds.push_back({wake_pipe_[0], POLLIN, 0});
    for (auto& [fd, conn] : connections_) {
      short events = POLLIN;
      if (!conn.outbuf.empty()) events |= POLLOUT;
      fds.push_back({fd, events, 0});
    }
    const bool any_blocked =
        std::any_of(connections_.begin(), connections_.end(),
                    [](const auto& kv) { return kv.second.blocked && !kv.second.block_forever; });
    const int timeout_ms = any_blocked ? 10 : 100;
    const int rc = ::poll(fds.data(), fds.size(), timeout_ms);
    if (stop_.load()) break;
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    expire_blocked();
    for (const pollfd& p : fds) {
      if (p.fd == listen_fd_) {
        if (p.revents & POLLIN) accept_clients();
        continue;
      }
      if (p.fd == wake_pipe_[0]) {
        if (p.revents & POLLIN) {
          char sink[16];
          while (::read(wake_pipe_[0], sink, sizeof(sink)) > 0) {}
        }
        continue;
      }
      if (!connections_.contains(p.fd)) continue;  // closed earlier this pass
      if (p.revents & (POLLERR | POLLHUP | POLLNVAL)) {
        close_connection(p.fd);
        continue;
      }
      if (p.revents & POLLOUT) flush(p.fd);
      if (!connections_.contains(p.fd)) continue;
      if (p.revents & POLLIN) read_from(p.fd);
    }
  }
}

void MiniRespServer::accept_clients() {
  while (true) {
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) return;
    set_nonblocking(fd);
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    connections_.emplace(fd, Connection{});
  }
}

void MiniRespServer::read_from(int fd) {
  auto it = connections_.find(fd);
  if (it == connections_.end()) return;
  char chunk[kReadChunk];
  while (true) {
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n > 0) {
      it->second.decoder.feed(std::string_view(chunk, static_cast<std::size_t>(n)));
      if (it->second.decoder.buffered() > kMaxBuffered) {
        close_connection(fd);
        return;
      }
      continue;
    }
    if (n == 0) {
      close_connection(fd);
      return;
    }
    if (errno == EAGAIN || errno == EWOULDBLOCK) break;
    if (errno == EINTR) continue;
    close_connection(fd);
    return;
  }
  process_commands(fd);
}

void MiniRespServer::process_commands(int fd) {
  auto it = connections_.find(fd);
  while (it != connections_.end() && !it->second.blocked) {
    std::optional<resp::Reply> frame;
    try {
      frame = it->second.decoder.next();
    } catch (const ProtocolError&) {
      close_connection(fd);
      return;
    }
    if (!frame) return;
    auto args = resp::command_args(*frame);
    if (!args || args->empty()) {
      // Commands must arrive as non-empty arrays of bulk strings.
      close_connection(fd);
      return;
    }
    const resp::Reply reply = execute(fd, *args);
    it = connections_.find(fd);
    if (it == connections_.end()) return;
    if (it->second.blocked) return;  // BRPOP parked; reply comes later
    enqueue_reply(fd, reply);
    it = connections_.find(fd);
  }
}

std::string MiniRespServer::upper_ascii(const Bytes& b) {
  std::string s(b.begin(), b.end());
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

resp::Reply MiniRespServer::execute(int fd, const std::vector<Bytes>& args) {
  const std::string verb = upper_ascii(args[0]);
  auto wrong_arity = [&] {
    return resp::Reply::error("ERR wrong number of arguments for '" + verb + "' command");
  };
  auto key_of = [&](std::size_t i) { return std::string(args[i].begin(), args[i].end()); };

  if (verb == "PING") {
    if (args.size() == 1) return resp::Reply::simple("PONG");
    if (args.size() == 2) return resp::Reply::bulk_reply(args[1]);
    return wrong_arity();
  }
  if (verb == "SET") {
    if (args.size() != 3) return wrong_arity();
    kv_[key_of(1)] = args[2];
    return resp::Reply::simple("OK");
  }
  if (verb == "GET") {
    if (args.size() != 2) return wrong_arity();
    auto it = kv_.find(key_of(1));
    if (it == kv_.end()) return resp::Reply::null_bulk();
    return resp::Reply::bulk_reply(it->second);
  }
  if (verb == "LPUSH" || verb == "RPUSH") {
    if (args.size() < 3) return wrong_arity();
    auto& q = queues_[key_of(1)];
    for (std::size_t i = 2; i < args.size(); ++i) {
      if (verb == "LPUSH") q.push_front(args[i]);
      else q.push_back(args[i]);
    }
    const auto len = static_cast<std::int64_t>(q.size());
    serve_blocked(key_of(1));
    return resp::Reply::integer_reply(len);
  }
  if (verb == "LPOP" || verb == "RPOP") {
    if (args.size() != 2) return wrong_arity();
    auto it = queues_.find(key_of(1));
    if (it == queues_.end() || it->second.empty()) return resp::Reply::null_bulk();
    Bytes value;
    if (verb == "LPOP") {
      value = std::move(it->second.front());
      it->second.pop_front();
    } else {
      value = std::move(it->second.back());
      it->second.pop_back();
    }
    if (it->second.empty()) queues_.erase(it);
    return resp::Reply::bulk_reply(std::move(value));
  }
  if (verb == "LLEN") {
    if (args.size() != 2) return wrong_arity();
    auto it = queues_.find(key_of(1));
    return resp::Reply::integer_reply(
        it == queues_.end() ? 0 : static_cast<std::int64_t>(it->second.size()));
  }
  if (verb == "BRPOP") {
    if (args.size() != 3) return wrong_arity();  // single key form only
    const std::string key = key_of(1);
    double timeout_secs = 0;
    try {
      timeout_secs = std::stod(std::string(args[2].begin(), args[2].end()));
    } catch (const std::exception&) {
      return resp::Reply::error("ERR timeout is not a float or out of range");
    }
    if (timeout_secs < 0) {
      return resp::Reply::error("ERR timeout is negative");
    }
    auto it = queues_.find(key);
    if (it != queues_.end() && !it->second.empty()) {
      Bytes value = std::move(it->second.back());
      it->second.pop_back();
      if (it->second.empty()) queues_.erase(it);
      return resp::Reply::array({resp::Reply::bulk_reply(Bytes(key.begin(), key.end())),
                                 resp::Reply::bulk_reply(std::move(value))});
    }
    // Park the client; reply comes on push or deadline expiry.
    Connection& conn = connections_.at(fd);
    conn.blocked = true;
    conn.blocked_key = key;
    conn.block_forever = timeout_secs == 0;
    conn.block_deadline = std::chrono::steady_clock::now() +
                          std::chrono::milliseconds(static_cast<std::int64_t>(timeout_secs * 1000));
    blocked_[key].push_back(fd);
    return resp::Reply::null_bulk();  // unused; caller sees blocked flag
  }
  return resp::Reply::error("ERR unknown command '" + verb + "'");
}

void MiniRespServer::serve_blocked(const std::string& key) {
  // Lookups are refreshed every round: serving a client re-enters
  // process_commands, which may touch queues_ and blocked_.
  while (true) {
    auto qit = queues_.find(key);
    if (qit == queues_.end() || qit->second.empty()) return;
    auto bit = blocked_.find(key);
    if (bit == blocked_.end() || bit->second.empty()) return;
    const int fd = bit->second.front();
    bit->second.pop_front();
    if (bit->second.empty()) blocked_.erase(bit);
    auto cit = connections_.find(fd);
    if (cit == connections_.end() || !cit->second.blocked) continue;
    Bytes value = std::move(qit->second.back());
    qit->second.pop_back();
    if (qit->second.empty()) queues_.erase(qit);
    cit->second.blocked = false;
    enqueue_reply(fd, resp::Reply::array(
                          {resp::Reply::bulk_reply(Bytes(key.begin(), key.end())),
                           resp::Reply::bulk_reply(std::move(value))}));
    if (connections_.contains(fd)) process_commands(fd);
  }
}

void MiniRespServer::expire_blocked() {
  const auto now = std::chrono::steady_clock::now();
  std::vector<int> expired;
  for (auto& [fd, conn] : connections_) {
    if (conn.blocked && !conn.block_forever && now >= conn.block_deadline) {
      expired.push_back(fd);
    }
  }
  for (int fd : expired) {
    auto cit = connections_.find(fd);
    if (cit == connections_.end() || !cit->second.blocked) continue;
    auto bit = blocked_.find(cit->second.blocked_key);
    if (bit != blocked_.end()) {
      auto& dq = bit->second;
      dq.erase(std::remove(dq.begin(), dq.end(), fd), dq.end());
      if (dq.empty()) blocked_.erase(bit);
    }
    cit->second.blocked = false;
    enqueue_reply(fd, resp::Reply::null_array());
    if (connections_.contains(fd)) process_commands(fd);
  }
}

void MiniRespServer::enqueue_reply(int fd, const resp::Reply& reply) {
  auto it = connections_.find(fd);
  if (it == connections_.end()) return;
  it->second.outbuf += resp::encode_reply(reply);
  flush(fd);
}

void MiniRespServer::flush(int fd) {
  auto it = connections_.find(fd);
  if (it == connections_.end()) return;
  std::string& out = it->second.outbuf;
  while (!out.empty()) {
    const ssize_t n = ::send(fd, out.data(), out.size(), MSG_NOSIGNAL);
    if (n > 0) {
      out.erase(0, static_cast<std::size_t>(n));
      continue;
    }
    if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return;  // retry on POLLOUT
    if (n < 0 && errno == EINTR) continue;
    close_connection(fd);
    return;
  }
}

void MiniRespServer::close_connection(int fd) {
  auto it = connections_.find(fd);
  if (it == connections_.end()) return;
  if (it->second.blocked) {
    auto bit = blocked_.find(it->second.blocked_key);
    if (bit != blocked_.end()) {
      auto& dq = bit->second;
      dq.erase(std::remove(dq.begin(), dq.end(), fd), dq.end());
      if (dq.empty()) blocked_.erase(bit);
    }
  }
  ::close(fd);
  connections_.erase(it);
}

}  // namespace semfuzz::broker
