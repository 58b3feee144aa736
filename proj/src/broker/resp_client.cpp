#include "broker/resp_client.hpp"

#include <thread>

#include "core/errors.hpp"

namespace semfuzz::broker {

namespace {
constexpr std::chrono::milliseconds kConnectTimeout{2000};
constexpr std::chrono::milliseconds kDefaultReadTimeout{5000};
constexpr std::chrono::milliseconds kPollInterval{10};

[[noreturn]] void throw_reply_error(const resp::Reply& reply) {
  throw BrokerError("broker error reply: " + reply.text);
}
}  // namespace

RespClient::RespClient(std::string host, std::uint16_t port)
    : host_(std::move(host)), port_(port) {
  std::lock_guard lock(mutex_);
  ensure_connected_locked();
}

void RespClient::ensure_connected_locked() {
  if (connected_) return;
  socket_ = TcpSocket::connect(host_, port_, kConnectTimeout);
  decoder_ = resp::Decoder{};
  connected_ = true;
}

bool RespClient::connected() const {
  std::lock_guard lock(mutex_);
  return connected_;
}

void RespClient::reconnect() {
  std::lock_guard lock(mutex_);
  connected_ = false;
  socket_.close_fd();
  ensure_connected_locked();
}

resp::Reply RespClient::request(const std::vector<Bytes>& args,
                                std::chrono::milliseconds read_timeout) {
  std::lock_guard lock(mutex_);
  return request_locked(args, read_timeout);
}

resp::Reply RespClient::request_locked(const std::vector<Bytes>& args,
                                       std::chrono::milliseconds read_timeout) {
  ensure_connected_locked();
  try {
    socket_.send_all(resp::encode_command(args));
    const auto deadline = std::chrono::steady_clock::now() + read_timeout;
    char chunk[16384];
    while (true) {
      if (auto reply = decoder_.next()) return std::move(*reply);
      const auto now = std::chrono::steady_clock::now();
      if (now >= deadline) throw BrokerError("timed out waiting for broker reply");
      const auto remaining =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
      const std::size_t n = socket_.recv_some(chunk, sizeof(chunk), remaining);
      if (n > 0) decoder_.feed(std::string_view(chunk, n));
    }
  } catch (const Error&) {
    // Connection state is unknown after a failed exchange; drop it.
    connected_ = false;
    socket_.close_fd();
    throw;
  }
}

void RespClient::ping() {
  const auto reply = request({to_bytes("PING")}, kDefaultReadTimeout);
  if (reply.kind == resp::Reply::Kind::Error) throw_reply_error(reply);
  if (reply.kind != resp::Reply::Kind::Simple || reply.text != "PONG") {
    throw BrokerError("unexpected PING reply");
  }
}

void RespClient::queue_push(const std::string& queue, const Bytes& payload) {
  const auto reply = request({to_bytes("LPUSH"), to_bytes(queue), payload}, kDefaultReadTimeout);
  if (reply.kind == resp::Reply::Kind::Error) throw_reply_error(reply);
  if (reply.kind != resp::Reply::Kind::Integer) throw BrokerError("unexpected LPUSH reply");
}

std::optional<Bytes> RespClient::queue_pop(const std::string& queue,
                                           std::chrono::milliseconds timeout) {
  std::lock_guard lock(mutex_);
  auto try_rpop = [&]() -> std::optional<Bytes> {
    const auto reply =
        request_locked({to_bytes("RPOP"), to_bytes(queue)}, kDefaultReadTimeout);
    if (reply.kind == resp::Reply::Kind::Error) throw_reply_error(reply);
    if (reply.kind == resp::Reply::Kind::NullBulk) return std::nullopt;
    if (reply.kind != resp::Reply::Kind::Bulk) throw BrokerError("unexpected RPOP reply");
    return reply.bulk;
  };

  if (timeout.count() <= 0) return try_rpop();

  if (timeout < std::chrono::seconds(1)) {
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    while (true) {
      if (auto v = try_rpop()) return v;
      if (std::chrono::steady_clock::now() >= deadline) return std::nullopt;
      std::this_thread::sleep_for(kPollInterval);
    }
  }

  // Whole seconds, rounded up.
  const auto secs = (timeout.count() + 999) / 1000;
  const auto reply = request_locked(
      {to_bytes("BRPOP"), to_bytes(queue), to_bytes(std::to_string(secs))},
      std::chrono::milliseconds(secs * 1000) + kDefaultReadTimeout);
  if (reply.kind == resp::Reply::Kind::Error) throw_reply_error(reply);
  if (reply.kind == resp::Reply::Kind::NullArray || reply.kind == resp::Reply::Kind::NullBulk) {
    return std::nullopt;
  }
  if (reply.kind != resp::Reply::Kind::Array || reply.elements.size() != 2 ||
      reply.elements[1].kind != resp::Reply::Kind::Bulk) {
    throw BrokerError("unexpected BRPOP reply shape");
  }
  return reply.elements[1].bulk;
}

std::size_t RespClient::queue_len(const std::string& queue) {
  const auto reply = request({to_bytes("LLEN"), to_bytes(queue)}, kDefaultReadTimeout);
  if (reply.kind == resp::Reply::Kind::Error) throw_reply_error(reply);
  if (reply.kind != resp::Reply::Kind::Integer) throw BrokerError("unexpected LLEN reply");
  return static_cast<std::size_t>(reply.integer);
}

void RespClient::context_set(const std::string& key, const Bytes& value) {
  const auto reply = request({to_bytes("SET"), to_bytes(key), value}, kDefaultReadTimeout);
  if (reply.kind == resp::Reply::Kind::Error) throw_reply_error(reply);
  if (reply.kind != resp::Reply::Kind::Simple || reply.text != "OK") {
    throw BrokerError("unexpected SET reply");
  }
}

std::optional<Bytes> RespClient::context_get(const std::string& key) {
  const auto reply = request({to_bytes("GET"), to_bytes(key)}, kDefaultReadTimeout);
  if (reply.kind == resp::Reply::Kind::Error) throw_reply_error(reply);
  if (reply.kind == resp::Reply::Kind::NullBulk) return std::nullopt;
  if (reply.kind != resp::Reply::Kind::Bulk) throw BrokerError("unexpected GET reply");
  return reply.bulk;
}

}  // namespace semfuzz::broker
