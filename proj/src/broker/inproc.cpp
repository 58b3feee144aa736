#include "broker/broker.hpp"

namespace semfuzz::broker {

void InProcBroker::queue_push(const std::string& queue, const Bytes& payload) {
  {
    std::lock_guard lock(mutex_);
    queues_[queue].push_back(payload);
  }
  arrived_.notify_all();
}

std::optional<Bytes> InProcBroker::queue_pop(const std::string& queue,
                                             std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  auto has_message = [&] {
    auto it = queues_.find(queue);
    return it != queues_.end() && !it->second.empty();
  };
  if (!has_message() && timeout.count() > 0) {
    arrived_.wait_for(lock, timeout, has_message);
  }
  if (!has_message()) return std::nullopt;
  auto& q = queues_[queue];
  Bytes out = std::move(q.front());
  q.pop_front();
  return out;
}

std::size_t InProcBroker::queue_len(const std::string& queue) {
  std::lock_guard lock(mutex_);
  auto it = queues_.find(queue);
  return it == queues_.end() ? 0 : it->second.size();
}

void InProcBroker::context_set(const std::string& key, const Bytes& value) {
  std::lock_guard lock(mutex_);
  context_[key] = value;
}

std::optional<Bytes> InProcBroker::context_get(const std::string& key) {
  std::lock_guard lock(mutex_);
  auto it = context_.find(key);
  if (it == context_.end()) return std::nullopt;
  return it->second;
}

}  // namespace semfuzz::broker
