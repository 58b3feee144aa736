#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "core/types.hpp"

namespace semfuzz::broker {

// Message fabric between the fuzz engine and the mutation service: named FIFO
// queues plus a small last-writer-wins context store. Implementations must be
// safe to share across threads; each operation is atomic.
class Broker {
public:
  virtual ~Broker() = default;

  virtual void queue_push(const std::string& queue, const Bytes& payload) = 0;

  // Removes and returns the head if one arrives within `timeout`; at-most-once
  // across competing consumers. timeout 0 = try once.
  virtual std::optional<Bytes> queue_pop(const std::string& queue,
                                         std::chrono::milliseconds timeout) = 0;

  virtual std::size_t queue_len(const std::string& queue) = 0;

  virtual void context_set(const std::string& key, const Bytes& value) = 0;
  virtual std::optional<Bytes> context_get(const std::string& key) = 0;

  virtual bool connected() const = 0;
};

class InProcBroker final : public Broker {
public:
  void queue_push(const std::string& queue, const Bytes& payload) override;
  std::optional<Bytes> queue_pop(const std::string& queue,
                                 std::chrono::milliseconds timeout) override;
  std::size_t queue_len(const std::string& queue) override;
  void context_set(const std::string& key, const Bytes& value) override;
  std::optional<Bytes> context_get(const std::string& key) override;
  bool connected() const override { return true; }

private:
  std::mutex mutex_;
  std::condition_variable arrived_;
  std::map<std::string, std::deque<Bytes>> queues_;
  std::map<std::string, Bytes> context_;
};

}  // namespace semfuzz::broker
