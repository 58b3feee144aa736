#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <thread>

#include "broker/broker.hpp"
#include "core/config.hpp"
#include "core/query_log.hpp"
#include "service/backend.hpp"
#include "service/prompt.hpp"

namespace semfuzz::service {

struct ServiceConfig {
  std::string benchmark;
  int shot = 0;
  std::size_t split_threshold = 2000;
  std::filesystem::path prompt_dir = "prompts";
  std::chrono::milliseconds pop_timeout{200};
};

/// Backoff for broker reconnects: 100ms doubling per attempt, capped at 5s.
std::chrono::milliseconds reconnect_backoff(int attempt);

// Consumes C2P, runs split -> hex -> prompt -> query -> parse, recombines Ok
// responses onto P2C, and appends one QueryLogRecord per consumed message.
// One in-flight query at a time; run more instances for horizontal scale.
class MutationService {
public:
  MutationService(broker::Broker& broker, ServiceConfig config,
                  const BackendDescriptor& backend_descriptor, LogSink& sink);

  // One pipeline pass: pops at most one message within pop_timeout. Returns
  // false when the queue stayed empty. Broker failures propagate.
  bool step_once(std::chrono::milliseconds pop_timeout);

  // Loop until *stop becomes true; broker failures trigger bounded
  // exponential backoff and the next operation reconnects.
  void run_loop(const std::atomic<bool>& stop);

  std::uint64_t processed() const { return seq_; }

private:
  void process(const Bytes& message);
  std::string library_info();

  broker::Broker& broker_;
  ServiceConfig config_;
  PromptTemplates templates_;
  std::unique_ptr<Backend> backend_;
  LogSink& sink_;
  std::uint64_t seq_ = 0;
  bool warned_missing_context_ = false;
};

// Owns a service instance plus the thread driving run_loop.
class ServiceRunner {
public:
  ServiceRunner(broker::Broker& broker, ServiceConfig config,
                const BackendDescriptor& backend_descriptor, LogSink& sink);
  ~ServiceRunner();

  void stop();
  MutationService& service() { return service_; }

private:
  MutationService service_;
  std::atomic<bool> stop_{false};
  std::thread thread_;
};

}  // namespace semfuzz::service
