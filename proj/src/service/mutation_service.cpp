#include "service/mutation_service.hpp"

#include <iostream>
#include <thread>

#include "core/digest.hpp"
#include "core/errors.hpp"
#include "core/hex.hpp"
#include "service/splitbuf.hpp"

namespace semfuzz::service {

std::chrono::milliseconds reconnect_backoff(int attempt) {
  constexpr std::int64_t base_ms = 100;
  constexpr std::int64_t cap_ms = 5000;
  std::int64_t value = base_ms;
  for (int i = 0; i < attempt && value < cap_ms; ++i) value *= 2;
  return std::chrono::milliseconds(std::min(value, cap_ms));
}

MutationService::MutationService(broker::Broker& broker, ServiceConfig config,
                                 const BackendDescriptor& backend_descriptor, LogSink& sink)
    : broker_(broker),
      config_(std::move(config)),
      templates_(PromptTemplates::load(config_.prompt_dir)),
      backend_(make_backend(backend_descriptor)),
      sink_(sink) {}

std::string MutationService::library_info() {
  const auto value = broker_.context_get(kContextLibraryInfo);
  if (!value) {
    if (!warned_missing_context_) {
      warned_missing_context_ = true;
      std::cerr << "semfuzz-mutator: no library_info in the context store; "
                   "prompting without library context\n";
    }
    return "";
  }
  return std::string(value->begin(), value->end());
}

bool MutationService::step_once(std::chrono::milliseconds pop_timeout) {
  const auto message = broker_.queue_pop(kQueueC2P, pop_timeout);
  if (!message) return false;
  process(*message);
  return true;
}

void MutationService::process(const Bytes& message) {
  const SplitBuffer split = split_buffer(as_span(message), config_.split_threshold);
  const std::string head_hex = hex_encode(split.head);
  const PromptBundle prompt = templates_.build(head_hex, library_info(), config_.shot);

  const LlmQueryResult result = backend_->query(prompt);

  QueryLogRecord record;
  record.seq = seq_++;
  record.benchmark = config_.benchmark;
  record.shot = config_.shot;
  record.input_digest = digest_hex(as_span(split.head));
  record.status = result.response.status;
  record.latency_ms = static_cast<std::uint64_t>(result.latency.count());
  if (result.response.status == QueryStatus::Ok) {
    record.final_output_digest = digest_hex(*result.response.final_output_hex);
  }
  sink_.append(record);

  if (result.response.status != QueryStatus::Ok) return;
  // Ok status guarantees decodable hex.
  const auto mutated_head = hex_decode_lenient(*result.response.final_output_hex);
  if (!mutated_head) return;
  broker_.queue_push(kQueueP2C, recombine(split, as_span(*mutated_head)));
}

void MutationService::run_loop(const std::atomic<bool>& stop) {
  int failures = 0;
  while (!stop.load(std::memory_order_relaxed)) {
    try {
      step_once(config_.pop_timeout);
      failures = 0;
    } catch (const Error& e) {
      if (failures == 0) {
        std::cerr << "semfuzz-mutator: broker failure, backing off (" << e.what() << ")\n";
      }
      const auto wait = reconnect_backoff(failures++);
      const auto deadline = std::chrono::steady_clock::now() + wait;
      while (!stop.load(std::memory_order_relaxed) &&
             std::chrono::steady_clock::now() < deadline) {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
    }
  }
}

ServiceRunner::ServiceRunner(broker::Broker& broker, ServiceConfig config,
                             const BackendDescriptor& backend_descriptor, LogSink& sink)
    : service_(broker, std::move(config), backend_descriptor, sink),
      thread_([this] { service_.run_loop(stop_); }) {}

ServiceRunner::~ServiceRunner() { stop(); }

void ServiceRunner::stop() {
  stop_.store(true);
  if (thread_.joinable()) thread_.join();
}

}  // namespace semfuzz::service
