#pragma once

#include <chrono>
#include <memory>
#include <optional>

#include "core/config.hpp"
#include "core/rng.hpp"
#include "service/prompt.hpp"
#include "service/response_parser.hpp"

namespace semfuzz::service {

struct LlmQueryResult {
  LlmResponse response;
  std::chrono::milliseconds latency{0};
};

// One inference backend: the HTTP chat endpoint or one of the mocks. Mocks
// report deterministic latencies (0 for synthesized responses, the request
// timeout for simulated timeouts) so runs are reproducible.
class Backend {
public:
  virtual ~Backend() = default;
  virtual LlmQueryResult query(const PromptBundle& prompt) = 0;
};

/// Factory over BackendDescriptor::Kind.
std::unique_ptr<Backend> make_backend(const BackendDescriptor& descriptor);

// Echoes the input hex inside a well-formed Analysis/Final Output response.
class MockIdentityBackend final : public Backend {
public:
  LlmQueryResult query(const PromptBundle& prompt) override;
};

// Applies a seeded byte-level mutation to the decoded head and wraps it in a
// well-formed response. State advances per query.
class MockMutatorBackend final : public Backend {
public:
  explicit MockMutatorBackend(std::uint64_t seed) : rng_(seed) {}
  LlmQueryResult query(const PromptBundle& prompt) override;

private:
  Rng rng_;
};

// Draws an outcome from the configured failure rates, otherwise behaves like
// MockMutator. Duplicate outcomes re-emit the previous Ok output.
class MockChaosBackend final : public Backend {
public:
  explicit MockChaosBackend(const BackendDescriptor& descriptor)
      : descriptor_(descriptor), rng_(descriptor.rng_seed) {}
  LlmQueryResult query(const PromptBundle& prompt) override;

private:
  BackendDescriptor descriptor_;
  Rng rng_;
  std::optional<std::string> last_ok_hex_;
};

// Posts {model, messages:[system,user], temperature, stream:false} to the
// configured chat endpoint and parses the returned message content.
class HttpChatBackend final : public Backend {
public:
  explicit HttpChatBackend(const BackendDescriptor& descriptor);
  LlmQueryResult query(const PromptBundle& prompt) override;

private:
  BackendDescriptor descriptor_;
  std::string host_;
  int port_ = 80;
  std::string path_;
};

}  // namespace semfuzz::service
