#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "core/types.hpp"

namespace semfuzz {

struct BrokerEndpoint {
  enum class Kind { None, InProcess, Remote };
  Kind kind = Kind::InProcess;
  std::string host;
  std::uint16_t port = 0;

  bool operator==(const BrokerEndpoint&) const = default;
};

// "none" | "inproc" | "host:port"
BrokerEndpoint parse_broker_endpoint(const std::string& text);
std::string broker_endpoint_to_string(const BrokerEndpoint& ep);

struct BackendDescriptor {
  enum class Kind { HttpChat, MockIdentity, MockMutator, MockChaos };
  Kind kind = Kind::MockIdentity;
  std::string url;    // HttpChat endpoint, e.g. http://127.0.0.1:11434/api/chat
  std::string model;  // HttpChat model name
  double temperature = 0.0;
  std::chrono::milliseconds request_timeout{30'000};
  std::uint64_t rng_seed = 1;  // MockMutator / MockChaos
  // MockChaos failure rates; each in [0,1], failure rates sum <= 1.
  double timeout_rate = 0.0;
  double mismatch_rate = 0.0;
  double oddhex_rate = 0.0;
  double dup_rate = 0.0;
  // When true, chaos timeouts really wait request_timeout (models a slow
  // model); when false they return immediately with the same logged latency.
  bool timeout_sleep = true;

  bool operator==(const BackendDescriptor&) const = default;
};

// "mock-identity" | "mock-mutator[:seed=N]"
// | "mock-chaos[:t=..,m=..,o=..,d=..,seed=N,sleep=0|1]" | "http"
BackendDescriptor parse_backend_descriptor(const std::string& text);
std::string backend_descriptor_to_string(const BackendDescriptor& b);

// "90s", "10m", "2h", "1500ms", or plain seconds.
std::chrono::milliseconds parse_duration_ms(const std::string& text);
std::string duration_to_string(std::chrono::milliseconds d);

// Everything a campaign needs, resolvable from a flat key = value file plus
// per-key overrides (overrides win). Keys are the kebab-case field names.
struct CampaignConfig {
  std::string target = "chunkfmt";
  std::chrono::milliseconds duration{0};
  int shots = 0;
  std::filesystem::path seed_dir;
  std::uint64_t rng_seed = 0;
  BrokerEndpoint broker;
  BackendDescriptor backend;
  std::chrono::milliseconds poll_timeout{0};
  std::chrono::milliseconds hang_budget{100};
  std::size_t split_threshold = 2000;
  double temperature = 0.0;

  // Orchestration
  std::string mode = "all-in-one";  // all-in-one | client
  bool deterministic_time = false;
  int trials = 1;
  std::filesystem::path out_dir = "out";
  std::filesystem::path prompt_dir = "prompts";
  std::filesystem::path library_info;  // optional text file injected as context
  std::string probe_totals;            // external targets: "function=3,branch=8,..."

  bool operator==(const CampaignConfig&) const = default;
};

// Applies one key; throws ConfigError naming the offending key.
void config_set(CampaignConfig& config, const std::string& key, const std::string& value);

// Reads a `key = value` file ('#' comments, blank lines allowed).
void config_load_file(CampaignConfig& config, const std::filesystem::path& path);

// Structural validation (value domains only; path existence is checked when
// the campaign starts). Throws ConfigError naming the key.
void config_validate(const CampaignConfig& config);

std::string config_to_string(const CampaignConfig& config);

}  // namespace semfuzz
