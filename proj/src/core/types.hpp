#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace semfuzz {

using Bytes = std::vector<std::uint8_t>;

inline std::span<const std::uint8_t> as_span(const Bytes& b) {
  return {b.data(), b.size()};
}

enum class Origin : std::uint8_t { Seed, Builtin, Llm };

const char* origin_name(Origin o);
std::optional<Origin> origin_from_name(std::string_view name);

// One candidate input with provenance. Seed test cases have no parent;
// everything else records the queue entry it was derived from.
struct TestCase {
  std::uint64_t id = 0;
  Bytes payload;
  Origin origin = Origin::Seed;
  std::optional<std::uint64_t> parent_id;
  std::uint64_t discovered_at_ns = 0;

  bool operator==(const TestCase&) const = default;
};

enum class ProbeClass : std::uint8_t { Function = 0, Line = 1, Branch = 2, Region = 3 };

inline constexpr std::array<ProbeClass, 4> kProbeClasses = {
    ProbeClass::Function, ProbeClass::Line, ProbeClass::Branch, ProbeClass::Region};

const char* probe_class_name(ProbeClass c);
std::optional<ProbeClass> probe_class_from_name(std::string_view name);

struct ProbeHit {
  ProbeClass cls;
  std::uint32_t id;

  friend bool operator==(const ProbeHit&, const ProbeHit&) = default;
  friend auto operator<=>(const ProbeHit&, const ProbeHit&) = default;
};

enum class ExecStatus : std::uint8_t { Ok, Crash, Hang };

const char* exec_status_name(ExecStatus s);

// Result of one target execution: status, the distinct probes hit, and the
// raw edge hit counts (index -> saturating 8-bit count) for novelty checks.
struct ExecutionOutcome {
  ExecStatus status = ExecStatus::Ok;
  std::vector<ProbeHit> probes;                              // sorted, unique
  std::vector<std::pair<std::uint16_t, std::uint8_t>> edge_hits;  // sorted by index
  std::chrono::nanoseconds exec_time{0};
  std::string classification_detail;  // signal name / timeout budget; empty if none

  bool operator==(const ExecutionOutcome&) const = default;
};

// Opaque byte payload exchanged on the C2P/P2C queues. Framing belongs to the
// broker; metadata travels only in logs.
struct MutationMessage {
  Bytes payload;

  bool operator==(const MutationMessage&) const = default;
};

inline constexpr const char* kQueueC2P = "C2P";
inline constexpr const char* kQueueP2C = "P2C";
inline constexpr const char* kContextLibraryInfo = "library_info";

}  // namespace semfuzz
