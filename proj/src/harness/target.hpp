#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "core/types.hpp"
#include "harness/probes.hpp"

namespace semfuzz::harness {

using ProbeTotals = std::map<ProbeClass, std::uint32_t>;

// Pluggable execution of payloads against an instrumented target. One
// execution at a time per adapter instance; adapters are not shared across
// threads.
class TargetAdapter {
public:
  enum class Kind { InProcess, ExternalCommand };

  virtual ~TargetAdapter() = default;

  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }
  const ProbeTotals& probe_totals() const { return probe_totals_; }

  // Byte tokens the havoc stage may splice in.
  virtual const std::vector<Bytes>& dictionary() const {
    static const std::vector<Bytes> kEmpty;
    return kEmpty;
  }

  virtual ExecutionOutcome execute(std::span<const std::uint8_t> payload,
                                   std::chrono::milliseconds hang_budget) = 0;

protected:
  TargetAdapter(std::string name, Kind kind, ProbeTotals totals)
      : name_(std::move(name)), kind_(kind), probe_totals_(std::move(totals)) {}

  std::string name_;
  Kind kind_;
  ProbeTotals probe_totals_;
};

using ToyTargetFn = std::function<void(std::span<const std::uint8_t>, ProbeContext&)>;

class InProcessTarget final : public TargetAdapter {
public:
  InProcessTarget(std::string name, ToyTargetFn fn, ProbeTotals totals,
                  std::vector<Bytes> dictionary);

  const std::vector<Bytes>& dictionary() const override { return dictionary_; }

  ExecutionOutcome execute(std::span<const std::uint8_t> payload,
                           std::chrono::milliseconds hang_budget) override;

private:
  ToyTargetFn fn_;
  std::vector<Bytes> dictionary_;
  ProbeCollector collector_;
};

// Runs `argv` per execution. The payload lands in a temp file substituted for
// a literal "@@" argument, or on stdin when no "@@" appears. Classification:
// killed by a signal => Crash, budget exceeded => Hang, everything else => Ok.
// When the child writes newline-delimited `class:id` pairs to the path in
// $SEMFUZZ_PROBE_OUT, they are replayed through the probe collector in order.
class ExternalCommandTarget final : public TargetAdapter {
public:
  ExternalCommandTarget(std::string name, std::vector<std::string> argv, ProbeTotals totals);

  ExecutionOutcome execute(std::span<const std::uint8_t> payload,
                           std::chrono::milliseconds hang_budget) override;

private:
  std::vector<std::string> argv_;
  bool use_stdin_ = false;
  std::string work_dir_;
  ProbeCollector collector_;
  std::uint64_t exec_counter_ = 0;
};

/// Builds an adapter from a target spec: a builtin toy name ("chunkfmt",
/// "minijson") or "cmd:<command line>" for external commands. Throws
/// TargetLoadError for unknown targets.
std::unique_ptr<TargetAdapter> make_target(const std::string& spec,
                                           const std::string& probe_totals_spec = "");

/// Names of the builtin toy targets.
std::vector<std::string> builtin_target_names();

}  // namespace semfuzz::harness
