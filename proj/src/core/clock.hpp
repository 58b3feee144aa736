#pragma once

#include <chrono>
#include <cstdint>
#include <memory>

namespace semfuzz {

// Campaign time source. All timestamps in results are nanoseconds since
// campaign start so runs can be compared and replayed.
class Clock {
public:
  virtual ~Clock() = default;
  virtual std::uint64_t now_ns() = 0;
  // Called once per target execution; the simulated clock advances here.
  virtual void on_execution() {}
  virtual bool deterministic() const = 0;

  std::uint64_t now_ms() { return now_ns() / 1'000'000ull; }
};

class WallClock final : public Clock {
public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  std::uint64_t now_ns() override {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(
            std::chrono::steady_clock::now() - start_)
            .count());
  }
  bool deterministic() const override { return false; }

private:
  std::chrono::steady_clock::time_point start_;
};

// Advances a fixed quantum per execution; wall time never leaks into results.
class SimClock final : public Clock {
public:
  static constexpr std::uint64_t kQuantumNs = 1'000'000;  // 1ms per execution

  std::uint64_t now_ns() override { return now_ns_; }
  void on_execution() override { now_ns_ += kQuantumNs; }
  bool deterministic() const override { return true; }

private:
  std::uint64_t now_ns_ = 0;
};

}  // namespace semfuzz
