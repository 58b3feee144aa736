#include "harness/probes.hpp"

#include <algorithm>
#include <thread>

namespace semfuzz::harness {

ProbeCollector::ProbeCollector() {
  raw_hits_.reserve(512);
  touched_.reserve(512);
}

void ProbeCollector::reset(std::chrono::steady_clock::time_point hang_deadline) {
  raw_hits_.clear();
  touched_.clear();
  ++epoch_;
  prev_location_ = 0;
  crash_ = false;
  crash_detail_.clear();
  hang_deadline_ = hang_deadline;
}

void ProbeCollector::hit(ProbeClass cls, std::uint32_t id) {
  raw_hits_.push_back({cls, id});
  const auto index = static_cast<std::uint16_t>(((prev_location_ >> 1) ^ id) % kEdgeMapSize);
  prev_location_ = id;
  if (edge_epoch_[index] != epoch_) {
    edge_epoch_[index] = epoch_;
    edge_count_[index] = 0;
    touched_.push_back(index);
  }
  if (edge_count_[index] != 0xff) ++edge_count_[index];
}

void ProbeCollector::signal_crash(std::string detail) {
  crash_ = true;
  crash_detail_ = std::move(detail);
}

std::vector<ProbeHit> ProbeCollector::extract_probes() const {
  std::vector<ProbeHit> probes = raw_hits_;
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

std::vector<std::pair<std::uint16_t, std::uint8_t>> ProbeCollector::extract_edges() const {
  std::vector<std::pair<std::uint16_t, std::uint8_t>> edges;
  edges.reserve(touched_.size());
  for (std::uint16_t index : touched_) {
    edges.emplace_back(index, edge_count_[index]);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

void ProbeContext::hang() { throw TargetHang{}; }

}  // namespace semfuzz::harness
