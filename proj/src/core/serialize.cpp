#include "core/serialize.hpp"

#include "core/errors.hpp"
#include "core/hex.hpp"

namespace semfuzz {

namespace {

Origin origin_or_throw(const std::string& name) {
  auto o = origin_from_name(name);
  if (!o) throw IoError("unknown origin: " + name);
  return *o;
}

ProbeClass probe_class_or_throw(const std::string& name) {
  auto c = probe_class_from_name(name);
  if (!c) throw IoError("unknown probe class: " + name);
  return *c;
}

Bytes payload_or_throw(const std::string& hex) {
  auto b = hex_decode(hex);
  if (!b) throw IoError("bad payload hex in serialized value");
  return *b;
}

}  // namespace

nlohmann::ordered_json test_case_to_json(const TestCase& tc) {
  nlohmann::ordered_json j;
  j["id"] = tc.id;
  j["payload"] = hex_encode(tc.payload);
  j["origin"] = origin_name(tc.origin);
  if (tc.parent_id) j["parent_id"] = *tc.parent_id;
  else j["parent_id"] = nullptr;
  j["discovered_at_ns"] = tc.discovered_at_ns;
  return j;
}

TestCase test_case_from_json(const nlohmann::json& j) {
  TestCase tc;
  tc.id = j.at("id").get<std::uint64_t>();
  tc.payload = payload_or_throw(j.at("payload").get<std::string>());
  tc.origin = origin_or_throw(j.at("origin").get<std::string>());
  if (!j.at("parent_id").is_null()) tc.parent_id = j.at("parent_id").get<std::uint64_t>();
  tc.discovered_at_ns = j.at("discovered_at_ns").get<std::uint64_t>();
  return tc;
}

nlohmann::ordered_json outcome_to_json(const ExecutionOutcome& o) {
  nlohmann::ordered_json j;
  j["status"] = exec_status_name(o.status);
  auto probes = nlohmann::ordered_json::array();
  for (const auto& hit : o.probes) {
    probes.push_back({{"class", probe_class_name(hit.cls)}, {"id", hit.id}});
  }
  j["probes"] = std::move(probes);
  auto edges = nlohmann::ordered_json::array();
  for (const auto& [index, count] : o.edge_hits) {
    edges.push_back({{"index", index}, {"count", count}});
  }
  j["edge_hits"] = std::move(edges);
  j["exec_time_ns"] = static_cast<std::uint64_t>(o.exec_time.count());
  j["detail"] = o.classification_detail;
  return j;
}

ExecutionOutcome outcome_from_json(const nlohmann::json& j) {
  ExecutionOutcome o;
  const std::string status = j.at("status").get<std::string>();
  if (status == "ok") o.status = ExecStatus::Ok;
  else if (status == "crash") o.status = ExecStatus::Crash;
  else if (status == "hang") o.status = ExecStatus::Hang;
  else throw IoError("unknown execution status: " + status);
  for (const auto& p : j.at("probes")) {
    o.probes.push_back({probe_class_or_throw(p.at("class").get<std::string>()),
                        p.at("id").get<std::uint32_t>()});
  }
  for (const auto& e : j.at("edge_hits")) {
    o.edge_hits.emplace_back(e.at("index").get<std::uint16_t>(),
                             e.at("count").get<std::uint8_t>());
  }
  o.exec_time = std::chrono::nanoseconds(j.at("exec_time_ns").get<std::uint64_t>());
  o.classification_detail = j.at("detail").get<std::string>();
  return o;
}

nlohmann::ordered_json coverage_map_to_json(const CoverageMap& m) {
  nlohmann::ordered_json j;
  auto edges = nlohmann::ordered_json::object();
  const auto& bitmap = m.edge_bitmap();
  for (std::size_t i = 0; i < bitmap.size(); ++i) {
    if (bitmap[i] != 0) edges[std::to_string(i)] = bitmap[i];
  }
  j["edge_bitmap"] = std::move(edges);
  auto covered = nlohmann::ordered_json::object();
  for (ProbeClass c : kProbeClasses) {
    auto ids = nlohmann::ordered_json::array();
    for (std::uint32_t id : m.covered(c)) ids.push_back(id);
    covered[probe_class_name(c)] = std::move(ids);
  }
  j["covered"] = std::move(covered);
  auto totals = nlohmann::ordered_json::object();
  for (const auto& [cls, total] : m.totals()) {
    totals[probe_class_name(cls)] = total;
  }
  j["totals"] = std::move(totals);
  return j;
}

CoverageMap coverage_map_from_json(const nlohmann::json& j) {
  CoverageMap m;
  for (const auto& [key, value] : j.at("edge_bitmap").items()) {
    const auto index = static_cast<std::size_t>(std::stoul(key));
    if (index >= kEdgeMapSize) throw IoError("edge index out of range: " + key);
    m.edge_bitmap()[index] = value.get<std::uint8_t>();
  }
  for (const auto& [key, ids] : j.at("covered").items()) {
    const ProbeClass cls = probe_class_or_throw(key);
    for (const auto& id : ids) m.covered_sets()[cls].insert(id.get<std::uint32_t>());
  }
  std::map<ProbeClass, std::uint32_t> totals;
  for (const auto& [key, total] : j.at("totals").items()) {
    totals[probe_class_or_throw(key)] = total.get<std::uint32_t>();
  }
  m.set_totals(std::move(totals));
  return m;
}

}  // namespace semfuzz
