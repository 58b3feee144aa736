#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/config.hpp"
#include "core/coverage.hpp"
#include "core/digest.hpp"
#include "core/errors.hpp"
#include "core/hex.hpp"
#include "core/query_log.hpp"
#include "core/rng.hpp"
#include "core/serialize.hpp"
#include "core/types.hpp"

#include <json.hpp>

using namespace semfuzz;

namespace {

Bytes random_bytes(Rng& rng, std::size_t max_len) {
  Bytes out(rng.below(max_len + 1));
  for (auto& b : out) b = rng.byte();
  return out;
}

TestCase random_test_case(Rng& rng) {
  TestCase tc;
  tc.id = rng.next_u64();
  tc.payload = random_bytes(rng, 64);
  const auto pick = rng.below(3);
  tc.origin = pick == 0 ? Origin::Seed : pick == 1 ? Origin::Builtin : Origin::Llm;
  if (tc.origin != Origin::Seed) tc.parent_id = rng.next_u64();
  tc.discovered_at_ns = rng.next_u64();
  return tc;
}

ExecutionOutcome random_outcome(Rng& rng) {
  ExecutionOutcome o;
  o.status = static_cast<ExecStatus>(rng.below(3));
  const auto n_probes = rng.below(20);
  for (std::uint64_t i = 0; i < n_probes; ++i) {
    o.probes.push_back({static_cast<ProbeClass>(rng.below(4)),
                        static_cast<std::uint32_t>(rng.below(500))});
  }
  std::sort(o.probes.begin(), o.probes.end());
  o.probes.erase(std::unique(o.probes.begin(), o.probes.end()), o.probes.end());
  const auto n_edges = rng.below(20);
  std::map<std::uint16_t, std::uint8_t> edges;
  for (std::uint64_t i = 0; i < n_edges; ++i) {
    edges[static_cast<std::uint16_t>(rng.below(kEdgeMapSize))] =
        static_cast<std::uint8_t>(rng.between(1, 255));
  }
  o.edge_hits.assign(edges.begin(), edges.end());
  o.exec_time = std::chrono::nanoseconds(rng.below(1'000'000));
  o.classification_detail = rng.coin() ? "" : "detail";
  return o;
}

QueryLogRecord random_record(Rng& rng) {
  QueryLogRecord r;
  r.seq = rng.next_u64();
  r.benchmark = rng.coin() ? "chunkfmt" : "minijson";
  r.shot = rng.coin() ? 0 : (rng.coin() ? 1 : 3);
  r.input_digest = digest_hex(random_bytes(rng, 8));
  r.status = static_cast<QueryStatus>(rng.below(5));
  if (r.status == QueryStatus::Ok) r.final_output_digest = digest_hex(random_bytes(rng, 8));
  r.latency_ms = rng.below(100000);
  r.duplicate = rng.coin();
  return r;
}

}  // namespace

TEST_CASE("digest: fixed vectors and basic properties") {
  // SHA-256 published test vectors
  CHECK(digest_hex(std::string_view{}) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(digest_hex(std::string_view{"abc"}) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  const Bytes a{0x00};
  const Bytes b{0x01};
  CHECK(digest_hex(as_span(a)) == digest_hex(as_span(a)));
  CHECK(digest_hex(as_span(a)) != digest_hex(as_span(b)));
  CHECK(digest_hex(as_span(a)).size() == 64);
}

TEST_CASE("coverage bucketing: ranges and monotonicity") {
  CHECK(bucket_index(0) == 0);
  CHECK(bucket_index(1) == 1);
  CHECK(bucket_index(2) == 2);
  CHECK(bucket_index(3) == 3);
  CHECK(bucket_index(4) == 4);
  CHECK(bucket_index(7) == 4);
  CHECK(bucket_index(8) == 5);
  CHECK(bucket_index(15) == 5);
  CHECK(bucket_index(16) == 6);
  CHECK(bucket_index(31) == 6);
  CHECK(bucket_index(32) == 7);
  CHECK(bucket_index(127) == 7);
  CHECK(bucket_index(128) == 8);
  CHECK(bucket_index(255) == 8);
  CHECK(bucket_index(100000) == 8);

  for (std::uint32_t a = 0; a < 300; ++a) {
    CHECK(bucket_index(a) <= bucket_index(a + 1));
  }
  CHECK(bucket_mask(0) == 0);
  CHECK(bucket_mask(1) == 0x01);
  CHECK(bucket_mask(128) == 0x80);
}

TEST_CASE("coverage map: novelty on new probes and new buckets") {
  CoverageMap map({{ProbeClass::Branch, 10}});

  ExecutionOutcome first;
  first.probes = {{ProbeClass::Branch, 1}};
  first.edge_hits = {{100, 1}};
  CHECK(map.is_novel(first));
  CHECK(map.merge(first));
  CHECK_FALSE(map.is_novel(first));
  CHECK_FALSE(map.merge(first));
  CHECK(map.covered_count(ProbeClass::Branch) == 1);

  // same edge, higher bucket
  ExecutionOutcome hotter;
  hotter.probes = {{ProbeClass::Branch, 1}};
  hotter.edge_hits = {{100, 5}};
  CHECK(map.is_novel(hotter));
  CHECK(map.merge(hotter));

  // new probe id, old edges
  ExecutionOutcome new_probe;
  new_probe.probes = {{ProbeClass::Branch, 2}};
  new_probe.edge_hits = {{100, 1}};
  CHECK(map.is_novel(new_probe));
  map.merge(new_probe);
  CHECK(map.covered_count(ProbeClass::Branch) == 2);
}

TEST_CASE("hex codec: examples and lenient fixups") {
  const Bytes dead{0xde, 0xad};
  CHECK(hex_encode(dead) == "dead");

  auto decoded = hex_decode_lenient("abc");
  REQUIRE(decoded.has_value());
  CHECK(*decoded == Bytes{0xab, 0xc0});

  CHECK_FALSE(hex_decode_lenient("xyz").has_value());
  CHECK_FALSE(hex_decode_lenient("cafes").has_value());  // pads to cafes0, 's' remains

  auto spaced = hex_decode_lenient(" de\nad\tbe ef ");
  REQUIRE(spaced.has_value());
  CHECK(*spaced == Bytes{0xde, 0xad, 0xbe, 0xef});

  CHECK(hex_decode("dead") == dead);
  CHECK_FALSE(hex_decode("abc").has_value());  // strict: odd length rejected

  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const Bytes data = random_bytes(rng, 128);
    const std::string hex = hex_encode(data);
    auto back = hex_decode_lenient(hex);
    REQUIRE(back.has_value());
    CHECK(*back == data);
  }
}

TEST_CASE("query log record: JSONL field names are the contract") {
  QueryLogRecord r;
  r.seq = 7;
  r.benchmark = "chunkfmt";
  r.shot = 3;
  r.input_digest = digest_hex(std::string_view{"head"});
  r.status = QueryStatus::Ok;
  r.final_output_digest = digest_hex(std::string_view{"cafe"});
  r.latency_ms = 41;
  r.duplicate = false;

  const std::string line = to_jsonl(r);
  const auto j = nlohmann::json::parse(line);
  const std::vector<std::string> expected_keys = {
      "seq", "benchmark", "shot", "input_digest", "status",
      "final_output_digest", "latency_ms", "duplicate"};
  CHECK(j.size() == expected_keys.size());
  for (const auto& key : expected_keys) CHECK(j.contains(key));
  CHECK(j["status"] == "ok");

  auto parsed = query_record_from_jsonl(line);
  REQUIRE(parsed.has_value());
  CHECK(*parsed == r);
}

TEST_CASE("query log record: malformed lines and invariant violations rejected") {
  CHECK_FALSE(query_record_from_jsonl("not json").has_value());
  CHECK_FALSE(query_record_from_jsonl("{\"seq\": 1}").has_value());

  // status ok requires a digest and vice versa
  QueryLogRecord r;
  r.status = QueryStatus::Timeout;
  r.input_digest = digest_hex(std::string_view{"x"});
  std::string line = to_jsonl(r);
  auto j = nlohmann::json::parse(line);
  j["final_output_digest"] = digest_hex(std::string_view{"y"});
  CHECK_FALSE(query_record_from_jsonl(j.dump()).has_value());
}

TEST_CASE("serialization round trips for arbitrary values") {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const TestCase tc = random_test_case(rng);
    CHECK(test_case_from_json(test_case_to_json(tc)) == tc);
  }
  for (int i = 0; i < 200; ++i) {
    const ExecutionOutcome o = random_outcome(rng);
    CHECK(outcome_from_json(outcome_to_json(o)) == o);
  }
  for (int i = 0; i < 50; ++i) {
    CoverageMap map({{ProbeClass::Function, 10}, {ProbeClass::Branch, 30}});
    for (int k = 0; k < 5; ++k) map.merge(random_outcome(rng));
    CHECK(coverage_map_from_json(coverage_map_to_json(map)) == map);
  }
  for (int i = 0; i < 500; ++i) {
    const QueryLogRecord r = random_record(rng);
    auto back = query_record_from_jsonl(to_jsonl(r));
    REQUIRE(back.has_value());
    CHECK(*back == r);
  }
}

TEST_CASE("durations parse with units") {
  CHECK(parse_duration_ms("90s").count() == 90'000);
  CHECK(parse_duration_ms("10m").count() == 600'000);
  CHECK(parse_duration_ms("2h").count() == 7'200'000);
  CHECK(parse_duration_ms("1500ms").count() == 1500);
  CHECK(parse_duration_ms("5").count() == 5000);
  CHECK_THROWS_AS(parse_duration_ms("abc"), ConfigError);
  CHECK_THROWS_AS(parse_duration_ms("10 fortnights"), ConfigError);
}

TEST_CASE("broker endpoints and backend descriptors parse") {
  CHECK(parse_broker_endpoint("none").kind == BrokerEndpoint::Kind::None);
  CHECK(parse_broker_endpoint("inproc").kind == BrokerEndpoint::Kind::InProcess);
  const auto remote = parse_broker_endpoint("127.0.0.1:6399");
  CHECK(remote.kind == BrokerEndpoint::Kind::Remote);
  CHECK(remote.host == "127.0.0.1");
  CHECK(remote.port == 6399);
  CHECK_THROWS_AS(parse_broker_endpoint("nonsense:"), ConfigError);

  CHECK(parse_backend_descriptor("mock-identity").kind == BackendDescriptor::Kind::MockIdentity);
  const auto mutator = parse_backend_descriptor("mock-mutator:seed=7");
  CHECK(mutator.kind == BackendDescriptor::Kind::MockMutator);
  CHECK(mutator.rng_seed == 7);
  const auto chaos = parse_backend_descriptor("mock-chaos:t=0.35,m=0.05,o=0.05,d=0.2,sleep=0");
  CHECK(chaos.kind == BackendDescriptor::Kind::MockChaos);
  CHECK(chaos.timeout_rate == doctest::Approx(0.35));
  CHECK(chaos.dup_rate == doctest::Approx(0.2));
  CHECK_FALSE(chaos.timeout_sleep);
  const auto http = parse_backend_descriptor("http://localhost:11434/api/chat");
  CHECK(http.kind == BackendDescriptor::Kind::HttpChat);
  CHECK(http.url == "http://localhost:11434/api/chat");
  CHECK_THROWS_AS(parse_backend_descriptor("mock-nonsense"), ConfigError);
}

TEST_CASE("config validation names the offending key") {
  CampaignConfig config;
  config.shots = 2;
  try {
    config_validate(config);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string message = e.what();
    CHECK(message.find("shots") != std::string::npos);
    CHECK(message.find("{0, 1, 3}") != std::string::npos);
  }

  config.shots = 1;
  config.split_threshold = 0;
  CHECK_THROWS_AS(config_validate(config), ConfigError);
  config.split_threshold = 2000;
  config.temperature = -1;
  CHECK_THROWS_AS(config_validate(config), ConfigError);
  config.temperature = 0;
  config.backend.timeout_rate = 0.9;
  config.backend.dup_rate = 0.5;
  CHECK_THROWS_AS(config_validate(config), ConfigError);
}

TEST_CASE("config files load with overrides and reject unknown keys") {
  const auto path = std::filesystem::temp_directory_path() / "semfuzz_test_config.cfg";
  {
    std::ofstream out(path, std::ios::trunc);
    out << "# comment line\n"
        << "target = minijson\n"
        << "duration = 30s\n"
        << "shots = 3\n"
        << "rng-seed = 99\n"
        << "broker = inproc\n"
        << "backend = mock-mutator:seed=5\n"
        << "split-threshold = 1000\n";
  }
  CampaignConfig config;
  config_load_file(config, path);
  CHECK(config.target == "minijson");
  CHECK(config.duration.count() == 30'000);
  CHECK(config.shots == 3);
  CHECK(config.rng_seed == 99);
  CHECK(config.split_threshold == 1000);

  config_set(config, "shots", "1");  // flag-style override wins
  CHECK(config.shots == 1);

  CHECK_THROWS_AS(config_set(config, "no-such-key", "1"), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("rng: deterministic and bounded") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.below(10) < 10);
    const double u = rng.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto v = rng.between(3, 9);
    CHECK(v >= 3);
    CHECK(v <= 9);
  }
}
