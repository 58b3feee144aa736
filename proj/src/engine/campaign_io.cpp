#include <fstream>
#include <iomanip>
#include <sstream>

#include "core/errors.hpp"
#include "core/serialize.hpp"
#include "engine/campaign.hpp"

namespace semfuzz::engine {

namespace {

std::string zero_pad(std::uint64_t v, int width = 6) {
  std::ostringstream os;
  os << std::setw(width) << std::setfill('0') << v;
  return os.str();
}

// id{seq}_src{parent}_{origin}; seeds carry no src segment.
std::string test_case_file_name(const TestCase& tc) {
  std::string name = "id" + zero_pad(tc.id);
  if (tc.parent_id) name += "_src" + zero_pad(*tc.parent_id);
  name += std::string("_") + origin_name(tc.origin);
  return name;
}

void write_bucket(const std::vector<TestCase>& bucket, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const TestCase& tc : bucket) {
    std::ofstream out(dir / test_case_file_name(tc), std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(tc.payload.data()),
              static_cast<std::streamsize>(tc.payload.size()));
    if (!out) throw IoError("cannot write test case file in " + dir.string());
  }
}

nlohmann::ordered_json test_cases_to_json(const std::vector<TestCase>& cases) {
  auto arr = nlohmann::ordered_json::array();
  for (const TestCase& tc : cases) arr.push_back(test_case_to_json(tc));
  return arr;
}

std::vector<TestCase> test_cases_from_json(const nlohmann::json& arr) {
  std::vector<TestCase> out;
  for (const auto& j : arr) out.push_back(test_case_from_json(j));
  return out;
}

}  // namespace

void write_campaign_outputs(const CampaignResult& result, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_bucket(result.corpus, out_dir / "queue");
  write_bucket(result.crashes, out_dir / "crashes");
  write_bucket(result.hangs, out_dir / "hangs");
  std::ofstream out(out_dir / "campaign.json", std::ios::trunc);
  out << campaign_result_to_json(result) << '\n';
  if (!out) throw IoError("cannot write campaign.json in " + out_dir.string());
}

std::string campaign_result_to_json(const CampaignResult& r) {
  nlohmann::ordered_json j;
  j["target"] = r.target;
  j["rng_seed"] = r.rng_seed;
  j["duration_ms"] = r.duration_ms;
  j["shots"] = r.shots;
  j["backend"] = r.backend;
  j["deterministic_time"] = r.deterministic_time;
  j["hang_budget_ms"] = r.hang_budget_ms;
  j["exec_count"] = r.exec_count;
  j["llm_derived_execs"] = r.llm_derived_execs;
  j["published"] = r.published;
  j["publish_dropped"] = r.publish_dropped;
  j["broker_failures"] = r.broker_failures;

  auto coverage = nlohmann::ordered_json::object();
  for (const auto& [cls, pct] : r.coverage_final) coverage[probe_class_name(cls)] = pct;
  j["coverage_final"] = std::move(coverage);

  auto timeline = nlohmann::ordered_json::array();
  for (const TimelinePoint& p : r.coverage_timeline) {
    timeline.push_back({{"t_ms", p.t_ms},
                        {"class", probe_class_name(p.cls)},
                        {"percent", p.percent}});
  }
  j["coverage_timeline"] = std::move(timeline);

  j["seeds"] = test_cases_to_json(r.seeds);
  j["corpus"] = test_cases_to_json(r.corpus);
  j["crashes"] = test_cases_to_json(r.crashes);
  j["hangs"] = test_cases_to_json(r.hangs);
  j["coverage_map"] = coverage_map_to_json(r.final_map);
  return j.dump(2);
}

CampaignResult campaign_result_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw IoError("campaign.json: malformed JSON");
  try {
    CampaignResult r;
    r.target = j.at("target").get<std::string>();
    r.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    r.duration_ms = j.at("duration_ms").get<std::uint64_t>();
    r.shots = j.at("shots").get<int>();
    r.backend = j.at("backend").get<std::string>();
    r.deterministic_time = j.at("deterministic_time").get<bool>();
    r.hang_budget_ms = j.at("hang_budget_ms").get<std::uint64_t>();
    r.exec_count = j.at("exec_count").get<std::uint64_t>();
    r.llm_derived_execs = j.at("llm_derived_execs").get<std::uint64_t>();
    r.published = j.at("published").get<std::uint64_t>();
    r.publish_dropped = j.at("publish_dropped").get<std::uint64_t>();
    r.broker_failures = j.at("broker_failures").get<std::uint64_t>();
    for (const auto& [key, pct] : j.at("coverage_final").items()) {
      const auto cls = probe_class_from_name(key);
      if (!cls) throw IoError("campaign.json: unknown coverage class " + key);
      r.coverage_final[*cls] = pct.get<double>();
    }
    for (const auto& p : j.at("coverage_timeline")) {
      const auto cls = probe_class_from_name(p.at("class").get<std::string>());
      if (!cls) throw IoError("campaign.json: unknown timeline class");
      r.coverage_timeline.push_back(
          {p.at("t_ms").get<std::uint64_t>(), *cls, p.at("percent").get<double>()});
    }
    r.seeds = test_cases_from_json(j.at("seeds"));
    r.corpus = test_cases_from_json(j.at("corpus"));
    r.crashes = test_cases_from_json(j.at("crashes"));
    r.hangs = test_cases_from_json(j.at("hangs"));
    r.final_map = coverage_map_from_json(j.at("coverage_map"));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("campaign.json: ") + e.what());
  }
}

CampaignResult load_campaign_result(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw IoError("cannot read " + json_path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return campaign_result_from_json(buffer.str());
}

}  // namespace semfuzz::engine
