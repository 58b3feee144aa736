#include "core/query_log.hpp"

#include <json.hpp>

#include "core/errors.hpp"

namespace semfuzz {

const char* query_status_name(QueryStatus s) {
  switch (s) {
    case QueryStatus::Ok: return "ok";
    case QueryStatus::Timeout: return "timeout";
    case QueryStatus::FormatMismatch: return "format_mismatch";
    case QueryStatus::HexError: return "hex_error";
    case QueryStatus::Empty: return "empty";
  }
  return "empty";
}

std::optional<QueryStatus> query_status_from_name(std::string_view name) {
  if (name == "ok") return QueryStatus::Ok;
  if (name == "timeout") return QueryStatus::Timeout;
  if (name == "format_mismatch") return QueryStatus::FormatMismatch;
  if (name == "hex_error") return QueryStatus::HexError;
  if (name == "empty") return QueryStatus::Empty;
  return std::nullopt;
}

std::string to_jsonl(const QueryLogRecord& r) {
  nlohmann::ordered_json j;
  j["seq"] = r.seq;
  j["benchmark"] = r.benchmark;
  j["shot"] = r.shot;
  j["input_digest"] = r.input_digest;
  j["status"] = query_status_name(r.status);
  if (r.final_output_digest) {
    j["final_output_digest"] = *r.final_output_digest;
  } else {
    j["final_output_digest"] = nullptr;
  }
  j["latency_ms"] = r.latency_ms;
  j["duplicate"] = r.duplicate;
  return j.dump();
}

std::optional<QueryLogRecord> query_record_from_jsonl(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  try {
    QueryLogRecord r;
    r.seq = j.at("seq").get<std::uint64_t>();
    r.benchmark = j.at("benchmark").get<std::string>();
    r.shot = j.at("shot").get<int>();
    r.input_digest = j.at("input_digest").get<std::string>();
    auto status = query_status_from_name(j.at("status").get<std::string>());
    if (!status) return std::nullopt;
    r.status = *status;
    const auto& digest = j.at("final_output_digest");
    if (!digest.is_null()) r.final_output_digest = digest.get<std::string>();
    // status == Ok iff a final output digest exists
    if ((r.status == QueryStatus::Ok) != r.final_output_digest.has_value()) return std::nullopt;
    r.latency_ms = j.at("latency_ms").get<std::uint64_t>();
    r.duplicate = j.at("duplicate").get<bool>();
    return r;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

JsonlLogSink::JsonlLogSink(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  out_.open(path, std::ios::out | std::ios::trunc);
  if (!out_) throw IoError("cannot open log sink: " + path.string());
}

void JsonlLogSink::append(const QueryLogRecord& record) {
  std::lock_guard lock(mutex_);
  out_ << to_jsonl(record) << '\n';
  out_.flush();
}

}  // namespace semfuzz
