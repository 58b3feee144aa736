#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace semfuzz {

enum class QueryStatus : std::uint8_t { Ok, Timeout, FormatMismatch, HexError, Empty };

const char* query_status_name(QueryStatus s);
std::optional<QueryStatus> query_status_from_name(std::string_view name);

// One LLM interaction. The unit over which SCR/RDR/FMR/HCER are computed.
// `duplicate` is filled in by analytics, never by the mutation service.
struct QueryLogRecord {
  std::uint64_t seq = 0;
  std::string benchmark;
  int shot = 0;
  std::string input_digest;                         // hex digest of the pre-mutation head
  QueryStatus status = QueryStatus::Ok;
  std::optional<std::string> final_output_digest;   // present iff status == Ok
  std::uint64_t latency_ms = 0;
  bool duplicate = false;

  bool operator==(const QueryLogRecord&) const = default;
};

// One JSON object per line; field names are part of the on-disk contract:
// seq, benchmark, shot, input_digest, status, final_output_digest,
// latency_ms, duplicate.
std::string to_jsonl(const QueryLogRecord& record);

// Returns nullopt for malformed lines (callers count and skip them).
std::optional<QueryLogRecord> query_record_from_jsonl(const std::string& line);

// Append-only serialized sink for QueryLogRecords.
class LogSink {
public:
  virtual ~LogSink() = default;
  virtual void append(const QueryLogRecord& record) = 0;
};

class JsonlLogSink final : public LogSink {
public:
  explicit JsonlLogSink(const std::filesystem::path& path);
  void append(const QueryLogRecord& record) override;

private:
  std::mutex mutex_;
  std::ofstream out_;
};

// Keeps records in memory; used by tests and the in-process orchestrator.
class CollectingLogSink final : public LogSink {
public:
  void append(const QueryLogRecord& record) override {
    std::lock_guard lock(mutex_);
    records_.push_back(record);
  }
  std::vector<QueryLogRecord> snapshot() const {
    std::lock_guard lock(mutex_);
    return records_;
  }

private:
  mutable std::mutex mutex_;
  std::vector<QueryLogRecord> records_;
};

// Fans one record out to several sinks.
class TeeLogSink final : public LogSink {
public:
  TeeLogSink(LogSink* a, LogSink* b) : a_(a), b_(b) {}
  void append(const QueryLogRecord& record) override {
    if (a_) a_->append(record);
    if (b_) b_->append(record);
  }

private:
  LogSink* a_;
  LogSink* b_;
};

}  // namespace semfuzz
