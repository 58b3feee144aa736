#include "core/types.hpp"

namespace semfuzz {

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::Seed: return "seed";
    case Origin::Builtin: return "builtin";
    case Origin::Llm: return "llm";
  }
  return "seed";
}

std::optional<Origin> origin_from_name(std::string_view name) {
  if (name == "seed") return Origin::Seed;
  if (name == "builtin") return Origin::Builtin;
  if (name == "llm") return Origin::Llm;
  return std::nullopt;
}

const char* probe_class_name(ProbeClass c) {
  switch (c) {
    case ProbeClass::Function: return "function";
    case ProbeClass::Line: return "line";
    case ProbeClass::Branch: return "branch";
    case ProbeClass::Region: return "region";
  }
  return "function";
}

std::optional<ProbeClass> probe_class_from_name(std::string_view name) {
  if (name == "function") return ProbeClass::Function;
  if (name == "line") return ProbeClass::Line;
  if (name == "branch") return ProbeClass::Branch;
  if (name == "region") return ProbeClass::Region;
  return std::nullopt;
}

const char* exec_status_name(ExecStatus s) {
  switch (s) {
    case ExecStatus::Ok: return "ok";
    case ExecStatus::Crash: return "crash";
    case ExecStatus::Hang: return "hang";
  }
  return "ok";
}

}  // namespace semfuzz
