#include "core/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace semfuzz {

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(key + ": expected an unsigned integer (got \"" + value + "\")");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    double out = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a real number (got \"" + value + "\")");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(key + ": expected a boolean (got \"" + value + "\")");
}

// "k=v,k=v" option tails for backend descriptors
std::vector<std::pair<std::string, std::string>> parse_kv_list(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      out.emplace_back(item, "");
    } else {
      out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    }
  }
  return out;
}

}  // namespace

BrokerEndpoint parse_broker_endpoint(const std::string& text) {
  BrokerEndpoint ep;
  if (text == "none" || text.empty()) {
    ep.kind = BrokerEndpoint::Kind::None;
    return ep;
  }
  if (text == "inproc" || text == "in-process") {
    ep.kind = BrokerEndpoint::Kind::InProcess;
    return ep;
  }
  auto colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size()) {
    throw ConfigError("broker: expected none|inproc|host:port (got \"" + text + "\")");
  }
  ep.kind = BrokerEndpoint::Kind::Remote;
  ep.host = text.substr(0, colon);
  ep.port = static_cast<std::uint16_t>(parse_u64("broker", text.substr(colon + 1)));
  return ep;
}

std::string broker_endpoint_to_string(const BrokerEndpoint& ep) {
  switch (ep.kind) {
    case BrokerEndpoint::Kind::None: return "none";
    case BrokerEndpoint::Kind::InProcess: return "inproc";
    case BrokerEndpoint::Kind::Remote: return ep.host + ":" + std::to_string(ep.port);
  }
  return "none";
}

BackendDescriptor parse_backend_descriptor(const std::string& text) {
  BackendDescriptor b;
  std::string head = text;
  std::string tail;
  if (auto colon = text.find(':'); colon != std::string::npos && text.rfind("http", 0) != 0) {
    head = text.substr(0, colon);
    tail = text.substr(colon + 1);
  }
  if (head == "mock-identity") {
    b.kind = BackendDescriptor::Kind::MockIdentity;
  } else if (head == "mock-mutator") {
    b.kind = BackendDescriptor::Kind::MockMutator;
  } else if (head == "mock-chaos") {
    b.kind = BackendDescriptor::Kind::MockChaos;
    // Paper-reported operating point as the default fault mix.
    b.timeout_rate = 0.35;
    b.mismatch_rate = 0.05;
    b.oddhex_rate = 0.05;
    b.dup_rate = 0.2;
  } else if (head == "http" || text.rfind("http://", 0) == 0 || text.rfind("https://", 0) == 0) {
    b.kind = BackendDescriptor::Kind::HttpChat;
    if (head != "http") b.url = text;
    return b;
  } else {
    throw ConfigError("backend: unknown backend \"" + text +
                      "\" (expected mock-identity|mock-mutator|mock-chaos|http|http(s)://...)");
  }
  for (const auto& [k, v] : parse_kv_list(tail)) {
    if (k == "seed") b.rng_seed = parse_u64("backend." + k, v);
    else if (k == "t" || k == "timeout") b.timeout_rate = parse_real("backend." + k, v);
    else if (k == "m" || k == "mismatch") b.mismatch_rate = parse_real("backend." + k, v);
    else if (k == "o" || k == "oddhex") b.oddhex_rate = parse_real("backend." + k, v);
    else if (k == "d" || k == "dup") b.dup_rate = parse_real("backend." + k, v);
    else if (k == "sleep") b.timeout_sleep = parse_bool("backend." + k, v);
    else throw ConfigError("backend: unknown option \"" + k + "\"");
  }
  return b;
}

std::string backend_descriptor_to_string(const BackendDescriptor& b) {
  std::ostringstream os;
  switch (b.kind) {
    case BackendDescriptor::Kind::MockIdentity: return "mock-identity";
    case BackendDescriptor::Kind::MockMutator:
      os << "mock-mutator:seed=" << b.rng_seed;
      return os.str();
    case BackendDescriptor::Kind::MockChaos:
      os << "mock-chaos:t=" << b.timeout_rate << ",m=" << b.mismatch_rate
         << ",o=" << b.oddhex_rate << ",d=" << b.dup_rate << ",seed=" << b.rng_seed
         << ",sleep=" << (b.timeout_sleep ? 1 : 0);
      return os.str();
    case BackendDescriptor::Kind::HttpChat: return b.url.empty() ? "http" : b.url;
  }
  return "mock-identity";
}

std::chrono::milliseconds parse_duration_ms(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ConfigError("duration: empty value");
  size_t i = 0;
  while (i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) || t[i] == '.')) ++i;
  if (i == 0) throw ConfigError("duration: expected a number (got \"" + text + "\")");
  double value = 0;
  try {
    value = std::stod(t.substr(0, i));
  } catch (const std::exception&) {
    throw ConfigError("duration: bad number in \"" + text + "\"");
  }
  const std::string unit = trim(t.substr(i));
  double ms = 0;
  if (unit.empty() || unit == "s") ms = value * 1000.0;
  else if (unit == "ms") ms = value;
  else if (unit == "m") ms = value * 60'000.0;
  else if (unit == "h") ms = value * 3'600'000.0;
  else throw ConfigError("duration: unknown unit \"" + unit + "\" (use ms|s|m|h)");
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

std::string duration_to_string(std::chrono::milliseconds d) {
  const auto ms = d.count();
  if (ms % 1000 == 0) return std::to_string(ms / 1000) + "s";
  return std::to_string(ms) + "ms";
}

void config_set(CampaignConfig& c, const std::string& key, const std::string& value) {
  if (key == "target") c.target = value;
  else if (key == "duration") c.duration = parse_duration_ms(value);
  else if (key == "shots") {
    int shots = static_cast<int>(parse_u64(key, value));
    c.shots = shots;
  } else if (key == "seed-dir") c.seed_dir = value;
  else if (key == "rng-seed") c.rng_seed = parse_u64(key, value);
  else if (key == "broker") c.broker = parse_broker_endpoint(value);
  else if (key == "backend") c.backend = parse_backend_descriptor(value);
  else if (key == "backend-url") {
    c.backend.kind = BackendDescriptor::Kind::HttpChat;
    c.backend.url = value;
  } else if (key == "model") c.backend.model = value;
  else if (key == "request-timeout") c.backend.request_timeout = parse_duration_ms(value);
  else if (key == "poll-timeout") c.poll_timeout = parse_duration_ms(value);
  else if (key == "hang-budget") c.hang_budget = parse_duration_ms(value);
  else if (key == "split-threshold") c.split_threshold = parse_u64(key, value);
  else if (key == "temperature") c.temperature = parse_real(key, value);
  else if (key == "mode") c.mode = value;
  else if (key == "deterministic-time") c.deterministic_time = parse_bool(key, value);
  else if (key == "trials") c.trials = static_cast<int>(parse_u64(key, value));
  else if (key == "out") c.out_dir = value;
  else if (key == "prompt-dir") c.prompt_dir = value;
  else if (key == "library-info") c.library_info = value;
  else if (key == "probe-totals") c.probe_totals = value;
  else throw ConfigError(key + ": unknown configuration key");
}

void config_load_file(CampaignConfig& c, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config file not readable: " + path.string());
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    config_set(c, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
}

void config_validate(const CampaignConfig& c) {
  if (c.shots != 0 && c.shots != 1 && c.shots != 3) {
    throw ConfigError("shots: must be one of {0, 1, 3} (got " + std::to_string(c.shots) + ")");
  }
  if (c.split_threshold == 0) {
    throw ConfigError("split-threshold: must be > 0");
  }
  if (c.temperature < 0) {
    throw ConfigError("temperature: must be >= 0");
  }
  if (c.mode != "all-in-one" && c.mode != "client") {
    throw ConfigError("mode: must be all-in-one or client (got \"" + c.mode + "\")");
  }
  if (c.trials < 1) {
    throw ConfigError("trials: must be >= 1");
  }
  const auto& b = c.backend;
  auto in_unit = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!in_unit(b.timeout_rate) || !in_unit(b.mismatch_rate) || !in_unit(b.oddhex_rate) ||
      !in_unit(b.dup_rate)) {
    throw ConfigError("backend: chaos rates must lie in [0, 1]");
  }
  if (b.timeout_rate + b.mismatch_rate + b.oddhex_rate + b.dup_rate > 1.0 + 1e-12) {
    throw ConfigError("backend: chaos failure rates must sum to <= 1");
  }
  if (b.kind == BackendDescriptor::Kind::HttpChat && b.url.empty()) {
    throw ConfigError("backend-url: required for the http backend");
  }
}

std::string config_to_string(const CampaignConfig& c) {
  std::ostringstream os;
  os << "target = " << c.target << "\n"
     << "duration = " << duration_to_string(c.duration) << "\n"
     << "shots = " << c.shots << "\n"
     << "seed-dir = " << c.seed_dir.string() << "\n"
     << "rng-seed = " << c.rng_seed << "\n"
     << "broker = " << broker_endpoint_to_string(c.broker) << "\n"
     << "backend = " << backend_descriptor_to_string(c.backend) << "\n"
     << "poll-timeout = " << duration_to_string(c.poll_timeout) << "\n"
     << "hang-budget = " << duration_to_string(c.hang_budget) << "\n"
     << "split-threshold = " << c.split_threshold << "\n"
     << "temperature = " << c.temperature << "\n"
     << "mode = " << c.mode << "\n"
     << "deterministic-time = " << (c.deterministic_time ? "true" : "false") << "\n";
  return os.str();
}

}  // namespace semfuzz
