#include "service/backend.hpp"

#include <httplib.h>
#include <json.hpp>

#include <thread>

#include "core/errors.hpp"
#include "core/hex.hpp"
#include "engine/havoc.hpp"

namespace semfuzz::service {

namespace {

std::string wrap_response(const std::string& analysis, const std::string& hex) {
  return "Analysis:\n" + analysis + "\nFinal Output:\n" + hex + "\n";
}

LlmQueryResult ok_result(const std::string& analysis, const std::string& hex) {
  LlmQueryResult result;
  result.response = parse_response(wrap_response(analysis, hex));
  result.latency = std::chrono::milliseconds(0);
  return result;
}

}  // namespace

std::unique_ptr<Backend> make_backend(const BackendDescriptor& descriptor) {
  switch (descriptor.kind) {
    case BackendDescriptor::Kind::MockIdentity:
      return std::make_unique<MockIdentityBackend>();
    case BackendDescriptor::Kind::MockMutator:
      return std::make_unique<MockMutatorBackend>(descriptor.rng_seed);
    case BackendDescriptor::Kind::MockChaos:
      return std::make_unique<MockChaosBackend>(descriptor);
    case BackendDescriptor::Kind::HttpChat:
      return std::make_unique<HttpChatBackend>(descriptor);
  }
  throw ConfigError("backend: unknown backend kind");
}

LlmQueryResult MockIdentityBackend::query(const PromptBundle& prompt) {
  return ok_result("The buffer is returned unchanged to preserve the format.",
                   prompt.input_hex);
}

LlmQueryResult MockMutatorBackend::query(const PromptBundle& prompt) {
  const Bytes head = hex_decode_lenient(prompt.input_hex).value_or(Bytes{});
  const Bytes mutated = engine::mutate_builtin(as_span(head), rng_, {});
  return ok_result("Applied a stacked byte-level mutation to the decoded buffer.",
                   hex_encode(mutated));
}

LlmQueryResult MockChaosBackend::query(const PromptBundle& prompt) {
  const double draw = rng_.unit();
  double bound = descriptor_.timeout_rate;
  if (draw < bound) {
    if (descriptor_.timeout_sleep) {
      std::this_thread::sleep_for(descriptor_.request_timeout);
    }
    LlmQueryResult result;
    result.response.status = QueryStatus::Timeout;
    result.latency = descriptor_.request_timeout;
    return result;
  }
  bound += descriptor_.mismatch_rate;
  if (draw < bound) {
    LlmQueryResult result;
    result.response =
        parse_response("Analysis:\nThe buffer was inspected, but no mutation is offered.\n");
    result.latency = std::chrono::milliseconds(0);
    return result;
  }
  bound += descriptor_.oddhex_rate;
  if (draw < bound) {
    LlmQueryResult result;
    result.response = parse_response(
        wrap_response("Mutated the buffer as requested.", "zz zz not hex zz"));
    result.latency = std::chrono::milliseconds(0);
    return result;
  }
  bound += descriptor_.dup_rate;
  if (draw < bound) {
    const std::string hex = last_ok_hex_.value_or("00");
    last_ok_hex_ = hex;
    return ok_result("Re-applying the previously successful mutation.", hex);
  }
  const Bytes head = hex_decode_lenient(prompt.input_hex).value_or(Bytes{});
  const Bytes mutated = engine::mutate_builtin(as_span(head), rng_, {});
  const std::string hex = hex_encode(mutated);
  last_ok_hex_ = hex;
  return ok_result("Applied a stacked byte-level mutation to the decoded buffer.", hex);
}

HttpChatBackend::HttpChatBackend(const BackendDescriptor& descriptor)
    : descriptor_(descriptor) {
  std::string rest = descriptor.url;
  if (rest.rfind("http://", 0) == 0) {
    rest = rest.substr(7);
  } else {
    throw ConfigError("backend-url: only http:// endpoints are supported (got \"" +
                      descriptor.url + "\")");
  }
  const auto slash = rest.find('/');
  std::string host_port = slash == std::string::npos ? rest : rest.substr(0, slash);
  path_ = slash == std::string::npos ? "/api/chat" : rest.substr(slash);
  const auto colon = host_port.find(':');
  if (colon == std::string::npos) {
    host_ = host_port;
  } else {
    host_ = host_port.substr(0, colon);
    port_ = std::stoi(host_port.substr(colon + 1));
  }
  if (host_.empty()) throw ConfigError("backend-url: missing host in \"" + descriptor.url + "\"");
}

LlmQueryResult HttpChatBackend::query(const PromptBundle& prompt) {
  httplib::Client client(host_, port_);
  const auto timeout = descriptor_.request_timeout;
  client.set_connection_timeout(timeout.count() / 1000,
                                (timeout.count() % 1000) * 1000);
  client.set_read_timeout(timeout.count() / 1000, (timeout.count() % 1000) * 1000);
  client.set_write_timeout(timeout.count() / 1000, (timeout.count() % 1000) * 1000);

  nlohmann::ordered_json body;
  body["model"] = descriptor_.model;
  body["messages"] = {{{"role", "system"}, {"content", prompt.system_text}},
                      {{"role", "user"}, {"content", prompt.user_text}}};
  body["temperature"] = descriptor_.temperature;
  body["stream"] = false;

  const auto start = std::chrono::steady_clock::now();
  httplib::Result res = client.Post(path_, body.dump(), "application/json");
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  LlmQueryResult result;
  result.latency = elapsed;
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
        err == httplib::Error::Write) {
      result.response.status = QueryStatus::Timeout;
      if (result.latency < timeout) result.latency = timeout;
    } else {
      result.response.status = QueryStatus::Empty;
    }
    return result;
  }
  if (res->status != 200) {
    result.response.status = QueryStatus::Empty;
    result.response.raw_text = res->body;
    return result;
  }

  // Chat-completion shapes: {message:{content}} or {choices:[{message:{content}}]}.
  std::string content = res->body;
  nlohmann::json j = nlohmann::json::parse(res->body, nullptr, /*allow_exceptions=*/false);
  if (!j.is_discarded()) {
    if (j.contains("message") && j["message"].contains("content")) {
      content = j["message"]["content"].get<std::string>();
    } else if (j.contains("choices") && j["choices"].is_array() && !j["choices"].empty() &&
               j["choices"][0].contains("message") &&
               j["choices"][0]["message"].contains("content")) {
      content = j["choices"][0]["message"]["content"].get<std::string>();
    }
  }
  result.response = parse_response(content);
  return result;
}

}  // namespace semfuzz::service
