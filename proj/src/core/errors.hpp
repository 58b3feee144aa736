#pragma once

#include <stdexcept>
#include <string>

namespace semfuzz {

// Error taxonomy shared across the library. Every category maps onto one
// C-API status code; see capi/semfuzz_c.cpp.
class Error : public std::runtime_error {
public:
  enum class Kind {
    Config,          // bad configuration value or file; message names the key
    Io,              // filesystem / serialization failure
    Template,        // prompt template missing file or placeholder
    Protocol,        // malformed RESP frame
    Broker,          // broker unreachable / disconnected
    Target,          // target failed to load
    EmptyInput,      // operation on an empty queue/table
    Range,           // value outside the documented domain
    TargetMismatch,  // compare() over runs with different targets
  };

  Error(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(std::string m) : Error(Kind::Config, std::move(m)) {}
};
struct IoError : Error {
  explicit IoError(std::string m) : Error(Kind::Io, std::move(m)) {}
};
struct TemplateError : Error {
  explicit TemplateError(std::string m) : Error(Kind::Template, std::move(m)) {}
};
struct ProtocolError : Error {
  explicit ProtocolError(std::string m) : Error(Kind::Protocol, std::move(m)) {}
};
struct BrokerError : Error {
  explicit BrokerError(std::string m) : Error(Kind::Broker, std::move(m)) {}
};
struct TargetLoadError : Error {
  explicit TargetLoadError(std::string m) : Error(Kind::Target, std::move(m)) {}
};
struct EmptyInputError : Error {
  explicit EmptyInputError(std::string m) : Error(Kind::EmptyInput, std::move(m)) {}
};
struct RangeError : Error {
  explicit RangeError(std::string m) : Error(Kind::Range, std::move(m)) {}
};
struct TargetMismatchError : Error {
  explicit TargetMismatchError(std::string m) : Error(Kind::TargetMismatch, std::move(m)) {}
};

}  // namespace semfuzz
