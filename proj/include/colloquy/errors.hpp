#pragma once

#include <stdexcept>
#include <string>

namespace colloquy {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- transport / provider --

struct AuthError : Error {
  using Error::Error;
};

struct RateLimitExhausted : Error {
  using Error::Error;
};

struct MalformedProviderReply : Error {
  using Error::Error;
};

// Retryable transport failure (429/5xx/timeout); the gateway consumes these
// internally and surfaces RateLimitExhausted once attempts run out.
struct TransientProviderError : Error {
  int status = 0;
  explicit TransientProviderError(const std::string& msg, int status_code = 0)
      : Error(msg), status(status_code) {}
};

// -- reply parsing --

struct UnparseableReply : Error {
  using Error::Error;
};

struct WrongCardinality : Error {
  int found = 0;
  int expected = 0;
  WrongCardinality(int found_n, int expected_n)
      : Error("expected " + std::to_string(expected_n) + " ideas, found " +
              std::to_string(found_n)),
        found(found_n),
        expected(expected_n) {}
};

struct DuplicateIdeaName : Error {
  std::string name;
  explicit DuplicateIdeaName(const std::string& idea_name)
      : Error("duplicate idea name: " + idea_name), name(idea_name) {}
};

struct MissingSlot : Error {
  std::string slot;
  explicit MissingSlot(const std::string& slot_name)
      : Error("missing template slot: {" + slot_name + "}"), slot(slot_name) {}
};

struct JudgeUnparseable : Error {
  using Error::Error;
};

// -- paper bank --

struct RemoteUnavailable : Error {
  using Error::Error;
};

struct EmptyResultSet : Error {
  using Error::Error;
};

struct BankTooSmall : Error {
  using Error::Error;
};

// -- vectors / dedup --

struct DimensionMismatch : Error {
  using Error::Error;
};

struct ZeroVector : Error {
  using Error::Error;
};

struct MissingEmbedding : Error {
  using Error::Error;
};

// -- pipeline stages --

struct ExpansionFailed : Error {
  using Error::Error;
};

struct NTooLarge : Error {
  using Error::Error;
};

struct MissingStage : Error {
  std::string artifact;
  explicit MissingStage(const std::string& missing_artifact)
      : Error("missing pipeline artifact: " + missing_artifact), artifact(missing_artifact) {}
};

}  // namespace colloquy
