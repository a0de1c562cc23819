#pragma once

#include <stdexcept>
#include <string>

namespace dynmatch {

// Caller-facing errors: bad input to the library or CLI.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyEdgeError : InputError {
  EmptyEdgeError() : InputError("EmptyEdge: hyperedge has no vertices") {}
};

struct RankExceededError : InputError {
  explicit RankExceededError(std::size_t got, std::size_t rank)
      : InputError("RankExceeded: hyperedge has " + std::to_string(got) +
                    " distinct vertices, rank bound is " + std::to_string(rank)) {}
};

struct DuplicateEdgeError : InputError {
  explicit DuplicateEdgeError(const std::string& key)
      : InputError("DuplicateEdge: " + key + " is already present") {}
};

struct UnknownEdgeError : InputError {
  explicit UnknownEdgeError(const std::string& key)
      : InputError("UnknownEdge: " + key + " is not present") {}
};

struct LevelOutOfRangeError : InputError {
  explicit LevelOutOfRangeError(int level)
      : InputError("LevelOutOfRange: " + std::to_string(level)) {}
};

struct TooLargeError : InputError {
  explicit TooLargeError(std::size_t got, std::size_t cap)
      : InputError("TooLarge: " + std::to_string(got) +
                    " edges exceeds exhaustive-search budget " + std::to_string(cap)) {}
};

struct InfeasibleSpecError : InputError {
  using InputError::InputError;
};

struct ParseError : InputError {
  using InputError::InputError;
  ParseError(std::size_t line, const std::string& what)
      : InputError("Parse error at line " + std::to_string(line) + ": " + what) {}
};

// Internal errors: an invariant the engine itself is responsible for broke.
// These indicate a bug (or an astronomically unlikely probabilistic event)
// and are never part of normal control flow.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

struct EraseMissingError : InternalError {
  EraseMissingError() : InternalError("EraseMissing: batch erase of absent item") {}
};

struct MatchedEdgePassedError : InternalError {
  MatchedEdgePassedError()
      : InternalError("MatchedEdgePassed: matched edge routed to unmatched deletion") {}
};

struct NotMatchedError : InternalError {
  NotMatchedError() : InternalError("NotMatched: edge is not in the matching") {}
};

struct NotEndpointError : InternalError {
  NotEndpointError() : InternalError("NotEndpoint: vertex is not an endpoint of the edge") {}
};

struct NotMaxLevelError : InternalError {
  NotMaxLevelError()
      : InternalError("NotMaxLevel: owner candidate is not a maximum-level endpoint") {}
};

struct RoundCapExceededError : InternalError {
  explicit RoundCapExceededError(std::size_t rounds)
      : InternalError("RoundCapExceeded: Luby did not terminate in " +
                       std::to_string(rounds) + " rounds") {}
};

struct SettleDivergenceError : InternalError {
  explicit SettleDivergenceError(std::size_t reps)
      : InternalError("SettleDivergence: settle repetition cap " +
                       std::to_string(reps) + " exceeded") {}
};

struct SettleProgressError : InternalError {
  SettleProgressError(std::size_t matched, std::size_t required)
      : InternalError("SettleProgress: settle matched " + std::to_string(matched) +
                       " edges, deterministic lower bound is " + std::to_string(required)) {}
};

struct NoOpenBatchError : InternalError {
  NoOpenBatchError() : InternalError("NoOpenBatch: cost charged outside a batch") {}
};

struct DoubleOpenError : InternalError {
  DoubleOpenError() : InternalError("DoubleOpen: epoch already open for edge") {}
};

struct CloseUnopenedError : InternalError {
  CloseUnopenedError() : InternalError("CloseUnopened: no open epoch for edge") {}
};

}  // namespace dynmatch
