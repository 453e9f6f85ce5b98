#pragma once

// Match simulation and exhaustive worst-case evaluation of strategies.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdsearch/adversaries.hpp"
#include "mdsearch/game.hpp"
#include "mdsearch/strategies.hpp"

namespace mdsearch {

enum class Outcome { Found, Exhausted, DepthCapped };

std::string_view to_string(Outcome outcome);
Outcome outcome_from_string(std::string_view text);

struct TranscriptEvent {
  Point query;
  Reply reply;

  friend bool operator==(const TranscriptEvent&, const TranscriptEvent&) = default;
};

struct Transcript {
  GridShape shape;
  std::string strategy;
  std::string adversary;
  std::optional<Point> target;
  std::vector<TranscriptEvent> events;
  Outcome outcome = Outcome::Exhausted;

  std::size_t total_queries() const noexcept { return events.size(); }

  // JSON lines: a header object, then one {"q":[...],"reply":...} per event.
  std::string to_jsonl() const;
  static Transcript from_jsonl(std::string_view text);

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// 4 x cell count.
std::uint64_t depth_cap(const GridShape& shape);

// Plays strategy against adversary, validating each reply against the
// candidate set (which starts at the adversary's announced surface, if any).
// A target may only be given together with the honest adversary.
Transcript run_match(Strategy& strategy, Adversary& adversary, const std::optional<Point>& target = std::nullopt);

// Re-checks a transcript: every corner reply leaves candidates, every Found is
// the honest target or forced. Throws ProtocolError naming the bad event.
void replay_check(const Transcript& transcript);

// Feeds the recorded replies to a fresh strategy and checks it issues the same queries.
bool replays_identically(const Transcript& transcript);

struct EvaluationOptions {
  std::uint64_t max_states = 20'000'000;
  bool witness = true;
};

struct EvaluationReport {
  GridShape shape;
  std::string strategy;
  int worst_case = 0;
  // Every leaf of the reply tree ends in Found.
  bool correct = true;
  std::uint64_t nodes_visited = 0;
  std::uint64_t memo_entries = 0;
  double wall_ms = 0.0;
  std::optional<Transcript> witness;
};

// Depth-first search over every valid corner reply (plus forced Found) at each
// query of the strategy, memoized on (strategy key, candidate set).
EvaluationReport worst_case(const Strategy& strategy, const EvaluationOptions& options = {});

}  // namespace mdsearch
