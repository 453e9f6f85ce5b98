#include "mdsearch/evaluator.hpp"

#include <chrono>
#include <unordered_map>

#include "mdsearch/errors.hpp"

namespace mdsearch {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Found:
      return "found";
    case Outcome::Exhausted:
      return "exhausted";
    case Outcome::DepthCapped:
      return "depth_capped";
  }
  return "unknown";
}

Outcome outcome_from_string(std::string_view text) {
  if (text == "found") return Outcome::Found;
  if (text == "exhausted") return Outcome::Exhausted;
  if (text == "depth_capped") return Outcome::DepthCapped;
  throw ArgumentError("unknown outcome '" + std::string(text) + "'");
}

std::uint64_t depth_cap(const GridShape& shape) { return 4 * shape.cell_count(); }

namespace {

CandidateSet initial_candidates(const GridShape& shape, std::string_view adversary_id) {
  if (auto surface = surface_for(adversary_id, shape)) return *surface;
  return CandidateSet::full(shape);
}

// Throws ProtocolError if `reply` to `q` is not allowed given `candidates`;
// otherwise applies it.
void accept_reply(CandidateSet& candidates, const Point& q, const Reply& reply, const std::optional<Point>& target,
                  std::size_t step) {
  const auto where = [&] { return "step " + std::to_string(step) + ", query " + q.to_string(); };
  if (reply.is_found()) {
    const bool honest_hit = target && *target == q;
    const auto only = candidates.single();
    const bool forced = only && *only == candidates.shape().index_of(q);
    if (!honest_hit && !forced) throw ProtocolError("illegal Found reply at " + where());
    return;
  }
  const ReplyCorner& corner = reply.corner();
  if (corner.dimension() != candidates.shape().dimension()) {
    throw ProtocolError("reply corner of wrong dimension at " + where());
  }
  if (target && !is_compatible(*target, q, corner)) {
    throw ProtocolError("reply " + corner.to_string() + " contradicts the target at " + where());
  }
  CandidateSet next = apply_reply(candidates, q, corner);
  if (next.empty()) throw ProtocolError("reply " + corner.to_string() + " leaves no candidate at " + where());
  candidates = std::move(next);
}

}  // namespace

Transcript run_match(Strategy& strategy, Adversary& adversary, const std::optional<Point>& target) {
  const GridShape& shape = strategy.shape();
  if (!(adversary.shape() == shape)) throw ArgumentError("run_match: strategy and adversary disagree on the shape");
  if (target) {
    const auto* honest = dynamic_cast<const HonestAdversary*>(&adversary);
    if (!honest || !(honest->target() == *target)) {
      throw ArgumentError("run_match: a declared target requires the honest adversary holding it");
    }
  }
  Transcript transcript{shape, std::string(strategy.id()), std::string(adversary.id()), target, {},
                        Outcome::Exhausted};
  CandidateSet candidates = initial_candidates(shape, adversary.id());
  const std::uint64_t cap = depth_cap(shape);
  while (true) {
    const auto q = strategy.next();
    if (!q) {
      transcript.outcome = Outcome::Exhausted;
      return transcript;
    }
    if (transcript.events.size() >= cap) {
      transcript.outcome = Outcome::DepthCapped;
      return transcript;
    }
    shape.check(*q);
    const Reply reply = adversary.reply(*q);
    accept_reply(candidates, *q, reply, target, transcript.events.size());
    transcript.events.push_back({*q, reply});
    if (reply.is_found()) {
      transcript.outcome = Outcome::Found;
      return transcript;
    }
    strategy.observe(reply);
  }
}

void replay_check(const Transcript& transcript) {
  CandidateSet candidates = initial_candidates(transcript.shape, transcript.adversary);
  for (std::size_t i = 0; i < transcript.events.size(); ++i) {
    const auto& event = transcript.events[i];
    if (!transcript.shape.contains(event.query)) {
      throw ProtocolError("step " + std::to_string(i) + ": query outside the grid");
    }
    if (i + 1 < transcript.events.size() && event.reply.is_found()) {
      throw ProtocolError("step " + std::to_string(i) + ": Found before the last event");
    }
    accept_reply(candidates, event.query, event.reply, transcript.target, i);
  }
  const bool ends_found = !transcript.events.empty() && transcript.events.back().reply.is_found();
  if (ends_found != (transcript.outcome == Outcome::Found)) {
    throw ProtocolError("transcript outcome does not match its last event");
  }
}

bool replays_identically(const Transcript& transcript) {
  auto strategy = make_strategy(transcript.strategy, transcript.shape);
  for (const auto& event : transcript.events) {
    const auto q = strategy->next();
    if (!q || !(*q == event.query)) return false;
    if (event.reply.is_found()) return true;
    strategy->observe(event.reply);
  }
  return transcript.outcome != Outcome::Exhausted || !strategy->next();
}

namespace {

class WorstCaseSearch {
 public:
  WorstCaseSearch(const GridShape& shape, const EvaluationOptions& options)
      : shape_(shape), options_(options), corners_(corners_in_lex_order(shape.dimension())), cap_(depth_cap(shape)) {}

  struct Result {
    int depth;
    bool correct;
  };

  Result visit(const Strategy& strategy, const CandidateSet& candidates, std::uint64_t depth) {
    ++nodes_;
    const auto q = strategy.next();
    if (!q) return {0, false};
    if (depth >= cap_) return {0, false};

    std::string key = strategy.key();
    key.push_back('#');
    key += candidates.key();
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= options_.max_states) {
      throw ResourceError("worst_case: state cap " + std::to_string(options_.max_states) + " exceeded on " +
                          shape_.to_string());
    }

    Result result{1, true};
    const CellIndex cell = shape_.index_of(*q);
    const auto only = candidates.single();
    if (!(only && *only == cell)) {
      const std::uint64_t total = candidates.count();
      bool any = false;
      for (const auto& r : corners_) {
        const Box box = excluded_box(shape_, *q, r);
        if (candidates.count_in(box) == total) continue;
        any = true;
        CandidateSet child = candidates;
        child.erase_box(box);
        auto next = strategy.clone();
        next->observe(Reply::corner(r));
        const Result sub = visit(*next, child, depth + 1);
        result.depth = std::max(result.depth, 1 + sub.depth);
        result.correct = result.correct && sub.correct;
      }
      if (!any) throw InvariantError("worst_case: no valid reply while candidates remain");
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  // Follows a deepest branch (first in lexicographic reply order) to build a witness.
  Transcript witness(const Strategy& root, const std::string& strategy_id) {
    Transcript t{shape_, strategy_id, "worst_case", std::nullopt, {}, Outcome::Exhausted};
    auto strategy = root.clone();
    CandidateSet candidates = CandidateSet::full(shape_);
    while (true) {
      const auto q = strategy->next();
      if (!q) return t;
      if (t.events.size() >= cap_) {
        t.outcome = Outcome::DepthCapped;
        return t;
      }
      const CellIndex cell = shape_.index_of(*q);
      const auto only = candidates.single();
      if (only && *only == cell) {
        t.events.push_back({*q, Reply::found()});
        t.outcome = Outcome::Found;
        return t;
      }
      const Result here = visit(*strategy, candidates, t.events.size());
      const std::uint64_t total = candidates.count();
      bool moved = false;
      for (const auto& r : corners_) {
        const Box box = excluded_box(shape_, *q, r);
        if (candidates.count_in(box) == total) continue;
        CandidateSet child = candidates;
        child.erase_box(box);
        auto next = strategy->clone();
        next->observe(Reply::corner(r));
        const Result sub = visit(*next, child, t.events.size() + 1);
        if (1 + sub.depth == here.depth) {
          t.events.push_back({*q, Reply::corner(r)});
          strategy = std::move(next);
          candidates = std::move(child);
          moved = true;
          break;
        }
      }
      if (!moved) throw InvariantError("worst_case: witness lost the deepest branch");
    }
  }

  std::uint64_t nodes() const noexcept { return nodes_; }
  std::uint64_t memo_entries() const noexcept { return memo_.size(); }

 private:
  GridShape shape_;
  EvaluationOptions options_;
  std::vector<ReplyCorner> corners_;
  std::uint64_t cap_;
  std::uint64_t nodes_ = 0;
  std::unordered_map<std::string, Result> memo_;
};

}  // namespace

EvaluationReport worst_case(const Strategy& strategy, const EvaluationOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const GridShape& shape = strategy.shape();
  WorstCaseSearch search(shape, options);
  const auto result = search.visit(strategy, CandidateSet::full(shape), 0);
  EvaluationReport report{shape, std::string(strategy.id()), result.depth, result.correct, 0, 0, 0.0, std::nullopt};
  if (options.witness) report.witness = search.witness(strategy, report.strategy);
  report.nodes_visited = search.nodes();
  report.memo_entries = search.memo_entries();
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mdsearch
