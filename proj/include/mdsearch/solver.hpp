#pragma once

// Exact minimax value of the search game on small grids, and shortest-path
// best responses against fixed deterministic adversaries.
//
// Value recurrence over candidate sets P (as 64-bit masks):
//   cost({p}) = 1
//   cost(P)   = 1 + min over queries q of max over valid corners r of cost(P \ X(q, r))
// A query whose reply can leave P unchanged never attains the minimum, so such
// queries are skipped and the recursion is well founded.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mdsearch/adversaries.hpp"
#include "mdsearch/game.hpp"

namespace mdsearch {

inline constexpr std::uint64_t kSolverCellLimit = 64;

struct SolverOptions {
  // Canonicalize memo keys under axis reversals and permutations of equal-size axes.
  bool symmetry = false;
  // Restrict queries to the bounding box of the candidates. Not known to be
  // value-preserving; reports computed this way are marked heuristic.
  bool prune_queries = false;
  std::uint64_t max_cells = kSolverCellLimit;
  std::uint64_t max_states = 20'000'000;
  bool principal_line = false;
};

struct SolveReport {
  GridShape shape;
  int value = 0;
  std::uint64_t states_explored = 0;
  std::uint64_t peak_memo = 0;
  bool heuristic = false;
  double wall_ms = 0.0;
  // Optimal query followed by the adversary's value-maximizing reply.
  std::vector<std::pair<Point, Reply>> principal_line;
};

class ExactSolver {
 public:
  ExactSolver(const GridShape& shape, SolverOptions options = {});

  const GridShape& shape() const noexcept { return shape_; }
  const SolverOptions& options() const noexcept { return options_; }

  // Solves the full grid (idempotent).
  SolveReport solve();
  bool solved() const noexcept { return root_value_.has_value(); }

  // Exact cost of an arbitrary non-empty candidate mask; fills the memo as needed.
  int exact_value(std::uint64_t mask);
  std::uint64_t excluded_mask(CellIndex query, const ReplyCorner& corner) const;

  std::uint64_t states_explored() const noexcept { return states_explored_; }
  std::uint64_t memo_size() const noexcept { return memo_.size(); }

 private:
  struct Bounds {
    int lower;
    int upper;
  };

  // Exact value if it is below `beta`; otherwise some lower bound >= beta.
  int search(std::uint64_t mask, int beta);
  std::uint64_t canonical(std::uint64_t mask) const;
  std::uint64_t query_space(std::uint64_t mask) const;
  std::vector<std::pair<Point, Reply>> principal_line();

  GridShape shape_;
  SolverOptions options_;
  std::uint64_t full_mask_ = 0;
  std::uint32_t corner_count_ = 0;
  // excluded_[q * corner_count_ + corner.mask()]
  std::vector<std::uint64_t> excluded_;
  // Cell permutations of the game's automorphism group (identity excluded).
  std::vector<std::vector<std::uint8_t>> symmetries_;
  std::unordered_map<std::uint64_t, Bounds> memo_;
  std::uint64_t states_explored_ = 0;
  std::optional<int> root_value_;
};

SolveReport exact_qc(const GridShape& shape, const SolverOptions& options = {});

struct BestResponseReport {
  int value = 0;
  std::uint64_t states_explored = 0;
  // Shortest query sequence reaching Found.
  std::vector<Point> queries;
};

// Fewest queries any algorithm needs to get Found from this fixed adversary
// (breadth-first search over adversary states).
BestResponseReport best_response(const Adversary& adversary, std::uint64_t max_states = 5'000'000);

// Adversary replying with a corner of maximal exact value (see OptimalAdversary).
std::unique_ptr<Adversary> extract_optimal_adversary(std::shared_ptr<ExactSolver> solver);

}  // namespace mdsearch
