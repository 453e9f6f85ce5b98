#include "mdsearch/solver.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <climits>
#include <deque>
#include <numeric>
#include <unordered_set>

#include "mdsearch/errors.hpp"

namespace mdsearch {

namespace {

// Any query splits P between two complementary corners whose boxes share only
// the query point, so some reply keeps at least (|P| - 1) / 2 candidates.
int size_lower_bound(std::uint64_t count) { return static_cast<int>(std::bit_width(count)); }

constexpr std::size_t kSolverMaxDimension = 8;

}  // namespace

ExactSolver::ExactSolver(const GridShape& shape, SolverOptions options) : shape_(shape), options_(options) {
  const std::uint64_t cap = std::min(options_.max_cells, kSolverCellLimit);
  if (shape.cell_count() > cap) {
    throw ResourceError("exact solver: " + shape.to_string() + " has " + std::to_string(shape.cell_count()) +
                        " cells, cap is " + std::to_string(cap));
  }
  if (shape.dimension() > kSolverMaxDimension) throw ArgumentError("exact solver: too many dimensions");

  const std::uint64_t cells = shape.cell_count();
  full_mask_ = cells == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cells) - 1;
  corner_count_ = std::uint32_t{1} << shape.dimension();
  excluded_.assign(cells * corner_count_, 0);
  const auto corners = corners_in_lex_order(shape.dimension());
  for (CellIndex q = 0; q < cells; ++q) {
    const Point qp = shape.point_at(q);
    for (const auto& r : corners) {
      CandidateSet box = CandidateSet::none(shape);
      box = apply_reply(CandidateSet::full(shape), qp, r);
      excluded_[q * corner_count_ + r.mask()] = full_mask_ & ~box.to_mask();
    }
  }

  if (options_.symmetry) {
    const std::size_t d = shape.dimension();
    std::vector<std::size_t> perm(d);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      bool preserves = true;
      for (std::size_t i = 0; i < d; ++i) preserves = preserves && shape.size(perm[i]) == shape.size(i);
      if (!preserves) continue;
      for (std::uint32_t flips = 0; flips < corner_count_; ++flips) {
        bool identity = flips == 0;
        for (std::size_t i = 0; i < d; ++i) identity = identity && perm[i] == i;
        if (identity) continue;
        std::vector<std::uint8_t> map(cells);
        for (CellIndex c = 0; c < cells; ++c) {
          const Point p = shape.point_at(c);
          std::vector<Coord> image(d);
          for (std::size_t i = 0; i < d; ++i) {
            const Coord v = p[perm[i]];
            image[i] = ((flips >> i) & 1u) ? shape.size(i) - 1 - v : v;
          }
          map[c] = static_cast<std::uint8_t>(shape.index_of(Point(std::move(image))));
        }
        symmetries_.push_back(std::move(map));
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

std::uint64_t ExactSolver::excluded_mask(CellIndex query, const ReplyCorner& corner) const {
  if (query >= shape_.cell_count() || corner.dimension() != shape_.dimension()) {
    throw ArgumentError("excluded_mask: query or corner does not fit the shape");
  }
  return excluded_[query * corner_count_ + corner.mask()];
}

std::uint64_t ExactSolver::canonical(std::uint64_t mask) const {
  std::uint64_t best = mask;
  for (const auto& map : symmetries_) {
    std::uint64_t image = 0;
    for (std::uint64_t w = mask; w; w &= w - 1) image |= std::uint64_t{1} << map[std::countr_zero(w)];
    best = std::min(best, image);
  }
  return best;
}

std::uint64_t ExactSolver::query_space(std::uint64_t mask) const {
  if (!options_.prune_queries) return full_mask_;
  const std::size_t d = shape_.dimension();
  std::vector<Interval> sides(d, Interval{INT_MAX, -1});
  for (std::uint64_t w = mask; w; w &= w - 1) {
    const Point p = shape_.point_at(static_cast<CellIndex>(std::countr_zero(w)));
    for (std::size_t i = 0; i < d; ++i) {
      sides[i].lo = std::min(sides[i].lo, p[i]);
      sides[i].hi = std::max(sides[i].hi, p[i]);
    }
  }
  CandidateSet box = CandidateSet::full(shape_);
  box.erase_box(Box(std::move(sides)));
  return full_mask_ & ~box.to_mask();
}

int ExactSolver::search(std::uint64_t mask, int beta) {
  const auto count = static_cast<std::uint64_t>(std::popcount(mask));
  if (count == 1) return 1;
  const std::uint64_t key = canonical(mask);
  Bounds bounds{size_lower_bound(count), static_cast<int>(count)};
  if (auto it = memo_.find(key); it != memo_.end()) bounds = it->second;
  if (bounds.lower == bounds.upper || bounds.lower >= beta) return bounds.lower;
  if (memo_.size() >= options_.max_states) {
    throw ResourceError("exact solver: state cap " + std::to_string(options_.max_states) + " exceeded on " +
                        shape_.to_string());
  }
  ++states_explored_;

  struct Move {
    int widest;
    std::uint32_t cell;
    std::vector<std::uint64_t> children;
  };
  std::vector<Move> moves;
  for (std::uint64_t qs = query_space(mask); qs; qs &= qs - 1) {
    const auto q = static_cast<std::uint32_t>(std::countr_zero(qs));
    Move move{0, q, {}};
    bool useless = false;
    for (std::uint32_t c = 0; c < corner_count_ && !useless; ++c) {
      const std::uint64_t child = mask & ~excluded_[q * corner_count_ + c];
      if (!child) continue;
      if (child == mask) useless = true;
      move.children.push_back(child);
      move.widest = std::max(move.widest, std::popcount(child));
    }
    if (useless) continue;
    std::sort(move.children.begin(), move.children.end(), [](std::uint64_t a, std::uint64_t b) {
      return std::popcount(a) > std::popcount(b) || (std::popcount(a) == std::popcount(b) && a < b);
    });
    move.children.erase(std::unique(move.children.begin(), move.children.end()), move.children.end());
    moves.push_back(std::move(move));
  }
  std::stable_sort(moves.begin(), moves.end(), [](const Move& a, const Move& b) { return a.widest < b.widest; });

  int best = bounds.upper;
  for (const auto& move : moves) {
    const int limit = std::min(best, beta);
    if (1 + size_lower_bound(static_cast<std::uint64_t>(move.widest)) >= limit) continue;
    int worst = 0;
    bool cut = false;
    for (std::uint64_t child : move.children) {
      const int value = search(child, limit - 1);
      if (1 + value >= limit) {
        cut = true;
        break;
      }
      worst = std::max(worst, value);
    }
    if (!cut) best = 1 + worst;
  }

  Bounds& slot = memo_[key];
  if (best < beta) {
    slot = {best, best};
    return best;
  }
  slot = {std::max(bounds.lower, beta), bounds.upper};
  if (slot.lower > slot.upper) throw InvariantError("exact solver: lower bound crossed upper bound");
  return slot.lower;
}

int ExactSolver::exact_value(std::uint64_t mask) {
  if (!mask || (mask & ~full_mask_)) throw ArgumentError("exact_value: mask must be a non-empty subset of the grid");
  return search(mask, INT_MAX);
}

std::vector<std::pair<Point, Reply>> ExactSolver::principal_line() {
  std::vector<std::pair<Point, Reply>> line;
  const auto corners = corners_in_lex_order(shape_.dimension());
  std::uint64_t mask = full_mask_;
  while (std::popcount(mask) > 1) {
    const int target = exact_value(mask);
    bool advanced = false;
    for (std::uint64_t qs = full_mask_; qs && !advanced; qs &= qs - 1) {
      const auto q = static_cast<CellIndex>(std::countr_zero(qs));
      int worst = 0;
      std::optional<ReplyCorner> reply;
      std::uint64_t next = 0;
      bool useless = false;
      for (const auto& r : corners) {
        const std::uint64_t child = mask & ~excluded_[q * corner_count_ + r.mask()];
        if (!child) continue;
        if (child == mask) {
          useless = true;
          break;
        }
        const int value = exact_value(child);
        if (value > worst) {
          worst = value;
          reply = r;
          next = child;
        }
      }
      if (useless || !reply || 1 + worst != target) continue;
      line.emplace_back(shape_.point_at(q), Reply::corner(*reply));
      mask = next;
      advanced = true;
    }
    if (!advanced) throw InvariantError("principal line: no query attains the solved value");
  }
  line.emplace_back(shape_.point_at(static_cast<CellIndex>(std::countr_zero(mask))), Reply::found());
  return line;
}

SolveReport ExactSolver::solve() {
  const auto start = std::chrono::steady_clock::now();
  const int value = exact_value(full_mask_);
  root_value_ = value;
  SolveReport report{shape_, value, states_explored_, memo_.size(), options_.prune_queries, 0.0, {}};
  if (options_.principal_line) report.principal_line = principal_line();
  report.peak_memo = memo_.size();
  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SolveReport exact_qc(const GridShape& shape, const SolverOptions& options) {
  ExactSolver solver(shape, options);
  return solver.solve();
}

BestResponseReport best_response(const Adversary& adversary, std::uint64_t max_states) {
  struct Node {
    std::unique_ptr<Adversary> state;
    std::size_t parent;
    CellIndex query;
    int depth;
  };
  const GridShape shape = adversary.shape();
  std::vector<Node> nodes;
  std::unordered_set<std::string> seen;
  nodes.push_back({adversary.clone(), 0, 0, 0});
  seen.insert(adversary.key());

  auto reconstruct = [&](std::size_t index, CellIndex last) {
    std::vector<Point> queries{shape.point_at(last)};
    while (index != 0) {
      queries.push_back(shape.point_at(nodes[index].query));
      index = nodes[index].parent;
    }
    std::reverse(queries.begin(), queries.end());
    return queries;
  };

  for (std::size_t head = 0; head < nodes.size(); ++head) {
    for (CellIndex q = 0; q < shape.cell_count(); ++q) {
      auto next = nodes[head].state->clone();
      const Reply reply = next->reply(shape.point_at(q));
      if (reply.is_found()) {
        BestResponseReport report;
        report.value = nodes[head].depth + 1;
        report.states_explored = nodes.size();
        report.queries = reconstruct(head, q);
        return report;
      }
      if (!seen.insert(next->key()).second) continue;
      if (seen.size() > max_states) {
        throw ResourceError("best_response: state cap " + std::to_string(max_states) + " exceeded on " +
                            shape.to_string());
      }
      const int depth = nodes[head].depth + 1;
      nodes.push_back({std::move(next), head, q, depth});
    }
  }
  throw InvariantError("best_response: adversary never answers Found");
}

std::unique_ptr<Adversary> extract_optimal_adversary(std::shared_ptr<ExactSolver> solver) {
  if (!solver) throw ArgumentError("extract_optimal_adversary: null solver");
  if (!solver->solved()) throw StateError("extract_optimal_adversary: shape has not been solved");
  return std::make_unique<OptimalAdversary>(std::move(solver));
}

}  // namespace mdsearch
