#include <doctest.h>

#include <bit>
#include <limits>
#include <map>

#include "mdsearch/errors.hpp"
#include "mdsearch/evaluator.hpp"
#include "mdsearch/solver.hpp"
#include "mdsearch/strategies.hpp"

using namespace mdsearch;

namespace {

// Plain minimax straight from the recurrence, over point lists rather than the
// solver's precomputed masks. No pruning, no symmetry.
class NaiveOracle {
 public:
  explicit NaiveOracle(const GridShape& shape) : shape_(shape), corners_(corners_in_lex_order(shape.dimension())) {}

  int value() { return cost((std::uint64_t{1} << shape_.cell_count()) - 1); }
  int value(std::uint64_t mask) { return cost(mask); }

 private:
  std::uint64_t remove(std::uint64_t mask, const Point& q, const ReplyCorner& r) const {
    std::uint64_t out = 0;
    for (CellIndex u = 0; u < shape_.cell_count(); ++u) {
      if (((mask >> u) & 1u) && is_compatible(shape_.point_at(u), q, r)) out |= std::uint64_t{1} << u;
    }
    return out;
  }

  int cost(std::uint64_t mask) {
    if (std::popcount(mask) == 1) return 1;
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    int best = std::numeric_limits<int>::max();
    for (CellIndex qi = 0; qi < shape_.cell_count(); ++qi) {
      const Point q = shape_.point_at(qi);
      int worst = 0;
      bool useful = true;
      for (const auto& r : corners_) {
        const std::uint64_t child = remove(mask, q, r);
        if (child == 0) continue;
        if (child == mask) {
          useful = false;
          break;
        }
        worst = std::max(worst, cost(child));
      }
      if (useful) best = std::min(best, 1 + worst);
    }
    memo_[mask] = best;
    return best;
  }

  GridShape shape_;
  std::vector<ReplyCorner> corners_;
  std::map<std::uint64_t, int> memo_;
};

}  // namespace

TEST_CASE("exact values match the naive oracle") {
  for (const auto& shape : {GridShape{1, 1, 1}, GridShape{2, 2}, GridShape{3, 2}, GridShape{4, 2}, GridShape{3, 3},
                            GridShape{2, 2, 2}, GridShape{5, 2}, GridShape{4, 3}, GridShape{3, 2, 2},
                            GridShape{6, 2}, GridShape{2, 3}, GridShape{12}}) {
    NaiveOracle oracle(shape);
    const int expected = oracle.value();
    CHECK_MESSAGE(exact_qc(shape).value == expected, shape.to_string());
    CHECK_MESSAGE(exact_qc(shape, {.symmetry = true}).value == expected, shape.to_string());
  }
}

TEST_CASE("frozen exact values") {
  CHECK(exact_qc(GridShape{1, 1, 1}).value == 1);
  CHECK(exact_qc(GridShape{2, 2}).value == 4);
  CHECK(exact_qc(GridShape{3, 2}).value == 4);
  CHECK(exact_qc(GridShape{4, 2}).value == 6);
  CHECK(exact_qc(GridShape{3, 3}).value == 5);
  CHECK(exact_qc(GridShape{2, 2, 2}).value == 8);
}

TEST_CASE("exact_value on arbitrary subsets matches the oracle") {
  const GridShape shape{3, 3};
  ExactSolver solver(shape);
  NaiveOracle oracle(shape);
  for (std::uint64_t mask = 1; mask < (1u << 9); ++mask) CHECK(solver.exact_value(mask) == oracle.value(mask));
}

TEST_CASE("one dimension is classical binary search") {
  for (Coord n = 1; n <= 64; ++n) {
    CHECK(exact_qc(GridShape{n}).value == std::bit_width(static_cast<unsigned>(n)));
    CHECK(best_response(GreedyAdversary(GridShape{n})).value == std::bit_width(static_cast<unsigned>(n)));
  }
}

TEST_CASE("symmetry does not change values and values grow with the grid") {
  std::map<std::vector<Coord>, int> solved;
  for (Coord a = 1; a <= 8; ++a)
    for (Coord b = 1; a * b <= 16; ++b) {
      const GridShape s{a, b};
      const int plain = exact_qc(s).value;
      CHECK(exact_qc(s, {.symmetry = true}).value == plain);
      CHECK(plain >= 1);
      CHECK(static_cast<std::uint64_t>(plain) <= s.cell_count());
      solved[{a, b}] = plain;
    }
  for (const auto& [dims, v] : solved) {
    for (std::size_t axis = 0; axis < 2; ++axis) {
      auto bigger = dims;
      ++bigger[axis];
      if (auto it = solved.find(bigger); it != solved.end()) CHECK(it->second >= v);
    }
  }
}

TEST_CASE("pruned queries are marked heuristic") {
  const auto r = exact_qc(GridShape{3, 3}, {.prune_queries = true});
  CHECK(r.heuristic);
  CHECK_FALSE(exact_qc(GridShape{3, 3}).heuristic);
}

TEST_CASE("caps raise resource errors") {
  CHECK_THROWS_AS(exact_qc(GridShape{9, 8}), ResourceError);
  CHECK_THROWS_AS(exact_qc(GridShape{4, 4}, {.max_states = 5}), ResourceError);
  CHECK_THROWS_AS(best_response(GreedyAdversary(GridShape{8, 8}), 10), ResourceError);
}

TEST_CASE("principal line is a legal optimal play") {
  const GridShape shape{3, 3};
  const auto r = exact_qc(shape, {.principal_line = true});
  REQUIRE(static_cast<int>(r.principal_line.size()) == r.value);
  auto p = CandidateSet::full(shape);
  for (std::size_t i = 0; i + 1 < r.principal_line.size(); ++i) {
    const auto& [q, reply] = r.principal_line[i];
    p = apply_reply(p, q, reply.corner());
    CHECK_FALSE(p.empty());
  }
  CHECK(r.principal_line.back().second.is_found());
  CHECK(p.single() == shape.index_of(r.principal_line.back().first));
}

TEST_CASE("optimal adversary") {
  auto unsolved = std::make_shared<ExactSolver>(GridShape{2, 2});
  CHECK_THROWS_AS(extract_optimal_adversary(unsolved), StateError);

  auto solver = std::make_shared<ExactSolver>(GridShape{2, 2});
  solver->solve();
  auto adv = extract_optimal_adversary(solver);
  Grid2DStrategy grid(GridShape{2, 2});
  CHECK(run_match(grid, *adv).total_queries() == 4);
  CHECK(best_response(*extract_optimal_adversary(solver)).value == 4);

  for (Coord n = 2; n <= 20; ++n) {
    auto line = std::make_shared<ExactSolver>(GridShape{n});
    line->solve();
    for (Coord q = 0; q < n; ++q) {
      auto a = extract_optimal_adversary(line);
      const Reply r = a->reply(Point{q});
      REQUIRE_FALSE(r.is_found());
      const std::uint64_t kept = a->candidates().count();
      CHECK(kept == static_cast<std::uint64_t>(std::max(q, n - 1 - q)));
    }
  }

  auto one = std::make_shared<ExactSolver>(GridShape{1, 1});
  one->solve();
  CHECK(extract_optimal_adversary(one)->reply(Point{0, 0}) == Reply::found());
}

TEST_CASE("best responses against the constructions never exceed the exact value") {
  CHECK(best_response(DiagonalAdversary(GridShape{4, 2})).value <= exact_qc(GridShape{4, 2}).value);
  CHECK(best_response(CubeAdversary(GridShape{2, 2, 2})).value >= 4);
  CHECK(best_response(CubeAdversary(GridShape{2, 2, 2})).value <= exact_qc(GridShape{2, 2, 2}).value);
  const auto r = best_response(DiagonalAdversary(GridShape{9, 3}));
  CHECK(static_cast<int>(r.queries.size()) == r.value);
}
