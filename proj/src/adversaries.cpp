#include "mdsearch/adversaries.hpp"

#include <bit>
#include <utility>

#include "mdsearch/errors.hpp"
#include "mdsearch/solver.hpp"

namespace mdsearch {

Adversary::Adversary(CandidateSet initial) : candidates_(std::move(initial)) {
  if (candidates_.empty()) throw ArgumentError("adversary needs a non-empty candidate set");
}

std::optional<Reply> Adversary::forced_found(CellIndex q) const {
  const auto only = candidates_.single();
  if (only && *only == q) return Reply::found();
  return std::nullopt;
}

Reply Adversary::commit(const Point& q, const ReplyCorner& corner) {
  CandidateSet next = apply_reply(candidates_, q, corner);
  if (next.empty()) {
    throw InvariantError(std::string(id()) + ": reply " + corner.to_string() + " to " + q.to_string() +
                         " would leave no candidate");
  }
  candidates_ = std::move(next);
  return Reply::corner(corner);
}

namespace {

// Corner in `allowed` (lexicographic order) keeping the most candidates; ties
// go to the first one. nullopt when every allowed corner empties the set.
template <typename Allowed>
std::optional<ReplyCorner> keep_most(const CandidateSet& candidates, const Point& q, Allowed&& allowed) {
  const std::uint64_t total = candidates.count();
  std::optional<ReplyCorner> best;
  std::uint64_t best_kept = 0;
  for (const auto& r : corners_in_lex_order(q.dimension())) {
    if (!allowed(r)) continue;
    const std::uint64_t kept = total - candidates.count_in(excluded_box(candidates.shape(), q, r));
    if (kept > best_kept) {
      best_kept = kept;
      best = r;
    }
  }
  return best;
}

// all-zeros or all-ones, whichever keeps more (ties to all-zeros).
ReplyCorner keep_more_extreme(const CandidateSet& candidates, const Point& q) {
  const std::size_t d = q.dimension();
  const auto zeros = ReplyCorner::all_zeros(d);
  const auto ones = ReplyCorner::all_ones(d);
  const std::uint64_t removed_zeros = candidates.count_in(excluded_box(candidates.shape(), q, zeros));
  const std::uint64_t removed_ones = candidates.count_in(excluded_box(candidates.shape(), q, ones));
  return removed_ones < removed_zeros ? ones : zeros;
}

}  // namespace

GreedyAdversary::GreedyAdversary(const GridShape& shape) : Adversary(CandidateSet::full(shape)) {}

Reply GreedyAdversary::reply(const Point& q) {
  const CellIndex cell = shape().index_of(q);
  if (auto found = forced_found(cell)) return *found;
  const auto best = keep_most(candidates_, q, [](const ReplyCorner&) { return true; });
  if (!best) throw InvariantError("greedy: no valid corner although more than the query remains");
  return commit(q, *best);
}

HonestAdversary::HonestAdversary(const GridShape& shape, Point target)
    : Adversary(CandidateSet::full(shape)), target_(std::move(target)) {
  shape.check(target_);
}

Reply HonestAdversary::reply(const Point& q) {
  shape().check(q);
  if (q == target_) return Reply::found();
  const auto best = keep_most(candidates_, q, [&](const ReplyCorner& r) { return is_compatible(target_, q, r); });
  if (!best) throw InvariantError("honest: target no longer a candidate");
  return commit(q, *best);
}

std::string HonestAdversary::key() const {
  std::string out = candidates_.key();
  for (Coord c : target_.coords()) out += std::to_string(c) + ',';
  return out;
}

Coord diagonal_height(Coord m, Coord n, Coord x) {
  if (m < 2) throw ArgumentError("diagonal: needs m >= 2");
  const std::int64_t num = static_cast<std::int64_t>(n - 1) * (m - 1 - x);
  return static_cast<Coord>(num / (m - 1));
}

CandidateSet diagonal_surface(const GridShape& shape) {
  if (shape.dimension() != 2) throw ArgumentError("diagonal: needs a 2-dimensional shape");
  const Coord m = shape.size(0);
  const Coord n = shape.size(1);
  if (m < 2) throw ArgumentError("diagonal: degenerate for m = 1");
  CandidateSet s = CandidateSet::none(shape);
  for (Coord x = 0; x < m; ++x) s.insert(shape.index_of(Point{x, diagonal_height(m, n, x)}));
  return s;
}

Coord plane_height(Coord n1, Coord n2, Coord n3, Coord x1, Coord x3) {
  const std::int64_t a = n1 - 1;
  const std::int64_t b = n3 - 1;
  if (a <= 0 || b <= 0) throw ArgumentError("plane3d: needs n1, n3 >= 2");
  const std::int64_t num = static_cast<std::int64_t>(n2 - 1) * (2 * a * b - x1 * b - x3 * a);
  return static_cast<Coord>(num / (2 * a * b));
}

namespace {

void check_plane_shape(const GridShape& shape) {
  if (shape.dimension() != 3) throw ArgumentError("plane3d: needs a 3-dimensional shape");
  if (!(shape.size(0) >= shape.size(1) && shape.size(1) >= shape.size(2) && shape.size(2) >= 2)) {
    throw ArgumentError("plane3d: needs n1 >= n2 >= n3 >= 2");
  }
}

void check_cube_shape(const GridShape& shape) {
  if (shape.dimension() < 3) throw ArgumentError("cube: needs d >= 3");
  if (!shape.is_cube()) throw ArgumentError("cube: needs equal sizes on every axis");
  if (shape.size(0) < 2) throw ArgumentError("cube: needs n >= 2");
}

std::int64_t prefix_sum(const Point& p) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i + 1 < p.dimension(); ++i) s += p[i];
  return s;
}

}  // namespace

CandidateSet plane3d_surface(const GridShape& shape) {
  check_plane_shape(shape);
  CandidateSet s = CandidateSet::none(shape);
  for (Coord x1 = 0; x1 < shape.size(0); ++x1) {
    for (Coord x3 = 0; x3 < shape.size(2); ++x3) {
      const Coord x2 = plane_height(shape.size(0), shape.size(1), shape.size(2), x1, x3);
      s.insert(shape.index_of(Point{x1, x2, x3}));
    }
  }
  return s;
}

Coord cube_height(Coord n, std::size_t d, std::int64_t prefix) {
  const auto k = static_cast<std::int64_t>(d - 1);
  return static_cast<Coord>((static_cast<std::int64_t>(n - 1) * k - prefix) / k);
}

CandidateSet cube_surface(const GridShape& shape) {
  check_cube_shape(shape);
  const std::size_t d = shape.dimension();
  const Coord n = shape.size(0);
  CandidateSet s = CandidateSet::none(shape);
  // Odometer over the first d-1 coordinates.
  Point p(std::vector<Coord>(d, 0));
  while (true) {
    p[d - 1] = cube_height(n, d, prefix_sum(p));
    s.insert(shape.index_of(p));
    std::size_t axis = d - 1;
    while (axis > 0 && p[axis - 1] == n - 1) p[--axis] = 0;
    if (axis == 0) break;
    ++p[axis - 1];
  }
  return s;
}

DiagonalAdversary::DiagonalAdversary(const GridShape& shape) : Adversary(diagonal_surface(shape)) {}

Reply DiagonalAdversary::reply(const Point& q) {
  const CellIndex cell = shape().index_of(q);
  if (auto found = forced_found(cell)) return *found;
  const Coord h = diagonal_height(shape().size(0), shape().size(1), q[0]);
  if (q[1] < h) return commit(q, ReplyCorner::all_zeros(2));
  if (q[1] > h) return commit(q, ReplyCorner::all_ones(2));
  return commit(q, keep_more_extreme(candidates_, q));
}

Plane3DAdversary::Plane3DAdversary(const GridShape& shape) : Adversary(plane3d_surface(shape)) {}

Reply Plane3DAdversary::reply(const Point& q) {
  const CellIndex cell = shape().index_of(q);
  if (auto found = forced_found(cell)) return *found;
  const Coord h = plane_height(shape().size(0), shape().size(1), shape().size(2), q[0], q[2]);
  if (q[1] < h) return commit(q, ReplyCorner::all_zeros(3));
  if (q[1] > h) return commit(q, ReplyCorner::all_ones(3));
  return commit(q, keep_more_extreme(candidates_, q));
}

CubeAdversary::CubeAdversary(const GridShape& shape) : Adversary(cube_surface(shape)) {}

ReplyCorner CubeAdversary::residue_corner(const Point& q) {
  const std::size_t d = q.dimension();
  const auto k = static_cast<std::int64_t>(d - 1);
  std::int64_t s = 0;
  for (Coord c : q.coords()) s += c;
  const std::int64_t l = s % k;
  if (l == 0 || 2 * l > k) return ReplyCorner::all_ones(d);
  return ReplyCorner::all_zeros(d);
}

Reply CubeAdversary::reply(const Point& q) {
  const CellIndex cell = shape().index_of(q);
  if (auto found = forced_found(cell)) return *found;
  const std::size_t d = q.dimension();
  const Coord h = cube_height(shape().size(0), d, prefix_sum(q));
  if (q[d - 1] < h) return commit(q, ReplyCorner::all_zeros(d));
  if (q[d - 1] > h) return commit(q, ReplyCorner::all_ones(d));
  ReplyCorner corner = residue_corner(q);
  // The rule's corner may wipe out the last candidates; the opposite corner
  // then keeps them (no surface point other than q lies in both boxes).
  if (candidates_.count_in(excluded_box(shape(), q, corner)) == candidates_.count()) {
    corner = corner == ReplyCorner::all_ones(d) ? ReplyCorner::all_zeros(d) : ReplyCorner::all_ones(d);
  }
  return commit(q, corner);
}

OptimalAdversary::OptimalAdversary(std::shared_ptr<ExactSolver> solver)
    : Adversary(CandidateSet::full(solver ? solver->shape() : GridShape{1})), solver_(std::move(solver)) {
  if (!solver_) throw ArgumentError("optimal: needs a solver");
  if (!solver_->solved()) throw StateError("optimal: shape has not been solved");
}

Reply OptimalAdversary::reply(const Point& q) {
  const CellIndex cell = shape().index_of(q);
  if (auto found = forced_found(cell)) return *found;
  const std::uint64_t mask = candidates_.to_mask();
  std::optional<ReplyCorner> best;
  std::pair<int, int> best_rank{-1, -1};
  for (const auto& r : corners_in_lex_order(q.dimension())) {
    const std::uint64_t child = mask & ~solver_->excluded_mask(cell, r);
    if (!child) continue;
    const std::pair<int, int> rank{solver_->exact_value(child), std::popcount(child)};
    if (rank > best_rank) {
      best_rank = rank;
      best = r;
    }
  }
  if (!best) throw InvariantError("optimal: no valid corner although more than the query remains");
  return commit(q, *best);
}

std::optional<CandidateSet> surface_for(std::string_view adversary_id, const GridShape& shape) {
  if (adversary_id == "diagonal") return diagonal_surface(shape);
  if (adversary_id == "plane3d") return plane3d_surface(shape);
  if (adversary_id == "cube") return cube_surface(shape);
  return std::nullopt;
}

std::unique_ptr<Adversary> make_adversary(std::string_view id, const GridShape& shape,
                                          const std::optional<Point>& target, std::shared_ptr<ExactSolver> solver) {
  if (id == "greedy") return std::make_unique<GreedyAdversary>(shape);
  if (id == "diagonal") return std::make_unique<DiagonalAdversary>(shape);
  if (id == "plane3d") return std::make_unique<Plane3DAdversary>(shape);
  if (id == "cube") return std::make_unique<CubeAdversary>(shape);
  if (id == "honest") {
    if (!target) throw ArgumentError("honest adversary needs a target");
    return std::make_unique<HonestAdversary>(shape, *target);
  }
  if (id == "optimal") {
    if (!solver) throw ArgumentError("optimal adversary needs a solver");
    if (!(solver->shape() == shape)) throw ArgumentError("optimal adversary: solver shape mismatch");
    return std::make_unique<OptimalAdversary>(std::move(solver));
  }
  throw ArgumentError("unknown adversary '" + std::string(id) + "'");
}

}  // namespace mdsearch
