#pragma once

// Reply-side policies. Each adversary keeps the set of targets it is still
// willing to commit to and answers Found only when that set is exactly the
// queried point (or, for the honest policy, when the query hits its target).
//
// The three lower-bound constructions hide the target on a monotone discrete
// surface, announce that surface up front, and answer on-surface queries with
// the all-zeros or all-ones corner only.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "mdsearch/game.hpp"

namespace mdsearch {

class ExactSolver;

class Adversary {
 public:
  virtual ~Adversary() = default;

  virtual std::string_view id() const = 0;
  // Answers q and updates the candidate set.
  virtual Reply reply(const Point& q) = 0;
  virtual std::unique_ptr<Adversary> clone() const = 0;

  // Canonical state encoding; equal keys imply identical future replies.
  virtual std::string key() const { return candidates_.key(); }
  // Surface announced to Algorithm before the first query, if any.
  virtual std::optional<CandidateSet> surface() const { return std::nullopt; }

  const GridShape& shape() const noexcept { return candidates_.shape(); }
  const CandidateSet& candidates() const noexcept { return candidates_; }

 protected:
  explicit Adversary(CandidateSet initial);

  // Found if candidates == {q}; otherwise nullopt.
  std::optional<Reply> forced_found(CellIndex q) const;
  Reply commit(const Point& q, const ReplyCorner& corner);

  CandidateSet candidates_;
};

// Valid corner keeping the most candidates; ties go to the lexicographically
// smallest corner.
class GreedyAdversary final : public Adversary {
 public:
  explicit GreedyAdversary(const GridShape& shape);
  std::string_view id() const override { return "greedy"; }
  Reply reply(const Point& q) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<GreedyAdversary>(*this); }
};

// Greedy among the corners that are truthful for a fixed target.
class HonestAdversary final : public Adversary {
 public:
  HonestAdversary(const GridShape& shape, Point target);
  std::string_view id() const override { return "honest"; }
  Reply reply(const Point& q) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<HonestAdversary>(*this); }
  std::string key() const override;
  const Point& target() const noexcept { return target_; }

 private:
  Point target_;
};

// y = floor((n-1)(m-1-x) / (m-1)) on an m x n grid, m >= 2.
Coord diagonal_height(Coord m, Coord n, Coord x);
CandidateSet diagonal_surface(const GridShape& shape);

// x2 = floor((n2-1)(2AB - x1 B - x3 A) / (2AB)), A = n1-1, B = n3-1.
Coord plane_height(Coord n1, Coord n2, Coord n3, Coord x1, Coord x3);
CandidateSet plane3d_surface(const GridShape& shape);

// x_d = floor(((n-1)(d-1) - sum of the first d-1 coordinates) / (d-1)).
Coord cube_height(Coord n, std::size_t d, std::int64_t prefix_sum);
CandidateSet cube_surface(const GridShape& shape);

class DiagonalAdversary final : public Adversary {
 public:
  explicit DiagonalAdversary(const GridShape& shape);
  std::string_view id() const override { return "diagonal"; }
  Reply reply(const Point& q) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<DiagonalAdversary>(*this); }
  std::optional<CandidateSet> surface() const override { return diagonal_surface(shape()); }
};

class Plane3DAdversary final : public Adversary {
 public:
  explicit Plane3DAdversary(const GridShape& shape);
  std::string_view id() const override { return "plane3d"; }
  Reply reply(const Point& q) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<Plane3DAdversary>(*this); }
  std::optional<CandidateSet> surface() const override { return plane3d_surface(shape()); }
};

class CubeAdversary final : public Adversary {
 public:
  explicit CubeAdversary(const GridShape& shape);
  std::string_view id() const override { return "cube"; }
  Reply reply(const Point& q) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<CubeAdversary>(*this); }
  std::optional<CandidateSet> surface() const override { return cube_surface(shape()); }

  // Corner prescribed for an on-surface query by the residue rule on the
  // coordinate sum, before any legality fallback.
  static ReplyCorner residue_corner(const Point& q);
};

// Replies with a corner maximizing the exact remaining value, read from a solved
// table; ties keep more candidates, then the lexicographically smallest corner.
class OptimalAdversary final : public Adversary {
 public:
  explicit OptimalAdversary(std::shared_ptr<ExactSolver> solver);
  std::string_view id() const override { return "optimal"; }
  Reply reply(const Point& q) override;
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<OptimalAdversary>(*this); }

 private:
  std::shared_ptr<ExactSolver> solver_;
};

// Surface announced by the named construction, or nullopt for the others.
std::optional<CandidateSet> surface_for(std::string_view adversary_id, const GridShape& shape);

// greedy, diagonal, plane3d, cube; honest needs a target, optimal needs a solver.
std::unique_ptr<Adversary> make_adversary(std::string_view id, const GridShape& shape,
                                          const std::optional<Point>& target = std::nullopt,
                                          std::shared_ptr<ExactSolver> solver = nullptr);

}  // namespace mdsearch
