#pragma once

// Search space, reply semantics and the candidate-set recurrence of the
// d-dimensional generalized binary search game.
//
// A query is a point q of S = S_1 x ... x S_d with S_i = {0, ..., n_i - 1}.
// A non-final reply is a corner r in {0,1}^d: r_i = 1 claims t_i < q_i and
// r_i = 0 claims t_i > q_i, at least one claim being true for the target t.
// The points ruled out by a reply form the box X(q, r) with
// X_i = [0, q_i] for r_i = 0 and X_i = [q_i, n_i - 1] for r_i = 1.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mdsearch {

using Coord = std::int32_t;
using CellIndex = std::uint64_t;

inline constexpr std::size_t kMaxDimension = 16;

class Point {
 public:
  Point() = default;
  explicit Point(std::vector<Coord> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<Coord> coords) : coords_(coords) {}

  std::size_t dimension() const noexcept { return coords_.size(); }
  Coord operator[](std::size_t axis) const { return coords_[axis]; }
  Coord& operator[](std::size_t axis) { return coords_[axis]; }
  std::span<const Coord> coords() const noexcept { return coords_; }

  std::string to_string() const;

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

 private:
  std::vector<Coord> coords_;
};

class GridShape {
 public:
  explicit GridShape(std::vector<Coord> dims);
  GridShape(std::initializer_list<Coord> dims) : GridShape(std::vector<Coord>(dims)) {}

  std::size_t dimension() const noexcept { return layout_->dims.size(); }
  Coord size(std::size_t axis) const { return layout_->dims.at(axis); }
  std::span<const Coord> dims() const noexcept { return layout_->dims; }
  std::uint64_t cell_count() const noexcept { return layout_->cells; }
  std::uint64_t stride(std::size_t axis) const { return layout_->strides.at(axis); }

  bool is_sorted_non_increasing() const noexcept;
  bool is_cube() const noexcept;

  bool contains(const Point& p) const noexcept;
  // Throws ArgumentError when p has the wrong dimension or lies outside.
  void check(const Point& p) const;

  // Row-major: the last axis varies fastest.
  CellIndex index_of(const Point& p) const;
  Point point_at(CellIndex index) const;

  // "6x5x4"
  std::string to_string() const;

  friend bool operator==(const GridShape& a, const GridShape& b) noexcept {
    return a.layout_ == b.layout_ || a.layout_->dims == b.layout_->dims;
  }
  friend bool operator<(const GridShape& a, const GridShape& b) noexcept {
    return a.layout_->dims < b.layout_->dims;
  }

 private:
  struct Layout {
    std::vector<Coord> dims;
    std::vector<std::uint64_t> strides;
    std::uint64_t cells = 1;
  };
  std::shared_ptr<const Layout> layout_;
};

class ReplyCorner {
 public:
  ReplyCorner(std::size_t dimension, std::uint32_t bits);
  ReplyCorner(std::initializer_list<int> bits);

  static ReplyCorner all_zeros(std::size_t dimension) { return ReplyCorner(dimension, 0); }
  static ReplyCorner all_ones(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  // true: the reply claims t_i < q_i.
  bool bit(std::size_t axis) const noexcept { return ((bits_ >> axis) & 1u) != 0; }
  // Bit i of the mask is r_i.
  std::uint32_t mask() const noexcept { return bits_; }
  // Rank in lexicographic order of (r_1, ..., r_d).
  std::uint32_t lex_rank() const noexcept;
  ReplyCorner leading(std::size_t count) const;

  std::vector<int> as_bits() const;
  std::string to_string() const;

  friend bool operator==(const ReplyCorner&, const ReplyCorner&) = default;
  friend std::strong_ordering operator<=>(const ReplyCorner& a, const ReplyCorner& b) noexcept {
    if (a.dimension_ != b.dimension_) return a.dimension_ <=> b.dimension_;
    return a.lex_rank() <=> b.lex_rank();
  }

 private:
  std::size_t dimension_ = 0;
  std::uint32_t bits_ = 0;
};

// All 2^d corners, lexicographically ordered: (0,..,0), (0,..,1), ..., (1,..,1).
std::vector<ReplyCorner> corners_in_lex_order(std::size_t dimension);

class Reply {
 public:
  static Reply found() { return Reply{}; }
  static Reply corner(ReplyCorner c) { return Reply{std::move(c)}; }

  bool is_found() const noexcept { return !corner_.has_value(); }
  const ReplyCorner& corner() const;

  std::string to_string() const;

  friend bool operator==(const Reply&, const Reply&) = default;

 private:
  Reply() = default;
  explicit Reply(ReplyCorner c) : corner_(std::move(c)) {}
  std::optional<ReplyCorner> corner_;
};

struct Interval {
  Coord lo = 0;
  Coord hi = -1;

  bool empty() const noexcept { return lo > hi; }
  Coord length() const noexcept { return empty() ? 0 : hi - lo + 1; }
  bool contains(Coord x) const noexcept { return lo <= x && x <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

class Box {
 public:
  Box() = default;
  explicit Box(std::vector<Interval> sides) : sides_(std::move(sides)) {}

  std::size_t dimension() const noexcept { return sides_.size(); }
  const Interval& side(std::size_t axis) const { return sides_.at(axis); }
  std::span<const Interval> sides() const noexcept { return sides_; }

  bool empty() const noexcept;
  bool contains(const Point& p) const noexcept;
  std::uint64_t volume() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<Interval> sides_;
};

// Dense bit set over the cells of a shape, indexed row-major.
class CandidateSet {
 public:
  static CandidateSet full(const GridShape& shape);
  static CandidateSet none(const GridShape& shape);
  static CandidateSet of(const GridShape& shape, std::span<const Point> points);
  // Shapes with at most 64 cells only.
  static CandidateSet from_mask(const GridShape& shape, std::uint64_t mask);

  const GridShape& shape() const noexcept { return shape_; }

  bool contains(CellIndex cell) const noexcept { return (words_[cell >> 6] >> (cell & 63)) & 1u; }
  bool contains(const Point& p) const;
  void insert(CellIndex cell) noexcept { words_[cell >> 6] |= std::uint64_t{1} << (cell & 63); }
  void erase(CellIndex cell) noexcept { words_[cell >> 6] &= ~(std::uint64_t{1} << (cell & 63)); }

  std::uint64_t count() const noexcept;
  bool empty() const noexcept;
  // The only member, when there is exactly one.
  std::optional<CellIndex> single() const noexcept;
  std::optional<CellIndex> first() const noexcept;

  std::uint64_t count_in(const Box& box) const;
  void erase_box(const Box& box);

  bool is_subset_of(const CandidateSet& other) const;
  std::vector<Point> points() const;
  std::vector<CellIndex> cells() const;

  std::uint64_t to_mask() const;
  std::span<const std::uint64_t> words() const noexcept { return words_; }
  // Canonical byte encoding of the membership words.
  std::string key() const;

  friend bool operator==(const CandidateSet& a, const CandidateSet& b) noexcept {
    return a.shape_ == b.shape_ && a.words_ == b.words_;
  }

 private:
  explicit CandidateSet(const GridShape& shape);

  GridShape shape_;
  std::vector<std::uint64_t> words_;
};

// Calls fn(start, length) for every maximal run of consecutive cell indices in box.
template <typename Fn>
void for_each_box_run(const GridShape& shape, const Box& box, Fn&& fn) {
  if (box.empty()) return;
  const std::size_t d = shape.dimension();
  const Interval& last = box.side(d - 1);
  const std::uint64_t run = static_cast<std::uint64_t>(last.length());
  std::vector<Coord> at(d);
  for (std::size_t i = 0; i < d; ++i) at[i] = box.side(i).lo;
  while (true) {
    std::uint64_t start = 0;
    for (std::size_t i = 0; i < d; ++i) start += static_cast<std::uint64_t>(at[i]) * shape.stride(i);
    fn(start, run);
    if (d == 1) return;
    std::size_t axis = d - 1;
    while (axis-- > 0) {
      if (at[axis] < box.side(axis).hi) {
        ++at[axis];
        break;
      }
      at[axis] = box.side(axis).lo;
      if (axis == 0) return;
    }
  }
}

Box excluded_box(const GridShape& shape, const Point& q, const ReplyCorner& r);
bool is_compatible(const Point& u, const Point& q, const ReplyCorner& r);
CandidateSet apply_reply(const CandidateSet& candidates, const Point& q, const ReplyCorner& r);
// Corners whose reply leaves at least one candidate, in lexicographic order.
std::vector<ReplyCorner> valid_corner_replies(const CandidateSet& candidates, const Point& q);
// Replies an honest adversary holding target t may give to q.
std::vector<Reply> honest_replies(const Point& t, const Point& q);

}  // namespace mdsearch
