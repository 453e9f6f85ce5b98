#pragma once

// Algorithm-side policies: classical binary search, the recursive
// segment-search strategy for 2D grids, and slicing for d >= 3.
//
// Protocol: construct on a shape, then alternate next() / observe(). next()
// is a pure function of the state and returns nullopt once the strategy has
// nothing left to query (Exhausted). key() is a canonical encoding of the
// state: equal keys imply identical future behavior.

#include <array>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdsearch/game.hpp"

namespace mdsearch {

class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual std::string_view id() const = 0;
  virtual const GridShape& shape() const = 0;
  virtual std::optional<Point> next() const = 0;
  virtual void observe(const Reply& reply) = 0;
  virtual std::string key() const = 0;
  virtual std::unique_ptr<Strategy> clone() const = 0;
};

// Axis-aligned rectangle of a 2D grid: cols along axis 0, rows along axis 1.
struct Rectangle {
  Interval cols;
  Interval rows;

  bool empty() const noexcept { return cols.empty() || rows.empty(); }
  Box to_box() const { return Box({cols, rows}); }

  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

// Binary search along one free axis with every other coordinate fixed.
class LineSearch {
 public:
  LineSearch(Point anchor, std::size_t axis, Interval live);

  std::optional<Point> next() const;
  // Only bit `axis` of the corner is used.
  void observe(const ReplyCorner& corner);
  bool exhausted() const noexcept { return live_.empty(); }
  const Interval& live() const noexcept { return live_; }
  std::size_t axis() const noexcept { return axis_; }
  const Point& anchor() const noexcept { return anchor_; }

 private:
  Point anchor_;
  std::size_t axis_;
  Interval live_;
};

struct SegmentSearchOutcome {
  // Sentinels: cols.lo - 1 for m00/m01, cols.hi + 1 for m10/m11.
  Coord m00 = 0;
  Coord m01 = 0;
  Coord m10 = 0;
  Coord m11 = 0;
  std::optional<Rectangle> below;  // G_0
  std::optional<Rectangle> above;  // G_1
  std::optional<Point> found;
};

// Binary search on the row segment cols x {row} of a rectangle, tracking the
// extreme positions of each corner so the unresolved part of the rectangle
// shrinks to at most two byproduct rectangles.
class SegmentSearch {
 public:
  SegmentSearch(const Rectangle& rect, Coord row);

  std::optional<Point> next() const;
  void observe(const Reply& reply);
  bool done() const noexcept { return found_.has_value() || live_.empty(); }

  const Rectangle& rect() const noexcept { return rect_; }
  Coord row() const noexcept { return row_; }
  const Interval& live() const noexcept { return live_; }
  // Marker array in the order m00, m01, m10, m11.
  const std::array<Coord, 4>& markers() const noexcept { return markers_; }

  // Valid once done().
  SegmentSearchOutcome outcome() const;

 private:
  Rectangle rect_;
  Coord row_;
  Interval live_;
  std::array<Coord, 4> markers_;
  std::optional<Point> found_;
};

// Row used for the segment search on rect: floor((bottom + top) / 2).
Coord middle_row(const Rectangle& rect) noexcept;

class Binary1DStrategy final : public Strategy {
 public:
  explicit Binary1DStrategy(const GridShape& shape);

  std::string_view id() const override { return "binary1d"; }
  const GridShape& shape() const override { return shape_; }
  std::optional<Point> next() const override;
  void observe(const Reply& reply) override;
  std::string key() const override;
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<Binary1DStrategy>(*this); }

 private:
  GridShape shape_;
  LineSearch search_;
  bool finished_ = false;
};

class Grid2DStrategy final : public Strategy {
 public:
  explicit Grid2DStrategy(const GridShape& shape);

  std::string_view id() const override { return "grid2d"; }
  const GridShape& shape() const override { return shape_; }
  std::optional<Point> next() const override;
  void observe(const Reply& reply) override;
  std::string key() const override;
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<Grid2DStrategy>(*this); }

  const std::deque<Rectangle>& pending() const noexcept { return pending_; }

 private:
  // Pops pending rectangles until one yields a query or the list is empty.
  void advance();

  GridShape shape_;
  std::deque<Rectangle> pending_;
  std::optional<SegmentSearch> segment_;
  std::optional<LineSearch> line_;
  bool finished_ = false;
};

class SlicingStrategy final : public Strategy {
 public:
  explicit SlicingStrategy(const GridShape& shape);

  std::string_view id() const override { return "slicing"; }
  const GridShape& shape() const override { return shape_; }
  std::optional<Point> next() const override;
  void observe(const Reply& reply) override;
  std::string key() const override;
  std::unique_ptr<Strategy> clone() const override;

  SlicingStrategy(const SlicingStrategy& other);
  SlicingStrategy& operator=(const SlicingStrategy&) = delete;

  Coord slice() const noexcept { return slice_; }

 private:
  void advance();
  std::unique_ptr<Strategy> make_sub() const;

  GridShape shape_;
  // order_[k] is the original axis holding the k-th largest size.
  std::vector<std::size_t> order_;
  GridShape sub_shape_;
  Coord slices_;
  Coord slice_ = 0;
  std::unique_ptr<Strategy> sub_;
  bool finished_ = false;
};

// binary1d for d = 1, grid2d for d = 2, slicing for d >= 3.
std::string_view applicable_strategy(const GridShape& shape);
std::unique_ptr<Strategy> make_strategy(std::string_view id, const GridShape& shape);

}  // namespace mdsearch
