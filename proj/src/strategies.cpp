#include "mdsearch/strategies.hpp"

#include <algorithm>
#include <numeric>

#include "mdsearch/errors.hpp"

namespace mdsearch {

namespace {

void put(std::string& out, std::int64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * b)) & 0xff));
}

void put(std::string& out, const Interval& iv) {
  put(out, iv.lo);
  put(out, iv.hi);
}

const ReplyCorner& corner_of(const Reply& reply, std::size_t dimension, std::string_view who) {
  const ReplyCorner& corner = reply.corner();
  if (corner.dimension() != dimension) {
    throw ProtocolError(std::string(who) + ": reply corner has dimension " + std::to_string(corner.dimension()) +
                        ", expected " + std::to_string(dimension));
  }
  return corner;
}

Coord floor_mid(const Interval& iv) noexcept {
  // Operands are non-negative grid coordinates.
  return static_cast<Coord>((static_cast<std::int64_t>(iv.lo) + iv.hi) / 2);
}

}  // namespace

LineSearch::LineSearch(Point anchor, std::size_t axis, Interval live)
    : anchor_(std::move(anchor)), axis_(axis), live_(live) {
  if (axis_ >= anchor_.dimension()) throw ArgumentError("LineSearch: axis out of range");
}

std::optional<Point> LineSearch::next() const {
  if (live_.empty()) return std::nullopt;
  Point q = anchor_;
  q[axis_] = floor_mid(live_);
  return q;
}

void LineSearch::observe(const ReplyCorner& corner) {
  if (live_.empty()) throw ProtocolError("LineSearch: observe after exhaustion");
  if (corner.dimension() != anchor_.dimension()) throw ProtocolError("LineSearch: corner dimension mismatch");
  const Coord mid = floor_mid(live_);
  if (corner.bit(axis_)) {
    live_.hi = mid - 1;
  } else {
    live_.lo = mid + 1;
  }
}

Coord middle_row(const Rectangle& rect) noexcept { return floor_mid(rect.rows); }

SegmentSearch::SegmentSearch(const Rectangle& rect, Coord row)
    : rect_(rect),
      row_(row),
      live_(rect.cols),
      markers_{rect.cols.lo - 1, rect.cols.lo - 1, rect.cols.hi + 1, rect.cols.hi + 1} {
  if (rect.empty()) throw ArgumentError("SegmentSearch: empty rectangle");
  if (!rect.rows.contains(row)) throw ArgumentError("SegmentSearch: row outside rectangle");
}

std::optional<Point> SegmentSearch::next() const {
  if (done()) return std::nullopt;
  return Point{floor_mid(live_), row_};
}

void SegmentSearch::observe(const Reply& reply) {
  if (done()) throw ProtocolError("SegmentSearch: observe after completion");
  const Coord mid = floor_mid(live_);
  if (reply.is_found()) {
    found_ = Point{mid, row_};
    return;
  }
  const ReplyCorner& corner = corner_of(reply, 2, "SegmentSearch");
  const bool left = corner.bit(0);
  const bool up = corner.bit(1);
  if (!left) {
    Coord& marker = markers_[up ? 1 : 0];
    marker = std::max(marker, mid);
    live_.lo = mid + 1;
  } else {
    Coord& marker = markers_[up ? 3 : 2];
    marker = std::min(marker, mid);
    live_.hi = mid - 1;
  }
}

SegmentSearchOutcome SegmentSearch::outcome() const {
  if (!done()) throw StateError("SegmentSearch: outcome requested before completion");
  SegmentSearchOutcome out;
  out.m00 = markers_[0];
  out.m01 = markers_[1];
  out.m10 = markers_[2];
  out.m11 = markers_[3];
  out.found = found_;
  if (found_) return out;
  const Rectangle below{{out.m00 + 1, out.m10 - 1}, {rect_.rows.lo, row_ - 1}};
  const Rectangle above{{out.m01 + 1, out.m11 - 1}, {row_ + 1, rect_.rows.hi}};
  if (!below.empty()) out.below = below;
  if (!above.empty()) out.above = above;
  return out;
}

Binary1DStrategy::Binary1DStrategy(const GridShape& shape)
    : shape_(shape), search_(Point{0}, 0, Interval{0, shape.size(0) - 1}) {
  if (shape.dimension() != 1) throw ArgumentError("binary1d needs a 1-dimensional shape");
}

std::optional<Point> Binary1DStrategy::next() const {
  if (finished_) return std::nullopt;
  return search_.next();
}

void Binary1DStrategy::observe(const Reply& reply) {
  if (finished_ || search_.exhausted()) throw ProtocolError("binary1d: observe after the end");
  if (reply.is_found()) {
    finished_ = true;
    return;
  }
  search_.observe(corner_of(reply, 1, "binary1d"));
}

std::string Binary1DStrategy::key() const {
  std::string out = "b";
  put(out, finished_);
  put(out, search_.live());
  return out;
}

Grid2DStrategy::Grid2DStrategy(const GridShape& shape) : shape_(shape) {
  if (shape.dimension() != 2) throw ArgumentError("grid2d needs a 2-dimensional shape");
  pending_.push_back(Rectangle{{0, shape.size(0) - 1}, {0, shape.size(1) - 1}});
  advance();
}

void Grid2DStrategy::advance() {
  while (!segment_ && !line_ && !pending_.empty()) {
    const Rectangle rect = pending_.front();
    pending_.pop_front();
    if (rect.rows.length() == 1) {
      line_.emplace(Point{rect.cols.lo, rect.rows.lo}, 0, rect.cols);
    } else if (rect.cols.length() == 1) {
      line_.emplace(Point{rect.cols.lo, rect.rows.lo}, 1, rect.rows);
    } else {
      segment_.emplace(rect, middle_row(rect));
    }
  }
}

std::optional<Point> Grid2DStrategy::next() const {
  if (finished_) return std::nullopt;
  if (segment_) return segment_->next();
  if (line_) return line_->next();
  return std::nullopt;
}

void Grid2DStrategy::observe(const Reply& reply) {
  if (finished_ || (!segment_ && !line_)) throw ProtocolError("grid2d: observe after the end");
  if (reply.is_found()) {
    finished_ = true;
    return;
  }
  const ReplyCorner& corner = corner_of(reply, 2, "grid2d");
  if (line_) {
    line_->observe(corner);
    if (line_->exhausted()) line_.reset();
  } else {
    segment_->observe(reply);
    if (segment_->done()) {
      const SegmentSearchOutcome outcome = segment_->outcome();
      if (outcome.below) pending_.push_back(*outcome.below);
      if (outcome.above) pending_.push_back(*outcome.above);
      segment_.reset();
    }
  }
  advance();
}

std::string Grid2DStrategy::key() const {
  std::string out = "g";
  put(out, finished_);
  if (segment_) {
    out.push_back('s');
    put(out, segment_->rect().cols);
    put(out, segment_->rect().rows);
    put(out, segment_->live());
    for (Coord m : segment_->markers()) put(out, m);
  } else if (line_) {
    out.push_back('l');
    put(out, static_cast<std::int64_t>(line_->axis()));
    put(out, line_->anchor()[0]);
    put(out, line_->anchor()[1]);
    put(out, line_->live());
  }
  out.push_back('|');
  for (const auto& rect : pending_) {
    put(out, rect.cols);
    put(out, rect.rows);
  }
  return out;
}

namespace {

std::vector<std::size_t> sorted_axis_order(const GridShape& shape) {
  std::vector<std::size_t> order(shape.dimension());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return shape.size(a) > shape.size(b); });
  return order;
}

GridShape leading_sorted_shape(const GridShape& shape, const std::vector<std::size_t>& order) {
  std::vector<Coord> dims;
  for (std::size_t k = 0; k + 1 < order.size(); ++k) dims.push_back(shape.size(order[k]));
  return GridShape(std::move(dims));
}

}  // namespace

SlicingStrategy::SlicingStrategy(const GridShape& shape)
    : shape_(shape),
      order_(sorted_axis_order(shape)),
      sub_shape_(shape.dimension() >= 3 ? leading_sorted_shape(shape, order_) : GridShape{1}),
      slices_(shape.size(order_.back())) {
  if (shape.dimension() < 3) throw ArgumentError("slicing needs at least 3 dimensions");
  sub_ = make_sub();
  advance();
}

SlicingStrategy::SlicingStrategy(const SlicingStrategy& other)
    : Strategy(other),
      shape_(other.shape_),
      order_(other.order_),
      sub_shape_(other.sub_shape_),
      slices_(other.slices_),
      slice_(other.slice_),
      sub_(other.sub_ ? other.sub_->clone() : nullptr),
      finished_(other.finished_) {}

std::unique_ptr<Strategy> SlicingStrategy::clone() const { return std::make_unique<SlicingStrategy>(*this); }

std::unique_ptr<Strategy> SlicingStrategy::make_sub() const {
  if (sub_shape_.dimension() == 2) return std::make_unique<Grid2DStrategy>(sub_shape_);
  return std::make_unique<SlicingStrategy>(sub_shape_);
}

void SlicingStrategy::advance() {
  while (sub_ && !sub_->next()) {
    if (++slice_ >= slices_) {
      sub_.reset();
    } else {
      sub_ = make_sub();
    }
  }
}

std::optional<Point> SlicingStrategy::next() const {
  if (finished_ || !sub_) return std::nullopt;
  const auto inner = sub_->next();
  if (!inner) return std::nullopt;
  std::vector<Coord> coords(shape_.dimension());
  for (std::size_t k = 0; k + 1 < order_.size(); ++k) coords[order_[k]] = (*inner)[k];
  coords[order_.back()] = slice_;
  return Point(std::move(coords));
}

void SlicingStrategy::observe(const Reply& reply) {
  if (finished_ || !sub_) throw ProtocolError("slicing: observe after the end");
  if (reply.is_found()) {
    finished_ = true;
    return;
  }
  const ReplyCorner& corner = corner_of(reply, shape_.dimension(), "slicing");
  std::uint32_t bits = 0;
  for (std::size_t k = 0; k + 1 < order_.size(); ++k) {
    if (corner.bit(order_[k])) bits |= std::uint32_t{1} << k;
  }
  sub_->observe(Reply::corner(ReplyCorner(order_.size() - 1, bits)));
  advance();
}

std::string SlicingStrategy::key() const {
  std::string out = "s";
  put(out, finished_);
  put(out, slice_);
  if (sub_) out += sub_->key();
  return out;
}

std::string_view applicable_strategy(const GridShape& shape) {
  switch (shape.dimension()) {
    case 1:
      return "binary1d";
    case 2:
      return "grid2d";
    default:
      return "slicing";
  }
}

std::unique_ptr<Strategy> make_strategy(std::string_view id, const GridShape& shape) {
  if (id == "binary1d") return std::make_unique<Binary1DStrategy>(shape);
  if (id == "grid2d") return std::make_unique<Grid2DStrategy>(shape);
  if (id == "slicing") return std::make_unique<SlicingStrategy>(shape);
  throw ArgumentError("unknown strategy '" + std::string(id) + "'");
}

}  // namespace mdsearch
