#include "mdsearch/game.hpp"

#include <bit>
#include <limits>
#include <sstream>

#include "mdsearch/errors.hpp"

namespace mdsearch {

namespace {

void check_same_dimension(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw ArgumentError(msg.str());
  }
}

}  // namespace

std::string Point::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(coords_[i]);
  }
  return out + ')';
}

GridShape::GridShape(std::vector<Coord> dims) {
  if (dims.empty()) throw ArgumentError("grid shape needs at least one dimension");
  if (dims.size() > kMaxDimension) throw ArgumentError("grid shape has too many dimensions");
  auto layout = std::make_shared<Layout>();
  layout->strides.assign(dims.size(), 1);
  std::uint64_t cells = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    if (dims[i] < 1) throw ArgumentError("grid sizes must be positive");
    layout->strides[i] = cells;
    const auto n = static_cast<std::uint64_t>(dims[i]);
    if (cells > std::numeric_limits<std::uint64_t>::max() / n) {
      throw ArgumentError("grid cell count overflows 64 bits");
    }
    cells *= n;
  }
  layout->cells = cells;
  layout->dims = std::move(dims);
  layout_ = std::move(layout);
}

bool GridShape::is_sorted_non_increasing() const noexcept {
  const auto& d = layout_->dims;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] > d[i - 1]) return false;
  }
  return true;
}

bool GridShape::is_cube() const noexcept {
  const auto& d = layout_->dims;
  for (Coord n : d) {
    if (n != d.front()) return false;
  }
  return true;
}

bool GridShape::contains(const Point& p) const noexcept {
  if (p.dimension() != dimension()) return false;
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    if (p[i] < 0 || p[i] >= layout_->dims[i]) return false;
  }
  return true;
}

void GridShape::check(const Point& p) const {
  check_same_dimension(p.dimension(), dimension(), "point");
  if (!contains(p)) throw ArgumentError("point " + p.to_string() + " outside grid " + to_string());
}

CellIndex GridShape::index_of(const Point& p) const {
  check(p);
  CellIndex index = 0;
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    index += static_cast<CellIndex>(p[i]) * layout_->strides[i];
  }
  return index;
}

Point GridShape::point_at(CellIndex index) const {
  if (index >= layout_->cells) throw ArgumentError("cell index out of range");
  std::vector<Coord> coords(dimension());
  for (std::size_t i = 0; i < coords.size(); ++i) {
    coords[i] = static_cast<Coord>(index / layout_->strides[i]);
    index %= layout_->strides[i];
  }
  return Point(std::move(coords));
}

std::string GridShape::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (i) out += 'x';
    out += std::to_string(layout_->dims[i]);
  }
  return out;
}

ReplyCorner::ReplyCorner(std::size_t dimension, std::uint32_t bits)
    : dimension_(dimension), bits_(bits) {
  if (dimension == 0 || dimension > kMaxDimension) throw ArgumentError("corner dimension out of range");
  if (dimension < 32 && (bits >> dimension) != 0) throw ArgumentError("corner has bits beyond its dimension");
}

ReplyCorner::ReplyCorner(std::initializer_list<int> bits) {
  if (bits.size() == 0 || bits.size() > kMaxDimension) throw ArgumentError("corner dimension out of range");
  dimension_ = bits.size();
  std::size_t i = 0;
  for (int b : bits) {
    if (b != 0 && b != 1) throw ArgumentError("corner bits must be 0 or 1");
    bits_ |= static_cast<std::uint32_t>(b) << i++;
  }
}

ReplyCorner ReplyCorner::all_ones(std::size_t dimension) {
  return ReplyCorner(dimension, (std::uint32_t{1} << dimension) - 1);
}

std::uint32_t ReplyCorner::lex_rank() const noexcept {
  std::uint32_t rank = 0;
  for (std::size_t i = 0; i < dimension_; ++i) rank = (rank << 1) | (bit(i) ? 1u : 0u);
  return rank;
}

ReplyCorner ReplyCorner::leading(std::size_t count) const {
  if (count == 0 || count > dimension_) throw ArgumentError("leading corner length out of range");
  return ReplyCorner(count, bits_ & ((std::uint32_t{1} << count) - 1));
}

std::vector<int> ReplyCorner::as_bits() const {
  std::vector<int> out(dimension_);
  for (std::size_t i = 0; i < dimension_; ++i) out[i] = bit(i) ? 1 : 0;
  return out;
}

std::string ReplyCorner::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (i) out += ',';
    out += bit(i) ? '1' : '0';
  }
  return out + ')';
}

std::vector<ReplyCorner> corners_in_lex_order(std::size_t dimension) {
  if (dimension == 0 || dimension > kMaxDimension) throw ArgumentError("corner dimension out of range");
  const std::uint32_t total = std::uint32_t{1} << dimension;
  std::vector<ReplyCorner> out;
  out.reserve(total);
  for (std::uint32_t rank = 0; rank < total; ++rank) {
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < dimension; ++i) {
      if ((rank >> (dimension - 1 - i)) & 1u) bits |= std::uint32_t{1} << i;
    }
    out.emplace_back(dimension, bits);
  }
  return out;
}

const ReplyCorner& Reply::corner() const {
  if (!corner_) throw StateError("Found reply has no corner");
  return *corner_;
}

std::string Reply::to_string() const { return corner_ ? corner_->to_string() : "found"; }

bool Box::empty() const noexcept {
  if (sides_.empty()) return true;
  for (const auto& s : sides_) {
    if (s.empty()) return true;
  }
  return false;
}

bool Box::contains(const Point& p) const noexcept {
  if (p.dimension() != sides_.size()) return false;
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    if (!sides_[i].contains(p[i])) return false;
  }
  return true;
}

std::uint64_t Box::volume() const noexcept {
  if (empty()) return 0;
  std::uint64_t v = 1;
  for (const auto& s : sides_) v *= static_cast<std::uint64_t>(s.length());
  return v;
}

std::string Box::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < sides_.size(); ++i) {
    if (i) out += 'x';
    out += '[' + std::to_string(sides_[i].lo) + ',' + std::to_string(sides_[i].hi) + ']';
  }
  return out;
}

CandidateSet::CandidateSet(const GridShape& shape)
    : shape_(shape), words_((shape.cell_count() + 63) / 64, 0) {}

CandidateSet CandidateSet::full(const GridShape& shape) {
  CandidateSet s(shape);
  const std::uint64_t cells = shape.cell_count();
  for (auto& w : s.words_) w = ~std::uint64_t{0};
  if (cells % 64) s.words_.back() = (std::uint64_t{1} << (cells % 64)) - 1;
  return s;
}

CandidateSet CandidateSet::none(const GridShape& shape) { return CandidateSet(shape); }

CandidateSet CandidateSet::of(const GridShape& shape, std::span<const Point> points) {
  CandidateSet s(shape);
  for (const auto& p : points) s.insert(shape.index_of(p));
  return s;
}

CandidateSet CandidateSet::from_mask(const GridShape& shape, std::uint64_t mask) {
  if (shape.cell_count() > 64) throw ArgumentError("mask form needs at most 64 cells");
  if (shape.cell_count() < 64 && (mask >> shape.cell_count()) != 0) {
    throw ArgumentError("mask has bits beyond the grid");
  }
  CandidateSet s(shape);
  s.words_[0] = mask;
  return s;
}

bool CandidateSet::contains(const Point& p) const { return contains(shape_.index_of(p)); }

std::uint64_t CandidateSet::count() const noexcept {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

bool CandidateSet::empty() const noexcept {
  for (auto w : words_) {
    if (w) return false;
  }
  return true;
}

std::optional<CellIndex> CandidateSet::single() const noexcept {
  std::optional<CellIndex> found;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const auto w = words_[i];
    if (!w) continue;
    if (found || (w & (w - 1))) return std::nullopt;
    found = i * 64 + static_cast<CellIndex>(std::countr_zero(w));
  }
  return found;
}

std::optional<CellIndex> CandidateSet::first() const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i]) return i * 64 + static_cast<CellIndex>(std::countr_zero(words_[i]));
  }
  return std::nullopt;
}

namespace {

// Mask of bits [from, from + len) within one word; len <= 64 - from.
inline std::uint64_t bit_range(std::uint64_t from, std::uint64_t len) {
  const std::uint64_t ones = len >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << len) - 1;
  return ones << from;
}

template <typename Fn>
void for_each_word_span(std::uint64_t start, std::uint64_t length, Fn&& fn) {
  while (length > 0) {
    const std::uint64_t word = start >> 6;
    const std::uint64_t offset = start & 63;
    const std::uint64_t take = std::min<std::uint64_t>(length, 64 - offset);
    fn(word, bit_range(offset, take));
    start += take;
    length -= take;
  }
}

}  // namespace

std::uint64_t CandidateSet::count_in(const Box& box) const {
  check_same_dimension(box.dimension(), shape_.dimension(), "count_in");
  std::uint64_t total = 0;
  for_each_box_run(shape_, box, [&](std::uint64_t start, std::uint64_t length) {
    for_each_word_span(start, length, [&](std::uint64_t word, std::uint64_t mask) {
      total += static_cast<std::uint64_t>(std::popcount(words_[word] & mask));
    });
  });
  return total;
}

void CandidateSet::erase_box(const Box& box) {
  check_same_dimension(box.dimension(), shape_.dimension(), "erase_box");
  for_each_box_run(shape_, box, [&](std::uint64_t start, std::uint64_t length) {
    for_each_word_span(start, length, [&](std::uint64_t word, std::uint64_t mask) { words_[word] &= ~mask; });
  });
}

bool CandidateSet::is_subset_of(const CandidateSet& other) const {
  if (!(shape_ == other.shape_)) return false;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

std::vector<CellIndex> CandidateSet::cells() const {
  std::vector<CellIndex> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (auto w = words_[i]; w; w &= w - 1) out.push_back(i * 64 + static_cast<CellIndex>(std::countr_zero(w)));
  }
  return out;
}

std::vector<Point> CandidateSet::points() const {
  std::vector<Point> out;
  for (auto cell : cells()) out.push_back(shape_.point_at(cell));
  return out;
}

std::uint64_t CandidateSet::to_mask() const {
  if (words_.size() != 1) throw ArgumentError("mask form needs at most 64 cells");
  return words_[0];
}

std::string CandidateSet::key() const {
  std::string out(words_.size() * sizeof(std::uint64_t), '\0');
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (std::size_t b = 0; b < 8; ++b) out[i * 8 + b] = static_cast<char>((words_[i] >> (8 * b)) & 0xff);
  }
  return out;
}

Box excluded_box(const GridShape& shape, const Point& q, const ReplyCorner& r) {
  check_same_dimension(r.dimension(), shape.dimension(), "excluded_box");
  shape.check(q);
  std::vector<Interval> sides(shape.dimension());
  for (std::size_t i = 0; i < sides.size(); ++i) {
    sides[i] = r.bit(i) ? Interval{q[i], shape.size(i) - 1} : Interval{0, q[i]};
  }
  return Box(std::move(sides));
}

bool is_compatible(const Point& u, const Point& q, const ReplyCorner& r) {
  check_same_dimension(u.dimension(), q.dimension(), "is_compatible");
  check_same_dimension(r.dimension(), q.dimension(), "is_compatible");
  for (std::size_t i = 0; i < q.dimension(); ++i) {
    if (r.bit(i) ? u[i] < q[i] : u[i] > q[i]) return true;
  }
  return false;
}

CandidateSet apply_reply(const CandidateSet& candidates, const Point& q, const ReplyCorner& r) {
  CandidateSet out = candidates;
  out.erase_box(excluded_box(candidates.shape(), q, r));
  return out;
}

std::vector<ReplyCorner> valid_corner_replies(const CandidateSet& candidates, const Point& q) {
  const std::uint64_t total = candidates.count();
  if (total == 0) throw StateError("valid_corner_replies: empty candidate set");
  const GridShape& shape = candidates.shape();
  std::vector<ReplyCorner> out;
  for (const auto& r : corners_in_lex_order(shape.dimension())) {
    if (candidates.count_in(excluded_box(shape, q, r)) < total) out.push_back(r);
  }
  return out;
}

std::vector<Reply> honest_replies(const Point& t, const Point& q) {
  check_same_dimension(t.dimension(), q.dimension(), "honest_replies");
  if (t == q) return {Reply::found()};
  std::vector<Reply> out;
  for (const auto& r : corners_in_lex_order(q.dimension())) {
    if (is_compatible(t, q, r)) out.push_back(Reply::corner(r));
  }
  return out;
}

}  // namespace mdsearch
