#pragma once

// Closed-form lower and upper bounds on the query complexity qc, plus the
// budget certified for the strategies in strategies.hpp.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mdsearch/game.hpp"

namespace mdsearch {

// Tolerance used when real-valued bounds meet integer query counts.
inline constexpr double kBoundTolerance = 1e-9;

// n log2(m/n), m >= n >= 1.
double lower_2d(std::uint64_t m, std::uint64_t n);
// n (1 + floor(log2 floor(m/n))), m >= n >= 1.
std::uint64_t per_segment_lower(std::uint64_t m, std::uint64_t n);
// 2n (log2(m/(n+1)) + 4), m >= n >= 1.
double upper_2d(std::uint64_t m, std::uint64_t n);
// n (log2((m+n)/(n+1)) + 3) - log2(n+1), n = 2^k - 1, m >= 1.
double lemma_upper_2d(std::uint64_t m, std::uint64_t n);
// (n2-1) n3 (log2((n1-1)/(n2-1)) + 1) / 2, n1 >= n2 >= n3 >= 2.
double lower_3d(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3);
// n(n-1)/2, the cube form of lower_3d.
std::uint64_t lower_3d_cube(std::uint64_t n);
// 2 floor(n^(d-1) / (d-1)), d >= 3, n >= 2.
std::uint64_t lower_cube(std::uint64_t n, std::uint64_t d);
// Budget of the slicing/grid2d/binary1d strategies on a non-increasing shape.
double budget_d(const GridShape& shape);

// Least 2^k - 1 that is >= n.
std::uint64_t padded_height(std::uint64_t n);
bool is_mersenne(std::uint64_t n) noexcept;

// ceil(lower - tol) <= count
bool meets_lower(double lower, std::uint64_t count) noexcept;
// count <= upper + tol
bool within_upper(std::uint64_t count, double upper) noexcept;

struct BoundsReport {
  GridShape shape;
  std::optional<double> lower_2d;
  std::optional<std::uint64_t> per_segment_lower;
  std::optional<double> upper_2d;
  std::optional<double> lemma_upper_2d;
  std::optional<double> lower_3d;
  std::optional<std::uint64_t> lower_cube;
  std::optional<double> budget_d;
  // Every present lower bound is <= every present upper bound.
  bool consistent = true;
  std::vector<std::string> violations;

  // Largest present lower bound on qc (per_segment_lower excluded), or 0.
  double best_lower() const;
};

BoundsReport bounds_report(const GridShape& shape);

}  // namespace mdsearch
