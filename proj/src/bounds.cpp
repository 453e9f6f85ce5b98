#include "mdsearch/bounds.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "mdsearch/errors.hpp"

namespace mdsearch {

namespace {

void require_2d_order(std::uint64_t m, std::uint64_t n, const char* what) {
  if (n < 1 || m < n) throw ArgumentError(std::string(what) + ": needs m >= n >= 1");
}

std::uint64_t floor_log2(std::uint64_t x) { return static_cast<std::uint64_t>(std::bit_width(x)) - 1; }

}  // namespace

double lower_2d(std::uint64_t m, std::uint64_t n) {
  require_2d_order(m, n, "lower_2d");
  return static_cast<double>(n) * std::log2(static_cast<double>(m) / static_cast<double>(n));
}

std::uint64_t per_segment_lower(std::uint64_t m, std::uint64_t n) {
  require_2d_order(m, n, "per_segment_lower");
  return n * (1 + floor_log2(m / n));
}

double upper_2d(std::uint64_t m, std::uint64_t n) {
  require_2d_order(m, n, "upper_2d");
  const double nd = static_cast<double>(n);
  return 2.0 * nd * (std::log2(static_cast<double>(m) / (nd + 1.0)) + 4.0);
}

bool is_mersenne(std::uint64_t n) noexcept { return n >= 1 && ((n + 1) & n) == 0; }

std::uint64_t padded_height(std::uint64_t n) {
  if (n < 1) throw ArgumentError("padded_height: n must be positive");
  if (n > (std::numeric_limits<std::uint64_t>::max() >> 1)) throw ArgumentError("padded_height: n too large");
  return (std::uint64_t{1} << std::bit_width(n)) - 1;
}

double lemma_upper_2d(std::uint64_t m, std::uint64_t n) {
  if (m < 1) throw ArgumentError("lemma_upper_2d: needs m >= 1");
  if (!is_mersenne(n)) throw ArgumentError("lemma_upper_2d: n must be of the form 2^k - 1");
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  return nd * (std::log2((md + nd) / (nd + 1.0)) + 3.0) - std::log2(nd + 1.0);
}

double lower_3d(std::uint64_t n1, std::uint64_t n2, std::uint64_t n3) {
  if (!(n1 >= n2 && n2 >= n3 && n3 >= 2)) throw ArgumentError("lower_3d: needs n1 >= n2 >= n3 >= 2");
  const double a = static_cast<double>(n1 - 1);
  const double b = static_cast<double>(n2 - 1);
  return 0.5 * b * static_cast<double>(n3) * (std::log2(a / b) + 1.0);
}

std::uint64_t lower_3d_cube(std::uint64_t n) {
  if (n < 2) throw ArgumentError("lower_3d_cube: needs n >= 2");
  return n * (n - 1) / 2;
}

std::uint64_t lower_cube(std::uint64_t n, std::uint64_t d) {
  if (d < 3) throw ArgumentError("lower_cube: needs d >= 3");
  if (n < 2) throw ArgumentError("lower_cube: needs n >= 2");
  std::uint64_t power = 1;
  for (std::uint64_t i = 0; i + 1 < d; ++i) {
    if (power > std::numeric_limits<std::uint64_t>::max() / n) throw ArgumentError("lower_cube: n^(d-1) overflows");
    power *= n;
  }
  return 2 * (power / (d - 1));
}

double budget_d(const GridShape& shape) {
  if (!shape.is_sorted_non_increasing()) throw ArgumentError("budget_d: dims must be non-increasing");
  const auto dims = shape.dims();
  const auto n1 = static_cast<std::uint64_t>(dims[0]);
  if (dims.size() == 1) return static_cast<double>(floor_log2(n1) + 1);
  const auto padded = static_cast<double>(padded_height(static_cast<std::uint64_t>(dims[1])));
  double budget = 2.0 * padded * (std::log2((static_cast<double>(n1) + padded) / (padded + 1.0)) + 3.0);
  for (std::size_t i = 2; i < dims.size(); ++i) budget *= static_cast<double>(dims[i]);
  return budget;
}

bool meets_lower(double lower, std::uint64_t count) noexcept {
  return std::ceil(lower - kBoundTolerance) <= static_cast<double>(count);
}

bool within_upper(std::uint64_t count, double upper) noexcept {
  return static_cast<double>(count) <= upper + kBoundTolerance;
}

double BoundsReport::best_lower() const {
  double best = 0.0;
  if (lower_2d) best = std::max(best, *lower_2d);
  if (lower_3d) best = std::max(best, *lower_3d);
  if (lower_cube) best = std::max(best, static_cast<double>(*lower_cube));
  return best;
}

BoundsReport bounds_report(const GridShape& shape) {
  BoundsReport report{shape, {}, {}, {}, {}, {}, {}, {}, true, {}};
  const auto dims = shape.dims();
  const std::size_t d = dims.size();
  auto u = [&](std::size_t i) { return static_cast<std::uint64_t>(dims[i]); };

  if (d == 2) {
    if (u(0) >= u(1)) {
      report.lower_2d = lower_2d(u(0), u(1));
      report.per_segment_lower = per_segment_lower(u(0), u(1));
      report.upper_2d = upper_2d(u(0), u(1));
    }
    if (is_mersenne(u(1))) report.lemma_upper_2d = lemma_upper_2d(u(0), u(1));
  }
  if (d == 3 && u(0) >= u(1) && u(1) >= u(2) && u(2) >= 2) report.lower_3d = lower_3d(u(0), u(1), u(2));
  if (d >= 3 && shape.is_cube() && u(0) >= 2) report.lower_cube = lower_cube(u(0), d);
  if (shape.is_sorted_non_increasing()) report.budget_d = budget_d(shape);

  const std::pair<const char*, std::optional<double>> lowers[] = {
      {"lower_2d", report.lower_2d},
      {"lower_3d", report.lower_3d},
      {"lower_cube", report.lower_cube ? std::optional<double>(static_cast<double>(*report.lower_cube)) : std::nullopt},
  };
  const std::pair<const char*, std::optional<double>> uppers[] = {
      {"upper_2d", report.upper_2d},
      {"lemma_upper_2d", report.lemma_upper_2d},
      {"budget_d", report.budget_d},
  };
  for (const auto& [lname, lower] : lowers) {
    if (!lower) continue;
    for (const auto& [uname, upper] : uppers) {
      if (upper && *lower > *upper + kBoundTolerance) {
        report.consistent = false;
        report.violations.push_back(std::string(lname) + " > " + uname);
      }
    }
  }
  return report;
}

}  // namespace mdsearch
