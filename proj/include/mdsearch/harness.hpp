#pragma once

// Library side of the command-line tool: argument parsing helpers, the
// verify pipeline and CSV sweeps.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdsearch/game.hpp"

namespace mdsearch {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kAssertionFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kResourceCap = 3;
}  // namespace exit_code

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// "6x5x4" -> (6,5,4). Sizes must be positive.
GridShape parse_shape(std::string_view text);
// "1,2,2" -> (1,2,2).
Point parse_point(std::string_view text);
// "2-64" or "5" -> closed range.
Interval parse_range(std::string_view text);
GridShape sorted_non_increasing(const GridShape& shape);

// Fixed CSV formatting: "." separator, 6 significant digits.
std::string format_real(double value);

struct SweepConfig {
  std::vector<Interval> ranges;         // one per dimension
  std::vector<std::string> strategies;  // empty: the applicable one per shape
  std::vector<std::string> adversaries;  // best-response columns, none by default
  std::string evaluation = "full";       // full | greedy | none
  std::uint64_t max_solver_cells = 24;
  std::uint64_t max_states = 200'000;
  bool symmetry = false;
  bool sorted_only = true;
};

// Validates the config; throws UsageError.
void validate(const SweepConfig& config);
std::vector<GridShape> sweep_shapes(const SweepConfig& config);
std::string sweep_header(const SweepConfig& config);
// Writes header plus one row per shape in lexicographic shape order.
void run_sweep(const SweepConfig& config, std::ostream& out);

struct VerifyOptions {
  std::uint64_t max_cells = 20;
  std::uint64_t max_states = 5'000'000;
  bool symmetry = false;
};

// Shapes checked by verify: every non-increasing shape of dimension 1..3 and
// every cube n^d (d >= 4, n >= 2) with at most max_cells cells.
std::vector<GridShape> verify_shapes(std::uint64_t max_cells);

struct VerifyRow {
  GridShape shape;
  std::string csv;
  std::vector<std::string> violations;
  bool capped = false;
};

VerifyRow verify_shape(const GridShape& shape, const VerifyOptions& options);
std::string verify_header();
// Emits the CSV to `out` and offending rows to `err`; returns an exit code.
int run_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

}  // namespace mdsearch
