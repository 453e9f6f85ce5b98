#include "mdsearch/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

#include "mdsearch/adversaries.hpp"
#include "mdsearch/bounds.hpp"
#include "mdsearch/errors.hpp"
#include "mdsearch/evaluator.hpp"
#include "mdsearch/solver.hpp"
#include "mdsearch/strategies.hpp"

namespace mdsearch {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = text.find(sep, start);
    parts.push_back(text.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return parts;
    start = at + 1;
  }
}

Coord parse_number(std::string_view token, std::string_view what) {
  Coord value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end) {
    throw UsageError(std::string(what) + ": '" + std::string(token) + "' is not a non-negative integer");
  }
  if (value < 0) throw UsageError(std::string(what) + ": negative value '" + std::string(token) + "'");
  return value;
}

std::string csv_field(const std::optional<double>& value) { return value ? format_real(*value) : std::string(); }

template <typename Int>
std::string csv_field(const std::optional<Int>& value) {
  return value ? std::to_string(*value) : std::string();
}

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line.push_back(',');
    line += fields[i];
  }
  return line;
}

std::string_view default_strategy(std::size_t dimension) {
  if (dimension == 1) return "binary1d";
  if (dimension == 2) return "grid2d";
  return "slicing";
}

bool strategy_fits(std::string_view id, const GridShape& shape) {
  const std::size_t d = shape.dimension();
  if (id == "binary1d") return d == 1;
  if (id == "grid2d") return d == 2;
  if (id == "slicing") return d >= 3 && shape.is_sorted_non_increasing();
  return false;
}

bool construction_fits(std::string_view id, const GridShape& shape) {
  const auto dims = shape.dims();
  if (id == "diagonal") return dims.size() == 2 && dims[0] >= dims[1] && dims[0] >= 2;
  if (id == "plane3d") return dims.size() == 3 && dims[0] >= dims[1] && dims[1] >= dims[2] && dims[2] >= 2;
  if (id == "cube") return dims.size() >= 3 && shape.is_cube() && dims[0] >= 2;
  if (id == "greedy") return true;
  return false;
}

// Bound the named construction is meant to certify.
std::optional<double> certified_lower(std::string_view id, const BoundsReport& bounds) {
  if (id == "diagonal") return bounds.lower_2d;
  if (id == "plane3d") return bounds.lower_3d;
  if (id == "cube" && bounds.lower_cube) return static_cast<double>(*bounds.lower_cube);
  return std::nullopt;
}

std::vector<std::string> bounds_fields(const BoundsReport& b) {
  return {b.shape.to_string(), csv_field(b.lower_2d), csv_field(b.per_segment_lower), csv_field(b.lower_3d),
          csv_field(b.lower_cube), csv_field(b.budget_d)};
}

constexpr std::string_view kCommonHeader = "shape,lower_2d,per_segment_lower,lower_3d,lower_cube,budget_d,exact_qc";
constexpr std::string_view kConstructions[] = {"diagonal", "plane3d", "cube"};
constexpr std::string_view kStrategies[] = {"binary1d", "grid2d", "slicing"};
constexpr std::string_view kSweepAdversaries[] = {"greedy", "diagonal", "plane3d", "cube"};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

GridShape parse_shape(std::string_view text) {
  if (text.empty()) throw UsageError("shape: empty text");
  std::vector<Coord> dims;
  for (const auto token : split(text, 'x')) {
    const Coord size = parse_number(token, "shape");
    if (size == 0) throw UsageError("shape: zero size in '" + std::string(text) + "'");
    dims.push_back(size);
  }
  if (dims.size() > kMaxDimension) throw UsageError("shape: more than " + std::to_string(kMaxDimension) + " axes");
  try {
    return GridShape(std::move(dims));
  } catch (const ArgumentError& e) {
    throw UsageError(std::string("shape: ") + e.what());
  }
}

Point parse_point(std::string_view text) {
  if (text.empty()) throw UsageError("point: empty text");
  std::vector<Coord> coords;
  for (const auto token : split(text, ',')) coords.push_back(parse_number(token, "point"));
  return Point(std::move(coords));
}

Interval parse_range(std::string_view text) {
  const auto parts = split(text, '-');
  if (parts.size() == 1) {
    const Coord v = parse_number(parts[0], "range");
    return {v, v};
  }
  if (parts.size() != 2) throw UsageError("range: expected LO-HI, got '" + std::string(text) + "'");
  return {parse_number(parts[0], "range"), parse_number(parts[1], "range")};
}

GridShape sorted_non_increasing(const GridShape& shape) {
  std::vector<Coord> dims(shape.dims().begin(), shape.dims().end());
  std::sort(dims.begin(), dims.end(), std::greater<>());
  return GridShape(std::move(dims));
}

std::string format_real(double value) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out.precision(6);
  out << value;
  return out.str();
}

void validate(const SweepConfig& config) {
  if (config.ranges.empty()) throw UsageError("sweep: at least one dimension range is required");
  if (config.ranges.size() > kMaxDimension) throw UsageError("sweep: too many dimensions");
  for (const auto& r : config.ranges) {
    if (!r.empty() && r.lo < 1) throw UsageError("sweep: sizes start at 1");
  }
  if (config.max_solver_cells == 0 || config.max_states == 0) throw UsageError("sweep: caps must be positive");
  if (config.evaluation != "full" && config.evaluation != "greedy" && config.evaluation != "none") {
    throw UsageError("sweep: evaluation must be full, greedy or none");
  }
  for (const auto& s : config.strategies) {
    if (std::find(std::begin(kStrategies), std::end(kStrategies), s) == std::end(kStrategies)) {
      throw UsageError("sweep: unknown strategy '" + s + "'");
    }
  }
  for (const auto& a : config.adversaries) {
    if (std::find(std::begin(kSweepAdversaries), std::end(kSweepAdversaries), a) == std::end(kSweepAdversaries)) {
      throw UsageError("sweep: unsupported adversary '" + a + "'");
    }
  }
}

std::vector<GridShape> sweep_shapes(const SweepConfig& config) {
  std::vector<GridShape> shapes;
  for (const auto& r : config.ranges) {
    if (r.empty()) return shapes;
  }
  std::vector<Coord> dims;
  for (const auto& r : config.ranges) dims.push_back(r.lo);
  while (true) {
    const bool sorted = std::is_sorted(dims.begin(), dims.end(), std::greater<>());
    if (sorted || !config.sorted_only) shapes.emplace_back(dims);
    std::size_t axis = dims.size();
    while (axis-- > 0) {
      if (dims[axis] < config.ranges[axis].hi) {
        ++dims[axis];
        break;
      }
      dims[axis] = config.ranges[axis].lo;
      if (axis == 0) return shapes;
    }
  }
}

namespace {

std::vector<std::string> sweep_strategies(const SweepConfig& config) {
  if (config.evaluation == "none") return {};
  if (!config.strategies.empty()) return config.strategies;
  return {std::string(default_strategy(config.ranges.size()))};
}

}  // namespace

std::string sweep_header(const SweepConfig& config) {
  std::string header(kCommonHeader);
  const std::string prefix = config.evaluation == "greedy" ? ",greedy_" : ",worst_case_";
  for (const auto& s : sweep_strategies(config)) header += prefix + s;
  for (const auto& a : config.adversaries) header += ",best_response_" + a;
  header += ",wall_ms";
  return header;
}

void run_sweep(const SweepConfig& config, std::ostream& out) {
  validate(config);
  const auto strategies = sweep_strategies(config);
  const auto& adversaries = config.adversaries;
  std::vector<std::string> lines{sweep_header(config)};
  for (const auto& shape : sweep_shapes(config)) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> fields = bounds_fields(bounds_report(shape));

    std::string exact;
    if (shape.cell_count() <= std::min(config.max_solver_cells, kSolverCellLimit)) {
      try {
        exact = std::to_string(exact_qc(shape, {.symmetry = config.symmetry, .max_states = config.max_states}).value);
      } catch (const ResourceError&) {
      } catch (const ArgumentError&) {
      }
    }
    fields.push_back(exact);

    for (const auto& s : strategies) {
      std::string cell;
      if (strategy_fits(s, shape)) {
        auto strategy = make_strategy(s, shape);
        if (config.evaluation == "full") {
          try {
            const auto report = worst_case(*strategy, {.max_states = config.max_states, .witness = false});
            if (report.correct) cell = std::to_string(report.worst_case);
          } catch (const ResourceError&) {
          }
        } else {
          GreedyAdversary adversary(shape);
          const auto t = run_match(*strategy, adversary);
          if (t.outcome == Outcome::Found) cell = std::to_string(t.total_queries());
        }
      }
      fields.push_back(cell);
    }

    for (const auto& a : adversaries) {
      std::string cell;
      if (construction_fits(a, shape)) {
        try {
          cell = std::to_string(best_response(*make_adversary(a, shape), config.max_states).value);
        } catch (const ResourceError&) {
        }
      }
      fields.push_back(cell);
    }
    fields.push_back(format_real(elapsed_ms(start)));
    lines.push_back(join(fields));
  }
  for (const auto& line : lines) out << line << '\n';
}

std::vector<GridShape> verify_shapes(std::uint64_t max_cells) {
  std::vector<GridShape> shapes;
  const auto cap = static_cast<Coord>(std::min<std::uint64_t>(max_cells, std::numeric_limits<Coord>::max()));
  for (Coord n = 1; n <= cap; ++n) shapes.push_back(GridShape{n});
  for (Coord m = 1; m <= cap; ++m) {
    for (Coord n = 1; n <= m && static_cast<std::uint64_t>(m) * n <= max_cells; ++n) shapes.push_back(GridShape{m, n});
  }
  for (Coord a = 1; a <= cap; ++a) {
    for (Coord b = 1; b <= a && static_cast<std::uint64_t>(a) * b <= max_cells; ++b) {
      for (Coord c = 1; c <= b && static_cast<std::uint64_t>(a) * b * c <= max_cells; ++c) {
        shapes.push_back(GridShape{a, b, c});
      }
    }
  }
  for (std::size_t d = 4; d <= kMaxDimension; ++d) {
    for (Coord n = 2;; ++n) {
      std::uint64_t cells = 1;
      for (std::size_t i = 0; i < d && cells <= max_cells; ++i) cells *= static_cast<std::uint64_t>(n);
      if (cells > max_cells) break;
      shapes.emplace_back(std::vector<Coord>(d, n));
    }
  }
  return shapes;
}

std::string verify_header() {
  return std::string(kCommonHeader) +
         ",upper_2d,lemma_upper_2d,strategy,worst_case,best_response_diagonal,best_response_plane3d,"
         "best_response_cube,status";
}

VerifyRow verify_shape(const GridShape& shape, const VerifyOptions& options) {
  VerifyRow row{shape, {}, {}, false};
  auto fail = [&row](std::string what) { row.violations.push_back(std::move(what)); };
  const BoundsReport bounds = bounds_report(shape);
  for (const auto& v : bounds.violations) fail("bounds inconsistent: " + v);

  std::optional<int> exact;
  try {
    exact = exact_qc(shape, {.symmetry = options.symmetry, .max_states = options.max_states}).value;
  } catch (const ResourceError&) {
    row.capped = true;
  }

  const std::string_view strategy_id = applicable_strategy(shape);
  std::optional<int> worst;
  try {
    const auto report =
        worst_case(*make_strategy(strategy_id, shape), {.max_states = options.max_states, .witness = false});
    if (!report.correct) fail(std::string(strategy_id) + " is not correct on every reply sequence");
    worst = report.worst_case;
  } catch (const ResourceError&) {
    row.capped = true;
  }

  const std::pair<const char*, std::optional<double>> lowers[] = {
      {"lower_2d", bounds.lower_2d},
      {"lower_3d", bounds.lower_3d},
      {"lower_cube", bounds.lower_cube ? std::optional<double>(static_cast<double>(*bounds.lower_cube)) : std::nullopt},
  };
  if (exact) {
    for (const auto& [name, lower] : lowers) {
      if (lower && !meets_lower(*lower, static_cast<std::uint64_t>(*exact))) {
        fail(std::string(name) + " " + format_real(*lower) + " exceeds exact_qc " + std::to_string(*exact));
      }
    }
  }
  if (exact && worst && *exact > *worst) {
    fail("exact_qc " + std::to_string(*exact) + " exceeds worst_case " + std::to_string(*worst));
  }
  if (worst) {
    const auto n = static_cast<std::uint64_t>(*worst);
    const std::pair<const char*, std::optional<double>> uppers[] = {
        {"budget_d", bounds.budget_d}, {"upper_2d", bounds.upper_2d}, {"lemma_upper_2d", bounds.lemma_upper_2d}};
    for (const auto& [name, upper] : uppers) {
      if (upper && !within_upper(n, *upper)) {
        fail("worst_case " + std::to_string(n) + " exceeds " + name + " " + format_real(*upper));
      }
    }
  }

  std::vector<std::string> responses;
  for (const auto id : kConstructions) {
    if (!construction_fits(id, shape)) {
      responses.emplace_back();
      continue;
    }
    try {
      const int value = best_response(*make_adversary(id, shape), options.max_states).value;
      responses.push_back(std::to_string(value));
      if (exact && value > *exact) {
        fail("best_response " + std::string(id) + " " + std::to_string(value) + " exceeds exact_qc " +
             std::to_string(*exact));
      }
      if (const auto lower = certified_lower(id, bounds);
          lower && !meets_lower(*lower, static_cast<std::uint64_t>(value))) {
        fail("best_response " + std::string(id) + " " + std::to_string(value) + " below " + format_real(*lower));
      }
    } catch (const ResourceError&) {
      row.capped = true;
      responses.emplace_back();
    }
  }

  std::vector<std::string> fields = bounds_fields(bounds);
  fields.push_back(csv_field(exact));
  fields.push_back(csv_field(bounds.upper_2d));
  fields.push_back(csv_field(bounds.lemma_upper_2d));
  fields.emplace_back(strategy_id);
  fields.push_back(csv_field(worst));
  fields.insert(fields.end(), responses.begin(), responses.end());
  fields.emplace_back(!row.violations.empty() ? "violation" : row.capped ? "capped" : "ok");
  row.csv = join(fields);
  return row;
}

int run_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  if (options.max_cells == 0 || options.max_states == 0) throw UsageError("verify: caps must be positive");
  if (options.max_cells > kSolverCellLimit) {
    throw UsageError("verify: --max-cells above " + std::to_string(kSolverCellLimit) + " is not supported");
  }
  out << verify_header() << '\n';
  bool violated = false;
  bool capped = false;
  for (const auto& shape : verify_shapes(options.max_cells)) {
    const VerifyRow row = verify_shape(shape, options);
    out << row.csv << '\n';
    if (!row.violations.empty()) {
      violated = true;
      err << "violation: " << row.csv << '\n';
      for (const auto& v : row.violations) err << "  " << v << '\n';
    }
    capped = capped || row.capped;
  }
  if (violated) return exit_code::kAssertionFailed;
  if (capped) return exit_code::kResourceCap;
  return exit_code::kOk;
}

}  // namespace mdsearch
