// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mdsearch/adversaries.hpp"
#include "mdsearch/bounds.hpp"
#include "mdsearch/evaluator.hpp"
#include "mdsearch/game.hpp"
#include "mdsearch/solver.hpp"
#include "mdsearch/strategies.hpp"

using namespace mdsearch;

namespace {

constexpr double kTolerance = 1e-9;

struct Verdict {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void fail(std::string what) {
    pass = false;
    if (failures.size() < 8) failures.push_back(std::move(what));
  }
};

int failed = 0;

void run(int id, const std::string& name, double limit_ms, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.fail(std::string("exception: ") + e.what());
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  if (ms > limit_ms) v.fail("took " + std::to_string(static_cast<long>(ms)) + " ms");
  if (!v.pass) ++failed;
  std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  (" << static_cast<long>(ms)
            << " ms, limit " << static_cast<long>(limit_ms) << " ms)";
  if (!v.detail.empty()) std::cout << "  " << v.detail;
  std::cout << "\n";
  for (const auto& f : v.failures) std::cout << "      " << f << "\n";
  std::cout.flush();
}

std::vector<GridShape> shapes_up_to(std::uint64_t max_cells, std::size_t max_dim, bool sorted_only) {
  std::vector<GridShape> out;
  std::vector<Coord> dims;
  std::function<void(std::uint64_t)> grow = [&](std::uint64_t cells) {
    if (!dims.empty()) out.emplace_back(dims);
    if (dims.size() == max_dim) return;
    for (Coord n = 1; cells * static_cast<std::uint64_t>(n) <= max_cells; ++n) {
      if (sorted_only && !dims.empty() && n > dims.back()) break;
      dims.push_back(n);
      grow(cells * static_cast<std::uint64_t>(n));
      dims.pop_back();
    }
  };
  grow(1);
  return out;
}

std::string join_points(const std::set<Point>& points) {
  std::string s;
  for (const auto& p : points) s += p.to_string();
  return s;
}

Verdict semantics_duality() {
  Verdict v;
  std::uint64_t checks = 0;
  for (const auto& shape : shapes_up_to(36, 3, false)) {
    const auto corners = corners_in_lex_order(shape.dimension());
    for (CellIndex qi = 0; qi < shape.cell_count(); ++qi) {
      const Point q = shape.point_at(qi);
      for (const auto& r : corners) {
        const Box x = excluded_box(shape, q, r);
        if (!x.contains(q)) v.fail(shape.to_string() + ": q=" + q.to_string() + " not in its own box");
        for (CellIndex ui = 0; ui < shape.cell_count(); ++ui) {
          const Point u = shape.point_at(ui);
          if (x.contains(u) == is_compatible(u, q, r)) {
            v.fail(shape.to_string() + ": u=" + u.to_string() + " q=" + q.to_string() + " r=" + r.to_string());
          }
          ++checks;
        }
      }
    }
  }
  v.detail = std::to_string(checks) + " (u,q,r) triples";
  return v;
}

Verdict one_dimension() {
  Verdict v;
  for (Coord n = 1; n <= 64; ++n) {
    const int got = exact_qc(GridShape{n}).value;
    const int want = std::bit_width(static_cast<unsigned>(n));
    if (got != want) v.fail("n=" + std::to_string(n) + ": " + std::to_string(got) + " != " + std::to_string(want));
  }
  v.detail = "n = 1..64";
  return v;
}

Verdict oracle_regression() {
  Verdict v;
  const std::pair<GridShape, int> frozen[] = {
      {GridShape{2, 2}, 4}, {GridShape{3, 2}, 4}, {GridShape{4, 2}, 6}, {GridShape{3, 3}, 5}, {GridShape{2, 2, 2}, 8}};
  std::ostringstream detail;
  for (const auto& [shape, want] : frozen) {
    const int got = exact_qc(shape).value;
    const int sym = exact_qc(shape, {.symmetry = true}).value;
    detail << shape.to_string() << "=" << got << " ";
    if (got != want || sym != want) {
      v.fail(shape.to_string() + ": got " + std::to_string(got) + "/" + std::to_string(sym) + ", frozen " +
             std::to_string(want));
    }
  }
  v.detail = detail.str();
  return v;
}

Verdict sandwich() {
  Verdict v;
  std::vector<GridShape> shapes;
  for (Coord m = 1; m <= 20; ++m)
    for (Coord n = 1; n <= m && m * n <= 20; ++n) shapes.push_back(GridShape{m, n});
  for (const auto& s : shapes_up_to(12, 3, true))
    if (s.dimension() == 3) shapes.push_back(s);
  for (const auto& shape : shapes) {
    const auto bounds = bounds_report(shape);
    const int exact = exact_qc(shape, {.symmetry = true}).value;
    const auto eval = worst_case(*make_strategy(applicable_strategy(shape), shape), {.witness = false});
    const auto name = shape.to_string();
    const std::pair<const char*, std::optional<double>> lowers[] = {
        {"lower_2d", bounds.lower_2d},
        {"lower_3d", bounds.lower_3d},
        {"lower_cube", bounds.lower_cube ? std::optional<double>(static_cast<double>(*bounds.lower_cube)) : std::nullopt}};
    for (const auto& [label, lower] : lowers) {
      if (lower && std::ceil(*lower - kTolerance) > exact) {
        v.fail(name + ": " + label + " " + std::to_string(*lower) + " > exact " + std::to_string(exact));
      }
    }
    if (!eval.correct) v.fail(name + ": strategy not correct");
    if (exact > eval.worst_case) v.fail(name + ": exact " + std::to_string(exact) + " > worst " + std::to_string(eval.worst_case));
    if (eval.worst_case > *bounds.budget_d + kTolerance) {
      v.fail(name + ": worst " + std::to_string(eval.worst_case) + " > budget " + std::to_string(*bounds.budget_d));
    }
  }
  v.detail = std::to_string(shapes.size()) + " shapes";
  return v;
}

Verdict lemma_budget() {
  Verdict v;
  std::vector<GridShape> shapes;
  for (Coord m = 1; m <= 32; ++m) {
    shapes.push_back(GridShape{m, 1});
    shapes.push_back(GridShape{m, 3});
  }
  for (Coord m = 1; m <= 16; ++m) shapes.push_back(GridShape{m, 7});
  int largest = 0;
  for (const auto& shape : shapes) {
    const auto m = static_cast<std::uint64_t>(shape.size(0));
    const auto n = static_cast<std::uint64_t>(shape.size(1));
    const auto r = worst_case(Grid2DStrategy(shape), {.witness = false});
    const double bound = lemma_upper_2d(m, n);
    if (!r.correct) v.fail(shape.to_string() + ": not correct");
    if (r.worst_case > bound + kTolerance) {
      v.fail(shape.to_string() + ": worst " + std::to_string(r.worst_case) + " > " + std::to_string(bound));
    }
    largest = std::max(largest, r.worst_case);
  }
  v.detail = std::to_string(shapes.size()) + " shapes, largest worst case " + std::to_string(largest);
  return v;
}

Verdict diagonal_adversary() {
  Verdict v;
  const std::pair<Coord, Coord> cases[] = {{4, 2}, {8, 2}, {9, 3}, {16, 4}};
  std::ostringstream detail;
  for (const auto& [m, n] : cases) {
    const GridShape shape{m, n};
    DiagonalAdversary adv(shape);
    const int got = best_response(adv).value;
    const auto want = per_segment_lower(static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n));
    detail << shape.to_string() << ":" << got << "/" << want << " ";
    if (static_cast<std::uint64_t>(got) < want) {
      v.fail(shape.to_string() + ": best response " + std::to_string(got) + " < " + std::to_string(want));
    }
    const CandidateSet surface = *adv.surface();
    for (CellIndex qi = 0; qi < shape.cell_count(); ++qi) {
      if (surface.contains(qi)) continue;
      auto a = adv.clone();
      a->reply(shape.point_at(qi));
      if (!(a->candidates() == surface)) v.fail(shape.to_string() + ": off-diagonal " + shape.point_at(qi).to_string());
    }
  }
  v.detail = "best_response/per_segment_lower " + detail.str();
  return v;
}

Verdict cube_adversary() {
  Verdict v;
  const std::pair<std::size_t, Coord> cases[] = {{3, 2}, {3, 3}, {4, 2}};
  std::ostringstream detail;
  for (const auto& [d, n] : cases) {
    const GridShape shape(std::vector<Coord>(d, n));
    CubeAdversary adv(shape);
    const int got = best_response(adv).value;
    const auto want = lower_cube(static_cast<std::uint64_t>(n), d);
    detail << shape.to_string() << ":" << got << "/" << want << " ";
    if (static_cast<std::uint64_t>(got) < want) {
      v.fail(shape.to_string() + ": best response " + std::to_string(got) + " < " + std::to_string(want));
    }
    const CandidateSet surface = *adv.surface();
    for (CellIndex qi = 0; qi < shape.cell_count(); ++qi) {
      if (surface.contains(qi)) continue;
      auto a = adv.clone();
      a->reply(shape.point_at(qi));
      if (!(a->candidates() == surface)) v.fail(shape.to_string() + ": off-surface " + shape.point_at(qi).to_string());
    }
  }
  v.detail = "best_response/lower_cube " + detail.str();
  return v;
}

Verdict surface_3d() {
  Verdict v;
  const auto h = plane3d_surface(GridShape{6, 5, 4});
  for (const auto& p : {Point{5, 2, 0}, Point{0, 2, 3}, Point{1, 2, 2}}) {
    if (!h.contains(p)) v.fail(p.to_string() + " missing from the 6x5x4 surface");
  }
  std::uint64_t shapes = 0;
  for (Coord a = 2; a <= 250; ++a)
    for (Coord b = 2; b <= a && a * b * 2 <= 1000; ++b)
      for (Coord c = 2; c <= b && a * b * c <= 1000; ++c) {
        const GridShape shape{a, b, c};
        const auto surface = plane3d_surface(shape);
        const Coord cap = (2 * (a - 1) + (b - 2)) / (b - 1);
        for (Coord x2 = 0; x2 < b; ++x2)
          for (Coord x3 = 0; x3 < c; ++x3) {
            Coord run = 0;
            for (Coord x1 = 0; x1 < a; ++x1) {
              run = surface.contains(Point{x1, x2, x3}) ? run + 1 : 0;
              if (run > cap) v.fail(shape.to_string() + ": run of " + std::to_string(run) + " > " + std::to_string(cap));
            }
          }
        ++shapes;
      }
  v.detail = std::to_string(shapes) + " shapes";
  return v;
}

Verdict completeness() {
  Verdict v;
  std::uint64_t matches = 0;
  std::uint64_t evaluations = 0;
  for (const auto& shape : shapes_up_to(200, 3, false)) {
    const std::string id(applicable_strategy(shape));
    // budget_d is stated for non-increasing shapes only.
    const bool budgeted = shape.is_sorted_non_increasing();
    const double budget = budgeted ? budget_d(shape) : 0.0;
    for (CellIndex ti = 0; ti < shape.cell_count(); ++ti) {
      const Point target = shape.point_at(ti);
      auto strategy = make_strategy(id, shape);
      HonestAdversary adv(shape, target);
      const auto t = run_match(*strategy, adv, target);
      ++matches;
      if (t.outcome != Outcome::Found) {
        v.fail(shape.to_string() + " target " + target.to_string() + ": " + std::string(to_string(t.outcome)));
      } else if (budgeted && t.total_queries() > budget + kTolerance) {
        v.fail(shape.to_string() + " target " + target.to_string() + ": " + std::to_string(t.total_queries()) +
               " queries > budget");
      }
    }
    if (shape.cell_count() <= 24) {
      const auto r = worst_case(*make_strategy(id, shape), {.witness = false});
      ++evaluations;
      if (!r.correct) v.fail(shape.to_string() + ": some reply sequence does not end in Found");
    }
  }
  v.detail = std::to_string(matches) + " matches, " + std::to_string(evaluations) + " full evaluations";
  return v;
}

Verdict diagonal_layout() {
  Verdict v;
  const std::set<Point> expected{Point{0, 5}, Point{1, 4}, Point{2, 3}, Point{3, 3}, Point{4, 2},
                                 Point{5, 1}, Point{6, 1}, Point{7, 0}, Point{8, 0}};
  const auto pts = diagonal_surface(GridShape{9, 6}).points();
  const std::set<Point> got(pts.begin(), pts.end());
  if (got != expected) v.fail("got " + join_points(got));
  v.detail = join_points(got);
  return v;
}

}  // namespace

int main() {
  constexpr double kSecond = 1000.0;
  run(1, "semantics duality", 30 * kSecond, semantics_duality);
  run(2, "1D ground truth", 10 * kSecond, one_dimension);
  run(3, "oracle regression", 60 * kSecond, oracle_regression);
  run(4, "sandwich", 300 * kSecond, sandwich);
  run(5, "grid2d lemma budget", 300 * kSecond, lemma_budget);
  run(6, "diagonal adversary", 120 * kSecond, diagonal_adversary);
  run(7, "cube adversary", 120 * kSecond, cube_adversary);
  run(8, "3D surface facts", 60 * kSecond, surface_3d);
  run(9, "strategy completeness", 300 * kSecond, completeness);
  run(10, "diagonal layout", 1 * kSecond, diagonal_layout);
  std::cout << (10 - failed) << "/10 criteria passed\n";
  return failed == 0 ? 0 : 1;
}
