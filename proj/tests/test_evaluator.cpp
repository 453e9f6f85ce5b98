#include <doctest.h>

#include "mdsearch/bounds.hpp"
#include "mdsearch/errors.hpp"
#include "mdsearch/evaluator.hpp"
#include "mdsearch/solver.hpp"
#include "mdsearch/strategies.hpp"

using namespace mdsearch;

namespace {

// Always queries the same point.
class StuckStrategy final : public Strategy {
 public:
  explicit StuckStrategy(const GridShape& shape) : shape_(shape) {}
  std::string_view id() const override { return "stuck"; }
  const GridShape& shape() const override { return shape_; }
  std::optional<Point> next() const override { return shape_.point_at(0); }
  void observe(const Reply&) override {}
  std::string key() const override { return "stuck"; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<StuckStrategy>(*this); }

 private:
  GridShape shape_;
};

class SilentStrategy final : public Strategy {
 public:
  explicit SilentStrategy(const GridShape& shape) : shape_(shape) {}
  std::string_view id() const override { return "silent"; }
  const GridShape& shape() const override { return shape_; }
  std::optional<Point> next() const override { return std::nullopt; }
  void observe(const Reply&) override {}
  std::string key() const override { return "silent"; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<SilentStrategy>(*this); }

 private:
  GridShape shape_;
};

// Answers with a fixed reply regardless of legality.
class ScriptedAdversary final : public Adversary {
 public:
  ScriptedAdversary(const GridShape& shape, Reply reply) : Adversary(CandidateSet::full(shape)), reply_(reply) {}
  std::string_view id() const override { return "scripted"; }
  Reply reply(const Point&) override { return reply_; }
  std::unique_ptr<Adversary> clone() const override { return std::make_unique<ScriptedAdversary>(*this); }

 private:
  Reply reply_;
};

}  // namespace

TEST_CASE("binary search trace against an honest target") {
  Binary1DStrategy s(GridShape{8});
  HonestAdversary adv(GridShape{8}, Point{5});
  const auto t = run_match(s, adv, Point{5});
  REQUIRE(t.events.size() == 2);
  CHECK(t.events[0] == TranscriptEvent{Point{3}, Reply::corner(ReplyCorner{0})});
  CHECK(t.events[1] == TranscriptEvent{Point{5}, Reply::found()});
  CHECK(t.outcome == Outcome::Found);
}

TEST_CASE("a single cell takes one query") {
  for (const auto& shape : {GridShape{1}, GridShape{1, 1}, GridShape{1, 1, 1}}) {
    auto s = make_strategy(applicable_strategy(shape), shape);
    GreedyAdversary adv(shape);
    const auto t = run_match(*s, adv);
    CHECK(t.total_queries() == 1);
    CHECK(t.outcome == Outcome::Found);
  }
}

TEST_CASE("grid2d against the optimal adversary on 2 x 2") {
  auto solver = std::make_shared<ExactSolver>(GridShape{2, 2});
  solver->solve();
  Grid2DStrategy s(GridShape{2, 2});
  auto adv = extract_optimal_adversary(solver);
  const auto t = run_match(s, *adv);
  CHECK(t.total_queries() == 4);
  CHECK(t.outcome == Outcome::Found);
}

TEST_CASE("illegal replies are protocol violations") {
  const GridShape shape{3, 3};
  {
    Grid2DStrategy s(shape);
    ScriptedAdversary adv(shape, Reply::found());
    CHECK_THROWS_AS(run_match(s, adv), ProtocolError);
  }
  {
    // "t < 1" leaves {0}; "t < 0" at the next query leaves nothing.
    Binary1DStrategy s(GridShape{3});
    ScriptedAdversary adv(GridShape{3}, Reply::corner(ReplyCorner{1}));
    CHECK_THROWS_AS(run_match(s, adv), ProtocolError);
  }
  {
    Grid2DStrategy s(shape);
    HonestAdversary adv(shape, Point{2, 2});
    CHECK_THROWS_AS(run_match(s, adv, Point{0, 0}), ArgumentError);
  }
}

TEST_CASE("depth cap and exhaustion are reported") {
  const GridShape shape{3, 2};
  StuckStrategy stuck(shape);
  GreedyAdversary adv(shape);
  const auto t = run_match(stuck, adv);
  CHECK(t.outcome == Outcome::DepthCapped);
  CHECK(t.total_queries() == depth_cap(shape));

  SilentStrategy silent(shape);
  GreedyAdversary adv2(shape);
  CHECK(run_match(silent, adv2).outcome == Outcome::Exhausted);

  const auto r = worst_case(SilentStrategy(shape));
  CHECK_FALSE(r.correct);
}

TEST_CASE("transcripts round-trip through JSON lines") {
  const GridShape shape{6, 5, 4};
  SlicingStrategy s(shape);
  HonestAdversary adv(shape, Point{1, 2, 2});
  const auto t = run_match(s, adv, Point{1, 2, 2});
  const std::string text = t.to_jsonl();
  CHECK(text.rfind("{\"adversary\":\"honest\",\"outcome\":\"found\"", 0) == 0);
  CHECK(Transcript::from_jsonl(text) == t);
  CHECK_NOTHROW(replay_check(t));
  CHECK(replays_identically(t));

  GreedyAdversary greedy(shape);
  SlicingStrategy s2(shape);
  const auto g = run_match(s2, greedy);
  CHECK(g.to_jsonl().find("\"target\":null") != std::string::npos);
  CHECK(Transcript::from_jsonl(g.to_jsonl()) == g);

  CHECK_THROWS_AS(Transcript::from_jsonl(""), ArgumentError);
  CHECK_THROWS_AS(Transcript::from_jsonl("{not json"), ArgumentError);
}

TEST_CASE("replay catches tampered transcripts") {
  const GridShape shape{8};
  Binary1DStrategy s(shape);
  HonestAdversary adv(shape, Point{5});
  auto t = run_match(s, adv, Point{5});
  t.events[0].reply = Reply::corner(ReplyCorner{1});
  CHECK_THROWS_AS(replay_check(t), ProtocolError);
  CHECK_FALSE(replays_identically(t));
}

TEST_CASE("worst case evaluation and witnesses") {
  const auto r = worst_case(Binary1DStrategy(GridShape{8}));
  CHECK(r.worst_case == 4);
  CHECK(r.correct);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->total_queries() == 4);
  CHECK_NOTHROW(replay_check(*r.witness));
  CHECK(replays_identically(*r.witness));

  const auto g = worst_case(Grid2DStrategy(GridShape{8, 3}));
  CHECK(g.correct);
  CHECK(g.worst_case <= 11);
  REQUIRE(g.witness.has_value());
  CHECK(static_cast<int>(g.witness->total_queries()) == g.worst_case);
  CHECK(g.witness->outcome == Outcome::Found);

  const auto s = worst_case(SlicingStrategy(GridShape{4, 2, 2}));
  CHECK(s.correct);
  CHECK(s.worst_case >= 3);
  CHECK(within_upper(static_cast<std::uint64_t>(s.worst_case), budget_d(GridShape{4, 2, 2})));

  CHECK_THROWS_AS(worst_case(Grid2DStrategy(GridShape{16, 7}), {.max_states = 100, .witness = false}),
                  ResourceError);
}

TEST_CASE("fixed strategies never beat optimal play") {
  for (const auto& shape : {GridShape{2, 2}, GridShape{4, 2}, GridShape{3, 3}, GridShape{2, 2, 2}, GridShape{5, 3}}) {
    const auto r = worst_case(*make_strategy(applicable_strategy(shape), shape));
    CHECK(r.worst_case >= exact_qc(shape).value);
  }
}

TEST_CASE("honest matches find every target and keep it a candidate") {
  for (const auto& shape : {GridShape{7, 5}, GridShape{4, 3, 3}, GridShape{3, 3, 2, 2}}) {
    for (CellIndex ti = 0; ti < shape.cell_count(); ++ti) {
      const Point target = shape.point_at(ti);
      auto s = make_strategy(applicable_strategy(shape), shape);
      HonestAdversary adv(shape, target);
      const auto t = run_match(*s, adv, target);
      CHECK(t.outcome == Outcome::Found);
      CHECK(t.events.back().query == target);
      CHECK(adv.candidates().contains(target));
    }
  }
}

TEST_CASE("construction matches stay consistent") {
  const std::pair<const char*, GridShape> cases[] = {
      {"diagonal", GridShape{9, 6}}, {"plane3d", GridShape{6, 5, 4}}, {"cube", GridShape{3, 3, 3}}};
  for (const auto& [id, shape] : cases) {
    auto s = make_strategy(applicable_strategy(shape), shape);
    auto adv = make_adversary(id, shape);
    const auto t = run_match(*s, *adv);
    CHECK(t.outcome == Outcome::Found);
    CHECK_NOTHROW(replay_check(t));
    const Point last = t.events.back().query;
    for (std::size_t i = 0; i + 1 < t.events.size(); ++i) {
      CHECK(is_compatible(last, t.events[i].query, t.events[i].reply.corner()));
    }
  }
}
