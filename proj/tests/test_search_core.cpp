#include <doctest.h>

#include <cmath>
#include <map>

#include "sdistill/distribution.hpp"
#include "sdistill/search.hpp"
#include "sdistill/tasks.hpp"

using namespace sdistill;

namespace {

ActionDistribution make_dist(const std::vector<double>& probs) {
  ActionDistribution d;
  d.probs = probs;
  for (int a = 0; a < static_cast<int>(probs.size()); ++a) {
    if (probs[a] > 0.0) d.legal.push_back(a);
  }
  return d;
}

ParserTask tiny_parser_task() {
  std::vector<std::pair<Sentence, GoldTree>> corpus;
  Sentence s;
  s.forms = {"<root>", "a", "b"};
  s.upos = {"<root>", "X", "Y"};
  GoldTree g;
  g.head = {-1, 0, 1};
  g.label = {"", "root", "dep"};
  corpus.emplace_back(s, g);
  return ParserTask::from_corpus(corpus);
}

}  // namespace

TEST_CASE("anneal T=1 is the identity") {
  ActionDistribution q = make_dist({0.5, 0.2, 0.0, 0.3});
  ActionDistribution a = anneal(q, 1.0);
  for (std::size_t i = 0; i < q.probs.size(); ++i) {
    CHECK(a.probs[i] == doctest::Approx(q.probs[i]).epsilon(1e-12));
  }
  CHECK(a.probs[2] == 0.0);
}

TEST_CASE("anneal hand value") {
  // [0.9, 0.1] at T = 0.5 -> [0.81, 0.01] / 0.82
  ActionDistribution a = anneal(make_dist({0.9, 0.1}), 0.5);
  CHECK(a.probs[0] == doctest::Approx(0.81 / 0.82).epsilon(1e-9));
  CHECK(a.probs[1] == doctest::Approx(0.01 / 0.82).epsilon(1e-9));
}

TEST_CASE("anneal keeps uniform uniform and preserves the argmax") {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 2 + static_cast<int>(rng.index(6));
    std::vector<double> p(n);
    double z = 0.0;
    for (double& v : p) {
      v = rng.uniform() + 1e-4;
      z += v;
    }
    for (double& v : p) v /= z;
    ActionDistribution q = make_dist(p);
    double t_hi = 0.2 + rng.uniform() * 2.0;
    double t_lo = t_hi * (0.1 + 0.8 * rng.uniform());
    ActionDistribution hi = anneal(q, t_hi);
    ActionDistribution lo = anneal(q, t_lo);
    CHECK(argmax_action(hi) == argmax_action(q));
    CHECK(argmax_action(lo) == argmax_action(q));
    // monotone sharpening: smaller T concentrates the max
    double max_hi = *std::max_element(hi.probs.begin(), hi.probs.end());
    double max_lo = *std::max_element(lo.probs.begin(), lo.probs.end());
    CHECK(max_lo >= max_hi - 1e-12);
    CHECK(hi.mass() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("greedy tie-break picks the smallest action id") {
  ActionDistribution d = make_dist({0.25, 0.25, 0.25, 0.25});
  CHECK(argmax_action(d) == 0);
  d = make_dist({0.1, 0.45, 0.45});
  CHECK(argmax_action(d) == 1);
}

TEST_CASE("sampling matches uniform frequencies") {
  ActionDistribution d = make_dist({1.0 / 3, 1.0 / 3, 1.0 / 3});
  Rng rng(42);
  std::map<int, int> counts;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) counts[sample_action(d, rng)]++;
  for (int a = 0; a < 3; ++a) {
    double freq = static_cast<double>(counts[a]) / draws;
    CHECK(freq == doctest::Approx(1.0 / 3).epsilon(0.06));  // 0.333 +/- 0.02
  }
}

TEST_CASE("reference rollout of a 1-word sentence") {
  ParserTask task = tiny_parser_task();
  Sentence s;
  s.forms = {"<root>", "a"};
  s.upos = {"<root>", "X"};
  GoldTree g;
  g.head = {-1, 0};
  g.label = {"", "root"};
  auto r = rollout_reference(task, s, g);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[0].reference_action == ActionSpace::shift());
  CHECK(r.records[1].reference_action == ActionSpace::shift());
  CHECK(ActionSpace::is_left(r.records[2].reference_action));
  CHECK(r.final_state.terminal());
  for (const auto& rec : r.records) CHECK(rec.origin == Origin::kReference);
}

TEST_CASE("reference rollout of a 2-word chain uses the canonical order") {
  ParserTask task = tiny_parser_task();
  Sentence s;
  s.forms = {"<root>", "a", "b"};
  s.upos = {"<root>", "X", "Y"};
  GoldTree g;
  g.head = {-1, 0, 1};
  g.label = {"", "root", "dep"};
  auto r = rollout_reference(task, s, g);
  REQUIRE(r.records.size() == 5);
  // Shift, Shift, Right, Shift, Left
  CHECK(ActionSpace::is_shift(r.records[0].reference_action));
  CHECK(ActionSpace::is_shift(r.records[1].reference_action));
  CHECK(ActionSpace::is_right(r.records[2].reference_action));
  CHECK(ActionSpace::is_shift(r.records[3].reference_action));
  CHECK(ActionSpace::is_left(r.records[4].reference_action));
}

TEST_CASE("reference rollout rejects a non-projective tree") {
  ParserTask task = tiny_parser_task();
  Sentence s;
  s.forms = {"<root>", "a", "b", "c", "d"};
  s.upos = {"<root>", "X", "X", "X", "X"};
  GoldTree g;
  g.head = {-1, 3, 4, 0, 3};  // arcs 3->1 and 4->2 cross
  g.label = {"", "dep", "dep", "root", "dep"};
  CHECK_THROWS_WITH_AS(rollout_reference(task, s, g),
                       doctest::Contains("non-projective"), std::runtime_error);
}

TEST_CASE("exploration rollouts are seed-deterministic and anneal to greedy") {
  ParserTask task = tiny_parser_task();
  Sentence s;
  s.forms = {"<root>", "a", "b"};
  s.upos = {"<root>", "X", "Y"};
  auto uniform_policy = [&](const Sentence&, const ParserState& st) {
    std::vector<int> legal;
    task.legal_actions(st, legal);
    ActionDistribution d;
    d.probs.assign(task.num_actions(), 0.0);
    d.legal = legal;
    for (int a : legal) d.probs[a] = 1.0 / legal.size();
    return d;
  };
  Rng r1(99), r2(99);
  auto a = rollout_exploration(task, s, uniform_policy, 1.0, r1);
  auto b = rollout_exploration(task, s, uniform_policy, 1.0, r2);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].state.stack == b.records[i].state.stack);
    CHECK(a.records[i].state.arcs == b.records[i].state.arcs);
    CHECK(a.records[i].origin == Origin::kExploration);
    CHECK(a.records[i].soft_target == b.records[i].soft_target);
  }

  // biased policy + tiny temperature follows the greedy trajectory
  auto biased = [&](const Sentence& x, const ParserState& st) {
    ActionDistribution d = uniform_policy(x, st);
    double bump = 0.5, z = 0.0;
    d.probs[d.legal.front()] += bump;
    for (int act : d.legal) z += d.probs[act];
    for (int act : d.legal) d.probs[act] /= z;
    return d;
  };
  Rng r3(123);
  auto cold = rollout_exploration(task, s, biased, 1e-6, r3);
  ParserState greedy = decode_greedy(task, s, biased);
  CHECK(cold.final_state.arcs == greedy.arcs);
}

TEST_CASE("every parser rollout takes 2(n+1)-1 actions") {
  ParserTask task = tiny_parser_task();
  for (int n = 1; n <= 4; ++n) {
    Sentence s;
    s.forms = {"<root>"};
    s.upos = {"<root>"};
    GoldTree g;
    g.head = {-1};
    g.label = {""};
    for (int i = 1; i <= n; ++i) {  // left-branching chain off token 1
      s.forms.push_back("a");
      s.upos.push_back("X");
      g.head.push_back(i == 1 ? 0 : i - 1);
      g.label.push_back(i == 1 ? "root" : "dep");
    }
    auto r = rollout_reference(task, s, g);
    CHECK(static_cast<int>(r.records.size()) == 2 * (n + 1) - 1);
  }
}
