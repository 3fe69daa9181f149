#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "sdistill/parser.hpp"
#include "sdistill/search.hpp"
#include "test_oracles.hpp"

using namespace sdistill;

namespace {

ActionSpace two_labels() {
  ActionSpace as;
  as.labels = {"dep", "root"};
  return as;
}

GoldTree tree_from_heads(const std::vector<int>& head, const ActionSpace& as) {
  GoldTree g;
  g.head = head;
  g.label.assign(head.size(), "dep");
  g.label[0] = "";
  for (std::size_t i = 1; i < head.size(); ++i) {
    if (head[i] == 0) g.label[i] = "root";
  }
  (void)as;
  return g;
}

}  // namespace

TEST_CASE("shift moves the buffer front onto the stack") {
  ParserState s = initial_parser_state(3);
  CHECK(s.buffer_size() == 4);  // 1,2,3,ROOT
  ParserState t = apply_action(s, ActionSpace::shift());
  CHECK(t.stack == std::vector<int>{1});
  CHECK(t.buffer_front == 2);
  CHECK(t.arcs.empty());
}

TEST_CASE("left adds head(top) -> second and pops the second") {
  ActionSpace as = two_labels();
  ParserState s = initial_parser_state(2);
  s = apply_action(s, ActionSpace::shift());
  s = apply_action(s, ActionSpace::shift());
  REQUIRE(s.stack == std::vector<int>{1, 2});
  ParserState t = apply_action(s, as.left(0));
  CHECK(t.stack == std::vector<int>{2});
  REQUIRE(t.arcs.size() == 1);
  CHECK(t.arcs[0].head == 2);
  CHECK(t.arcs[0].dep == 1);
  CHECK(t.arcs[0].label == 0);
}

TEST_CASE("right adds second -> top and pops the top") {
  ActionSpace as = two_labels();
  ParserState s = initial_parser_state(2);
  s = apply_action(s, ActionSpace::shift());
  s = apply_action(s, ActionSpace::shift());
  ParserState t = apply_action(s, as.right(1));
  CHECK(t.stack == std::vector<int>{1});
  REQUIRE(t.arcs.size() == 1);
  CHECK(t.arcs[0].head == 1);
  CHECK(t.arcs[0].dep == 2);
}

TEST_CASE("terminal state rejects every action") {
  ActionSpace as = two_labels();
  ParserState s = initial_parser_state(1);
  s = apply_action(s, ActionSpace::shift());
  s = apply_action(s, ActionSpace::shift());  // ROOT
  s = apply_action(s, as.left(1));
  REQUIRE(s.terminal());
  for (int a = 0; a < as.num_actions(); ++a) {
    CHECK_THROWS_AS(apply_action(s, a), std::runtime_error);
  }
}

TEST_CASE("ROOT is never attached as a dependent") {
  ParserState s = initial_parser_state(1);
  s = apply_action(s, ActionSpace::shift());
  s = apply_action(s, ActionSpace::shift());
  ActionSpace as = two_labels();
  // stack = [1, ROOT]: Right would make ROOT a dependent
  CHECK_FALSE(action_legal(s, as.right(0)));
  CHECK(action_legal(s, as.left(0)));
}

TEST_CASE("apply preserves the token partition") {
  ActionSpace as = two_labels();
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng.index(6));
    ParserState s = initial_parser_state(n);
    while (!s.terminal()) {
      std::vector<int> legal;
      legal_parser_actions(s, as, legal);
      REQUIRE(!legal.empty());
      s = apply_action(s, legal[rng.index(legal.size())]);
      // stack + remaining buffer + reduced dependents = {0..n}
      std::vector<bool> seen(n + 1, false);
      for (int tok : s.stack) {
        CHECK(!seen[tok]);
        seen[tok] = true;
      }
      for (int b = s.buffer_front; b <= n; ++b) {
        CHECK(!seen[b]);
        seen[b] = true;
      }
      if (!s.root_shifted) seen[0] = true;
      std::vector<int> headed(n + 1, 0);
      for (const Arc& a : s.arcs) {
        CHECK(!seen[a.dep]);
        seen[a.dep] = true;
        headed[a.dep]++;
        CHECK(headed[a.dep] == 1);  // at most one head per token
      }
      for (int i = 0; i <= n; ++i) CHECK(seen[i]);
    }
  }
}

TEST_CASE("static oracle: direct rule and initial shift") {
  ActionSpace as = two_labels();
  GoldTree g = tree_from_heads({-1, 2, 0}, as);
  ParserState s = initial_parser_state(2);
  CHECK(ActionSpace::is_shift(static_oracle(s, g, as)));
  s = apply_action(s, ActionSpace::shift());
  s = apply_action(s, ActionSpace::shift());
  // sigma = [1,2], head(1)=2, token 1 childless -> Left
  int a = static_oracle(s, g, as);
  CHECK(ActionSpace::is_left(a));
  CHECK(as.labels[ActionSpace::label_of(a)] == "dep");
}

TEST_CASE("static oracle round-trips every projective tree up to n=5") {
  ActionSpace as = two_labels();
  for (int n = 1; n <= 5; ++n) {
    auto trees = testing::enumerate_projective_trees(n);
    CHECK(!trees.empty());
    for (const auto& head : trees) {
      GoldTree gold = tree_from_heads(head, as);
      ParserState s = initial_parser_state(n);
      int steps = 0;
      while (!s.terminal()) {
        s = apply_action(s, static_oracle(s, gold, as));
        REQUIRE(++steps <= 2 * (n + 1));
      }
      CHECK(steps == 2 * (n + 1) - 1);
      GoldTree rebuilt = tree_from_arcs(s.arcs, n, as);
      CHECK(rebuilt.head == gold.head);
      CHECK(rebuilt.label == gold.label);
    }
  }
}

TEST_CASE("read_conll parses a small file and skips comments") {
  const char* path = "test_conll_tmp.conllu";
  {
    std::ofstream out(path);
    out << "# a comment\n"
        << "1\tHello\t_\tINTJ\t_\t_\t2\tdiscourse\t_\t_\n"
        << "2\tworld\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"
        << "\n"
        << "1\tok\t_\tINTJ\t_\t_\t0\troot\t_\t_\n";
  }
  auto result = read_conll(path, false);
  REQUIRE(result.sentences.size() == 2);
  const auto& [sent, gold] = result.sentences[0];
  CHECK(sent.forms[1] == "Hello");
  CHECK(sent.upos[2] == "NOUN");
  CHECK(gold.head[1] == 2);
  CHECK(gold.head[2] == 0);
  CHECK(gold.label[2] == "root");
  std::remove(path);
}

TEST_CASE("read_conll reports malformed input with line numbers") {
  const char* path = "test_conll_bad.conllu";
  {
    std::ofstream out(path);
    out << "1\tword\t_\tNOUN\t_\t_\tX\troot\t_\t_\n\n";
  }
  CHECK_THROWS_WITH_AS(read_conll(path, false), doctest::Contains(":1:"), std::runtime_error);
  std::remove(path);
}

TEST_CASE("read_conll skip-nonprojective filter") {
  const char* path = "test_conll_np.conllu";
  {
    std::ofstream out(path);
    // projective sentence
    out << "1\ta\t_\tX\t_\t_\t0\troot\t_\t_\n\n";
    // non-projective: 3->1 crosses 4->2
    out << "1\ta\t_\tX\t_\t_\t3\tdep\t_\t_\n"
        << "2\tb\t_\tX\t_\t_\t4\tdep\t_\t_\n"
        << "3\tc\t_\tX\t_\t_\t0\troot\t_\t_\n"
        << "4\td\t_\tX\t_\t_\t3\tdep\t_\t_\n\n";
  }
  auto result = read_conll(path, true);
  CHECK(result.sentences.size() == 1);
  CHECK(result.skipped_nonprojective == 1);
  CHECK_THROWS_WITH_AS(read_conll(path, false), doctest::Contains("non-projective"),
                       std::runtime_error);
  std::remove(path);
}

TEST_CASE("las hand counts") {
  ActionSpace as = two_labels();
  std::vector<std::pair<Sentence, GoldTree>> data;
  Sentence sent;
  sent.forms = {"<root>", "a", "b", "c", "d", "."};
  sent.upos = {"<root>", "X", "X", "X", "X", "PUNCT"};
  GoldTree gold;
  gold.head = {-1, 2, 0, 2, 2, 2};
  gold.label = {"", "dep", "root", "dep", "dep", "dep"};
  data.emplace_back(sent, gold);

  // 2 tokens fully correct, 1 correct head / wrong label, 1 wrong head;
  // punctuation correct but excluded
  std::vector<Arc> pred = {
      {2, 1, as.label_id("dep")},   // correct
      {0, 2, as.label_id("root")},  // correct
      {2, 3, as.label_id("root")},  // head right, label wrong
      {1, 4, as.label_id("dep")},   // head wrong
      {2, 5, as.label_id("dep")},   // punctuation, ignored
  };
  CHECK(las({pred}, data, as) == doctest::Approx(50.0));

  // identity prediction scores 100, disjoint scores 0
  std::vector<Arc> exact = {{2, 1, 0}, {0, 2, 1}, {2, 3, 0}, {2, 4, 0}, {2, 5, 0}};
  CHECK(las({exact}, data, as) == doctest::Approx(100.0));
  std::vector<Arc> wrong = {{3, 1, 0}, {1, 2, 0}, {4, 3, 0}, {3, 4, 0}, {2, 5, 0}};
  CHECK(las({wrong}, data, as) == doctest::Approx(0.0));
}
