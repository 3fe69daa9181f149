#ifndef SDISTILL_PARSER_HPP
#define SDISTILL_PARSER_HPP

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace sdistill {

constexpr int kRoot = 0;

struct Sentence {
  std::vector<std::string> forms;  // 1-based; index 0 unused (ROOT)
  std::vector<std::string> upos;
  int size() const { return static_cast<int>(forms.size()) - 1; }
};

struct GoldTree {
  std::vector<int> head;            // 1-based; head[i] in [0, n]
  std::vector<std::string> label;   // 1-based
  int size() const { return static_cast<int>(head.size()) - 1; }
};

struct Arc {
  int head;
  int dep;
  int label;  // label id; -1 when unlabeled
  auto operator<=>(const Arc&) const = default;
};

// (sigma, beta, A). Buffer is the post-root convention [1..n, ROOT] so the
// final state [ROOT] on the stack is reachable.
struct ParserState {
  std::vector<int> stack;   // top = back()
  int buffer_front = 1;     // buffer is [buffer_front..n] then ROOT
  bool root_shifted = false;
  std::vector<Arc> arcs;
  int n = 0;  // number of real tokens

  bool buffer_empty() const { return root_shifted && buffer_front > n; }
  int buffer_size() const { return (n - buffer_front + 1) + (root_shifted ? 0 : 1); }
  int buffer_next() const { return buffer_front <= n ? buffer_front : kRoot; }
  bool terminal() const {
    return buffer_empty() && stack.size() == 1 && stack[0] == kRoot;
  }
};

// Action encoding: 0 = Shift, 1 + 2*l = Left(l), 2 + 2*l = Right(l).
struct ActionSpace {
  std::vector<std::string> labels;

  int num_actions() const { return 1 + 2 * static_cast<int>(labels.size()); }
  static int shift() { return 0; }
  int left(int label) const { return 1 + 2 * label; }
  int right(int label) const { return 2 + 2 * label; }
  static bool is_shift(int a) { return a == 0; }
  static bool is_left(int a) { return a > 0 && a % 2 == 1; }
  static bool is_right(int a) { return a > 0 && a % 2 == 0; }
  static int label_of(int a) { return (a - 1) / 2; }
  int label_id(const std::string& l) const;
  std::string name(int a) const;
};

ParserState initial_parser_state(int n);
bool action_legal(const ParserState& s, int action);
void legal_parser_actions(const ParserState& s, const ActionSpace& as, std::vector<int>& out);
ParserState apply_action(const ParserState& s, int action);

// Crossing-arc check; fills `crossing` with the first offending pair.
bool is_projective(const GoldTree& gold, std::pair<std::pair<int, int>, std::pair<int, int>>* crossing = nullptr);

// Tree well-formedness: single root, acyclic, heads in range.
void validate_tree(const GoldTree& gold, const std::string& context);

// Canonical arc-standard oracle: attach as soon as the would-be dependent has
// collected all of its gold dependents, otherwise shift. Only valid on the
// reference trajectory.
int static_oracle(const ParserState& s, const GoldTree& gold, const ActionSpace& as);

// Rebuild head/label vectors from a terminal state's arc set.
GoldTree tree_from_arcs(const std::vector<Arc>& arcs, int n, const ActionSpace& as);

struct ConllReadResult {
  std::vector<std::pair<Sentence, GoldTree>> sentences;
  int skipped_nonprojective = 0;
};

ConllReadResult read_conll(const std::string& path, bool skip_nonprojective);
void write_conll(const std::string& path, const std::vector<std::pair<Sentence, GoldTree>>& data);

// Labeled attachment score in [0, 100], excluding tokens whose UPOS is in
// `punct_tags` (default {"PUNCT"}).
double las(const std::vector<std::vector<Arc>>& predicted,
           const std::vector<std::pair<Sentence, GoldTree>>& gold,
           const ActionSpace& as,
           const std::set<std::string>& punct_tags = {"PUNCT"});

// Per-sentence correct/total counts, for bootstrap resampling.
struct LasCounts {
  long correct = 0;
  long total = 0;
};
std::vector<LasCounts> las_counts(const std::vector<std::vector<Arc>>& predicted,
                                  const std::vector<std::pair<Sentence, GoldTree>>& gold,
                                  const ActionSpace& as,
                                  const std::set<std::string>& punct_tags = {"PUNCT"});

}  // namespace sdistill

#endif
