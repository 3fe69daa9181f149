#include "sdistill/dynamic_oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace sdistill {

namespace {

std::vector<int> memo_key(const ParserState& s) {
  std::vector<int> key = s.stack;
  key.push_back(-1);
  key.push_back(s.buffer_front);
  key.push_back(s.root_shifted ? 1 : 0);
  return key;
}

int built_correct(const ParserState& s, const GoldTree& gold, const std::vector<int>& gold_label_id) {
  int c = 0;
  for (const Arc& a : s.arcs) {
    if (gold.head[a.dep] == a.head && a.label == gold_label_id[a.dep]) ++c;
  }
  return c;
}

}  // namespace

DynamicOracle::DynamicOracle(const GoldTree& gold, const ActionSpace& as)
    : gold_(gold), as_(as) {
  gold_label_id_.assign(gold.size() + 1, -1);
  for (int d = 1; d <= gold.size(); ++d) gold_label_id_[d] = as.label_id(gold.label[d]);
}

int DynamicOracle::best_future(const ParserState& s) {
  if (s.terminal()) return 0;
  auto key = memo_key(s);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  int best = -1;
  // unlabeled recursion: the recoverable arc count does not depend on labels
  if (!s.buffer_empty()) {
    best = std::max(best, best_future(apply_action(s, ActionSpace::shift())));
  }
  if (s.stack.size() >= 2) {
    int i = s.stack[s.stack.size() - 2];
    int j = s.stack.back();
    if (i != kRoot) {
      int gain = gold_.head[i] == j ? 1 : 0;
      best = std::max(best, gain + best_future(apply_action(s, as_.left(0))));
    }
    if (j != kRoot) {
      int gain = gold_.head[j] == i ? 1 : 0;
      best = std::max(best, gain + best_future(apply_action(s, as_.right(0))));
    }
  }
  if (best < 0) throw std::runtime_error("dynamic oracle: stuck non-terminal state");
  memo_[key] = best;
  return best;
}

int DynamicOracle::state_loss(const ParserState& s) {
  return gold_.size() - built_correct(s, gold_, gold_label_id_) - best_future(s);
}

std::vector<int> DynamicOracle::oracle_actions(const ParserState& s) {
  if (s.terminal()) throw std::runtime_error("dynamic oracle: terminal state");
  // loss(after a) = |gold| - built_correct(s) - immediate labeled gain - future.
  // built_correct(s) is shared, so minimize -(gain + future).
  int best = -1;
  std::vector<int> out;
  auto consider = [&](int action, int value) {
    if (value > best) {
      best = value;
      out.clear();
    }
    if (value == best) out.push_back(action);
  };
  if (!s.buffer_empty()) {
    consider(ActionSpace::shift(), best_future(apply_action(s, ActionSpace::shift())));
  }
  if (s.stack.size() >= 2) {
    int i = s.stack[s.stack.size() - 2];
    int j = s.stack.back();
    int num_labels = static_cast<int>(as_.labels.size());
    if (i != kRoot) {
      int future = best_future(apply_action(s, as_.left(0)));
      if (gold_.head[i] == j) {
        consider(as_.left(gold_label_id_[i]), 1 + future);
      } else {
        // non-gold pair: every label is equally lossy
        for (int l = 0; l < num_labels; ++l) consider(as_.left(l), future);
      }
    }
    if (j != kRoot) {
      int future = best_future(apply_action(s, as_.right(0)));
      if (gold_.head[j] == i) {
        consider(as_.right(gold_label_id_[j]), 1 + future);
      } else {
        for (int l = 0; l < num_labels; ++l) consider(as_.right(l), future);
      }
    }
  }
  if (out.empty()) throw std::runtime_error("dynamic oracle: no legal action");
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sdistill
