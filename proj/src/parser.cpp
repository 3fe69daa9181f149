#include "sdistill/parser.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdistill {

int ActionSpace::label_id(const std::string& l) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == l) return static_cast<int>(i);
  }
  throw std::runtime_error("unknown dependency label: " + l);
}

std::string ActionSpace::name(int a) const {
  if (is_shift(a)) return "shift";
  const std::string& l = labels.at(label_of(a));
  return (is_left(a) ? "left:" : "right:") + l;
}

ParserState initial_parser_state(int n) {
  ParserState s;
  s.n = n;
  s.buffer_front = 1;
  s.root_shifted = false;
  return s;
}

bool action_legal(const ParserState& s, int action) {
  if (ActionSpace::is_shift(action)) return !s.buffer_empty();
  if (s.stack.size() < 2) return false;
  int i = s.stack[s.stack.size() - 2];
  int j = s.stack.back();
  if (ActionSpace::is_left(action)) return i != kRoot;
  return j != kRoot;  // Right: ROOT never becomes a dependent
}

void legal_parser_actions(const ParserState& s, const ActionSpace& as, std::vector<int>& out) {
  out.clear();
  for (int a = 0; a < as.num_actions(); ++a) {
    if (action_legal(s, a)) out.push_back(a);
  }
}

ParserState apply_action(const ParserState& s, int action) {
  if (!action_legal(s, action)) {
    throw std::runtime_error("illegal parser action " + std::to_string(action) +
                             (ActionSpace::is_shift(action) ? " (buffer empty)"
                                                           : " (stack precondition violated)"));
  }
  ParserState t = s;
  if (ActionSpace::is_shift(action)) {
    if (t.buffer_front <= t.n) {
      t.stack.push_back(t.buffer_front++);
    } else {
      t.stack.push_back(kRoot);
      t.root_shifted = true;
    }
    return t;
  }
  int i = t.stack[t.stack.size() - 2];
  int j = t.stack.back();
  int label = ActionSpace::label_of(action);
  if (ActionSpace::is_left(action)) {
    t.arcs.push_back({j, i, label});
    t.stack.erase(t.stack.end() - 2);
  } else {
    t.arcs.push_back({i, j, label});
    t.stack.pop_back();
  }
  return t;
}

bool is_projective(const GoldTree& gold,
                   std::pair<std::pair<int, int>, std::pair<int, int>>* crossing) {
  int n = gold.size();
  for (int d1 = 1; d1 <= n; ++d1) {
    int h1 = gold.head[d1];
    int lo1 = std::min(h1, d1), hi1 = std::max(h1, d1);
    for (int d2 = d1 + 1; d2 <= n; ++d2) {
      int h2 = gold.head[d2];
      int lo2 = std::min(h2, d2), hi2 = std::max(h2, d2);
      bool cross = (lo1 < lo2 && lo2 < hi1 && hi1 < hi2) ||
                   (lo2 < lo1 && lo1 < hi2 && hi2 < hi1);
      if (cross) {
        if (crossing) *crossing = {{h1, d1}, {h2, d2}};
        return false;
      }
    }
  }
  return true;
}

void validate_tree(const GoldTree& gold, const std::string& context) {
  int n = gold.size();
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    int h = gold.head[i];
    if (h < 0 || h > n) throw std::runtime_error(context + ": head out of range for token " + std::to_string(i));
    if (h == 0) ++roots;
  }
  if (roots != 1) throw std::runtime_error(context + ": expected exactly one root, found " + std::to_string(roots));
  for (int i = 1; i <= n; ++i) {
    int cur = i, steps = 0;
    while (cur != 0) {
      cur = gold.head[cur];
      if (++steps > n) throw std::runtime_error(context + ": cycle involving token " + std::to_string(i));
    }
  }
}

namespace {

// dependents of each token already attached in A
std::vector<int> gold_dependents_remaining(const ParserState& s, const GoldTree& gold) {
  std::vector<int> remaining(gold.size() + 1, 0);
  for (int d = 1; d <= gold.size(); ++d) remaining[gold.head[d]]++;
  for (const Arc& a : s.arcs) {
    if (a.head == gold.head[a.dep]) remaining[a.head]--;
  }
  return remaining;
}

}  // namespace

int static_oracle(const ParserState& s, const GoldTree& gold, const ActionSpace& as) {
  if (s.terminal()) throw std::runtime_error("static_oracle: terminal state");
  if (s.stack.size() >= 2) {
    std::vector<int> remaining = gold_dependents_remaining(s, gold);
    int i = s.stack[s.stack.size() - 2];
    int j = s.stack.back();
    if (i != kRoot && gold.head[i] == j && remaining[i] == 0) {
      return as.left(as.label_id(gold.label[i]));
    }
    if (j != kRoot && gold.head[j] == i && remaining[j] == 0) {
      return as.right(as.label_id(gold.label[j]));
    }
  }
  if (s.buffer_empty()) {
    throw std::runtime_error("static_oracle: off the reference trajectory (no gold action)");
  }
  return ActionSpace::shift();
}

GoldTree tree_from_arcs(const std::vector<Arc>& arcs, int n, const ActionSpace& as) {
  GoldTree t;
  t.head.assign(n + 1, -1);
  t.label.assign(n + 1, "");
  for (const Arc& a : arcs) {
    t.head[a.dep] = a.head;
    t.label[a.dep] = a.label >= 0 ? as.labels[a.label] : "";
  }
  return t;
}

ConllReadResult read_conll(const std::string& path, bool skip_nonprojective) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ConllReadResult result;
  Sentence sent;
  GoldTree gold;
  sent.forms = {"<root>"};
  sent.upos = {"<root>"};
  gold.head = {-1};
  gold.label = {""};
  int line_no = 0;
  int sent_no = 1;

  auto flush = [&]() {
    if (sent.size() == 0) return;
    validate_tree(gold, "sentence " + std::to_string(sent_no));
    if (!is_projective(gold)) {
      if (skip_nonprojective) {
        result.skipped_nonprojective++;
      } else {
        std::pair<std::pair<int, int>, std::pair<int, int>> cr;
        is_projective(gold, &cr);
        throw std::runtime_error(
            "sentence " + std::to_string(sent_no) + " is non-projective: arcs " +
            std::to_string(cr.first.first) + "->" + std::to_string(cr.first.second) + " and " +
            std::to_string(cr.second.first) + "->" + std::to_string(cr.second.second) + " cross");
      }
    } else {
      result.sentences.emplace_back(sent, gold);
    }
    sent_no++;
    sent.forms = {"<root>"};
    sent.upos = {"<root>"};
    gold.head = {-1};
    gold.label = {""};
  };

  std::string line;
  while (std::getline(in, line)) {
    line_no++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() < 8) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected >= 8 tab-separated columns");
    }
    // skip multiword-token ranges (1-2) and empty nodes (1.1)
    if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos) continue;
    int id, head;
    try {
      id = std::stoi(cols[0]);
      head = std::stoi(cols[6]);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": non-integer ID or HEAD column");
    }
    if (id != sent.size() + 1) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": token ids not consecutive");
    }
    sent.forms.push_back(cols[1]);
    sent.upos.push_back(cols[3]);
    gold.head.push_back(head);
    gold.label.push_back(cols[7]);
  }
  flush();
  return result;
}

void write_conll(const std::string& path, const std::vector<std::pair<Sentence, GoldTree>>& data) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& [sent, gold] : data) {
    for (int i = 1; i <= sent.size(); ++i) {
      out << i << '\t' << sent.forms[i] << "\t_\t" << sent.upos[i] << "\t_\t_\t"
          << gold.head[i] << '\t' << gold.label[i] << "\t_\t_\n";
    }
    out << '\n';
  }
}

std::vector<LasCounts> las_counts(const std::vector<std::vector<Arc>>& predicted,
                                  const std::vector<std::pair<Sentence, GoldTree>>& gold,
                                  const ActionSpace& as,
                                  const std::set<std::string>& punct_tags) {
  if (predicted.size() != gold.size()) throw std::runtime_error("las: prediction/gold size mismatch");
  std::vector<LasCounts> out(gold.size());
  for (std::size_t k = 0; k < gold.size(); ++k) {
    const auto& [sent, tree] = gold[k];
    std::vector<int> pred_head(sent.size() + 1, -1);
    std::vector<int> pred_label(sent.size() + 1, -1);
    for (const Arc& a : predicted[k]) {
      pred_head[a.dep] = a.head;
      pred_label[a.dep] = a.label;
    }
    for (int i = 1; i <= sent.size(); ++i) {
      if (punct_tags.count(sent.upos[i])) continue;
      if (pred_head[i] < 0) throw std::runtime_error("las: token without predicted head");
      out[k].total++;
      if (pred_head[i] == tree.head[i] && pred_label[i] >= 0 &&
          as.labels[pred_label[i]] == tree.label[i]) {
        out[k].correct++;
      }
    }
  }
  return out;
}

double las(const std::vector<std::vector<Arc>>& predicted,
           const std::vector<std::pair<Sentence, GoldTree>>& gold,
           const ActionSpace& as,
           const std::set<std::string>& punct_tags) {
  long correct = 0, total = 0;
  for (const LasCounts& c : las_counts(predicted, gold, as, punct_tags)) {
    correct += c.correct;
    total += c.total;
  }
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace sdistill
