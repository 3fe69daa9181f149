#ifndef SDISTILL_TASKS_HPP
#define SDISTILL_TASKS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "sdistill/model.hpp"
#include "sdistill/parser.hpp"
#include "sdistill/transducer.hpp"

namespace sdistill {

// ---------------------------------------------------------------------------
// Parsing

struct ParserCorpus {
  std::vector<std::pair<Sentence, GoldTree>> data;
};

// Search-task adapter for the arc-standard system. Owns the action space and
// the feature vocabularies shared by all models trained on this corpus.
class ParserTask {
 public:
  using Input = Sentence;
  using Gold = GoldTree;
  using State = ParserState;

  ActionSpace actions;
  Vocab words;  // includes <none>, <unk>, <root>
  Vocab pos;

  static ParserTask from_corpus(const std::vector<std::pair<Sentence, GoldTree>>& train);
  static ParserTask from_model(const ClassifierModel& m);

  State initial_state(const Input& x) const { return initial_parser_state(x.size()); }
  bool is_terminal(const State& s) const { return s.terminal(); }
  bool truncated(const State&) const { return false; }
  void validate_gold(const Input& x, const Gold& gold) const;
  void legal_actions(const State& s, std::vector<int>& out) const {
    legal_parser_actions(s, actions, out);
  }
  State transition(const State& s, int a) const { return apply_action(s, a); }
  int reference_action(const State& s, const Gold& gold) const {
    return static_oracle(s, gold, actions);
  }
  int num_actions() const { return actions.num_actions(); }

  // top-3 stack and front-2 buffer tokens (form + upos), plus leftmost and
  // rightmost attached dependents of the top two stack items
  static constexpr int kNumSlots = 18;
  void featurize(const Input& x, const State& s, std::vector<int>& slots) const;

  ClassifierModel make_model(std::uint64_t seed, int embed_dim = 32, int hidden_dim = 64) const;
};

// ---------------------------------------------------------------------------
// Transduction

struct TransPair {
  std::vector<std::string> source;
  std::vector<std::string> target;
};

struct TransCorpus {
  std::vector<TransPair> pairs;
};

TransCorpus read_parallel(const std::string& path);  // TSV source \t target
void write_parallel(const std::string& path, const TransCorpus& corpus);

class TransducerTask {
 public:
  struct Input {
    std::vector<int> source_ids;
  };
  using Gold = std::vector<int>;  // target ids, no EOS
  using State = TransducerState;

  Vocab source_vocab;  // includes <none>, <unk>
  Vocab target_vocab;  // action space; includes <eos>, last
  int eos_id = -1;
  int start_id = -1;

  static TransducerTask from_corpus(const TransCorpus& train);
  static TransducerTask from_model(const ClassifierModel& m);

  Input encode_source(const std::vector<std::string>& tokens) const;
  Gold encode_target(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode_output(const State& s) const;

  State initial_state(const Input& x) const {
    return initial_transducer_state(static_cast<int>(x.source_ids.size()));
  }
  bool is_terminal(const State& s) const { return s.terminal(); }
  bool truncated(const State& s) const { return s.truncated(); }
  void validate_gold(const Input& x, const Gold& gold) const {
    if (static_cast<int>(gold.size()) >= 2 * static_cast<int>(x.source_ids.size()) + 10) {
      throw std::runtime_error("target sequence exceeds the rollout step cap");
    }
  }
  void legal_actions(const State&, std::vector<int>& out) const {
    out.clear();
    for (int a = 0; a < target_vocab.size(); ++a) {
      if (a != start_id) out.push_back(a);  // the start symbol is never emitted
    }
  }
  State transition(const State& s, int a) const {
    State t = emit(s, a);
    if (a == eos_id) t.eos_emitted = true;
    return t;
  }
  int reference_action(const State& s, const Gold& gold) const {
    std::size_t t = s.prefix.size();
    return t < gold.size() ? gold[t] : eos_id;
  }
  int num_actions() const { return target_vocab.size(); }

  // last 3 emitted tokens + source window of width 5 around the next
  // output position
  static constexpr int kNumSlots = 8;
  void featurize(const Input& x, const State& s, std::vector<int>& slots) const;

  ClassifierModel make_model(std::uint64_t seed, int embed_dim = 32, int hidden_dim = 64) const;
};

}  // namespace sdistill

#endif
