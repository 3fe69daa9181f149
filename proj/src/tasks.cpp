#include "sdistill/tasks.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sdistill {

namespace {

constexpr const char* kNone = "<none>";
constexpr const char* kUnk = "<unk>";
constexpr const char* kRootSym = "<root>";
constexpr const char* kStart = "<s>";
constexpr const char* kEos = "<eos>";

}  // namespace

// ---------------------------------------------------------------------------
// ParserTask

ParserTask ParserTask::from_corpus(const std::vector<std::pair<Sentence, GoldTree>>& train) {
  ParserTask task;
  task.words.add(kNone);
  task.words.add(kUnk);
  task.words.add(kRootSym);
  task.pos.add(kNone);
  task.pos.add(kUnk);
  task.pos.add(kRootSym);
  std::set<std::string> labels;
  for (const auto& [sent, gold] : train) {
    for (int i = 1; i <= sent.size(); ++i) {
      task.words.add(sent.forms[i]);
      task.pos.add(sent.upos[i]);
      labels.insert(gold.label[i]);
    }
  }
  task.actions.labels.assign(labels.begin(), labels.end());
  return task;
}

ParserTask ParserTask::from_model(const ClassifierModel& m) {
  if (m.kind != "parse") throw std::runtime_error("model is not a parsing model");
  ParserTask task;
  task.actions.labels = m.labels;
  task.words = m.tables.at(0).vocab;
  task.pos = m.tables.at(1).vocab;
  return task;
}

void ParserTask::featurize(const Input& x, const State& s, std::vector<int>& slots) const {
  slots.assign(kNumSlots, 0);
  const int none_w = words.id(kNone);
  const int none_p = pos.id(kNone);
  const int unk_w = words.id(kUnk);
  const int unk_p = pos.id(kUnk);
  auto word_of = [&](int tok) {
    if (tok == kRoot) return words.id(kRootSym);
    return words.id_or(x.forms[tok], unk_w);
  };
  auto pos_of = [&](int tok) {
    if (tok == kRoot) return pos.id(kRootSym);
    return pos.id_or(x.upos[tok], unk_p);
  };
  int k = 0;
  // stack top three
  for (int depth = 0; depth < 3; ++depth) {
    int idx = static_cast<int>(s.stack.size()) - 1 - depth;
    if (idx >= 0) {
      slots[k++] = word_of(s.stack[idx]);
      slots[k++] = pos_of(s.stack[idx]);
    } else {
      slots[k++] = none_w;
      slots[k++] = none_p;
    }
  }
  // buffer front two (post-root convention: ROOT trails the buffer)
  std::vector<int> buf;
  if (s.buffer_front <= s.n) buf.push_back(s.buffer_front);
  if (s.buffer_front + 1 <= s.n) {
    buf.push_back(s.buffer_front + 1);
  } else if (s.buffer_front <= s.n && !s.root_shifted) {
    buf.push_back(kRoot);
  }
  if (buf.empty() && !s.root_shifted) buf.push_back(kRoot);
  for (int b = 0; b < 2; ++b) {
    if (b < static_cast<int>(buf.size())) {
      slots[k++] = word_of(buf[b]);
      slots[k++] = pos_of(buf[b]);
    } else {
      slots[k++] = none_w;
      slots[k++] = none_p;
    }
  }
  // leftmost/rightmost attached dependents of the top two stack items
  for (int depth = 0; depth < 2; ++depth) {
    int idx = static_cast<int>(s.stack.size()) - 1 - depth;
    int leftmost = -1, rightmost = -1;
    if (idx >= 0) {
      int h = s.stack[idx];
      for (const Arc& a : s.arcs) {
        if (a.head != h) continue;
        if (leftmost < 0 || a.dep < leftmost) leftmost = a.dep;
        if (rightmost < 0 || a.dep > rightmost) rightmost = a.dep;
      }
    }
    slots[k++] = leftmost < 0 ? none_w : word_of(leftmost);
    slots[k++] = leftmost < 0 ? none_p : pos_of(leftmost);
    slots[k++] = rightmost < 0 ? none_w : word_of(rightmost);
    slots[k++] = rightmost < 0 ? none_p : pos_of(rightmost);
  }
}

void ParserTask::validate_gold(const Input& x, const Gold& gold) const {
  if (gold.size() != x.size()) {
    throw std::runtime_error("gold tree length does not match sentence length");
  }
  validate_tree(gold, "gold tree");
  std::pair<std::pair<int, int>, std::pair<int, int>> cr;
  if (!is_projective(gold, &cr)) {
    throw std::runtime_error("non-projective gold tree: arcs " +
                             std::to_string(cr.first.first) + "->" + std::to_string(cr.first.second) +
                             " and " + std::to_string(cr.second.first) + "->" +
                             std::to_string(cr.second.second) + " cross");
  }
}

ClassifierModel ParserTask::make_model(std::uint64_t seed, int embed_dim, int hidden_dim) const {
  ClassifierModel m;
  m.kind = "parse";
  m.seed = seed;
  m.embed_dim = embed_dim;
  m.hidden_dim = hidden_dim;
  EmbeddingTable form_table{"form", words, {}};
  EmbeddingTable pos_table{"upos", pos, {}};
  m.tables = {form_table, pos_table};
  // slots alternate form/upos throughout the layout
  for (int s = 0; s < kNumSlots; ++s) m.slot_table.push_back(s % 2);
  for (int a = 0; a < actions.num_actions(); ++a) m.action_names.push_back(actions.name(a));
  m.labels = actions.labels;
  Rng rng(seed);
  m.init_params(rng);
  return m;
}

// ---------------------------------------------------------------------------
// TransducerTask

TransCorpus read_parallel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  TransCorpus corpus;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected source<TAB>target");
    }
    TransPair pair;
    std::stringstream src(line.substr(0, tab)), tgt(line.substr(tab + 1));
    std::string tok;
    while (src >> tok) pair.source.push_back(tok);
    while (tgt >> tok) pair.target.push_back(tok);
    if (pair.source.empty() || pair.target.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty source or target");
    }
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

void write_parallel(const std::string& path, const TransCorpus& corpus) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const TransPair& p : corpus.pairs) {
    for (std::size_t i = 0; i < p.source.size(); ++i) out << (i ? " " : "") << p.source[i];
    out << '\t';
    for (std::size_t i = 0; i < p.target.size(); ++i) out << (i ? " " : "") << p.target[i];
    out << '\n';
  }
}

TransducerTask TransducerTask::from_corpus(const TransCorpus& train) {
  TransducerTask task;
  task.source_vocab.add(kNone);
  task.source_vocab.add(kUnk);
  task.target_vocab.add(kStart);
  task.target_vocab.add(kUnk);
  for (const TransPair& p : train.pairs) {
    for (const std::string& t : p.source) task.source_vocab.add(t);
    for (const std::string& t : p.target) task.target_vocab.add(t);
  }
  task.target_vocab.add(kEos);
  task.eos_id = task.target_vocab.id(kEos);
  task.start_id = task.target_vocab.id(kStart);
  return task;
}

TransducerTask TransducerTask::from_model(const ClassifierModel& m) {
  if (m.kind != "transduce") throw std::runtime_error("model is not a transduction model");
  TransducerTask task;
  task.target_vocab = m.tables.at(0).vocab;
  task.source_vocab = m.tables.at(1).vocab;
  task.eos_id = task.target_vocab.id(kEos);
  task.start_id = task.target_vocab.id(kStart);
  return task;
}

TransducerTask::Input TransducerTask::encode_source(const std::vector<std::string>& tokens) const {
  Input x;
  int unk = source_vocab.id(kUnk);
  for (const std::string& t : tokens) x.source_ids.push_back(source_vocab.id_or(t, unk));
  return x;
}

TransducerTask::Gold TransducerTask::encode_target(const std::vector<std::string>& tokens) const {
  Gold g;
  int unk = target_vocab.id(kUnk);
  for (const std::string& t : tokens) g.push_back(target_vocab.id_or(t, unk));
  return g;
}

std::vector<std::string> TransducerTask::decode_output(const State& s) const {
  std::vector<std::string> out;
  for (int id : s.prefix) {
    if (id == eos_id) break;
    out.push_back(target_vocab.symbols[id]);
  }
  return out;
}

void TransducerTask::featurize(const Input& x, const State& s, std::vector<int>& slots) const {
  slots.assign(kNumSlots, 0);
  int k = 0;
  int t = static_cast<int>(s.prefix.size());
  // last three emitted target tokens, start symbol before the beginning
  for (int back = 1; back <= 3; ++back) {
    slots[k++] = t - back >= 0 ? s.prefix[t - back] : target_vocab.id(kStart);
  }
  // source window of width 5 centered on the next output position (0-based t)
  int none = source_vocab.id(kNone);
  int src_len = static_cast<int>(x.source_ids.size());
  for (int off = -2; off <= 2; ++off) {
    int p = t + off;
    slots[k++] = (p >= 0 && p < src_len) ? x.source_ids[p] : none;
  }
}

ClassifierModel TransducerTask::make_model(std::uint64_t seed, int embed_dim, int hidden_dim) const {
  ClassifierModel m;
  m.kind = "transduce";
  m.seed = seed;
  m.embed_dim = embed_dim;
  m.hidden_dim = hidden_dim;
  EmbeddingTable tgt_table{"target", target_vocab, {}};
  EmbeddingTable src_table{"source", source_vocab, {}};
  m.tables = {tgt_table, src_table};
  m.slot_table = {0, 0, 0, 1, 1, 1, 1, 1};
  m.action_names = target_vocab.symbols;
  Rng rng(seed);
  m.init_params(rng);
  return m;
}

}  // namespace sdistill
