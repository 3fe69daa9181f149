#include "sdistill/synthetic.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "sdistill/rng.hpp"

namespace sdistill {

namespace {

const std::vector<std::string> kDets = {"the", "a", "this", "some"};
const std::vector<std::string> kAdjs = {"big",  "small", "red",   "old",  "young", "good",
                                        "dark", "cold",  "quiet", "fast", "slow",  "bright"};
const std::vector<std::string> kNouns = {"cat",  "dog",   "man",   "woman", "bird",  "fish", "car",
                                         "house", "tree", "boat",  "child", "river", "stone", "door",
                                         "book", "horse", "garden", "road",  "cloud", "lamp"};
const std::vector<std::string> kVerbs = {"sees",  "likes", "finds", "takes", "hears", "makes",
                                         "holds", "gets",  "moves", "keeps", "shows", "brings"};
const std::vector<std::string> kMods = {"quickly", "today", "here",  "now",    "often",
                                        "again",   "soon",  "early", "slowly", "outside"};

const std::string& pick(const std::vector<std::string>& v, Rng& rng) {
  return v[rng.index(v.size())];
}

std::pair<Sentence, GoldTree> make_sentence(Rng& rng, double ambiguity_rate) {
  Sentence sent;
  GoldTree gold;
  sent.forms = {"<root>"};
  sent.upos = {"<root>"};
  gold.head = {-1};
  gold.label = {""};
  auto add = [&](const std::string& form, const std::string& upos, int head,
                 const std::string& label) {
    sent.forms.push_back(form);
    sent.upos.push_back(upos);
    gold.head.push_back(head);
    gold.label.push_back(label);
    return sent.size();
  };
  // noun phrase: DET ADJ{0..2} NOUN; heads filled in once the noun is placed
  auto add_np = [&](const std::string& role, int head_of_noun) {
    int det = add(pick(kDets, rng), "DET", 0, "det");
    int n_adj = static_cast<int>(rng.index(3));
    std::vector<int> adjs;
    for (int i = 0; i < n_adj; ++i) adjs.push_back(add(pick(kAdjs, rng), "ADJ", 0, "amod"));
    int noun = add(pick(kNouns, rng), "NOUN", head_of_noun, role);
    gold.head[det] = noun;
    for (int a : adjs) gold.head[a] = noun;
    return noun;
  };
  int subj = add_np("nsubj", -1);
  int verb = add(pick(kVerbs, rng), "VERB", 0, "root");
  gold.head[subj] = verb;
  int obj = add_np("obj", verb);
  if (rng.uniform() < 0.7) {
    int head = verb;
    if (rng.uniform() < ambiguity_rate && rng.uniform() < 0.5) head = obj;
    add(pick(kMods, rng), "ADV", head, "mod");
  }
  add(".", "PUNCT", verb, "punct");
  return {sent, gold};
}

}  // namespace

SyntheticTreebank make_synthetic_treebank(std::uint64_t seed, int size, double ambiguity_rate) {
  if (size < 10) throw std::runtime_error("synthetic treebank size must be >= 10");
  if (ambiguity_rate < 0.0 || ambiguity_rate > 1.0) {
    throw std::runtime_error("ambiguity_rate must be in [0, 1]");
  }
  SyntheticTreebank tb;
  int held = std::max(20, size / 10);
  auto fill = [&](std::vector<std::pair<Sentence, GoldTree>>& out, int n, std::uint64_t stream) {
    Rng rng(mix_seed(seed, stream));
    for (int i = 0; i < n; ++i) out.push_back(make_sentence(rng, ambiguity_rate));
  };
  fill(tb.train, size, 1);
  fill(tb.dev, held, 2);
  fill(tb.test, held, 3);
  return tb;
}

SyntheticParallel make_synthetic_parallel(std::uint64_t seed, int size, double ambiguity_rate) {
  if (size < 10) throw std::runtime_error("synthetic corpus size must be >= 10");
  if (ambiguity_rate < 0.0 || ambiguity_rate > 1.0) {
    throw std::runtime_error("ambiguity_rate must be in [0, 1]");
  }
  const int n_types = 40;
  int n_ambiguous = static_cast<int>(ambiguity_rate * n_types + 0.5);
  auto src_tok = [](int i) { return "src" + std::to_string(i); };
  // the first n_ambiguous source types carry two valid targets
  auto targets_of = [&](int i) {
    std::vector<std::string> t = {"tgt" + std::to_string(i) + "a"};
    if (i < n_ambiguous) t.push_back("tgt" + std::to_string(i) + "b");
    return t;
  };

  SyntheticParallel out;
  int held = std::max(20, size / 10);
  auto fill = [&](TransCorpus& corpus, int n, std::uint64_t stream,
                  std::vector<std::vector<std::vector<std::string>>>* alts) {
    Rng rng(mix_seed(seed, 100 + stream));
    for (int k = 0; k < n; ++k) {
      TransPair pair;
      std::vector<std::vector<std::string>> pair_alts;
      int len = 3 + static_cast<int>(rng.index(6));
      for (int j = 0; j < len; ++j) {
        int type = static_cast<int>(rng.index(n_types));
        pair.source.push_back(src_tok(type));
        std::vector<std::string> valid = targets_of(type);
        pair.target.push_back(valid[rng.index(valid.size())]);
        pair_alts.push_back(std::move(valid));
      }
      corpus.pairs.push_back(std::move(pair));
      if (alts) alts->push_back(std::move(pair_alts));
    }
  };
  fill(out.train, size, 1, nullptr);
  fill(out.dev, held, 2, nullptr);
  fill(out.test, held, 3, &out.test_alternatives);
  return out;
}

void write_alternatives_json(const std::string& path,
                             const std::vector<std::vector<std::vector<std::string>>>& alts) {
  nlohmann::json j = alts;
  std::ofstream outf(path);
  if (!outf) throw std::runtime_error("cannot write " + path);
  outf << j.dump() << '\n';
}

}  // namespace sdistill
