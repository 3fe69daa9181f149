#ifndef SDISTILL_SYNTHETIC_HPP
#define SDISTILL_SYNTHETIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sdistill/parser.hpp"
#include "sdistill/tasks.hpp"

namespace sdistill {

struct SyntheticSplits {
  int train = 0, dev = 0, test = 0;
};

// Template-grammar treebank: subject/verb/object clauses with optional
// adjectives, an optional trailing modifier, and final punctuation. With
// probability `ambiguity_rate` the modifier's attachment is genuinely
// ambiguous (verb or object noun, different labels) and the reference tree
// picks one at random.
struct SyntheticTreebank {
  std::vector<std::pair<Sentence, GoldTree>> train, dev, test;
};

SyntheticTreebank make_synthetic_treebank(std::uint64_t seed, int size, double ambiguity_rate);

// Token-wise dictionary translation task. A fraction `ambiguity_rate` of the
// source types have two valid targets; each reference occurrence picks one
// at random. `alternatives[i][j]` lists the valid targets for token j of
// pair i.
struct SyntheticParallel {
  TransCorpus train, dev, test;
  std::vector<std::vector<std::vector<std::string>>> test_alternatives;
};

SyntheticParallel make_synthetic_parallel(std::uint64_t seed, int size, double ambiguity_rate);

void write_alternatives_json(const std::string& path,
                             const std::vector<std::vector<std::vector<std::string>>>& alts);

}  // namespace sdistill

#endif
