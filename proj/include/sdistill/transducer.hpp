#ifndef SDISTILL_TRANSDUCER_HPP
#define SDISTILL_TRANSDUCER_HPP

#include <string>
#include <vector>

namespace sdistill {

// Growing output prefix; terminal when EOS is emitted or the step cap
// (2 * source length + 10) is reached.
struct TransducerState {
  std::vector<int> prefix;  // emitted target ids, start symbol implicit
  bool eos_emitted = false;
  int source_length = 0;

  int step_cap() const { return 2 * source_length + 10; }
  bool terminal() const {
    return eos_emitted || static_cast<int>(prefix.size()) >= step_cap();
  }
  bool truncated() const { return !eos_emitted && terminal(); }
};

TransducerState initial_transducer_state(int source_length);
TransducerState emit(const TransducerState& s, int word_id);

struct TokenSeq {
  std::vector<std::string> tokens;
};

// Corpus-level BLEU-4 with brevity penalty, multi-bleu behaviour: no
// smoothing (any zero clipped precision gives 0), but n-gram orders for
// which the whole hypothesis corpus has no n-grams are skipped.
double bleu(const std::vector<TokenSeq>& hypotheses, const std::vector<TokenSeq>& references);

// Per-pair sufficient statistics so bootstrap resamples can recompute
// corpus BLEU without re-tokenizing.
struct BleuStats {
  long match[4] = {0, 0, 0, 0};
  long total[4] = {0, 0, 0, 0};
  long hyp_len = 0;
  long ref_len = 0;
};
BleuStats bleu_stats(const TokenSeq& hyp, const TokenSeq& ref);
double bleu_from_stats(const std::vector<BleuStats>& stats);

}  // namespace sdistill

#endif
