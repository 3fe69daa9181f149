#include "sdistill/transducer.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace sdistill {

TransducerState initial_transducer_state(int source_length) {
  TransducerState s;
  s.source_length = source_length;
  return s;
}

TransducerState emit(const TransducerState& s, int word_id) {
  if (s.terminal()) throw std::runtime_error("emit on terminal transducer state");
  TransducerState t = s;
  t.prefix.push_back(word_id);
  return t;
}

BleuStats bleu_stats(const TokenSeq& hyp, const TokenSeq& ref) {
  BleuStats st;
  st.hyp_len = static_cast<long>(hyp.tokens.size());
  st.ref_len = static_cast<long>(ref.tokens.size());
  for (int n = 0; n < 4; ++n) {
    std::map<std::vector<std::string>, long> ref_counts;
    for (std::size_t i = 0; i + n < ref.tokens.size(); ++i) {
      std::vector<std::string> gram(ref.tokens.begin() + i, ref.tokens.begin() + i + n + 1);
      ref_counts[gram]++;
    }
    std::map<std::vector<std::string>, long> hyp_counts;
    for (std::size_t i = 0; i + n < hyp.tokens.size(); ++i) {
      std::vector<std::string> gram(hyp.tokens.begin() + i, hyp.tokens.begin() + i + n + 1);
      hyp_counts[gram]++;
    }
    for (const auto& [gram, count] : hyp_counts) {
      st.total[n] += count;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) st.match[n] += std::min(count, it->second);
    }
  }
  return st;
}

double bleu_from_stats(const std::vector<BleuStats>& stats) {
  if (stats.empty()) throw std::runtime_error("bleu: empty corpus");
  long match[4] = {0, 0, 0, 0}, total[4] = {0, 0, 0, 0};
  long hyp_len = 0, ref_len = 0;
  for (const BleuStats& st : stats) {
    for (int n = 0; n < 4; ++n) {
      match[n] += st.match[n];
      total[n] += st.total[n];
    }
    hyp_len += st.hyp_len;
    ref_len += st.ref_len;
  }
  double log_prec = 0.0;
  int orders = 0;
  for (int n = 0; n < 4; ++n) {
    if (total[n] == 0) continue;  // no n-grams of this order in the corpus
    if (match[n] == 0) return 0.0;
    log_prec += std::log(static_cast<double>(match[n]) / static_cast<double>(total[n]));
    orders++;
  }
  if (orders == 0 || hyp_len == 0) return 0.0;
  double bp = std::exp(std::min(0.0, 1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len)));
  return 100.0 * bp * std::exp(log_prec / orders);
}

double bleu(const std::vector<TokenSeq>& hypotheses, const std::vector<TokenSeq>& references) {
  if (hypotheses.size() != references.size()) throw std::runtime_error("bleu: corpus size mismatch");
  std::vector<BleuStats> stats;
  stats.reserve(hypotheses.size());
  for (std::size_t i = 0; i < hypotheses.size(); ++i) {
    stats.push_back(bleu_stats(hypotheses[i], references[i]));
  }
  return bleu_from_stats(stats);
}

}  // namespace sdistill
