#include "sdistill/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sdistill/search.hpp"
#include "sdistill/trainer.hpp"

namespace sdistill {

std::vector<ProblematicStateSample> sample_problematic_states(
    const ParserTask& task, const ClassifierModel& baseline,
    const std::vector<std::pair<Sentence, GoldTree>>& treebank, int count,
    std::uint64_t seed, double temperature) {
  std::vector<ProblematicStateSample> out;
  auto policy = model_policy(task, baseline);
  const int max_passes = 50;
  for (int pass = 0; pass < max_passes && static_cast<int>(out.size()) < count; ++pass) {
    for (std::size_t i = 0; i < treebank.size() && static_cast<int>(out.size()) < count; ++i) {
      const auto& [sent, gold] = treebank[i];
      DynamicOracle oracle(gold, task.actions);
      Rng rng(mix_seed(mix_seed(seed, pass), static_cast<std::uint64_t>(i)));
      auto rollout = rollout_exploration(task, sent, policy, temperature, rng,
                                         static_cast<int>(i));
      for (const auto& rec : rollout.records) {
        int loss = oracle.state_loss(rec.state);
        std::vector<int> relevant = oracle.oracle_actions(rec.state);
        bool ambiguous = loss == 0 && relevant.size() >= 2;
        bool non_optimal = loss > 0;
        if (!ambiguous && !non_optimal) continue;
        ProblematicStateSample sample;
        sample.sentence_index = static_cast<int>(i);
        sample.state = rec.state;
        sample.ambiguous = ambiguous;
        sample.relevant = std::move(relevant);
        out.push_back(std::move(sample));
        if (static_cast<int>(out.size()) >= count) break;
      }
    }
  }
  return out;
}

double average_precision(const ActionDistribution& dist, const std::vector<int>& relevant) {
  if (relevant.empty()) throw std::runtime_error("average_precision: empty relevant set");
  std::vector<int> order = dist.legal;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dist.probs[a] > dist.probs[b]; });
  double ap = 0.0;
  int hits = 0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (std::binary_search(relevant.begin(), relevant.end(), order[rank])) {
      hits++;
      ap += static_cast<double>(hits) / static_cast<double>(rank + 1);
    }
  }
  return ap / static_cast<double>(relevant.size());
}

MapReport map_score(const StateScorer& scorer,
                    const std::vector<std::pair<Sentence, GoldTree>>& treebank,
                    const std::vector<ProblematicStateSample>& samples) {
  MapReport report;
  double sum_amb = 0.0, sum_non = 0.0;
  for (const ProblematicStateSample& s : samples) {
    const Sentence& sent = treebank.at(s.sentence_index).first;
    double ap = average_precision(scorer(sent, s.state), s.relevant);
    if (s.ambiguous) {
      sum_amb += ap;
      report.n_ambiguous++;
    } else {
      sum_non += ap;
      report.n_nonoptimal++;
    }
  }
  if (report.n_ambiguous > 0) report.map_ambiguous = sum_amb / report.n_ambiguous;
  if (report.n_nonoptimal > 0) report.map_nonoptimal = sum_non / report.n_nonoptimal;
  return report;
}

RunStats run_stats(const std::vector<double>& scores) {
  if (scores.size() < 2) throw std::runtime_error("run_stats: need at least 2 scores");
  RunStats st;
  st.scores = scores;
  st.min = *std::min_element(scores.begin(), scores.end());
  st.max = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double s : scores) sum += s;
  st.mean = sum / static_cast<double>(scores.size());
  double ss = 0.0;
  for (double s : scores) ss += (s - st.mean) * (s - st.mean);
  st.sigma = std::sqrt(ss / static_cast<double>(scores.size() - 1));
  return st;
}

double paired_bootstrap(const std::function<double(const std::vector<int>&)>& metric_a,
                        const std::function<double(const std::vector<int>&)>& metric_b,
                        int num_sentences, int resamples, std::uint64_t seed) {
  if (num_sentences <= 0) throw std::runtime_error("paired_bootstrap: empty corpus");
  Rng rng(seed);
  int b_wins = 0;
  std::vector<int> sample(num_sentences);
  for (int r = 0; r < resamples; ++r) {
    for (int i = 0; i < num_sentences; ++i) {
      sample[i] = static_cast<int>(rng.index(num_sentences));
    }
    if (metric_b(sample) >= metric_a(sample)) b_wins++;
  }
  return static_cast<double>(b_wins) / static_cast<double>(resamples);
}

}  // namespace sdistill
