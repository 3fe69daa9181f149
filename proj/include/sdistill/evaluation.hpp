#ifndef SDISTILL_EVALUATION_HPP
#define SDISTILL_EVALUATION_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sdistill/distribution.hpp"
#include "sdistill/dynamic_oracle.hpp"
#include "sdistill/ensemble.hpp"
#include "sdistill/tasks.hpp"

namespace sdistill {

struct ProblematicStateSample {
  int sentence_index = -1;
  ParserState state;
  bool ambiguous = false;       // best-achievable loss 0 and >= 2 relevant actions
  std::vector<int> relevant;    // dynamic-oracle optimal actions, increasing
};

// Sample trajectories from the baseline model's (annealed) distribution and
// keep the states that are either optimal-yet-ambiguous or non-optimal.
std::vector<ProblematicStateSample> sample_problematic_states(
    const ParserTask& task, const ClassifierModel& baseline,
    const std::vector<std::pair<Sentence, GoldTree>>& treebank, int count,
    std::uint64_t seed, double temperature = 1.0);

struct MapReport {
  double map_ambiguous = 0.0;
  double map_nonoptimal = 0.0;
  int n_ambiguous = 0;
  int n_nonoptimal = 0;
};

// Average precision of the scored action ranking against the relevant set;
// ties in probability rank by smaller action id.
double average_precision(const ActionDistribution& dist, const std::vector<int>& relevant);

using StateScorer =
    std::function<ActionDistribution(const Sentence&, const ParserState&)>;

MapReport map_score(const StateScorer& scorer,
                    const std::vector<std::pair<Sentence, GoldTree>>& treebank,
                    const std::vector<ProblematicStateSample>& samples);

struct RunStats {
  std::vector<double> scores;
  double min = 0.0, max = 0.0, mean = 0.0, sigma = 0.0;  // sample sd (n-1)
};

RunStats run_stats(const std::vector<double>& scores);

// One-sided paired bootstrap over per-sentence sufficient statistics.
// `metric` maps a resampled index multiset to a corpus score; returns the
// fraction of resamples where B >= A (A is the claimed-better system).
double paired_bootstrap(const std::function<double(const std::vector<int>&)>& metric_a,
                        const std::function<double(const std::vector<int>&)>& metric_b,
                        int num_sentences, int resamples, std::uint64_t seed);

}  // namespace sdistill

#endif
