#ifndef SDISTILL_PIPELINE_HPP
#define SDISTILL_PIPELINE_HPP

#include <string>
#include <vector>

#include "sdistill/ensemble.hpp"
#include "sdistill/evaluation.hpp"
#include "sdistill/tasks.hpp"
#include "sdistill/trainer.hpp"
#include "sdistill/transducer.hpp"

namespace sdistill {

// ---------------------------------------------------------------------------
// Parsing workflows

std::vector<std::vector<Arc>> parse_corpus(const ParserTask& task, const ClassifierModel& m,
                                           const std::vector<std::pair<Sentence, GoldTree>>& data);
std::vector<std::vector<Arc>> parse_corpus_ensemble(
    const ParserTask& task, const EnsembleModel& e,
    const std::vector<std::pair<Sentence, GoldTree>>& data);
double eval_las(const ParserTask& task, const ClassifierModel& m,
                const std::vector<std::pair<Sentence, GoldTree>>& data);

ClassifierModel train_parser(const ParserTask& task,
                             const std::vector<std::pair<Sentence, GoldTree>>& train,
                             const std::vector<std::pair<Sentence, GoldTree>>& dev,
                             const TrainOptions& opt, const EnsembleModel* teacher = nullptr,
                             const DistillOptions& dopt = {}, TrainReport* report = nullptr);

// ---------------------------------------------------------------------------
// Transduction workflows

using TransData = std::vector<std::pair<TransducerTask::Input, TransducerTask::Gold>>;

TransData encode_corpus(const TransducerTask& task, const TransCorpus& corpus);
std::vector<TokenSeq> translate_corpus(const TransducerTask& task, const ClassifierModel& m,
                                       const TransCorpus& corpus);
double eval_bleu(const TransducerTask& task, const ClassifierModel& m, const TransCorpus& corpus);

ClassifierModel train_transducer(const TransducerTask& task, const TransCorpus& train,
                                 const TransCorpus& dev, const TrainOptions& opt,
                                 const EnsembleModel* teacher = nullptr,
                                 const DistillOptions& dopt = {}, TrainReport* report = nullptr);

// ---------------------------------------------------------------------------
// Ensembles and significance

// M baseline runs with seeds base+1 .. base+M.
template <class TrainFn>
EnsembleModel train_ensemble(int members, std::uint64_t base_seed, TrainFn&& train_one) {
  EnsembleModel e;
  for (int m = 1; m <= members; ++m) {
    e.members.push_back(train_one(base_seed + m));
  }
  e.check_compatible();
  return e;
}

double bootstrap_las(const std::vector<LasCounts>& a, const std::vector<LasCounts>& b,
                     int resamples, std::uint64_t seed);
double bootstrap_bleu(const std::vector<BleuStats>& a, const std::vector<BleuStats>& b,
                      int resamples, std::uint64_t seed);

}  // namespace sdistill

#endif
