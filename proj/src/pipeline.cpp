#include "sdistill/pipeline.hpp"

#include <stdexcept>

#include "sdistill/search.hpp"

namespace sdistill {

std::vector<std::vector<Arc>> parse_corpus(const ParserTask& task, const ClassifierModel& m,
                                           const std::vector<std::pair<Sentence, GoldTree>>& data) {
  std::vector<std::vector<Arc>> out;
  auto policy = model_policy(task, m);
  for (const auto& [sent, gold] : data) {
    out.push_back(decode_greedy(task, sent, policy).arcs);
  }
  return out;
}

std::vector<std::vector<Arc>> parse_corpus_ensemble(
    const ParserTask& task, const EnsembleModel& e,
    const std::vector<std::pair<Sentence, GoldTree>>& data) {
  std::vector<std::vector<Arc>> out;
  auto policy = ensemble_policy(task, e);
  for (const auto& [sent, gold] : data) {
    out.push_back(decode_greedy(task, sent, policy).arcs);
  }
  return out;
}

double eval_las(const ParserTask& task, const ClassifierModel& m,
                const std::vector<std::pair<Sentence, GoldTree>>& data) {
  return las(parse_corpus(task, m, data), data, task.actions);
}

ClassifierModel train_parser(const ParserTask& task,
                             const std::vector<std::pair<Sentence, GoldTree>>& train,
                             const std::vector<std::pair<Sentence, GoldTree>>& dev,
                             const TrainOptions& opt, const EnsembleModel* teacher,
                             const DistillOptions& dopt, TrainReport* report) {
  auto dev_eval = [&](const ClassifierModel& m) { return eval_las(task, m, dev); };
  return train_model(task, train, opt, teacher, dopt, dev_eval, report);
}

TransData encode_corpus(const TransducerTask& task, const TransCorpus& corpus) {
  TransData data;
  for (const TransPair& p : corpus.pairs) {
    data.emplace_back(task.encode_source(p.source), task.encode_target(p.target));
  }
  return data;
}

std::vector<TokenSeq> translate_corpus(const TransducerTask& task, const ClassifierModel& m,
                                       const TransCorpus& corpus) {
  std::vector<TokenSeq> out;
  auto policy = model_policy(task, m);
  for (const TransPair& p : corpus.pairs) {
    auto final_state = decode_greedy(task, task.encode_source(p.source), policy);
    out.push_back(TokenSeq{task.decode_output(final_state)});
  }
  return out;
}

double eval_bleu(const TransducerTask& task, const ClassifierModel& m, const TransCorpus& corpus) {
  std::vector<TokenSeq> refs;
  for (const TransPair& p : corpus.pairs) refs.push_back(TokenSeq{p.target});
  return bleu(translate_corpus(task, m, corpus), refs);
}

ClassifierModel train_transducer(const TransducerTask& task, const TransCorpus& train,
                                 const TransCorpus& dev, const TrainOptions& opt,
                                 const EnsembleModel* teacher, const DistillOptions& dopt,
                                 TrainReport* report) {
  TransData data = encode_corpus(task, train);
  auto dev_eval = [&](const ClassifierModel& m) { return eval_bleu(task, m, dev); };
  return train_model(task, data, opt, teacher, dopt, dev_eval, report);
}

double bootstrap_las(const std::vector<LasCounts>& a, const std::vector<LasCounts>& b,
                     int resamples, std::uint64_t seed) {
  if (a.size() != b.size()) throw std::runtime_error("bootstrap: misaligned output sets");
  auto metric = [](const std::vector<LasCounts>& c) {
    return [&c](const std::vector<int>& idx) {
      long correct = 0, total = 0;
      for (int i : idx) {
        correct += c[i].correct;
        total += c[i].total;
      }
      return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total);
    };
  };
  return paired_bootstrap(metric(a), metric(b), static_cast<int>(a.size()), resamples, seed);
}

double bootstrap_bleu(const std::vector<BleuStats>& a, const std::vector<BleuStats>& b,
                      int resamples, std::uint64_t seed) {
  if (a.size() != b.size()) throw std::runtime_error("bootstrap: misaligned output sets");
  auto metric = [](const std::vector<BleuStats>& c) {
    return [&c](const std::vector<int>& idx) {
      std::vector<BleuStats> sub;
      sub.reserve(idx.size());
      for (int i : idx) sub.push_back(c[i]);
      return bleu_from_stats(sub);
    };
  };
  return paired_bootstrap(metric(a), metric(b), static_cast<int>(a.size()), resamples, seed);
}

}  // namespace sdistill
