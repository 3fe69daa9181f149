#ifndef SDISTILL_TRAINER_HPP
#define SDISTILL_TRAINER_HPP

#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "sdistill/ensemble.hpp"
#include "sdistill/model.hpp"
#include "sdistill/search.hpp"

namespace sdistill {

struct TrainOptions {
  int embed_dim = 32;
  int hidden_dim = 64;
  int epochs = 20;
  double lr = 0.1;
  double clip = 5.0;
  int patience = 5;           // early stop after this many stalled epochs
  int lr_halve_patience = 2;  // halve lr after this many stalled epochs
  std::uint64_t seed = 1;
  bool resample_every_epoch = true;
  std::string log_path;  // TSV (epoch, train_loss, dev_metric); empty = no log
};

enum class Regime { kReference, kExploration, kBoth };

struct DistillOptions {
  Regime regime = Regime::kReference;
  double alpha = 1.0;
  double temperature = 1.0;
  int top_k = 0;  // 0 = all legal actions
  int ref_passes = 1;
  int expl_passes = 1;
};

struct TrainReport {
  std::vector<double> train_loss;  // per-state mean, per epoch
  std::vector<double> dev_metric;
  double best_dev = -std::numeric_limits<double>::infinity();
  int best_epoch = -1;
  long nll_updates = 0;
  long kd_updates = 0;
  long interp_updates = 0;
  long reference_records = 0;
  long exploration_records = 0;
  long truncated_rollouts = 0;
};

// Featurized training example; the state itself is no longer needed once
// slots and targets are fixed.
struct TrainRecord {
  std::vector<int> slots;
  std::vector<int> legal;
  Origin origin = Origin::kReference;
  int reference_action = -1;
  std::vector<double> soft_target;
};

template <class Task>
auto model_policy(const Task& task, const ClassifierModel& m) {
  return [&task, &m](const typename Task::Input& input, const typename Task::State& state) {
    std::vector<int> slots, legal;
    task.featurize(input, state, slots);
    task.legal_actions(state, legal);
    return forward(m, slots, legal).dist;
  };
}

template <class Task>
auto ensemble_policy(const Task& task, const EnsembleModel& e) {
  return [&task, &e](const typename Task::Input& input, const typename Task::State& state) {
    std::vector<int> slots, legal;
    task.featurize(input, state, slots);
    task.legal_actions(state, legal);
    return ensemble_forward(e, slots, legal);
  };
}

// One trainer covers the baseline (teacher == nullptr: NLL on reference
// states) and all three distillation regimes. Returns the best-dev-epoch
// model; fully determined by (options, data, teacher).
template <class Task, class DevEval>
ClassifierModel train_model(
    const Task& task,
    const std::vector<std::pair<typename Task::Input, typename Task::Gold>>& train_data,
    const TrainOptions& opt, const EnsembleModel* teacher, const DistillOptions& dopt,
    DevEval&& dev_eval, TrainReport* report_out = nullptr) {
  TrainReport report;
  ClassifierModel student = task.make_model(opt.seed, opt.embed_dim, opt.hidden_dim);

  const bool use_reference = teacher == nullptr || dopt.regime != Regime::kExploration;
  const bool use_exploration = teacher != nullptr && dopt.regime != Regime::kReference;
  const int ref_passes = teacher != nullptr && dopt.regime == Regime::kBoth ? dopt.ref_passes : 1;
  const int expl_passes = dopt.regime == Regime::kBoth ? dopt.expl_passes : 1;

  // Reference states are fixed; featurize and (for distillation) attach the
  // frozen teacher's soft targets once.
  std::vector<TrainRecord> ref_records;
  if (use_reference && ref_passes > 0) {
    for (std::size_t i = 0; i < train_data.size(); ++i) {
      const auto& [input, gold] = train_data[i];
      auto rollout = rollout_reference(task, input, gold, static_cast<int>(i));
      for (const auto& rec : rollout.records) {
        TrainRecord tr;
        task.featurize(input, rec.state, tr.slots);
        tr.legal = rec.legal;
        tr.origin = Origin::kReference;
        tr.reference_action = rec.reference_action;
        if (teacher != nullptr) {
          tr.soft_target = ensemble_forward(*teacher, tr.slots, tr.legal).probs;
        }
        ref_records.push_back(std::move(tr));
      }
    }
    report.reference_records = static_cast<long>(ref_records.size());
  }

  auto sample_exploration = [&](int epoch_key) {
    std::vector<TrainRecord> out;
    auto policy = ensemble_policy(task, *teacher);
    for (int pass = 0; pass < expl_passes; ++pass) {
      for (std::size_t i = 0; i < train_data.size(); ++i) {
        const auto& input = train_data[i].first;
        Rng rng(mix_seed(mix_seed(opt.seed, 0xE0000000ULL + epoch_key * 131ULL + pass),
                         static_cast<std::uint64_t>(i)));
        auto rollout = rollout_exploration(task, input, policy, dopt.temperature, rng,
                                           static_cast<int>(i));
        if (rollout.truncated) report.truncated_rollouts++;
        for (auto& rec : rollout.records) {
          TrainRecord tr;
          task.featurize(input, rec.state, tr.slots);
          tr.legal = std::move(rec.legal);
          tr.origin = Origin::kExploration;
          tr.soft_target = std::move(rec.soft_target);
          out.push_back(std::move(tr));
        }
      }
    }
    report.exploration_records += static_cast<long>(out.size());
    return out;
  };

  std::vector<TrainRecord> expl_records;
  if (use_exploration && expl_passes > 0 && !opt.resample_every_epoch) {
    expl_records = sample_exploration(0);
  }

  ClassifierModel best = student;
  double lr = opt.lr;
  int stalled = 0;
  std::ofstream log;
  if (!opt.log_path.empty()) {
    log.open(opt.log_path);
    log << "epoch\ttrain_loss\tdev_metric\n";
  }

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    if (use_exploration && expl_passes > 0 && opt.resample_every_epoch) {
      report.exploration_records = 0;
      expl_records = sample_exploration(epoch);
    }
    std::vector<const TrainRecord*> order;
    for (int pass = 0; pass < ref_passes; ++pass) {
      for (const TrainRecord& r : ref_records) order.push_back(&r);
    }
    for (const TrainRecord& r : expl_records) order.push_back(&r);
    Rng shuffle_rng(mix_seed(opt.seed, 0x50000000ULL + epoch));
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    for (const TrainRecord* r : order) {
      LossResult lr_res;
      int k = dopt.top_k > 0 ? dopt.top_k : static_cast<int>(r->legal.size());
      if (r->origin == Origin::kReference) {
        if (teacher == nullptr) {
          lr_res = nll_loss(student, r->slots, r->legal, r->reference_action);
          report.nll_updates++;
        } else {
          lr_res = interpolated_loss(student, r->slots, r->legal, r->reference_action,
                                     r->soft_target, dopt.alpha, k);
          report.interp_updates++;
        }
      } else {
        lr_res = kd_loss(student, r->slots, r->legal, r->soft_target, k);
        report.kd_updates++;
      }
      loss_sum += lr_res.loss;
      sgd_step(student, lr_res.grads, lr, opt.clip);
    }
    double mean_loss = order.empty() ? 0.0 : loss_sum / static_cast<double>(order.size());
    double dev = dev_eval(student);
    report.train_loss.push_back(mean_loss);
    report.dev_metric.push_back(dev);
    if (log.is_open()) log << epoch << '\t' << mean_loss << '\t' << dev << '\n';

    if (dev > report.best_dev) {
      report.best_dev = dev;
      report.best_epoch = epoch;
      best = student;
      stalled = 0;
    } else {
      stalled++;
      if (stalled % opt.lr_halve_patience == 0) lr *= 0.5;
      if (stalled >= opt.patience) break;
    }
  }
  if (report_out) *report_out = report;
  return best;
}

}  // namespace sdistill

#endif
