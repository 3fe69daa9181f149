#include <doctest.h>

#include <algorithm>

#include "sdistill/pipeline.hpp"
#include "sdistill/synthetic.hpp"

using namespace sdistill;

namespace {

struct Fixture {
  SyntheticTreebank bank;
  ParserTask task;
  EnsembleModel teacher;

  Fixture() : bank(make_synthetic_treebank(404, 12, 0.3)), task(ParserTask::from_corpus(bank.train)) {
    TrainOptions opt;
    opt.epochs = 2;
    opt.patience = 2;
    teacher = train_ensemble(2, 500, [&](std::uint64_t seed) {
      TrainOptions o = opt;
      o.seed = seed;
      return train_parser(task, bank.train, bank.dev, o);
    });
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

bool same_params(const ClassifierModel& a, const ClassifierModel& b) {
  if (a.w1 != b.w1 || a.b1 != b.b1 || a.w2 != b.w2 || a.b2 != b.b2) return false;
  if (a.tables.size() != b.tables.size()) return false;
  for (std::size_t t = 0; t < a.tables.size(); ++t) {
    if (a.tables[t].weights != b.tables[t].weights) return false;
  }
  return true;
}

TrainOptions quick_opts(std::uint64_t seed) {
  TrainOptions opt;
  opt.epochs = 2;
  opt.patience = 2;
  opt.seed = seed;
  return opt;
}

}  // namespace

TEST_CASE("alpha = 0 reference-regime distillation is bitwise identical to the baseline") {
  Fixture& f = fixture();
  TrainOptions opt = quick_opts(7);
  ClassifierModel baseline = train_parser(f.task, f.bank.train, f.bank.dev, opt);

  DistillOptions dopt;
  dopt.regime = Regime::kReference;
  dopt.alpha = 0.0;
  ClassifierModel student = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, dopt);
  CHECK(same_params(baseline, student));
}

TEST_CASE("regimes touch exactly the state populations they claim") {
  Fixture& f = fixture();
  TrainOptions opt = quick_opts(8);

  DistillOptions ref;
  ref.regime = Regime::kReference;
  TrainReport r1;
  train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, ref, &r1);
  CHECK(r1.reference_records > 0);
  CHECK(r1.exploration_records == 0);
  CHECK(r1.interp_updates > 0);
  CHECK(r1.kd_updates == 0);
  CHECK(r1.nll_updates == 0);

  DistillOptions expl;
  expl.regime = Regime::kExploration;
  TrainReport r2;
  train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, expl, &r2);
  CHECK(r2.reference_records == 0);
  CHECK(r2.exploration_records > 0);
  CHECK(r2.kd_updates > 0);
  CHECK(r2.interp_updates == 0);
  CHECK(r2.nll_updates == 0);

  DistillOptions both;
  both.regime = Regime::kBoth;
  TrainReport r3;
  train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, both, &r3);
  CHECK(r3.reference_records > 0);
  CHECK(r3.exploration_records > 0);
  CHECK(r3.interp_updates > 0);
  CHECK(r3.kd_updates > 0);
}

TEST_CASE("both-regime pass ratios degenerate to the single-population regimes") {
  Fixture& f = fixture();
  TrainOptions opt = quick_opts(9);

  DistillOptions ref_only;
  ref_only.regime = Regime::kReference;
  ClassifierModel a = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, ref_only);

  DistillOptions both_ref;
  both_ref.regime = Regime::kBoth;
  both_ref.ref_passes = 1;
  both_ref.expl_passes = 0;
  ClassifierModel b = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, both_ref);
  CHECK(same_params(a, b));

  DistillOptions expl_only;
  expl_only.regime = Regime::kExploration;
  ClassifierModel c = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, expl_only);

  DistillOptions both_expl;
  both_expl.regime = Regime::kBoth;
  both_expl.ref_passes = 0;
  both_expl.expl_passes = 1;
  ClassifierModel d = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, both_expl);
  CHECK(same_params(c, d));
}

TEST_CASE("exploration-regime training never reads the gold structures") {
  Fixture& f = fixture();
  TrainOptions opt = quick_opts(10);
  DistillOptions dopt;
  dopt.regime = Regime::kExploration;

  ClassifierModel honest = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, dopt);

  // corrupt every gold tree in the training data; only dev selection may look
  auto corrupted = f.bank.train;
  for (auto& [sent, gold] : corrupted) {
    for (std::size_t i = 1; i + 1 < gold.head.size(); ++i) {
      gold.head[i] = static_cast<int>(i) + 1;
      gold.label[i] = "det";
    }
    gold.head.back() = 0;
    gold.label.back() = "root";
  }
  ClassifierModel blind = train_parser(f.task, corrupted, f.bank.dev, opt, &f.teacher, dopt);
  CHECK(same_params(honest, blind));
}

TEST_CASE("exploration records store the un-annealed teacher distribution") {
  Fixture& f = fixture();
  auto policy = ensemble_policy(f.task, f.teacher);
  const Sentence& sent = f.bank.train[0].first;
  Rng rng(33);
  auto rollout = rollout_exploration(f.task, sent, policy, 0.05, rng, 0);
  REQUIRE(!rollout.records.empty());
  for (const auto& rec : rollout.records) {
    std::vector<int> slots;
    f.task.featurize(sent, rec.state, slots);
    ActionDistribution q = ensemble_forward(f.teacher, slots, rec.legal);
    CHECK(rec.soft_target == q.probs);
  }
}

TEST_CASE("top_k = 0 means all legal actions") {
  Fixture& f = fixture();
  TrainOptions opt = quick_opts(11);
  DistillOptions all;
  all.regime = Regime::kBoth;
  all.top_k = 0;
  ClassifierModel a = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, all);
  DistillOptions wide;
  wide.regime = Regime::kBoth;
  wide.top_k = f.task.num_actions();  // >= |legal| everywhere
  ClassifierModel b = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, wide);
  CHECK(same_params(a, b));
}

TEST_CASE("distillation runs are bit-reproducible") {
  Fixture& f = fixture();
  TrainOptions opt = quick_opts(12);
  DistillOptions dopt;
  dopt.regime = Regime::kBoth;
  dopt.alpha = 0.6;
  dopt.temperature = 0.5;
  dopt.top_k = 3;
  TrainReport r1, r2;
  ClassifierModel a = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, dopt, &r1);
  ClassifierModel b = train_parser(f.task, f.bank.train, f.bank.dev, opt, &f.teacher, dopt, &r2);
  CHECK(same_params(a, b));
  CHECK(r1.train_loss == r2.train_loss);
  CHECK(r1.dev_metric == r2.dev_metric);
  CHECK(r1.best_epoch == r2.best_epoch);
}
