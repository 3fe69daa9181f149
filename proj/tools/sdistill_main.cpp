// sdistill: single entry point for corpus prep, training, ensembling,
// distillation, evaluation, and the analysis reports.
//
//   sdistill <command> [flags]   (see `sdistill help`)
//
// Every command writes its fully-resolved configuration to
// <out>/manifest.cfg; rerunning `sdistill <command> --config manifest.cfg`
// reproduces the artifacts bit for bit.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdistill/evaluation.hpp"
#include "sdistill/pipeline.hpp"
#include "sdistill/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sdistill;

namespace {

// ---------------------------------------------------------------------------
// Shared plumbing

struct CommonOpts {
  std::string out;
  std::uint64_t seed = 1;
  int jobs = 1;
};

void add_common(CLI::App& app, CommonOpts& c, bool out_required = true) {
  auto* out = app.add_option("--out", c.out, "output directory (relative paths resolve under $SDISTILL_OUT_ROOT)");
  if (out_required) out->required();
  app.add_option("--seed", c.seed, "master seed; member/rollout/bootstrap sub-seeds derive from it")
      ->capture_default_str();
  app.add_option("--jobs", c.jobs, "worker cap; 1 = fully serial")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.set_config("--config", "", "load flags from a key=value file; explicit flags win");
}

fs::path resolve_out(const std::string& out) {
  fs::path p(out);
  const char* root = std::getenv("SDISTILL_OUT_ROOT");
  if (root != nullptr && *root != '\0' && p.is_relative()) p = fs::path(root) / p;
  return p;
}

// Marks the run directory until the command finishes cleanly, so interrupted
// runs are identifiable.
class RunDir {
 public:
  explicit RunDir(const std::string& out) : dir_(resolve_out(out)) {
    fs::create_directories(dir_);
    std::ofstream(dir_ / ".partial") << "in progress\n";
  }
  ~RunDir() {
    if (done_) fs::remove(dir_ / ".partial");
  }
  const fs::path& path() const { return dir_; }
  fs::path file(const std::string& name) const { return dir_ / name; }
  void finish() { done_ = true; }

 private:
  fs::path dir_;
  bool done_ = false;
};

void write_manifest(const CLI::App& app, const RunDir& run) {
  std::ofstream out(run.file("manifest.cfg"));
  out << "# sdistill " << app.get_name() << " manifest\n" << app.config_to_str(true, false);
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void print_summary(json j) {
  std::cout << j.dump() << std::endl;
}

// A single model file and an ensemble manifest are interchangeable wherever a
// policy is expected; a lone model behaves as a singleton ensemble.
EnsembleModel load_policy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  EnsembleModel e;
  if (j.contains("magic") && j["magic"] == "sdistill-ensemble") {
    e = load_ensemble(path);
  } else {
    e.members.push_back(load_model(path));
  }
  return e;
}

struct TrainFlags {
  TrainOptions opt;
  std::string train_path, dev_path;
  bool skip_nonprojective = true;
};

void add_train_flags(CLI::App& app, TrainFlags& t) {
  app.add_option("--train", t.train_path, "training corpus")->required();
  app.add_option("--dev", t.dev_path, "development corpus (model selection)")->required();
  app.add_option("--epochs", t.opt.epochs)->capture_default_str();
  app.add_option("--lr", t.opt.lr, "initial learning rate")->capture_default_str();
  app.add_option("--clip", t.opt.clip, "global gradient-norm clip")->capture_default_str();
  app.add_option("--patience", t.opt.patience, "early-stop patience (epochs)")->capture_default_str();
  app.add_option("--lr-halve-patience", t.opt.lr_halve_patience)->capture_default_str();
  app.add_option("--embed-dim", t.opt.embed_dim)->capture_default_str();
  app.add_option("--hidden-dim", t.opt.hidden_dim)->capture_default_str();
  app.add_option("--skip-nonprojective", t.skip_nonprojective,
                 "drop non-projective gold trees instead of failing")
      ->capture_default_str();
}

struct DistillFlags {
  DistillOptions dopt;
  std::string ensemble_path;
  std::string regime = "both";
};

Regime parse_regime(const std::string& r) {
  if (r == "reference") return Regime::kReference;
  if (r == "exploration") return Regime::kExploration;
  if (r == "both") return Regime::kBoth;
  throw std::runtime_error("unknown regime: " + r);
}

void add_distill_flags(CLI::App& app, DistillFlags& d) {
  app.add_option("--ensemble", d.ensemble_path, "teacher ensemble manifest")->required();
  app.add_option("--regime", d.regime, "reference | exploration | both")
      ->capture_default_str()
      ->check(CLI::IsMember({"reference", "exploration", "both"}));
  app.add_option("--alpha", d.dopt.alpha, "KD weight in the interpolated loss")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--temperature", d.dopt.temperature, "exploration annealing temperature")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--top-k", d.dopt.top_k, "KD truncation; 0 = all legal actions")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--ref-passes", d.dopt.ref_passes, "reference passes per epoch (both regime)")
      ->capture_default_str();
  app.add_option("--expl-passes", d.dopt.expl_passes, "exploration passes per epoch (both regime)")
      ->capture_default_str();
}

std::vector<std::pair<Sentence, GoldTree>> load_treebank(const std::string& path, bool skip) {
  return read_conll(path, skip).sentences;
}

double eval_las_policy(const ParserTask& task, const EnsembleModel& e,
                       const std::vector<std::pair<Sentence, GoldTree>>& data) {
  return las(parse_corpus_ensemble(task, e, data), data, task.actions);
}

std::vector<TokenSeq> translate_corpus_ensemble(const TransducerTask& task, const EnsembleModel& e,
                                                const TransCorpus& corpus) {
  std::vector<TokenSeq> out;
  auto policy = ensemble_policy(task, e);
  for (const TransPair& p : corpus.pairs) {
    auto final_state = decode_greedy(task, task.encode_source(p.source), policy);
    out.push_back(TokenSeq{task.decode_output(final_state)});
  }
  return out;
}

double eval_bleu_policy(const TransducerTask& task, const EnsembleModel& e,
                        const TransCorpus& corpus) {
  std::vector<TokenSeq> refs;
  for (const TransPair& p : corpus.pairs) refs.push_back(TokenSeq{p.target});
  return bleu(translate_corpus_ensemble(task, e, corpus), refs);
}

json report_json(const TrainReport& r) {
  return json{{"best_dev", r.best_dev},
              {"best_epoch", r.best_epoch},
              {"epochs_run", r.train_loss.size()},
              {"nll_updates", r.nll_updates},
              {"kd_updates", r.kd_updates},
              {"interp_updates", r.interp_updates},
              {"reference_records", r.reference_records},
              {"exploration_records", r.exploration_records},
              {"truncated_rollouts", r.truncated_rollouts}};
}

// ---------------------------------------------------------------------------
// Commands

int cmd_make_synthetic(CLI::App& app, int argc, char** argv) {
  CommonOpts c;
  std::string task = "parse";
  int size = 2000;
  double ambiguity = 0.3;
  app.add_option("--task", task)->check(CLI::IsMember({"parse", "transduce"}))->capture_default_str();
  app.add_option("--size", size, "training set size")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--ambiguity", ambiguity, "fraction of genuinely ambiguous decisions")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  add_common(app, c);
  CLI11_PARSE(app, argc, argv);

  RunDir run(c.out);
  write_manifest(app, run);
  json summary{{"command", "make-synthetic"}, {"task", task}, {"out", run.path().string()}};
  if (task == "parse") {
    SyntheticTreebank bank = make_synthetic_treebank(c.seed, size, ambiguity);
    write_conll(run.file("train.conllu").string(), bank.train);
    write_conll(run.file("dev.conllu").string(), bank.dev);
    write_conll(run.file("test.conllu").string(), bank.test);
    summary["train"] = bank.train.size();
    summary["dev"] = bank.dev.size();
    summary["test"] = bank.test.size();
  } else {
    SyntheticParallel par = make_synthetic_parallel(c.seed, size, ambiguity);
    write_parallel(run.file("train.tsv").string(), par.train);
    write_parallel(run.file("dev.tsv").string(), par.dev);
    write_parallel(run.file("test.tsv").string(), par.test);
    write_alternatives_json(run.file("test_alternatives.json").string(), par.test_alternatives);
    summary["train"] = par.train.pairs.size();
    summary["dev"] = par.dev.pairs.size();
    summary["test"] = par.test.pairs.size();
  }
  run.finish();
  print_summary(summary);
  return 0;
}

int cmd_train(CLI::App& app, int argc, char** argv, bool ensemble_mode) {
  CommonOpts c;
  TrainFlags t;
  std::string task_kind = "parse";
  int members = 5;
  app.add_option("--task", task_kind)->check(CLI::IsMember({"parse", "transduce"}))->capture_default_str();
  add_train_flags(app, t);
  if (ensemble_mode) {
    app.add_option("--members", members, "ensemble size M; member m uses seed+m")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }
  add_common(app, c);
  CLI11_PARSE(app, argc, argv);

  RunDir run(c.out);
  write_manifest(app, run);
  json summary{{"command", ensemble_mode ? "train-ensemble" : "train"}, {"task", task_kind},
               {"out", run.path().string()}};

  auto train_one = [&](std::uint64_t seed, const std::string& stem, auto&& train_fn) {
    TrainOptions opt = t.opt;
    opt.seed = seed;
    opt.log_path = run.file(stem + "_log.tsv").string();
    TrainReport report;
    ClassifierModel m = train_fn(opt, report);
    save_model(m, run.file(stem + ".json").string());
    return std::pair(std::move(m), report);
  };

  EnsembleModel e;
  std::vector<std::uint64_t> seeds;
  json member_summaries = json::array();
  const int count = ensemble_mode ? members : 1;
  double ensemble_dev = 0.0;

  if (task_kind == "parse") {
    auto train_data = load_treebank(t.train_path, t.skip_nonprojective);
    auto dev_data = load_treebank(t.dev_path, t.skip_nonprojective);
    ParserTask task = ParserTask::from_corpus(train_data);
    for (int m = 1; m <= count; ++m) {
      std::uint64_t seed = ensemble_mode ? c.seed + m : c.seed;
      std::string stem = ensemble_mode ? "member_" + std::to_string(m) : "model";
      auto [model, report] = train_one(seed, stem, [&](const TrainOptions& opt, TrainReport& r) {
        return train_parser(task, train_data, dev_data, opt, nullptr, {}, &r);
      });
      e.members.push_back(std::move(model));
      seeds.push_back(seed);
      member_summaries.push_back(report_json(report));
    }
    if (ensemble_mode) ensemble_dev = eval_las_policy(task, e, dev_data);
  } else {
    TransCorpus train_data = read_parallel(t.train_path);
    TransCorpus dev_data = read_parallel(t.dev_path);
    TransducerTask task = TransducerTask::from_corpus(train_data);
    for (int m = 1; m <= count; ++m) {
      std::uint64_t seed = ensemble_mode ? c.seed + m : c.seed;
      std::string stem = ensemble_mode ? "member_" + std::to_string(m) : "model";
      auto [model, report] = train_one(seed, stem, [&](const TrainOptions& opt, TrainReport& r) {
        return train_transducer(task, train_data, dev_data, opt, nullptr, {}, &r);
      });
      e.members.push_back(std::move(model));
      seeds.push_back(seed);
      member_summaries.push_back(report_json(report));
    }
    if (ensemble_mode) ensemble_dev = eval_bleu_policy(task, e, dev_data);
  }

  if (ensemble_mode) {
    EnsembleManifest man;
    man.kind = task_kind == "parse" ? "parse" : "transduce";
    for (int m = 1; m <= count; ++m) man.member_paths.push_back("member_" + std::to_string(m) + ".json");
    man.seeds = seeds;
    save_manifest(man, run.file("ensemble.json").string());
    summary["members"] = member_summaries;
    summary["ensemble_dev"] = ensemble_dev;
  } else {
    summary["report"] = member_summaries[0];
  }
  run.finish();
  print_summary(summary);
  return 0;
}

int cmd_distill(CLI::App& app, int argc, char** argv) {
  CommonOpts c;
  TrainFlags t;
  DistillFlags d;
  std::string task_kind = "parse";
  app.add_option("--task", task_kind)->check(CLI::IsMember({"parse", "transduce"}))->capture_default_str();
  add_train_flags(app, t);
  add_distill_flags(app, d);
  add_common(app, c);
  CLI11_PARSE(app, argc, argv);

  RunDir run(c.out);
  write_manifest(app, run);
  d.dopt.regime = parse_regime(d.regime);
  EnsembleModel teacher = load_ensemble(d.ensemble_path);

  TrainOptions opt = t.opt;
  opt.seed = c.seed;
  opt.log_path = run.file("student_log.tsv").string();
  TrainReport report;
  ClassifierModel student;
  if (task_kind == "parse") {
    auto train_data = load_treebank(t.train_path, t.skip_nonprojective);
    auto dev_data = load_treebank(t.dev_path, t.skip_nonprojective);
    ParserTask task = ParserTask::from_model(teacher.members.front());
    student = train_parser(task, train_data, dev_data, opt, &teacher, d.dopt, &report);
  } else {
    TransCorpus train_data = read_parallel(t.train_path);
    TransCorpus dev_data = read_parallel(t.dev_path);
    TransducerTask task = TransducerTask::from_model(teacher.members.front());
    student = train_transducer(task, train_data, dev_data, opt, &teacher, d.dopt, &report);
  }
  save_model(student, run.file("student.json").string());
  run.finish();
  print_summary(json{{"command", "distill"},
                     {"task", task_kind},
                     {"regime", d.regime},
                     {"alpha", d.dopt.alpha},
                     {"temperature", d.dopt.temperature},
                     {"top_k", d.dopt.top_k},
                     {"out", run.path().string()},
                     {"report", report_json(report)}});
  return 0;
}

int cmd_eval(CLI::App& app, int argc, char** argv) {
  CommonOpts c;
  std::string task_kind = "parse";
  std::string model_path, model_b_path, test_path;
  int resamples = 1000;
  bool skip_nonprojective = false;
  app.add_option("--task", task_kind)->check(CLI::IsMember({"parse", "transduce"}))->capture_default_str();
  app.add_option("--model", model_path, "model file or ensemble manifest")->required();
  app.add_option("--model-b", model_b_path, "second system for a paired bootstrap (A = --model)");
  app.add_option("--test", test_path)->required();
  app.add_option("--resamples", resamples, "bootstrap resamples")->capture_default_str();
  app.add_option("--skip-nonprojective", skip_nonprojective)->capture_default_str();
  add_common(app, c);
  CLI11_PARSE(app, argc, argv);

  RunDir run(c.out);
  write_manifest(app, run);
  EnsembleModel a = load_policy_file(model_path);
  json summary{{"command", "eval"}, {"task", task_kind}, {"out", run.path().string()}};

  if (task_kind == "parse") {
    ParserTask task = ParserTask::from_model(a.members.front());
    auto data = load_treebank(test_path, skip_nonprojective);
    auto pred_a = parse_corpus_ensemble(task, a, data);
    summary["las"] = las(pred_a, data, task.actions);
    if (!model_b_path.empty()) {
      EnsembleModel b = load_policy_file(model_b_path);
      auto pred_b = parse_corpus_ensemble(task, b, data);
      summary["las_b"] = las(pred_b, data, task.actions);
      summary["p_value"] = bootstrap_las(las_counts(pred_a, data, task.actions),
                                         las_counts(pred_b, data, task.actions), resamples, c.seed);
      summary["resamples"] = resamples;
    }
  } else {
    TransducerTask task = TransducerTask::from_model(a.members.front());
    TransCorpus data = read_parallel(test_path);
    std::vector<TokenSeq> refs;
    for (const TransPair& p : data.pairs) refs.push_back(TokenSeq{p.target});
    auto hyp_a = translate_corpus_ensemble(task, a, data);
    summary["bleu"] = bleu(hyp_a, refs);
    if (!model_b_path.empty()) {
      EnsembleModel b = load_policy_file(model_b_path);
      auto hyp_b = translate_corpus_ensemble(task, b, data);
      summary["bleu_b"] = bleu(hyp_b, refs);
      std::vector<BleuStats> stats_a, stats_b;
      for (std::size_t i = 0; i < data.pairs.size(); ++i) {
        stats_a.push_back(bleu_stats(hyp_a[i], refs[i]));
        stats_b.push_back(bleu_stats(hyp_b[i], refs[i]));
      }
      summary["p_value"] = bootstrap_bleu(stats_a, stats_b, resamples, c.seed);
      summary["resamples"] = resamples;
    }
  }
  json report = summary;
  report.erase("out");  // keep the report independent of where it lives
  write_text(run.file("report.json"), report.dump(2) + "\n");
  run.finish();
  print_summary(summary);
  return 0;
}

int cmd_analyze_states(CLI::App& app, int argc, char** argv) {
  CommonOpts c;
  std::string treebank_path, baseline_path;
  std::vector<std::string> systems;
  int count = 1000;
  double temperature = 1.0;
  app.add_option("--treebank", treebank_path, "CoNLL-U corpus to sample states from")->required();
  app.add_option("--baseline", baseline_path, "baseline model whose rollouts are sampled")->required();
  app.add_option("--system", systems, "name=path of a model/ensemble to score (repeatable)")
      ->required();
  app.add_option("--count", count, "number of problematic states to draw")->capture_default_str();
  app.add_option("--temperature", temperature, "baseline sampling temperature")->capture_default_str();
  add_common(app, c);
  CLI11_PARSE(app, argc, argv);

  RunDir run(c.out);
  write_manifest(app, run);
  ClassifierModel baseline = load_model(baseline_path);
  ParserTask task = ParserTask::from_model(baseline);
  auto bank = load_treebank(treebank_path, true);
  auto samples = sample_problematic_states(task, baseline, bank, count, c.seed, temperature);

  std::ostringstream csv;
  csv << "system,kind,MAP,n_states\n";
  json per_system = json::object();
  for (const std::string& spec : systems) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) throw std::runtime_error("--system expects name=path, got " + spec);
    std::string name = spec.substr(0, eq);
    EnsembleModel sys = load_policy_file(spec.substr(eq + 1));
    sys.check_compatible();
    auto scorer = [&](const Sentence& sent, const ParserState& state) {
      std::vector<int> slots, legal;
      task.featurize(sent, state, slots);
      legal_parser_actions(state, task.actions, legal);
      return ensemble_forward(sys, slots, legal);
    };
    MapReport rep = map_score(scorer, bank, samples);
    csv << name << ",ambiguous," << rep.map_ambiguous << "," << rep.n_ambiguous << "\n";
    csv << name << ",non-optimal," << rep.map_nonoptimal << "," << rep.n_nonoptimal << "\n";
    per_system[name] = {{"map_ambiguous", rep.map_ambiguous},
                        {"map_nonoptimal", rep.map_nonoptimal},
                        {"n_ambiguous", rep.n_ambiguous},
                        {"n_nonoptimal", rep.n_nonoptimal}};
  }
  write_text(run.file("map.csv"), csv.str());
  run.finish();
  print_summary(json{{"command", "analyze-states"},
                     {"out", run.path().string()},
                     {"states_drawn", samples.size()},
                     {"systems", per_system}});
  return 0;
}

int cmd_sweep(CLI::App& app, int argc, char** argv) {
  CommonOpts c;
  TrainFlags t;
  DistillFlags d;
  std::string task_kind = "parse";
  std::string parameter, grid_spec;
  app.add_option("--task", task_kind)->check(CLI::IsMember({"parse", "transduce"}))->capture_default_str();
  app.add_option("--parameter", parameter, "alpha | temperature | topk")
      ->required()
      ->check(CLI::IsMember({"alpha", "temperature", "topk"}));
  app.add_option("--grid", grid_spec, "comma list (0.1,0.5,1) or range a:b:step")->required();
  add_train_flags(app, t);
  add_distill_flags(app, d);
  add_common(app, c);
  CLI11_PARSE(app, argc, argv);

  std::vector<double> grid;
  if (grid_spec.find(':') != std::string::npos) {
    double lo, hi, step;
    char c1, c2;
    std::istringstream in(grid_spec);
    if (!(in >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0) {
      throw std::runtime_error("bad --grid range: " + grid_spec);
    }
    for (double v = lo; v <= hi + 1e-9; v += step) grid.push_back(v);
  } else {
    std::istringstream in(grid_spec);
    std::string tok;
    while (std::getline(in, tok, ',')) grid.push_back(std::stod(tok));
  }
  if (grid.empty()) throw std::runtime_error("empty --grid");

  RunDir run(c.out);
  write_manifest(app, run);
  d.dopt.regime = parse_regime(d.regime);
  EnsembleModel teacher = load_ensemble(d.ensemble_path);

  std::ostringstream csv;
  csv << "value,dev_metric\n";
  json rows = json::array();
  for (double v : grid) {
    DistillOptions dopt = d.dopt;
    if (parameter == "alpha") dopt.alpha = v;
    else if (parameter == "temperature") dopt.temperature = v;
    else dopt.top_k = static_cast<int>(v + 0.5);
    TrainOptions opt = t.opt;
    opt.seed = c.seed;  // shared base seed across grid points
    TrainReport report;
    if (task_kind == "parse") {
      auto train_data = load_treebank(t.train_path, t.skip_nonprojective);
      auto dev_data = load_treebank(t.dev_path, t.skip_nonprojective);
      ParserTask task = ParserTask::from_model(teacher.members.front());
      train_parser(task, train_data, dev_data, opt, &teacher, dopt, &report);
    } else {
      TransCorpus train_data = read_parallel(t.train_path);
      TransCorpus dev_data = read_parallel(t.dev_path);
      TransducerTask task = TransducerTask::from_model(teacher.members.front());
      train_transducer(task, train_data, dev_data, opt, &teacher, dopt, &report);
    }
    csv << v << "," << report.best_dev << "\n";
    rows.push_back({{"value", v}, {"dev_metric", report.best_dev}});
  }
  write_text(run.file("sweep.csv"), csv.str());
  run.finish();
  print_summary(json{{"command", "sweep"},
                     {"parameter", parameter},
                     {"out", run.path().string()},
                     {"rows", rows}});
  return 0;
}

int cmd_stability(CLI::App& app, int argc, char** argv) {
  CommonOpts c;
  std::string scores_path;
  app.add_option("--scores", scores_path, "CSV of system,seed,score rows (header optional)")
      ->required();
  add_common(app, c);
  CLI11_PARSE(app, argc, argv);

  RunDir run(c.out);
  write_manifest(app, run);
  std::ifstream in(scores_path);
  if (!in) throw std::runtime_error("cannot open " + scores_path);
  std::map<std::string, std::vector<double>> by_system;
  std::vector<std::string> order;
  std::ostringstream raw;
  raw << "system,seed,score\n";
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "system,seed,score") continue;
    std::istringstream row(line);
    std::string system, seed, score;
    if (!std::getline(row, system, ',') || !std::getline(row, seed, ',') ||
        !std::getline(row, score, ',')) {
      throw std::runtime_error("bad scores row: " + line);
    }
    if (!by_system.count(system)) order.push_back(system);
    by_system[system].push_back(std::stod(score));
    raw << system << "," << seed << "," << score << "\n";
  }

  std::ostringstream csv;
  csv << "system,n,min,max,mean,sigma\n";
  json stats = json::object();
  for (const std::string& system : order) {
    RunStats st = run_stats(by_system[system]);
    csv << system << "," << st.scores.size() << "," << st.min << "," << st.max << "," << st.mean
        << "," << st.sigma << "\n";
    stats[system] = {{"n", st.scores.size()}, {"min", st.min},     {"max", st.max},
                     {"mean", st.mean},       {"sigma", st.sigma}};
  }
  write_text(run.file("stability.csv"), csv.str());
  write_text(run.file("stability_raw.csv"), raw.str());
  run.finish();
  print_summary(json{{"command", "stability"}, {"out", run.path().string()}, {"systems", stats}});
  return 0;
}

void usage() {
  std::cerr << "usage: sdistill <command> [flags]\n"
            << "commands:\n"
            << "  make-synthetic  generate a synthetic treebank or parallel corpus\n"
            << "  train           train one baseline model (NLL on reference states)\n"
            << "  train-ensemble  train M differently-seeded baselines + manifest\n"
            << "  distill         train a student from a frozen ensemble teacher\n"
            << "  eval            LAS/BLEU, optionally a paired bootstrap vs --model-b\n"
            << "  analyze-states  MAP of systems on sampled problematic states\n"
            << "  sweep           dev metric across an alpha/temperature/topk grid\n"
            << "  stability       min/max/mean/sigma over per-seed score CSVs\n"
            << "run `sdistill <command> --help` for flags.\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2 || std::string(argv[1]) == "help" || std::string(argv[1]) == "--help") {
    usage();
    return argc < 2 ? 1 : 0;
  }
  std::string cmd = argv[1];
  CLI::App app{"", cmd};
  try {
    if (cmd == "make-synthetic") return cmd_make_synthetic(app, argc - 1, argv + 1);
    if (cmd == "train") return cmd_train(app, argc - 1, argv + 1, false);
    if (cmd == "train-ensemble") return cmd_train(app, argc - 1, argv + 1, true);
    if (cmd == "distill") return cmd_distill(app, argc - 1, argv + 1);
    if (cmd == "eval") return cmd_eval(app, argc - 1, argv + 1);
    if (cmd == "analyze-states") return cmd_analyze_states(app, argc - 1, argv + 1);
    if (cmd == "sweep") return cmd_sweep(app, argc - 1, argv + 1);
    if (cmd == "stability") return cmd_stability(app, argc - 1, argv + 1);
    std::cerr << "sdistill: unknown command '" << cmd << "'\n";
    usage();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "sdistill " << cmd << ": " << e.what() << "\n";
    return 1;
  }
}
