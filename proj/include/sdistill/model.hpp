#ifndef SDISTILL_MODEL_HPP
#define SDISTILL_MODEL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdistill/distribution.hpp"
#include "sdistill/rng.hpp"

namespace sdistill {

struct Vocab {
  std::vector<std::string> symbols;
  std::map<std::string, int> index;

  void add(const std::string& s) {
    if (!index.count(s)) {
      index[s] = static_cast<int>(symbols.size());
      symbols.push_back(s);
    }
  }
  int id(const std::string& s) const {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
  }
  int id_or(const std::string& s, int fallback) const {
    int i = id(s);
    return i < 0 ? fallback : i;
  }
  int size() const { return static_cast<int>(symbols.size()); }
};

struct EmbeddingTable {
  std::string name;
  Vocab vocab;
  std::vector<double> weights;  // vocab.size() x embed_dim, row-major
};

// Feed-forward policy classifier: slot embeddings -> concat -> tanh hidden
// -> affine -> softmax masked to the legal actions.
struct ClassifierModel {
  static constexpr int kFormatVersion = 1;

  std::string kind;  // "parse" | "transduce"
  std::uint64_t seed = 0;
  int embed_dim = 32;
  int hidden_dim = 64;
  std::vector<EmbeddingTable> tables;
  std::vector<int> slot_table;  // table index per feature slot
  std::vector<std::string> action_names;
  std::vector<std::string> labels;  // dependency labels (parse only)

  std::vector<double> w1, b1;  // hidden x input, hidden
  std::vector<double> w2, b2;  // actions x hidden, actions

  int num_slots() const { return static_cast<int>(slot_table.size()); }
  int input_dim() const { return num_slots() * embed_dim; }
  int num_actions() const { return static_cast<int>(action_names.size()); }

  void init_params(Rng& rng);  // Glorot-uniform
};

struct Gradients {
  std::vector<std::vector<double>> tables;
  std::vector<double> w1, b1, w2, b2;

  void zero_like(const ClassifierModel& m);
  double squared_norm() const;
  void axpy(double a, const Gradients& g);  // this += a * g
};

struct ForwardResult {
  std::vector<int> slots;       // symbol id per slot
  std::vector<double> x;        // concatenated embeddings
  std::vector<double> h;        // tanh hidden
  ActionDistribution dist;
};

ForwardResult forward(const ClassifierModel& m, const std::vector<int>& slots,
                      const std::vector<int>& legal);

// Adds d(loss)/d(params) for loss with d(loss)/d(logit) = dlogits.
void backward(const ClassifierModel& m, const ForwardResult& fwd,
              const std::vector<double>& dlogits, Gradients& grads);

struct LossResult {
  double loss = 0.0;
  Gradients grads;
};

LossResult nll_loss(const ClassifierModel& m, const std::vector<int>& slots,
                    const std::vector<int>& legal, int reference_action);

// Top-K distillation loss: -sum over the K most probable teacher actions of
// q(a) log p(a), with the truncated q left unrenormalized.
LossResult kd_loss(const ClassifierModel& m, const std::vector<int>& slots,
                   const std::vector<int>& legal, const std::vector<double>& soft_target,
                   int top_k);

LossResult interpolated_loss(const ClassifierModel& m, const std::vector<int>& slots,
                             const std::vector<int>& legal, int reference_action,
                             const std::vector<double>& soft_target, double alpha, int top_k);

// Clipped gradient descent, in place. Clip is on the global L2 norm.
void sgd_step(ClassifierModel& m, const Gradients& grads, double lr, double clip);

void save_model(const ClassifierModel& m, const std::string& path);
ClassifierModel load_model(const std::string& path);

}  // namespace sdistill

#endif
