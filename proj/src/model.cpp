#include "sdistill/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace sdistill {

namespace {

void glorot_fill(std::vector<double>& w, int fan_in, int fan_out, Rng& rng) {
  double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (double& v : w) v = rng.uniform(-limit, limit);
}

}  // namespace

void ClassifierModel::init_params(Rng& rng) {
  for (EmbeddingTable& t : tables) {
    t.weights.assign(static_cast<std::size_t>(t.vocab.size()) * embed_dim, 0.0);
    double limit = std::sqrt(3.0 / embed_dim);
    for (double& v : t.weights) v = rng.uniform(-limit, limit);
  }
  w1.assign(static_cast<std::size_t>(hidden_dim) * input_dim(), 0.0);
  b1.assign(hidden_dim, 0.0);
  w2.assign(static_cast<std::size_t>(num_actions()) * hidden_dim, 0.0);
  b2.assign(num_actions(), 0.0);
  glorot_fill(w1, input_dim(), hidden_dim, rng);
  glorot_fill(w2, hidden_dim, num_actions(), rng);
}

void Gradients::zero_like(const ClassifierModel& m) {
  tables.resize(m.tables.size());
  for (std::size_t t = 0; t < m.tables.size(); ++t) {
    tables[t].assign(m.tables[t].weights.size(), 0.0);
  }
  w1.assign(m.w1.size(), 0.0);
  b1.assign(m.b1.size(), 0.0);
  w2.assign(m.w2.size(), 0.0);
  b2.assign(m.b2.size(), 0.0);
}

double Gradients::squared_norm() const {
  auto sq = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
  };
  double s = sq(w1) + sq(b1) + sq(w2) + sq(b2);
  for (const auto& t : tables) s += sq(t);
  return s;
}

void Gradients::axpy(double a, const Gradients& g) {
  auto add = [a](std::vector<double>& dst, const std::vector<double>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += a * src[i];
  };
  for (std::size_t t = 0; t < tables.size(); ++t) add(tables[t], g.tables[t]);
  add(w1, g.w1);
  add(b1, g.b1);
  add(w2, g.w2);
  add(b2, g.b2);
}

ForwardResult forward(const ClassifierModel& m, const std::vector<int>& slots,
                      const std::vector<int>& legal) {
  if (legal.empty()) throw std::runtime_error("forward: no legal actions");
  if (static_cast<int>(slots.size()) != m.num_slots()) {
    throw std::runtime_error("forward: slot count mismatch");
  }
  ForwardResult fr;
  fr.slots = slots;
  fr.x.resize(m.input_dim());
  const int d = m.embed_dim;
  for (int s = 0; s < m.num_slots(); ++s) {
    const EmbeddingTable& t = m.tables[m.slot_table[s]];
    const double* row = &t.weights[static_cast<std::size_t>(slots[s]) * d];
    std::copy(row, row + d, fr.x.begin() + static_cast<std::size_t>(s) * d);
  }
  const int in = m.input_dim();
  fr.h.resize(m.hidden_dim);
  for (int i = 0; i < m.hidden_dim; ++i) {
    const double* wrow = &m.w1[static_cast<std::size_t>(i) * in];
    double acc = m.b1[i];
    for (int j = 0; j < in; ++j) acc += wrow[j] * fr.x[j];
    fr.h[i] = std::tanh(acc);
  }
  std::vector<double> logits(legal.size());
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < legal.size(); ++k) {
    const double* wrow = &m.w2[static_cast<std::size_t>(legal[k]) * m.hidden_dim];
    double acc = m.b2[legal[k]];
    for (int i = 0; i < m.hidden_dim; ++i) acc += wrow[i] * fr.h[i];
    logits[k] = acc;
    max_logit = std::max(max_logit, acc);
  }
  fr.dist.probs.assign(m.num_actions(), 0.0);
  fr.dist.legal = legal;
  double z = 0.0;
  for (std::size_t k = 0; k < legal.size(); ++k) {
    double e = std::exp(logits[k] - max_logit);
    fr.dist.probs[legal[k]] = e;
    z += e;
  }
  for (int a : legal) fr.dist.probs[a] /= z;
  return fr;
}

void backward(const ClassifierModel& m, const ForwardResult& fwd,
              const std::vector<double>& dlogits, Gradients& grads) {
  const int in = m.input_dim();
  std::vector<double> dh(m.hidden_dim, 0.0);
  for (int a : fwd.dist.legal) {
    double g = dlogits[a];
    if (g == 0.0) continue;
    grads.b2[a] += g;
    double* gw = &grads.w2[static_cast<std::size_t>(a) * m.hidden_dim];
    const double* w = &m.w2[static_cast<std::size_t>(a) * m.hidden_dim];
    for (int i = 0; i < m.hidden_dim; ++i) {
      gw[i] += g * fwd.h[i];
      dh[i] += g * w[i];
    }
  }
  std::vector<double> dx(in, 0.0);
  for (int i = 0; i < m.hidden_dim; ++i) {
    double dpre = dh[i] * (1.0 - fwd.h[i] * fwd.h[i]);
    if (dpre == 0.0) continue;
    grads.b1[i] += dpre;
    double* gw = &grads.w1[static_cast<std::size_t>(i) * in];
    const double* w = &m.w1[static_cast<std::size_t>(i) * in];
    for (int j = 0; j < in; ++j) {
      gw[j] += dpre * fwd.x[j];
      dx[j] += dpre * w[j];
    }
  }
  const int d = m.embed_dim;
  for (int s = 0; s < m.num_slots(); ++s) {
    double* grow = &grads.tables[m.slot_table[s]][static_cast<std::size_t>(fwd.slots[s]) * d];
    const double* dxs = &dx[static_cast<std::size_t>(s) * d];
    for (int j = 0; j < d; ++j) grow[j] += dxs[j];
  }
}

namespace {

// d(loss)/d(logit_a) = mass * p_a - t_a for cross-entropy against an
// (possibly unnormalized) target t with total mass `mass`.
LossResult cross_entropy(const ClassifierModel& m, const std::vector<int>& slots,
                         const std::vector<int>& legal, const std::vector<double>& target) {
  ForwardResult fwd = forward(m, slots, legal);
  LossResult out;
  out.grads.zero_like(m);
  double mass = 0.0;
  for (int a : legal) mass += target[a];
  std::vector<double> dlogits(m.num_actions(), 0.0);
  for (int a : legal) {
    if (target[a] > 0.0) out.loss -= target[a] * std::log(fwd.dist.probs[a]);
    dlogits[a] = mass * fwd.dist.probs[a] - target[a];
  }
  backward(m, fwd, dlogits, out.grads);
  return out;
}

}  // namespace

LossResult nll_loss(const ClassifierModel& m, const std::vector<int>& slots,
                    const std::vector<int>& legal, int reference_action) {
  if (std::find(legal.begin(), legal.end(), reference_action) == legal.end()) {
    throw std::runtime_error("nll_loss: reference action is not legal");
  }
  std::vector<double> target(m.num_actions(), 0.0);
  target[reference_action] = 1.0;
  return cross_entropy(m, slots, legal, target);
}

LossResult kd_loss(const ClassifierModel& m, const std::vector<int>& slots,
                   const std::vector<int>& legal, const std::vector<double>& soft_target,
                   int top_k) {
  if (top_k < 1) throw std::runtime_error("kd_loss: K must be >= 1");
  if (top_k > static_cast<int>(legal.size())) {
    static bool warned = false;  // states with few legal actions are routine
    if (!warned) {
      std::cerr << "warning: K=" << top_k << " exceeds " << legal.size()
                << " legal actions; clamping (further clamps not reported)\n";
      warned = true;
    }
    top_k = static_cast<int>(legal.size());
  }
  // K most probable teacher actions, ties broken by smaller action id
  std::vector<int> order = legal;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return soft_target[a] > soft_target[b];
  });
  std::vector<double> target(m.num_actions(), 0.0);
  for (int k = 0; k < top_k; ++k) target[order[k]] = soft_target[order[k]];
  return cross_entropy(m, slots, legal, target);
}

LossResult interpolated_loss(const ClassifierModel& m, const std::vector<int>& slots,
                             const std::vector<int>& legal, int reference_action,
                             const std::vector<double>& soft_target, double alpha, int top_k) {
  if (alpha < 0.0 || alpha > 1.0) throw std::runtime_error("interpolated_loss: alpha outside [0,1]");
  LossResult kd = kd_loss(m, slots, legal, soft_target, top_k);
  LossResult nll = nll_loss(m, slots, legal, reference_action);
  LossResult out;
  out.loss = alpha * kd.loss + (1.0 - alpha) * nll.loss;
  out.grads.zero_like(m);
  out.grads.axpy(alpha, kd.grads);
  out.grads.axpy(1.0 - alpha, nll.grads);
  return out;
}

void sgd_step(ClassifierModel& m, const Gradients& grads, double lr, double clip) {
  if (lr <= 0.0) throw std::runtime_error("sgd_step: learning rate must be > 0");
  double norm2 = grads.squared_norm();
  if (!std::isfinite(norm2)) throw std::runtime_error("sgd_step: non-finite gradient");
  double scale = lr;
  if (clip > 0.0 && norm2 > clip * clip) scale = lr * clip / std::sqrt(norm2);
  auto step = [scale](std::vector<double>& p, const std::vector<double>& g) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= scale * g[i];
  };
  for (std::size_t t = 0; t < m.tables.size(); ++t) step(m.tables[t].weights, grads.tables[t]);
  step(m.w1, grads.w1);
  step(m.b1, grads.b1);
  step(m.w2, grads.w2);
  step(m.b2, grads.b2);
}

void save_model(const ClassifierModel& m, const std::string& path) {
  nlohmann::json j;
  j["magic"] = "sdistill-model";
  j["version"] = ClassifierModel::kFormatVersion;
  j["kind"] = m.kind;
  j["seed"] = m.seed;
  j["embed_dim"] = m.embed_dim;
  j["hidden_dim"] = m.hidden_dim;
  j["slot_table"] = m.slot_table;
  j["action_names"] = m.action_names;
  j["labels"] = m.labels;
  j["tables"] = nlohmann::json::array();
  for (const EmbeddingTable& t : m.tables) {
    j["tables"].push_back({{"name", t.name}, {"symbols", t.vocab.symbols}, {"weights", t.weights}});
  }
  j["w1"] = m.w1;
  j["b1"] = m.b1;
  j["w2"] = m.w2;
  j["b2"] = m.b2;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump() << '\n';
}

ClassifierModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": malformed model file: " + e.what());
  }
  auto require = [&](const char* field) {
    if (!j.contains(field)) throw std::runtime_error(path + ": missing field '" + field + "'");
  };
  require("magic");
  if (j["magic"] != "sdistill-model") throw std::runtime_error(path + ": bad magic header");
  require("version");
  if (j["version"] != ClassifierModel::kFormatVersion) {
    throw std::runtime_error(path + ": unsupported format version");
  }
  for (const char* f : {"kind", "seed", "embed_dim", "hidden_dim", "slot_table",
                        "action_names", "labels", "tables", "w1", "b1", "w2", "b2"}) {
    require(f);
  }
  ClassifierModel m;
  m.kind = j["kind"];
  m.seed = j["seed"];
  m.embed_dim = j["embed_dim"];
  m.hidden_dim = j["hidden_dim"];
  m.slot_table = j["slot_table"].get<std::vector<int>>();
  m.action_names = j["action_names"].get<std::vector<std::string>>();
  m.labels = j["labels"].get<std::vector<std::string>>();
  for (const auto& tj : j["tables"]) {
    EmbeddingTable t;
    t.name = tj["name"];
    for (const std::string& s : tj["symbols"].get<std::vector<std::string>>()) t.vocab.add(s);
    t.weights = tj["weights"].get<std::vector<double>>();
    m.tables.push_back(std::move(t));
  }
  m.w1 = j["w1"].get<std::vector<double>>();
  m.b1 = j["b1"].get<std::vector<double>>();
  m.w2 = j["w2"].get<std::vector<double>>();
  m.b2 = j["b2"].get<std::vector<double>>();
  if (static_cast<int>(m.w1.size()) != m.hidden_dim * m.input_dim() ||
      static_cast<int>(m.w2.size()) != m.num_actions() * m.hidden_dim) {
    throw std::runtime_error(path + ": parameter shape mismatch in field 'w1'/'w2'");
  }
  return m;
}

}  // namespace sdistill
