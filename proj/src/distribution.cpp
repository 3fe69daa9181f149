#include "sdistill/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sdistill {

int argmax_action(const ActionDistribution& d) {
  if (d.legal.empty()) throw std::runtime_error("argmax_action: empty legal set");
  int best = d.legal.front();
  for (int a : d.legal) {
    if (d.probs[a] > d.probs[best]) best = a;
  }
  return best;
}

ActionDistribution anneal(const ActionDistribution& q, double temperature) {
  if (temperature <= 0.0) throw std::runtime_error("anneal: temperature must be > 0");
  ActionDistribution out;
  out.probs.assign(q.probs.size(), 0.0);
  double max_log = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (int a : q.legal) {
    if (q.probs[a] > 0.0) {
      any = true;
      max_log = std::max(max_log, std::log(q.probs[a]) / temperature);
    }
  }
  if (!any) throw std::runtime_error("anneal: distribution has no mass");
  double z = 0.0;
  for (int a : q.legal) {
    if (q.probs[a] > 0.0) {
      out.probs[a] = std::exp(std::log(q.probs[a]) / temperature - max_log);
      z += out.probs[a];
    }
  }
  for (int a : q.legal) {
    if (out.probs[a] > 0.0) {
      out.probs[a] /= z;
      out.legal.push_back(a);
    }
  }
  return out;
}

int sample_action(const ActionDistribution& d, Rng& rng) {
  double u = rng.uniform() * d.mass();
  double acc = 0.0;
  int last = -1;
  for (int a : d.legal) {
    if (d.probs[a] <= 0.0) continue;
    acc += d.probs[a];
    last = a;
    if (u < acc) return a;
  }
  if (last < 0) throw std::runtime_error("sample_action: distribution has no mass");
  return last;
}

}  // namespace sdistill
