#ifndef SDISTILL_DISTRIBUTION_HPP
#define SDISTILL_DISTRIBUTION_HPP

#include <cstddef>
#include <vector>

#include "sdistill/rng.hpp"

namespace sdistill {

// A normalized probability vector over the full action space of a task.
// Illegal actions carry exactly zero mass; `legal` lists the ids with
// support, in increasing order.
struct ActionDistribution {
  std::vector<double> probs;  // dense, size = number of actions
  std::vector<int> legal;     // increasing action ids

  double mass() const {
    double s = 0.0;
    for (int a : legal) s += probs[a];
    return s;
  }
};

// Smallest-id argmax: deterministic tie-break for greedy decoding.
int argmax_action(const ActionDistribution& d);

// q(a)^(1/T) / sum_a' q(a')^(1/T); computed in log space so small
// temperatures do not underflow. Zero-probability actions stay zero.
ActionDistribution anneal(const ActionDistribution& q, double temperature);

// Draw an action id from the distribution, walking legal ids in order.
int sample_action(const ActionDistribution& d, Rng& rng);

}  // namespace sdistill

#endif
