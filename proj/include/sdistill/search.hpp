#ifndef SDISTILL_SEARCH_HPP
#define SDISTILL_SEARCH_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "sdistill/distribution.hpp"
#include "sdistill/rng.hpp"

namespace sdistill {

enum class Origin { kReference, kExploration };

template <class State>
struct StateRecord {
  int input_index = -1;
  State state;
  Origin origin = Origin::kReference;
  int reference_action = -1;        // valid for reference records
  std::vector<int> legal;           // legal action ids at the state
  std::vector<double> soft_target;  // dense over actions; empty if unset
};

template <class State>
struct Rollout {
  std::vector<StateRecord<State>> records;
  State final_state;
  bool truncated = false;
};

// Visit every state along the reference policy's trajectory, recording the
// reference action at each.
template <class Task>
Rollout<typename Task::State> rollout_reference(const Task& task,
                                                const typename Task::Input& input,
                                                const typename Task::Gold& gold,
                                                int input_index = -1) {
  task.validate_gold(input, gold);
  Rollout<typename Task::State> out;
  typename Task::State s = task.initial_state(input);
  while (!task.is_terminal(s)) {
    StateRecord<typename Task::State> rec;
    rec.input_index = input_index;
    rec.state = s;
    rec.origin = Origin::kReference;
    rec.reference_action = task.reference_action(s, gold);
    task.legal_actions(s, rec.legal);
    s = task.transition(s, rec.reference_action);
    out.records.push_back(std::move(rec));
  }
  out.truncated = task.truncated(s);
  out.final_state = std::move(s);
  return out;
}

// Sample a trajectory from the annealed policy distribution; the recorded
// states carry no reference action. A hit step cap truncates the trajectory
// but its states are still returned.
template <class Task, class PolicyFn>
Rollout<typename Task::State> rollout_exploration(const Task& task,
                                                  const typename Task::Input& input,
                                                  PolicyFn&& policy, double temperature,
                                                  Rng& rng, int input_index = -1) {
  if (temperature <= 0.0) throw std::runtime_error("rollout_exploration: temperature must be > 0");
  Rollout<typename Task::State> out;
  typename Task::State s = task.initial_state(input);
  while (!task.is_terminal(s)) {
    StateRecord<typename Task::State> rec;
    rec.input_index = input_index;
    rec.state = s;
    rec.origin = Origin::kExploration;
    task.legal_actions(s, rec.legal);
    ActionDistribution q = policy(input, s);
    int a = sample_action(anneal(q, temperature), rng);
    rec.soft_target = std::move(q.probs);
    s = task.transition(s, a);
    out.records.push_back(std::move(rec));
  }
  out.truncated = task.truncated(s);
  out.final_state = std::move(s);
  return out;
}

// Follow argmax actions (smallest action id on ties) to a terminal state.
template <class Task, class PolicyFn>
typename Task::State decode_greedy(const Task& task, const typename Task::Input& input,
                                   PolicyFn&& policy) {
  typename Task::State s = task.initial_state(input);
  while (!task.is_terminal(s)) {
    ActionDistribution d = policy(input, s);
    if (d.legal.empty()) throw std::runtime_error("decode_greedy: no legal action at a non-terminal state");
    s = task.transition(s, argmax_action(d));
  }
  return s;
}

}  // namespace sdistill

#endif
