#ifndef SDISTILL_DYNAMIC_ORACLE_HPP
#define SDISTILL_DYNAMIC_ORACLE_HPP

#include <map>
#include <vector>

#include "sdistill/parser.hpp"

namespace sdistill {

// Exact dynamic oracle for arc-standard, via memoized search over the
// remaining derivations. The best reachable arc count from a state depends
// only on (stack contents, buffer front, root shifted), so the memo stays
// small at treebank sentence lengths.
class DynamicOracle {
 public:
  DynamicOracle(const GoldTree& gold, const ActionSpace& as);

  // Number of gold arcs that can no longer be recovered (labels count:
  // a gold pair attached with the wrong label is lost).
  int state_loss(const ParserState& s);

  // The nonempty set of legal labeled actions minimizing the loss of the
  // successor state, in increasing action-id order.
  std::vector<int> oracle_actions(const ParserState& s);

 private:
  int best_future(const ParserState& s);

  const GoldTree& gold_;
  const ActionSpace& as_;
  std::vector<int> gold_label_id_;  // per dependent
  std::map<std::vector<int>, int> memo_;
};

}  // namespace sdistill

#endif
